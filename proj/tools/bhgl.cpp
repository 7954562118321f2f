// bhgl: run reservoir-controlled Bose-Hubbard experiments and compare
// trajectories.
//
//   bhgl run fig2 --out runs/fig2
//   bhgl run my.conf --out runs/custom --policy feedback_bgl
//   bhgl compare a.csv b.csv --columns n1,n2 --tol 1e-6
//   bhgl presets

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bhgl/config.hpp"
#include "bhgl/engine.hpp"
#include "bhgl/trajectory_io.hpp"

namespace {

// Exit codes of `run`.
constexpr int kCompleted = 0;
constexpr int kBreakdown = 3;
constexpr int kNumericalFailure = 4;
constexpr int kBadInput = 2;

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

struct RunOptions {
  std::string source;
  std::string out = ".";
  std::string policy;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  double mem_cap = 0.0;
  double t_end = 0.0;
  bool quiet = false;
};

int run_command(const RunOptions& o) {
  namespace fs = std::filesystem;
  bhgl::RunConfig config;
  try {
    if (auto preset = bhgl::find_preset(o.source)) {
      config = preset->config;
    } else if (fs::exists(o.source)) {
      config = bhgl::load_config(o.source);
    } else {
      std::cerr << "error: '" << o.source << "' is neither a preset nor a readable file\n";
      return kBadInput;
    }
    if (!o.policy.empty()) config.policy.variant = bhgl::parse_control_variant(o.policy);
    if (o.abs_tol > 0.0) config.abs_tol = o.abs_tol;
    if (o.rel_tol > 0.0) config.rel_tol = o.rel_tol;
    if (o.mem_cap > 0.0) config.memory_cap_mb = o.mem_cap;
    if (o.t_end > 0.0) config.t_end = o.t_end;
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }

  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create '" << dir.string() << "': " << ec.message() << "\n";
    return kBadInput;
  }

  bhgl::Trajectory traj;
  const auto start = std::chrono::steady_clock::now();
  try {
    traj = bhgl::evolve(config, [&](const bhgl::ObservableRecord& r) {
      if (o.quiet) return;
      std::cerr << "\rt = " << bhgl::format_double(r.value(bhgl::Column::t)) << "      "
                << std::flush;
    });
  } catch (const bhgl::MemoryCapError& e) {
    std::cerr << "error: " << e.what() << "; raise --mem-cap to at least "
              << static_cast<long>(e.required_mb()) + 1 << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.quiet) std::cerr << "\n";

  const std::string stem = config.name;
  const bool ok = write_file(dir / (stem + ".csv"), bhgl::csv_text(traj.samples)) &&
                  write_file(dir / (stem + ".manifest"), bhgl::format_manifest(config, traj)) &&
                  write_file(dir / (stem + ".gp"), bhgl::plot_script(stem + ".csv", stem));
  if (!ok) {
    std::cerr << "error: failed writing output files in '" << dir.string() << "'\n";
    return kBadInput;
  }

  std::cout << stem << ": " << bhgl::to_string(traj.status);
  if (traj.status == bhgl::RunStatus::kBreakdown) std::cout << " (" << bhgl::to_string(traj.cause) << ")";
  std::cout << " at t = " << bhgl::format_double(traj.end_time) << ", " << traj.accepted_steps
            << " steps, " << bhgl::format_double(std::round(seconds * 10.0) / 10.0) << " s\n";
  switch (traj.status) {
    case bhgl::RunStatus::kCompleted: return kCompleted;
    case bhgl::RunStatus::kBreakdown: return kBreakdown;
    case bhgl::RunStatus::kStepUnderflow: return kNumericalFailure;
  }
  return kNumericalFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reservoir-controlled Bose-Hubbard simulations (mean field, exact, BBR)"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a preset or config file");
  run_cmd->add_option("source", run.source, "Preset name or config file")->required();
  run_cmd->add_option("--out,-o", run.out, "Output directory");
  run_cmd->add_option("--policy", run.policy,
                      "Override control policy (analytic_mf, feedback_mf, feedback_mb, feedback_bgl)");
  run_cmd->add_option("--abs-tol", run.abs_tol, "Absolute integrator tolerance");
  run_cmd->add_option("--rel-tol", run.rel_tol, "Relative integrator tolerance");
  run_cmd->add_option("--mem-cap", run.mem_cap, "Memory cap for exact_bh in MiB");
  run_cmd->add_option("--t-end", run.t_end, "Override final time");
  run_cmd->add_flag("--quiet,-q", run.quiet, "No progress output");

  std::string file_a, file_b;
  std::vector<std::string> columns;
  double tol = 1e-6;
  double t_max = -1.0;
  bool relative = false;
  auto* cmp = app.add_subcommand("compare", "Compare two trajectory CSV files");
  cmp->add_option("a", file_a, "Reference CSV")->required();
  cmp->add_option("b", file_b, "CSV to compare")->required();
  cmp->add_option("--columns,-c", columns, "Columns to compare")->delimiter(',');
  cmp->add_option("--tol", tol, "Tolerance on the maximum deviation");
  cmp->add_option("--t-max", t_max, "Ignore samples after this time");
  cmp->add_flag("--relative", relative, "Use deviations relative to the reference");

  auto* list = app.add_subcommand("presets", "List built-in presets");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) return run_command(run);
  if (*cmp) {
    try {
      const auto a = bhgl::load_csv(file_a);
      const auto b = bhgl::load_csv(file_b);
      if (columns.empty())
        for (const auto& h : a.header)
          if (h != "t") columns.push_back(h);
      const auto rep = bhgl::compare_tables(a, b, columns, tol, relative, t_max);
      std::cout << bhgl::format_report(rep, tol, relative);
      return rep.pass ? 0 : 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kBadInput;
    }
  }
  if (*list) {
    for (const auto& p : bhgl::presets())
      std::cout << p.name << "\n  " << p.description << "\n  expected: " << p.expectation << "\n";
    return 0;
  }
  return 0;
}
