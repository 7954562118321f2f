#include "bhgl/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bhgl {

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kRelativeFloor = 1e-12;

bool is_variance(std::size_t c) {
  return c == static_cast<std::size_t>(Column::var_n1) ||
         c == static_cast<std::size_t>(Column::var_n2) ||
         c == static_cast<std::size_t>(Column::var_jt12);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ObservableRecord>& samples) {
  for (std::size_t c = 0; c < kColumnCount; ++c) out << (c ? "," : "") << kColumnNames[c];
  out << '\n';
  for (const auto& r : samples) {
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      if (c) out << ',';
      const auto& v = r.values[c];
      if (!v || (r.mean_field_variances && is_variance(c))) continue;
      out << format_double(*v);
    }
    out << '\n';
  }
}

std::string csv_text(const std::vector<ObservableRecord>& samples) {
  std::ostringstream os;
  write_csv(os, samples);
  return os.str();
}

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split(line);
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw std::runtime_error("CSV row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(t.header.size()));
    std::vector<std::optional<double>> values;
    values.reserve(cells.size());
    for (const auto& cell : cells) {
      if (cell.empty()) {
        values.emplace_back();
        continue;
      }
      double v = 0.0;
      const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (r.ec != std::errc() || r.ptr != cell.data() + cell.size())
        throw std::runtime_error("CSV row " + std::to_string(row) + ": bad number '" + cell + "'");
      values.emplace_back(v);
    }
    t.rows.push_back(std::move(values));
  }
  return t;
}

CsvTable load_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  return read_csv(f);
}

std::string format_manifest(const RunConfig& config, const Trajectory& traj) {
  std::ostringstream os;
  os << "# resolved run parameters\n" << format_config(config) << "\n";
  os << "[resolved]\n";
  os << "version = " << kVersion << "\n";
  os << "interaction = " << format_double(traj.interaction) << "\n";
  os << "state_dimension = " << traj.dimension << "\n";
  os << "error_norm = " << (config.backend == Backend::kExactBH ? "global" : "rms") << "\n\n";
  os << "[result]\n";
  os << "status = " << to_string(traj.status) << "\n";
  os << "cause = " << to_string(traj.cause) << "\n";
  os << "end_time = " << format_double(traj.end_time) << "\n";
  os << "accepted_steps = " << traj.accepted_steps << "\n";
  os << "rejected_steps = " << traj.rejected_steps << "\n";
  os << "rhs_evaluations = " << traj.rhs_evaluations << "\n";
  os << "samples = " << traj.samples.size() << "\n";
  if (config.backend == Backend::kBBR)
    os << "max_symmetry_defect = " << format_double(traj.max_symmetry_defect) << "\n";
  return os.str();
}

std::string plot_script(const std::string& csv_name, const std::string& title) {
  std::ostringstream os;
  os << "# gnuplot -persist " << csv_name.substr(0, csv_name.rfind('.')) << ".gp\n"
     << "set datafile separator ','\n"
     << "set datafile missing ''\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't'\n"
     << "set multiplot layout 3,2 title '" << title << "'\n"
     << "plot '" << csv_name << "' using 't':'n1' with lines, '' using 't':'n2' with lines\n"
     << "plot '" << csv_name << "' using 't':'jt12' with lines, '' using 't':'c12' with lines\n"
     << "plot '" << csv_name << "' using 't':'jt01' with lines, '' using 't':'jt23' with lines\n"
     << "plot '" << csv_name << "' using 't':'J01' with lines, '' using 't':'J23' with lines\n"
     << "plot '" << csv_name << "' using 't':'mu0' with lines, '' using 't':'mu3' with lines\n"
     << "plot '" << csv_name << "' using 't':'P4' with lines, '' using 't':'P2' with lines\n"
     << "unset multiplot\n";
  return os.str();
}

ComparisonReport compare_tables(const CsvTable& a, const CsvTable& b,
                                const std::vector<std::string>& columns, double tolerance,
                                bool relative, double t_max) {
  const int ta = a.column("t"), tb = b.column("t");
  if (ta < 0 || tb < 0) throw std::runtime_error("both tables need a 't' column");
  if (a.rows.empty() || b.rows.empty()) throw std::runtime_error("empty trajectory");
  auto time = [](const CsvTable& tab, int col, std::size_t r) {
    const auto& v = tab.rows[r][col];
    if (!v) throw std::runtime_error("missing time value");
    return *v;
  };
  ComparisonReport rep;
  rep.t_begin = std::max(time(a, ta, 0), time(b, tb, 0));
  rep.t_end = std::min(time(a, ta, a.rows.size() - 1), time(b, tb, b.rows.size() - 1));
  if (t_max >= 0.0) rep.t_end = std::min(rep.t_end, t_max);
  if (rep.t_end < rep.t_begin) throw std::runtime_error("trajectories have disjoint time ranges");

  for (const auto& name : columns) {
    const int ca = a.column(name), cb = b.column(name);
    if (ca < 0 || cb < 0) throw std::runtime_error("column '" + name + "' missing");
    ColumnDeviation dev;
    dev.column = name;
    double sum2 = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      const double t = time(a, ta, i);
      if (t < rep.t_begin || t > rep.t_end) continue;
      const auto& va = a.rows[i][ca];
      if (!va) continue;
      while (j + 1 < b.rows.size() && time(b, tb, j + 1) < t) ++j;
      std::optional<double> vb;
      const double t0 = time(b, tb, j);
      if (j + 1 < b.rows.size()) {
        const double t1 = time(b, tb, j + 1);
        const auto& b0 = b.rows[j][cb];
        const auto& b1 = b.rows[j + 1][cb];
        if (t == t1 && b1) vb = *b1;
        else if (t == t0 && b0) vb = *b0;
        else if (b0 && b1 && t1 > t0) vb = *b0 + (*b1 - *b0) * (t - t0) / (t1 - t0);
      } else if (t == t0) {
        vb = b.rows[j][cb];
      }
      if (!vb) continue;
      double d = std::abs(*va - *vb);
      if (relative) d /= std::max(std::abs(*va), kRelativeFloor);
      dev.max_abs = std::max(dev.max_abs, d);
      sum2 += d * d;
      ++dev.points;
    }
    dev.rms = dev.points ? std::sqrt(sum2 / static_cast<double>(dev.points)) : 0.0;
    dev.pass = dev.max_abs <= tolerance;
    rep.pass = rep.pass && dev.pass;
    rep.columns.push_back(dev);
  }
  return rep;
}

std::string format_report(const ComparisonReport& rep, double tolerance, bool relative) {
  std::ostringstream os;
  os << "time range [" << format_double(rep.t_begin) << ", " << format_double(rep.t_end) << "], "
     << (relative ? "relative" : "absolute") << " tolerance " << format_double(tolerance) << "\n";
  os << std::left << std::setw(14) << "column" << std::setw(16) << "max" << std::setw(16) << "rms"
     << std::setw(8) << "points" << "result\n";
  for (const auto& c : rep.columns) {
    os << std::left << std::setw(14) << c.column << std::setw(16) << format_double(c.max_abs)
       << std::setw(16) << format_double(c.rms) << std::setw(8) << c.points
       << (c.points == 0 ? "no data" : c.pass ? "pass" : "FAIL") << "\n";
  }
  os << (rep.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace bhgl
