#include "bhgl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "bhgl/bbr.hpp"
#include "bhgl/exact.hpp"
#include "bhgl/integrator.hpp"
#include "bhgl/meanfield.hpp"
#include "bhgl/moments.hpp"

namespace bhgl {

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::kTwoModeMF: return "two_mode_mf";
    case Backend::kFourModeMF: return "four_mode_mf";
    case Backend::kExactBH: return "exact_bh";
    case Backend::kBBR: return "bbr";
  }
  return "unknown";
}

Backend parse_backend(const std::string& name) {
  for (auto b : {Backend::kTwoModeMF, Backend::kFourModeMF, Backend::kExactBH, Backend::kBBR})
    if (name == to_string(b)) return b;
  throw std::invalid_argument("unknown backend '" + name +
                              "' (expected two_mode_mf, four_mode_mf, exact_bh or bbr)");
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kCompleted: return "completed";
    case RunStatus::kBreakdown: return "breakdown";
    case RunStatus::kStepUnderflow: return "step_underflow";
  }
  return "unknown";
}

namespace {

bool mean_field(Backend b) { return b == Backend::kTwoModeMF || b == Backend::kFourModeMF; }

std::string describe_mb(double mb) {
  std::ostringstream os;
  os.precision(1);
  os << std::fixed << mb << " MiB";
  return os.str();
}

}  // namespace

void RunConfig::validate() const {
  policy.validate();
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be positive");
  for (double tol : {abs_tol, rel_tol})
    if (tol != 0.0 && !(tol > 0.0 && tol < 1e-2))
      throw std::invalid_argument("integrator tolerances must lie in (0, 1e-2)");
  if (!(n > 0.0) || n0 < 0.0 || n3 < 0.0)
    throw std::invalid_argument("occupations must be non-negative and n positive");
  if (policy.variant == ControlVariant::kAnalyticMF && backend != Backend::kFourModeMF)
    throw std::invalid_argument("analytic_mf policy requires the four_mode_mf backend");
  if (!mean_field(backend) && N < 2)
    throw std::invalid_argument("many-body backends need N >= 2");
  if (!(N2 >= 1.0)) throw std::invalid_argument("N2 must be at least 1");
  if (!(memory_cap_mb > 0.0)) throw std::invalid_argument("memory cap must be positive");
}

namespace {

// The dimer is two components, so it can afford a much tighter default.
double default_tolerance(Backend b) {
  switch (b) {
    case Backend::kExactBH: return 1e-8;
    case Backend::kTwoModeMF: return 1e-11;
    default: return 1e-9;
  }
}

}  // namespace

double RunConfig::resolved_abs_tol() const {
  return abs_tol > 0.0 ? abs_tol : default_tolerance(backend);
}

double RunConfig::resolved_rel_tol() const {
  return rel_tol > 0.0 ? rel_tol : default_tolerance(backend);
}

double RunConfig::resolved_interaction() const {
  if (mean_field(backend)) return g / N2;
  if (U_override != 0.0) return U_override;
  return rescale_interaction(g, N2, N);
}

MemoryCapError::MemoryCapError(WideCount dimension, double required_mb, double cap_mb)
    : std::runtime_error("exact basis of dimension " + to_string(dimension) + " needs about " +
                         describe_mb(required_mb) + ", above the cap of " + describe_mb(cap_mb)),
      dimension_(dimension),
      required_mb_(required_mb) {}

double exact_memory_mb(WideCount dimension, int wells) {
  // Integrator buffers (10 vectors), up to M^2 pair vectors plus one scratch,
  // and the occupation table.
  const double d = static_cast<double>(dimension);
  const double vectors = 10.0 + wells * wells + 1.0;
  const double bytes = d * (vectors * sizeof(Complex) + wells * sizeof(std::uint16_t));
  return bytes / (1024.0 * 1024.0);
}

namespace {

// One back-end as seen by the time loop.
class System {
 public:
  virtual ~System() = default;
  virtual ComplexVector initial_state() = 0;
  virtual void rhs(double t, std::span<const Complex> y, std::span<Complex> dy) = 0;
  virtual ObservableRecord observe(double t, std::span<const Complex> y) = 0;
  // Returns true if y was modified.
  virtual bool post_step(std::span<Complex>) { return false; }
  virtual ErrorNorm error_norm() const { return ErrorNorm::kRms; }
  virtual std::size_t dimension() const = 0;
  const ControlOutput& last_output() const { return last_; }

 protected:
  ControlOutput last_;
};

class TwoModeSystem final : public System {
 public:
  explicit TwoModeSystem(const RunConfig& c)
      : cfg_(c), params_{c.policy.gamma, c.resolved_interaction(), c.policy.J12} {}
  ComplexVector initial_state() override {
    return two_mode_stationary(cfg_.n, cfg_.policy.gamma, cfg_.policy.J12);
  }
  void rhs(double, std::span<const Complex> y, std::span<Complex> dy) override {
    const ComplexVector d = two_mode_rhs(y, params_);
    std::copy(d.begin(), d.end(), dy.begin());
  }
  ObservableRecord observe(double t, std::span<const Complex> y) override {
    return two_mode_record(t, y);
  }
  std::size_t dimension() const override { return 2; }

 private:
  RunConfig cfg_;
  TwoModeParams params_;
};

MFState initial_orbital(const RunConfig& c) {
  return stationary_init(c.n, c.n0, c.n3, c.policy.gamma, c.policy.J12);
}

ParameterValues values_of(const ControlOutput& o) { return {o.J01, o.J23, o.mu0, o.mu3}; }

class FourModeSystem final : public System {
 public:
  explicit FourModeSystem(const RunConfig& c) : cfg_(c) {
    policy_ = c.policy;
    policy_.interaction = c.resolved_interaction();
    psi0_ = initial_orbital(c);
    const MeanFieldMoments initial(psi0_);
    controller_ = std::make_unique<Controller>(policy_, initial,
                                               AnalyticSchedule{c.n, c.n0, c.n3});
  }
  ComplexVector initial_state() override { return psi0_; }
  void rhs(double t, std::span<const Complex> y, std::span<Complex> dy) override {
    const MeanFieldMoments ms(y);
    last_ = controller_->evaluate(t, ms);
    const ComplexVector d = gpe_rhs(y, controller_->lattice(last_));
    std::copy(d.begin(), d.end(), dy.begin());
  }
  ObservableRecord observe(double t, std::span<const Complex> y) override {
    const MeanFieldMoments ms(y);
    const ControlOutput out = controller_->evaluate(t, ms);
    double total = 0.0;
    for (const auto& c : y) total += std::norm(c);
    return four_mode_record(t, ms, values_of(out), false, total);
  }
  std::size_t dimension() const override { return 4; }

 private:
  RunConfig cfg_;
  ControlPolicy policy_;
  MFState psi0_;
  std::unique_ptr<Controller> controller_;
};

class ExactSystem final : public System {
 public:
  explicit ExactSystem(const RunConfig& c)
      : kernel_(FockBasis(c.N, 4)), moments_(kernel_) {
    policy_ = c.policy;
    policy_.interaction = c.resolved_interaction();
    psi_orbital_ = initial_orbital(c);
    psi0_ = pure_state(kernel_.basis(), psi_orbital_);
    moments_.bind(psi0_);
    controller_ = std::make_unique<Controller>(policy_, moments_);
  }
  ComplexVector initial_state() override { return psi0_; }
  void rhs(double t, std::span<const Complex> y, std::span<Complex> dy) override {
    moments_.bind(y);
    last_ = controller_->evaluate(t, moments_);
    kernel_.apply_hamiltonian(y, controller_->lattice(last_), dy);
    // Remove the instantaneous mean energy as a global phase; observables
    // only involve a+ a products, so this just slows the phase rotation.
    const double energy = inner(y, dy).real() / norm_squared(y);
    const std::size_t n = y.size();
    for (std::size_t s = 0; s < n; ++s) dy[s] = -kI * (dy[s] - energy * y[s]);
  }
  ObservableRecord observe(double t, std::span<const Complex> y) override {
    moments_.bind(y);
    const ControlOutput out = controller_->evaluate(t, moments_);
    return four_mode_record(t, moments_, values_of(out), true, norm_squared(y));
  }
  ErrorNorm error_norm() const override { return ErrorNorm::kGlobal; }
  std::size_t dimension() const override { return kernel_.size(); }

 private:
  HubbardKernel kernel_;
  ExactMoments moments_;
  ControlPolicy policy_;
  MFState psi_orbital_;
  ComplexVector psi0_;
  std::unique_ptr<Controller> controller_;
};

class BbrSystem final : public System {
 public:
  explicit BbrSystem(const RunConfig& c) {
    policy_ = c.policy;
    policy_.interaction = c.resolved_interaction();
    const MomentState ms0 = pure_moments(initial_orbital(c), c.N);
    y0_.assign(ms0.data().begin(), ms0.data().end());
    controller_ = std::make_unique<Controller>(policy_, ClosureMoments(y0_, 4));
  }
  ComplexVector initial_state() override { return y0_; }
  void rhs(double t, std::span<const Complex> y, std::span<Complex> dy) override {
    const ClosureMoments ms(y, 4);
    last_ = controller_->evaluate(t, ms);
    bbr_rhs(y, 4, controller_->lattice(last_), dy);
  }
  ObservableRecord observe(double t, std::span<const Complex> y) override {
    const ClosureMoments ms(y, 4);
    const ControlOutput out = controller_->evaluate(t, ms);
    double trace = 0.0;
    for (int i = 0; i < 4; ++i) trace += ms.sigma(i, i).real();
    return four_mode_record(t, ms, values_of(out), true, trace);
  }
  bool post_step(std::span<Complex> y) override {
    max_defect_ = std::max(max_defect_, symmetry_defect(y, 4));
    symmetrize(y, 4);
    return true;
  }
  std::size_t dimension() const override { return y0_.size(); }
  double max_defect() const { return max_defect_; }

 private:
  ControlPolicy policy_;
  ComplexVector y0_;
  std::unique_ptr<Controller> controller_;
  double max_defect_ = 0.0;
};

std::unique_ptr<System> make_system(const RunConfig& c) {
  switch (c.backend) {
    case Backend::kTwoModeMF: return std::make_unique<TwoModeSystem>(c);
    case Backend::kFourModeMF: return std::make_unique<FourModeSystem>(c);
    case Backend::kExactBH: {
      const WideCount dim = dimension(c.N, 4);
      const double mb = exact_memory_mb(dim, 4);
      if (mb > c.memory_cap_mb) throw MemoryCapError(dim, mb, c.memory_cap_mb);
      return std::make_unique<ExactSystem>(c);
    }
    case Backend::kBBR: return std::make_unique<BbrSystem>(c);
  }
  throw std::invalid_argument("unknown backend");
}

}  // namespace

Trajectory evolve(const RunConfig& config, const SampleCallback& on_sample) {
  config.validate();
  auto system = make_system(config);
  Trajectory traj;
  traj.interaction = config.resolved_interaction();
  traj.dimension = system->dimension();

  auto record = [&](double t, std::span<const Complex> y) {
    traj.samples.push_back(system->observe(t, y));
    if (on_sample) on_sample(traj.samples.back());
  };

  StepperOptions opt;
  opt.abs_tol = config.resolved_abs_tol();
  opt.rel_tol = config.resolved_rel_tol();
  opt.norm = system->error_norm();
  DormandPrince stepper(
      [&](double t, std::span<const Complex> y, std::span<Complex> dy) { system->rhs(t, y, dy); },
      opt);

  const ComplexVector y0 = system->initial_state();
  stepper.initialize(0.0, y0);
  // initialize() probes a trial step; re-evaluate so the controller output
  // belongs to t = 0.
  stepper.state_modified();
  traj.history.push_back({0.0, system->last_output()});
  record(0.0, stepper.state());

  long next_index = 1;
  auto sample_time = [&](long k) {
    return std::min(config.t_end, static_cast<double>(k) * config.sample_dt);
  };
  while (stepper.t() < config.t_end) {
    const double limit = sample_time(next_index);
    const StepReport report = stepper.step(limit);
    traj.rejected_steps += report.rejected;
    if (report.status != StepStatus::kAccepted) {
      traj.status = report.status == StepStatus::kBreakdown ? RunStatus::kBreakdown
                                                            : RunStatus::kStepUnderflow;
      traj.cause = report.cause;
      break;
    }
    ++traj.accepted_steps;
    if (system->post_step(stepper.mutable_state())) stepper.state_modified();
    traj.history.push_back({stepper.t(), system->last_output()});
    if (stepper.t() == limit) {
      record(stepper.t(), stepper.state());
      ++next_index;
    }
  }
  traj.end_time = stepper.t();
  if (traj.samples.back()[Column::t].value() != traj.end_time) record(traj.end_time, stepper.state());
  traj.rhs_evaluations = stepper.evaluations();
  if (auto* bbr = dynamic_cast<BbrSystem*>(system.get())) traj.max_symmetry_defect = bbr->max_defect();
  return traj;
}

}  // namespace bhgl
