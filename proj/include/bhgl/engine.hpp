#ifndef BHGL_ENGINE_HPP
#define BHGL_ENGINE_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhgl/breakdown.hpp"
#include "bhgl/control.hpp"
#include "bhgl/fock.hpp"
#include "bhgl/observables.hpp"

namespace bhgl {

enum class Backend { kTwoModeMF, kFourModeMF, kExactBH, kBBR };

const char* to_string(Backend backend);
Backend parse_backend(const std::string& name);

// policy.interaction is ignored on input; evolve() derives it from g, N2 and
// N for the chosen back-end.
struct RunConfig {
  std::string name = "custom";
  Backend backend = Backend::kFourModeMF;
  ControlPolicy policy;
  int N = 110;
  double N2 = 10.0;
  double g = 0.1;
  double n = 5.0;
  double n0 = 50.0;
  double n3 = 50.0;
  double t_end = 12.0;
  double sample_dt = 0.05;
  double abs_tol = 0.0;  // 0 selects the back-end default
  double rel_tol = 0.0;
  double memory_cap_mb = 4096.0;
  // Explicit Bose-Hubbard U for many-body back-ends, bypassing the g, N2, N
  // rescaling. 0 keeps the rescaled value.
  double U_override = 0.0;

  void validate() const;
  double resolved_abs_tol() const;
  double resolved_rel_tol() const;
  // g / N2 for mean-field back-ends, g / (N2 (N - 1)) for many-body ones.
  double resolved_interaction() const;
};

// Thrown before any allocation when the exact basis would not fit.
class MemoryCapError : public std::runtime_error {
 public:
  MemoryCapError(WideCount dimension, double required_mb, double cap_mb);
  WideCount dimension() const { return dimension_; }
  double required_mb() const { return required_mb_; }

 private:
  WideCount dimension_;
  double required_mb_;
};

// Working-set estimate of an ExactBH run in MiB.
double exact_memory_mb(WideCount dimension, int wells);

enum class RunStatus { kCompleted, kBreakdown, kStepUnderflow };

const char* to_string(RunStatus status);

struct ParameterSample {
  double t = 0.0;
  ControlOutput output;
};

struct Trajectory {
  std::vector<ObservableRecord> samples;
  std::vector<ParameterSample> history;  // one per accepted step, plus t = 0
  RunStatus status = RunStatus::kCompleted;
  BreakdownCause cause = BreakdownCause::kNone;
  double end_time = 0.0;
  double interaction = 0.0;
  std::size_t dimension = 0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evaluations = 0;
  // Largest conjugation-symmetry violation produced by a single BBR step
  // before it was symmetrized away.
  double max_symmetry_defect = 0.0;
};

using SampleCallback = std::function<void(const ObservableRecord&)>;

Trajectory evolve(const RunConfig& config, const SampleCallback& on_sample = {});

}  // namespace bhgl

#endif  // BHGL_ENGINE_HPP
