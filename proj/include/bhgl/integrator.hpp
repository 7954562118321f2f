#ifndef BHGL_INTEGRATOR_HPP
#define BHGL_INTEGRATOR_HPP

#include <functional>
#include <span>

#include "bhgl/breakdown.hpp"
#include "bhgl/types.hpp"

namespace bhgl {

using RhsFunction =
    std::function<void(double t, std::span<const Complex> y, std::span<Complex> dydt)>;

// kRms is the usual Hairer norm over components; kGlobal compares the 2-norm
// of the error vector against atol + rtol |y|, which suits long state vectors
// whose entries are individually tiny (many-body amplitudes).
enum class ErrorNorm { kRms, kGlobal };

struct StepperOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  ErrorNorm norm = ErrorNorm::kRms;
  double h_initial = 0.0;  // 0 picks a starting step automatically
  double h_max = 0.0;      // 0 means unbounded
  double h_min = 1e-12;    // relative to max(1, |t|)
};

enum class StepStatus { kAccepted, kBreakdown, kUnderflow };

struct StepReport {
  StepStatus status = StepStatus::kAccepted;
  BreakdownCause cause = BreakdownCause::kNone;
  double error = 0.0;  // normalized error estimate of the accepted step
  int rejected = 0;
};

// Dormand-Prince 5(4) with first-same-as-last stages. The right-hand side may
// throw BreakdownError; the trial step is then rejected and retried with a
// smaller step, and breakdown is reported once the step cannot shrink further.
class DormandPrince {
 public:
  DormandPrince(RhsFunction rhs, StepperOptions options);

  void initialize(double t0, std::span<const Complex> y0);

  // One accepted step that does not pass t_limit.
  StepReport step(double t_limit);

  // Call after modifying state() in place so the cached derivative is redone.
  void state_modified();

  double t() const { return t_; }
  double h() const { return h_; }
  std::span<const Complex> state() const { return y_; }
  std::span<Complex> mutable_state() { return y_; }
  long evaluations() const { return evaluations_; }

 private:
  double error_norm(std::span<const Complex> y_old, std::span<const Complex> y_new) const;
  double initial_step();
  void eval(double t, std::span<const Complex> y, std::span<Complex> k);

  RhsFunction rhs_;
  StepperOptions opt_;
  double t_ = 0.0;
  double h_ = 0.0;
  double h_prev_ratio_ = 1e-4;
  ComplexVector y_, y_new_, stage_;
  ComplexVector k_[7];
  long evaluations_ = 0;
};

struct StepOutcome {
  ComplexVector state;
  double t = 0.0;
  double h_next = 0.0;
  double error = 0.0;
  StepStatus status = StepStatus::kAccepted;
  BreakdownCause cause = BreakdownCause::kNone;
};

// Single adaptive step starting from (t, y) with trial step h.
StepOutcome step_control(const RhsFunction& rhs, std::span<const Complex> y, double t, double h,
                         const StepperOptions& options);

}  // namespace bhgl

#endif  // BHGL_INTEGRATOR_HPP
