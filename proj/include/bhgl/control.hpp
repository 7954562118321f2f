#ifndef BHGL_CONTROL_HPP
#define BHGL_CONTROL_HPP

#include <span>
#include <string>

#include "bhgl/breakdown.hpp"
#include "bhgl/moments.hpp"
#include "bhgl/types.hpp"

namespace bhgl {

enum class ControlVariant { kAnalyticMF, kFeedbackMF, kFeedbackMB, kFeedbackBGL };

const char* to_string(ControlVariant variant);
ControlVariant parse_control_variant(const std::string& name);

// interaction is whatever multiplies the density in the back-end's equations:
// g_eff for mean-field runs, the Bose-Hubbard U for many-body runs.
struct ControlPolicy {
  ControlVariant variant = ControlVariant::kFeedbackMF;
  double gamma = 0.5;
  double J12 = 1.0;
  double interaction = 0.0;
  double epsilon_breakdown = 1e-3;

  void validate() const;
};

struct TunnelingRates {
  double J01 = 0.0;
  double J23 = 0.0;
};

struct OnsiteEnergies {
  double mu0 = 0.0;
  double mu3 = 0.0;
};

// J01 = 2 gamma n1 / jt01, J23 = 2 gamma n2 / jt23.
TunnelingRates feedback_tunneling(const MomentSource& moments, double gamma);

// Mean-field on-site energies keeping c01 and c23 stationary.
OnsiteEnergies mf_onsite(std::span<const Complex> psi, double g_eff, double J12);

// Many-body generalization. mu0 = Ups01/jt01 and mu3 = -Ups23/jt23, which is
// the condition d c01/dt = d c23/dt = 0 with the TPDM corrections.
OnsiteEnergies mb_onsite(const MomentSource& moments, double U, double J12);

// Projection of (mu0, mu3) onto the line alpha mu0 + beta mu3 = Omega on which
// d^2 jt12/dt^2 vanishes. The second line (d c12/dt stationary) is only used
// to report the conditioning of the full intersection problem.
struct BglSolution {
  OnsiteEnergies mu;
  double alpha = 0.0;
  double beta = 0.0;
  double omega = 0.0;
  double residual = 0.0;         // alpha mu0 + beta mu3 - Omega after projection
  double condition_number = 0.0; // of [[alpha, beta], [alpha', beta']]
};

BglSolution bgl_onsite(const MomentSource& moments, const TunnelingRates& rates, double J12,
                       double U, const OnsiteEnergies& reference);

// U = g / (N2 (N - 1)).
double rescale_interaction(double g, double N2, int N);

BreakdownCause detect_breakdown(double jt01, double jt23, double jt01_initial,
                                double jt23_initial, double epsilon);

struct ControlDiagnostics {
  double projection_residual = 0.0;
  double condition_number = 0.0;
  double djt12_dt = 0.0;
  double dc01_dt = 0.0;
  double dc23_dt = 0.0;
};

struct ControlOutput {
  double J01 = 0.0;
  double J23 = 0.0;
  double mu0 = 0.0;
  double mu3 = 0.0;
  ControlDiagnostics diagnostics;
};

// Closed-form schedule inputs for AnalyticMF.
struct AnalyticSchedule {
  double n = 0.0;
  double n0_initial = 0.0;
  double n3_initial = 0.0;
};

// Evaluates the configured policy on the instantaneous moments. Throws
// BreakdownError when a reduced current has dropped below epsilon times its
// initial value or the projection degenerates.
class Controller {
 public:
  Controller(const ControlPolicy& policy, const MomentSource& initial,
             const AnalyticSchedule& schedule = {});

  ControlOutput evaluate(double t, const MomentSource& moments) const;

  const ControlPolicy& policy() const { return policy_; }
  double initial_jt01() const { return jt01_initial_; }
  double initial_jt23() const { return jt23_initial_; }

  // Four-mode lattice for a controller output.
  LatticeParams lattice(const ControlOutput& out) const;

 private:
  ControlPolicy policy_;
  AnalyticSchedule schedule_;
  double jt01_initial_;
  double jt23_initial_;
};

}  // namespace bhgl

#endif  // BHGL_CONTROL_HPP
