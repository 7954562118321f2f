#include "bhgl/control.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhgl/meanfield.hpp"

namespace bhgl {

namespace {

double jt(const MomentSource& ms, int i, int j) { return 2.0 * ms.sigma(i, j).imag(); }
double coh(const MomentSource& ms, int i, int j) { return 2.0 * ms.sigma(i, j).real(); }
double occ(const MomentSource& ms, int i) { return ms.sigma(i, i).real(); }

LatticeParams hopping_lattice(const TunnelingRates& rates, double J12, double U) {
  return LatticeParams{{rates.J01, J12, rates.J23}, U, {0.0, 0.0, 0.0, 0.0}};
}

void require_four_wells(const MomentSource& ms) {
  if (ms.wells() != 4) throw std::invalid_argument("reservoir controllers need four wells");
}

// Largest over smallest singular value of [[a, b], [c, d]].
double condition_2x2(double a, double b, double c, double d) {
  const double frob = a * a + b * b + c * c + d * d;
  const double det = std::abs(a * d - b * c);
  if (det == 0.0) return std::numeric_limits<double>::infinity();
  const double disc = std::sqrt(std::max(0.0, frob * frob - 4.0 * det * det));
  const double s_max = std::sqrt(0.5 * (frob + disc));
  return s_max * s_max / det;
}

}  // namespace

const char* to_string(ControlVariant variant) {
  switch (variant) {
    case ControlVariant::kAnalyticMF: return "analytic_mf";
    case ControlVariant::kFeedbackMF: return "feedback_mf";
    case ControlVariant::kFeedbackMB: return "feedback_mb";
    case ControlVariant::kFeedbackBGL: return "feedback_bgl";
  }
  return "unknown";
}

ControlVariant parse_control_variant(const std::string& name) {
  for (auto v : {ControlVariant::kAnalyticMF, ControlVariant::kFeedbackMF,
                 ControlVariant::kFeedbackMB, ControlVariant::kFeedbackBGL})
    if (name == to_string(v)) return v;
  throw std::invalid_argument("unknown control policy '" + name +
                              "' (expected analytic_mf, feedback_mf, feedback_mb or feedback_bgl)");
}

void ControlPolicy::validate() const {
  if (!(epsilon_breakdown > 0.0 && epsilon_breakdown < 1.0))
    throw std::invalid_argument("epsilon_breakdown must lie in (0, 1)");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  if (!(J12 > 0.0)) throw std::invalid_argument("J12 must be positive");
}

TunnelingRates feedback_tunneling(const MomentSource& ms, double gamma) {
  require_four_wells(ms);
  const double jt01 = jt(ms, 0, 1);
  const double jt23 = jt(ms, 2, 3);
  const double n1 = occ(ms, 1);
  const double n2 = occ(ms, 2);
  if (jt01 == 0.0) throw BreakdownError(BreakdownCause::kCurrent01);
  if (jt23 == 0.0) throw BreakdownError(BreakdownCause::kCurrent23);
  return {2.0 * gamma * n1 / jt01, 2.0 * gamma * n2 / jt23};
}

OnsiteEnergies mf_onsite(std::span<const Complex> psi, double g_eff, double J12) {
  const MeanFieldMoments ms(psi);
  require_four_wells(ms);
  const double jt01 = jt(ms, 0, 1);
  const double jt23 = jt(ms, 2, 3);
  if (jt01 == 0.0) throw BreakdownError(BreakdownCause::kCurrent01);
  if (jt23 == 0.0) throw BreakdownError(BreakdownCause::kCurrent23);
  return {-J12 * jt(ms, 0, 2) / jt01 - g_eff * (occ(ms, 0) - occ(ms, 1)),
          -J12 * jt(ms, 1, 3) / jt23 - g_eff * (occ(ms, 3) - occ(ms, 2))};
}

OnsiteEnergies mb_onsite(const MomentSource& ms, double U, double J12) {
  require_four_wells(ms);
  const double jt01 = jt(ms, 0, 1);
  const double jt23 = jt(ms, 2, 3);
  if (jt01 == 0.0) throw BreakdownError(BreakdownCause::kCurrent01);
  if (jt23 == 0.0) throw BreakdownError(BreakdownCause::kCurrent23);
  double mu0 = -J12 * jt(ms, 0, 2);
  double mu3 = -J12 * jt(ms, 1, 3);
  if (U != 0.0) {
    mu0 -= U * 2.0 * (ms.delta(0, 0, 0, 1) - ms.delta(0, 1, 1, 1)).imag();
    mu3 += U * 2.0 * (ms.delta(2, 2, 2, 3) - ms.delta(2, 3, 3, 3)).imag();
  }
  return {mu0 / jt01, mu3 / jt23};
}

BglSolution bgl_onsite(const MomentSource& ms, const TunnelingRates& rates, double J12, double U,
                       const OnsiteEnergies& reference) {
  require_four_wells(ms);
  const LatticeParams p = hopping_lattice(rates, J12, U);
  const double J01 = rates.J01;
  const double J23 = rates.J23;
  const double jt01 = jt(ms, 0, 1), jt23 = jt(ms, 2, 3);
  const double jt02 = jt(ms, 0, 2), jt13 = jt(ms, 1, 3);
  const double c01 = coh(ms, 0, 1), c23 = coh(ms, 2, 3);
  const double c02 = coh(ms, 0, 2), c13 = coh(ms, 1, 3);
  if (jt01 == 0.0) throw BreakdownError(BreakdownCause::kCurrent01);
  if (jt23 == 0.0) throw BreakdownError(BreakdownCause::kCurrent23);

  auto ups1 = [&](int i, int j) { return 2.0 * zeta1(ms, p, i, j).imag(); };
  auto chi1 = [&](int i, int j) { return 2.0 * zeta1(ms, p, i, j).real(); };

  BglSolution s;
  s.alpha = J01 * (jt02 + c02 * c01 / jt01);
  s.beta = J23 * (jt13 + c13 * c23 / jt23);
  s.omega = J01 * c02 * chi1(0, 1) / jt01 - J23 * c13 * chi1(2, 3) / jt23 + J01 * ups1(0, 2) +
            J12 * (ups1(2, 2) - ups1(1, 1)) - J23 * ups1(1, 3);
  if (U != 0.0)
    s.omega -= U * 2.0 * (zeta2(ms, p, 1, 1, 1, 2) - zeta2(ms, p, 1, 2, 2, 2)).imag();

  const double a = s.alpha, b = s.beta;
  const double norm2 = a * a + b * b;
  if (!(norm2 > 0.0) || !std::isfinite(norm2) || !std::isfinite(s.omega))
    throw BreakdownError(BreakdownCause::kDegenerateProjection);
  const double m0 = reference.mu0, m3 = reference.mu3;
  s.mu.mu0 = (a * s.omega + b * b * m0 - a * b * m3) / norm2;
  s.mu.mu3 = (b * s.omega + a * a * m3 - a * b * m0) / norm2;
  s.residual = a * s.mu.mu0 + b * s.mu.mu3 - s.omega;

  // Coefficients of the companion condition d c12/dt stationary.
  const double a2 = J01 * (c02 - jt02 * c01 / jt01);
  const double b2 = J23 * (c13 - jt13 * c23 / jt23);
  s.condition_number = condition_2x2(a, b, a2, b2);
  return s;
}

double rescale_interaction(double g, double N2, int N) {
  if (N < 2) throw std::invalid_argument("rescale_interaction: N must be at least 2");
  if (!(N2 >= 1.0)) throw std::invalid_argument("rescale_interaction: N2 must be at least 1");
  return g / N2 / static_cast<double>(N - 1);
}

BreakdownCause detect_breakdown(double jt01, double jt23, double jt01_initial,
                                double jt23_initial, double epsilon) {
  if (!(std::abs(jt01) >= epsilon * std::abs(jt01_initial))) return BreakdownCause::kCurrent01;
  if (!(std::abs(jt23) >= epsilon * std::abs(jt23_initial))) return BreakdownCause::kCurrent23;
  return BreakdownCause::kNone;
}

Controller::Controller(const ControlPolicy& policy, const MomentSource& initial,
                       const AnalyticSchedule& schedule)
    : policy_(policy), schedule_(schedule) {
  policy_.validate();
  require_four_wells(initial);
  jt01_initial_ = jt(initial, 0, 1);
  jt23_initial_ = jt(initial, 2, 3);
  if (jt01_initial_ == 0.0 || jt23_initial_ == 0.0)
    throw std::invalid_argument("controller needs nonzero initial reservoir currents");
  if (policy_.variant == ControlVariant::kAnalyticMF && !(schedule_.n0_initial > 0.0))
    throw std::invalid_argument("analytic schedule needs a populated left reservoir");
}

ControlOutput Controller::evaluate(double t, const MomentSource& ms) const {
  const ControlPolicy& p = policy_;
  const double eps = p.epsilon_breakdown;
  ControlOutput out;

  if (p.variant == ControlVariant::kAnalyticMF) {
    // The open-loop schedule empties the left reservoir at tau; j01 scales
    // like sqrt(n0), so eps^2 in population matches eps in current.
    const double drained = 2.0 * p.gamma * schedule_.n * t;
    if (schedule_.n0_initial - drained < eps * eps * schedule_.n0_initial)
      throw BreakdownError(BreakdownCause::kReservoirEmpty);
    const ReservoirParams r = analytic_params(t, schedule_.n, schedule_.n0_initial,
                                              schedule_.n3_initial, p.gamma, p.J12,
                                              p.interaction);
    out.J01 = r.J01;
    out.J23 = r.J23;
    out.mu0 = r.mu0;
    out.mu3 = r.mu3;
  }

  const double jt01 = jt(ms, 0, 1);
  const double jt23 = jt(ms, 2, 3);
  if (auto cause = detect_breakdown(jt01, jt23, jt01_initial_, jt23_initial_, eps);
      cause != BreakdownCause::kNone)
    throw BreakdownError(cause);

  if (p.variant != ControlVariant::kAnalyticMF) {
    const TunnelingRates rates = feedback_tunneling(ms, p.gamma);
    out.J01 = rates.J01;
    out.J23 = rates.J23;
    OnsiteEnergies mu;
    if (p.variant == ControlVariant::kFeedbackMF) {
      const double jt02 = jt(ms, 0, 2), jt13 = jt(ms, 1, 3);
      mu.mu0 = -p.J12 * jt02 / jt01 - p.interaction * (occ(ms, 0) - occ(ms, 1));
      mu.mu3 = -p.J12 * jt13 / jt23 - p.interaction * (occ(ms, 3) - occ(ms, 2));
    } else {
      mu = mb_onsite(ms, p.interaction, p.J12);
    }
    if (p.variant == ControlVariant::kFeedbackBGL) {
      const BglSolution s = bgl_onsite(ms, rates, p.J12, p.interaction, mu);
      mu = s.mu;
      out.diagnostics.projection_residual = s.residual;
      out.diagnostics.condition_number = s.condition_number;
    }
    out.mu0 = mu.mu0;
    out.mu3 = mu.mu3;
  }
  if (!std::isfinite(out.J01) || !std::isfinite(out.mu0))
    throw BreakdownError(BreakdownCause::kCurrent01);
  if (!std::isfinite(out.J23) || !std::isfinite(out.mu3))
    throw BreakdownError(BreakdownCause::kCurrent23);

  // Rates of change of the quantities the controllers hold fixed.
  const LatticeParams lat = lattice(out);
  const Complex z01 = zeta1(ms, lat, 0, 1);
  const Complex z23 = zeta1(ms, lat, 2, 3);
  const Complex z12 = zeta1(ms, lat, 1, 2);
  out.diagnostics.dc01_dt = 2.0 * z01.imag() - out.mu0 * jt01;
  out.diagnostics.dc23_dt = 2.0 * z23.imag() + out.mu3 * jt23;
  out.diagnostics.djt12_dt = -2.0 * z12.real();
  return out;
}

LatticeParams Controller::lattice(const ControlOutput& out) const {
  return four_mode_lattice({out.J01, out.J23, out.mu0, out.mu3}, policy_.J12,
                           policy_.interaction);
}

}  // namespace bhgl
