#include <doctest.h>

#include <cmath>
#include <random>

#include "bhgl/bbr.hpp"
#include "bhgl/control.hpp"
#include "bhgl/exact.hpp"
#include "bhgl/meanfield.hpp"
#include "oracles.hpp"

using namespace bhgl;

namespace {

using oracle::DenseMatrix;
using oracle::DenseVector;

// Heisenberg derivative operator i[H, O].
DenseMatrix heis(const DenseMatrix& H, const DenseMatrix& O) { return kI * (H * O - O * H); }

Complex ev(const DenseVector& psi, const DenseMatrix& O) { return psi.dot(O * psi); }

DenseMatrix current_op(const oracle::DenseSpace& s, int i, int j) {
  return -kI * (s.pair(i, j) - s.pair(j, i));
}

DenseMatrix coherence_op(const oracle::DenseSpace& s, int i, int j) {
  return s.pair(i, j) + s.pair(j, i);
}

struct RandomExact {
  HubbardKernel kernel;
  oracle::DenseSpace space;
  ComplexVector psi;
  DenseVector dense;
  ExactMoments moments;

  RandomExact(int N, std::uint32_t seed)
      : kernel(FockBasis(N, 4)), space(N, 4), moments(kernel) {
    std::mt19937 rng(seed);
    psi = oracle::random_state(rng, kernel.size());
    dense = oracle::to_dense(psi);
    moments.bind(psi);
  }
};

const ControlPolicy kPolicy = [] {
  ControlPolicy p;
  p.gamma = 0.5;
  p.J12 = 1.0;
  return p;
}();

}  // namespace

TEST_CASE("variant names round trip") {
  for (auto v : {ControlVariant::kAnalyticMF, ControlVariant::kFeedbackMF,
                 ControlVariant::kFeedbackMB, ControlVariant::kFeedbackBGL})
    CHECK(parse_control_variant(to_string(v)) == v);
  CHECK_THROWS_AS(parse_control_variant("bogus"), std::invalid_argument);
}

TEST_CASE("policy validation") {
  ControlPolicy p;
  CHECK_NOTHROW(p.validate());
  p.epsilon_breakdown = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.epsilon_breakdown = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("feedback tunneling at the stationary initial state") {
  const auto psi = stationary_init(5, 50, 50, 0.5, 1.0);
  const MeanFieldMoments ms(psi);
  const auto r = feedback_tunneling(ms, 0.5);
  CHECK(r.J01 == doctest::Approx(0.5 * std::sqrt(5.0 / 50.0)));
  CHECK(r.J01 == doctest::Approx(0.15811).epsilon(1e-4));
  CHECK(r.J23 == doctest::Approx(r.J01));
  // A product state with an empty well 1 carries no current into it.
  const MeanFieldMoments hm(ComplexVector{Complex(1.0, 0.0), Complex(0.0, 0.0), psi[2], psi[3]});
  CHECK_THROWS_AS(feedback_tunneling(hm, 0.5), BreakdownError);
  // An empty well 1 with a nonzero current needs no tunneling.
  MomentState m(4);
  m.sigma(0, 1) = Complex(0.0, 0.3);
  m.sigma(1, 0) = Complex(0.0, -0.3);
  m.sigma(2, 3) = Complex(0.0, 0.2);
  m.sigma(2, 2) = 1.0;
  const auto z = feedback_tunneling(ClosureMoments(m.data(), 4), 0.5);
  CHECK(z.J01 == 0.0);
  CHECK(z.J23 == doctest::Approx(2 * 0.5 * 1.0 / 0.4));
}

TEST_CASE("mean-field on-site energies") {
  const auto psi = stationary_init(5, 50, 50, 0.5, 1.0);
  const auto mu = mf_onsite(psi, 0.01, 1.0);
  CHECK(mu.mu0 == doctest::Approx(-1.3160).epsilon(1e-4));
  const auto rp = analytic_params(0.0, 5, 50, 50, 0.5, 1.0, 0.01);
  CHECK(mu.mu0 == doctest::Approx(rp.mu0).epsilon(1e-12));
  CHECK(mu.mu3 == doctest::Approx(rp.mu3).epsilon(1e-12));
  // g = 0 and jt02 = 0 give zero.
  const ComplexVector real_pair{Complex(2.0, 0.0), Complex(0.0, 1.0), Complex(1.0, 0.0),
                                Complex(0.0, 1.0)};
  const auto z = mf_onsite(real_pair, 0.0, 1.0);
  CHECK(std::abs(z.mu0) < 1e-15);
}

TEST_CASE("many-body on-site energies hold c01 and c23 fixed") {
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    RandomExact ex(4, seed);
    const double U = 0.37;
    const auto rates = feedback_tunneling(ex.moments, 0.5);
    const auto mu = mb_onsite(ex.moments, U, 1.0);
    const LatticeParams lat{{rates.J01, 1.0, rates.J23}, U, {mu.mu0, 0.0, 0.0, mu.mu3}};
    const DenseMatrix H = ex.space.hamiltonian(lat);
    CHECK(std::abs(ev(ex.dense, heis(H, coherence_op(ex.space, 0, 1)))) < 1e-11);
    CHECK(std::abs(ev(ex.dense, heis(H, coherence_op(ex.space, 2, 3)))) < 1e-11);
  }
}

TEST_CASE("mb_onsite reduces to the mean-field formula at U = 0") {
  const auto psi = stationary_init(5, 50, 50, 0.5, 1.0);
  const ComplexVector tilted{psi[0] * std::polar(1.0, 0.3), psi[1], psi[2] * std::polar(1.0, 0.1),
                             psi[3]};
  const auto mf = mf_onsite(tilted, 0.0, 1.0);
  const auto mb = mb_onsite(MeanFieldMoments(tilted), 0.0, 1.0);
  CHECK(mb.mu0 == doctest::Approx(mf.mu0));
  CHECK(mb.mu3 == doctest::Approx(mf.mu3));
  // Pure many-body moments have the same current ratios.
  const MomentState pm = pure_moments(tilted, 1000);
  const auto pb = mb_onsite(ClosureMoments(pm.data(), 4), 0.0, 1.0);
  CHECK(pb.mu0 == doctest::Approx(mf.mu0));
}

TEST_CASE("many-body energies approach mean field for large N") {
  // g_eff in particle units is U N_pop-independent; scale U = g_eff / N with
  // the orbital normalized to unit population so both see the same coupling.
  const auto psi = stationary_init(5, 50, 50, 0.5, 1.0);
  const double g = 0.1;
  ComplexVector unit = psi;
  for (auto& c : unit) c /= std::sqrt(110.0);
  const auto mf = mf_onsite(unit, g, 1.0);
  double previous = 1e9;
  for (int N : {1000, 10000}) {
    const MomentState pm = pure_moments(psi, N);
    const auto mb = mb_onsite(ClosureMoments(pm.data(), 4), g / N, 1.0);
    const double err = std::abs(mb.mu0 - mf.mu0) + std::abs(mb.mu3 - mf.mu3);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("BGL projection satisfies the line identity and fixes points on it") {
  RandomExact ex(4, 9);
  const double U = 0.21;
  const auto rates = feedback_tunneling(ex.moments, 0.5);
  const OnsiteEnergies ref{0.3, -0.8};
  const auto s = bgl_onsite(ex.moments, rates, 1.0, U, ref);
  CHECK(std::abs(s.alpha * s.mu.mu0 + s.beta * s.mu.mu3 - s.omega) < 1e-10);
  CHECK(std::abs(s.residual) < 1e-10);
  CHECK(s.condition_number >= 1.0);
  const auto again = bgl_onsite(ex.moments, rates, 1.0, U, s.mu);
  CHECK(again.mu.mu0 == doctest::Approx(s.mu.mu0).epsilon(1e-12));
  CHECK(again.mu.mu3 == doctest::Approx(s.mu.mu3).epsilon(1e-12));
  // The correction is orthogonal to the line.
  const double d0 = s.mu.mu0 - ref.mu0, d3 = s.mu.mu3 - ref.mu3;
  CHECK(std::abs(d0 * s.beta - d3 * s.alpha) < 1e-10 * (1 + std::abs(d0) + std::abs(d3)));
}

namespace {

// d^2 <jt12>/dt^2 for the BGL energies with J01 and J23 slaved to the
// feedback law: <i[H, i[H, O]]> + <i[dH/dt, O]>, where dH/dt only contains
// the feedback-driven dJ01/dt and dJ23/dt. Also returns the part of dJ/dt
// coming from dn1/dt and dn2/dt, which the closed-form Omega leaves out
// because n1 and n2 are stationary along controlled runs.
std::pair<double, double> bgl_second_derivative(const oracle::DenseSpace& sp,
                                                const DenseVector& psi, const MomentSource& ms,
                                                double U, double gamma) {
  const auto rates = feedback_tunneling(ms, gamma);
  const auto s = bgl_onsite(ms, rates, 1.0, U, {0.2, 0.4});
  const LatticeParams lat{{rates.J01, 1.0, rates.J23}, U, {s.mu.mu0, 0.0, 0.0, s.mu.mu3}};
  const DenseMatrix H = sp.hamiltonian(lat);
  auto rate = [&](int well, const DenseMatrix& jop) {
    const double n = ev(psi, sp.number(well)).real();
    const double jt = ev(psi, jop).real();
    const double dn = ev(psi, heis(H, sp.number(well))).real();
    const double djt = ev(psi, heis(H, jop)).real();
    return 2.0 * gamma * (dn * jt - n * djt) / (jt * jt);
  };
  const double dJ01 = rate(1, current_op(sp, 0, 1));
  const double dJ23 = rate(2, current_op(sp, 2, 3));
  const DenseMatrix dH =
      -dJ01 * (sp.pair(0, 1) + sp.pair(1, 0)) - dJ23 * (sp.pair(2, 3) + sp.pair(3, 2));
  const DenseMatrix O = current_op(sp, 1, 2);
  const double second = (ev(psi, heis(H, heis(H, O))) + ev(psi, heis(dH, O))).real();

  auto dn_over_n = [&](int well) {
    return ev(psi, heis(H, sp.number(well))).real() / ev(psi, sp.number(well)).real();
  };
  const double c02 = ev(psi, coherence_op(sp, 0, 2)).real();
  const double c13 = ev(psi, coherence_op(sp, 1, 3)).real();
  const double population_terms = -rates.J01 * c02 * dn_over_n(1) + rates.J23 * c13 * dn_over_n(2);
  return {second, population_terms};
}

}  // namespace

TEST_CASE("BGL energies make the second derivative of jt12 vanish on the stationary state") {
  const int N = 6;
  const HubbardKernel k{FockBasis(N, 4)};
  const oracle::DenseSpace sp(N, 4);
  const auto psi = pure_state(k.basis(), stationary_init(5, 50, 50, 0.5, 1.0));
  ExactMoments ms(k);
  ms.bind(psi);
  const auto [second, population_terms] = bgl_second_derivative(sp, oracle::to_dense(psi), ms, 0.3, 0.5);
  CHECK(std::abs(population_terms) < 1e-12);
  CHECK(std::abs(second) < 1e-10);
}

TEST_CASE("BGL second derivative off the stationary manifold is the population term") {
  for (std::uint32_t seed : {4u, 5u, 6u}) {
    RandomExact ex(4, seed);
    const auto [second, population_terms] = bgl_second_derivative(ex.space, ex.dense, ex.moments, 0.17, 0.5);
    CHECK(std::abs(population_terms) > 1e-3);
    CHECK(second == doctest::Approx(population_terms).epsilon(1e-9));
  }
}

TEST_CASE("degenerate projection is reported as a breakdown") {
  MomentState m(4);
  m.sigma(0, 1) = Complex(0.0, 0.5);
  m.sigma(1, 0) = Complex(0.0, -0.5);
  m.sigma(2, 3) = Complex(0.0, 0.5);
  m.sigma(3, 2) = Complex(0.0, -0.5);
  const ClosureMoments cm(m.data(), 4);
  try {
    bgl_onsite(cm, {1.0, 1.0}, 1.0, 0.0, {});
    FAIL("expected a breakdown");
  } catch (const BreakdownError& e) {
    CHECK(e.cause() == BreakdownCause::kDegenerateProjection);
  }
}

TEST_CASE("interaction rescaling") {
  CHECK(rescale_interaction(0.1, 100, 1100) == doctest::Approx(9.100e-7).epsilon(1e-3));
  CHECK(rescale_interaction(0.1, 10, 110) == doctest::Approx(9.174e-5).epsilon(1e-3));
  CHECK(rescale_interaction(0.1, 10, 110) == doctest::Approx(0.1 / (10.0 * 109.0)));
  CHECK_THROWS_AS(rescale_interaction(0.1, 10, 1), std::invalid_argument);
}

TEST_CASE("breakdown detection") {
  CHECK(detect_breakdown(1.0, 1.0, 1.0, 1.0, 1e-3) == BreakdownCause::kNone);
  CHECK(detect_breakdown(1e-4, 1.0, 1.0, 1.0, 1e-3) == BreakdownCause::kCurrent01);
  CHECK(detect_breakdown(1.0, 1e-4, 1.0, 1.0, 1e-3) == BreakdownCause::kCurrent23);
  CHECK(detect_breakdown(1.0, std::nan(""), 1.0, 1.0, 1e-3) == BreakdownCause::kCurrent23);
}

TEST_CASE("controller outputs and diagnostics") {
  const auto psi = stationary_init(5, 50, 50, 0.5, 1.0);
  const MeanFieldMoments ms(psi);
  ControlPolicy p = kPolicy;
  p.interaction = 0.01;

  p.variant = ControlVariant::kFeedbackMF;
  const Controller mf(p, ms);
  const auto out = mf.evaluate(0.0, ms);
  const auto rp = analytic_params(0.0, 5, 50, 50, 0.5, 1.0, 0.01);
  CHECK(out.J01 == doctest::Approx(rp.J01));
  CHECK(out.mu0 == doctest::Approx(rp.mu0));
  CHECK(out.mu3 == doctest::Approx(rp.mu3));
  CHECK(std::abs(out.diagnostics.dc01_dt) < 1e-12);
  CHECK(std::abs(out.diagnostics.dc23_dt) < 1e-12);
  CHECK(std::abs(out.diagnostics.djt12_dt) < 1e-12);

  p.variant = ControlVariant::kAnalyticMF;
  const Controller an(p, ms, AnalyticSchedule{5, 50, 50});
  const auto a = an.evaluate(3.0, ms);
  const auto r3 = analytic_params(3.0, 5, 50, 50, 0.5, 1.0, 0.01);
  CHECK(a.J01 == r3.J01);
  CHECK(a.mu3 == r3.mu3);
  CHECK_THROWS_AS(an.evaluate(10.0, ms), BreakdownError);
  CHECK_THROWS_AS(Controller(p, ms), std::invalid_argument);

  p.variant = ControlVariant::kFeedbackBGL;
  const Controller bgl(p, ms);
  const auto b = bgl.evaluate(0.0, ms);
  CHECK(std::abs(b.diagnostics.projection_residual) < 1e-10);
  const LatticeParams lat = bgl.lattice(b);
  CHECK(lat.J == std::vector<double>{b.J01, 1.0, b.J23});
  CHECK(lat.mu == std::vector<double>{b.mu0, 0.0, 0.0, b.mu3});

  // A current that collapsed relative to its start trips the detector.
  ComplexVector drained = psi;
  drained[0] *= 1e-4;
  try {
    mf.evaluate(1.0, MeanFieldMoments(drained));
    FAIL("expected a breakdown");
  } catch (const BreakdownError& e) {
    CHECK(e.cause() == BreakdownCause::kCurrent01);
  }
}
