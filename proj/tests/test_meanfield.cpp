#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bhgl/breakdown.hpp"
#include "bhgl/integrator.hpp"
#include "bhgl/meanfield.hpp"

using namespace bhgl;

namespace {

// Integrates dpsi/dt = f(psi) tightly and returns the state at t_end.
template <class F>
ComplexVector integrate(F f, ComplexVector y0, double t_end, double tol = 1e-12) {
  StepperOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  DormandPrince s(
      [&](double, std::span<const Complex> y, std::span<Complex> dy) {
        const auto d = f(y);
        std::copy(d.begin(), d.end(), dy.begin());
      },
      opt);
  s.initialize(0.0, y0);
  while (s.t() < t_end) REQUIRE(s.step(t_end).status == StepStatus::kAccepted);
  return ComplexVector(s.state().begin(), s.state().end());
}

}  // namespace

TEST_CASE("gpe_rhs trivial cases") {
  LatticeParams single{{}, 0.0, {0.0}};
  const auto d = gpe_rhs(ComplexVector{Complex(0.3, 0.4)}, single);
  CHECK(std::abs(d[0]) == 0.0);
  // Uniform mu only rotates the phase.
  LatticeParams p{{0.0}, 0.0, {2.0, 2.0}};
  const ComplexVector psi{1.0, Complex(0.0, 1.0)};
  const auto dp = gpe_rhs(psi, p);
  for (int m = 0; m < 2; ++m) CHECK(std::abs(dp[m] + kI * 2.0 * psi[m]) < 1e-15);
}

TEST_CASE("two-well Rabi oscillation has period pi/J") {
  const double J = 0.7;
  LatticeParams p{{J}, 0.0, {0.0, 0.0}};
  auto f = [&](std::span<const Complex> y) { return gpe_rhs(y, p); };
  const double period = std::numbers::pi / J;
  const auto half = integrate(f, ComplexVector{1.0, 0.0}, period / 2);
  CHECK(std::norm(half[1]) == doctest::Approx(1.0).epsilon(1e-9));
  const auto full = integrate(f, ComplexVector{1.0, 0.0}, period);
  CHECK(std::norm(full[0]) == doctest::Approx(1.0).epsilon(1e-9));
  // n1(t) = cos^2(J t) in between.
  const auto q = integrate(f, ComplexVector{1.0, 0.0}, 0.4);
  CHECK(std::norm(q[0]) == doctest::Approx(std::pow(std::cos(J * 0.4), 2)).epsilon(1e-9));
}

TEST_CASE("two_mode_rhs Hermitian limit conserves the norm") {
  TwoModeParams p{0.0, 0.0, 1.0};
  const auto y = integrate([&](std::span<const Complex> s) { return two_mode_rhs(s, p); },
                           ComplexVector{Complex(0.8, 0.1), Complex(-0.2, 0.55)}, 7.0);
  CHECK(std::norm(y[0]) + std::norm(y[1]) ==
        doctest::Approx(0.64 + 0.01 + 0.04 + 0.3025).epsilon(1e-10));
}

TEST_CASE("chemical potential and stationary phase") {
  CHECK(chemical_potential(0.1, 0.5, 0.5, 1.0) == doctest::Approx(0.05 - std::sqrt(0.75)));
  CHECK(chemical_potential(0.1, 0.5, 0.5, 1.0) == doctest::Approx(-0.8160).epsilon(1e-4));
  CHECK(stationary_phase(0.5, 1.0) == doctest::Approx(-std::numbers::pi / 12));
  CHECK(stationary_phase(0.5, 1.0) == doctest::Approx(-0.26180).epsilon(1e-5));
  CHECK_THROWS(stationary_phase(1.5, 1.0));
}

TEST_CASE("PT stationary state is an eigenvector with real eigenvalue") {
  const double n = 0.5, g = 0.1, gamma = 0.5, J = 1.0;
  const auto psi = two_mode_stationary(n, gamma, J);
  CHECK(std::norm(psi[0]) == doctest::Approx(n));
  CHECK(std::norm(psi[1]) == doctest::Approx(n));
  const auto d = two_mode_rhs(psi, TwoModeParams{gamma, g, J});
  const double mu = chemical_potential(g, n, gamma, J);
  for (int k = 0; k < 2; ++k) CHECK(std::abs(d[k] + kI * mu * psi[k]) < 1e-13);
  const auto later =
      integrate([&](std::span<const Complex> s) { return two_mode_rhs(s, TwoModeParams{gamma, g, J}); },
                psi, 50.0, 1e-11);
  CHECK(std::norm(later[0]) == doctest::Approx(n).epsilon(1e-8));
  CHECK(std::norm(later[1]) == doctest::Approx(n).epsilon(1e-8));
}

TEST_CASE("four-mode stationary init has vanishing c01, c23 and equal currents") {
  const double n = 5, gamma = 0.5, J12 = 1.0;
  const auto psi = stationary_init(n, 50, 50, gamma, J12);
  auto sig = [&](int i, int j) { return std::conj(psi[i]) * psi[j]; };
  CHECK(std::abs(sig(0, 1).real()) < 1e-12);
  CHECK(std::abs(sig(2, 3).real()) < 1e-12);
  // jt_ij = 2 Im sigma_ij; j12 = J12 jt12 = 2 gamma n.
  CHECK(2.0 * sig(1, 2).imag() * J12 == doctest::Approx(2 * gamma * n));
  CHECK(std::norm(psi[0]) == doctest::Approx(50));
  CHECK(std::norm(psi[3]) == doctest::Approx(50));

  const auto rp = analytic_params(0.0, n, 50, 50, gamma, J12, 0.01);
  CHECK(rp.J01 == doctest::Approx(0.5 * std::sqrt(0.1)));
  CHECK(rp.J01 == doctest::Approx(0.15811).epsilon(1e-4));
  CHECK(rp.mu0 == doctest::Approx(0.05 - std::sqrt(0.75) - 0.5));
  CHECK(rp.mu0 == doctest::Approx(-1.3160).epsilon(1e-4));
  const auto lat = four_mode_lattice(rp, J12, 0.01);
  const auto d = gpe_rhs(psi, lat);
  // dn_m/dt = 2 Re(conj(psi) dpsi).
  for (int m : {1, 2}) CHECK(std::abs(2.0 * (std::conj(psi[m]) * d[m]).real()) < 1e-10);
  CHECK(2.0 * (std::conj(psi[0]) * d[0]).real() == doctest::Approx(-2 * gamma * n));
  CHECK(2.0 * (std::conj(psi[3]) * d[3]).real() == doctest::Approx(2 * gamma * n));
}

TEST_CASE("breakdown time") {
  CHECK(breakdown_time(50, 0.5, 5) == doctest::Approx(10.0));
  CHECK(breakdown_time(0, 0.5, 5) == 0.0);
  CHECK(breakdown_time(50, 1.0, 5) == doctest::Approx(5.0));
  CHECK_THROWS_AS(analytic_params(10.0, 5, 50, 50, 0.5, 1.0, 0.01), BreakdownError);
  // J01 grows without bound as t approaches tau.
  CHECK(analytic_params(9.999, 5, 50, 50, 0.5, 1.0, 0.01).J01 >
        10 * analytic_params(9.0, 5, 50, 50, 0.5, 1.0, 0.01).J01);
}

TEST_CASE("analytic schedule keeps the embedded pair stationary and drains linearly") {
  const double n = 5, gamma = 0.5, J12 = 1.0, g = 0.01;
  StepperOptions opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-11;
  DormandPrince s(
      [&](double t, std::span<const Complex> y, std::span<Complex> dy) {
        const auto lat = four_mode_lattice(analytic_params(t, n, 50, 50, gamma, J12, g), J12, g);
        const auto d = gpe_rhs(y, lat);
        std::copy(d.begin(), d.end(), dy.begin());
      },
      opt);
  s.initialize(0.0, stationary_init(n, 50, 50, gamma, J12));
  const auto inner = two_mode_stationary(n, gamma, J12);
  const double mu = chemical_potential(g, n, gamma, J12);
  while (s.t() < 9.9) {
    REQUIRE(s.step(9.9).status == StepStatus::kAccepted);
    const double t = s.t();
    const auto y = s.state();
    CHECK(std::norm(y[0]) == doctest::Approx(50 - 2 * gamma * n * t).epsilon(1e-6));
    CHECK(std::norm(y[3]) == doctest::Approx(50 + 2 * gamma * n * t).epsilon(1e-6));
    // The standalone dimer evolves as exp(-i mu t) times its initial state.
    for (int k = 0; k < 2; ++k)
      CHECK(std::abs(y[k + 1] - std::exp(-kI * mu * t) * inner[k]) < 1e-6);
  }
}
