#include "bhgl/meanfield.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bhgl/breakdown.hpp"

namespace bhgl {

ComplexVector gpe_rhs(std::span<const Complex> psi, const LatticeParams& params) {
  const int M = static_cast<int>(psi.size());
  params.validate(M);
  ComplexVector dpsi(M);
  for (int m = 0; m < M; ++m) {
    Complex h = (params.U * std::norm(psi[m]) + params.mu[m]) * psi[m];
    if (m > 0) h -= params.J[m - 1] * psi[m - 1];
    if (m + 1 < M) h -= params.J[m] * psi[m + 1];
    dpsi[m] = -kI * h;
  }
  return dpsi;
}

ComplexVector two_mode_rhs(std::span<const Complex> psi, const TwoModeParams& p) {
  if (psi.size() != 2) throw std::invalid_argument("two_mode_rhs: two components required");
  const Complex h1 = (p.g * std::norm(psi[0]) + kI * p.gamma) * psi[0] - p.J12 * psi[1];
  const Complex h2 = -p.J12 * psi[0] + (p.g * std::norm(psi[1]) - kI * p.gamma) * psi[1];
  return {-kI * h1, -kI * h2};
}

double chemical_potential(double g_eff, double n, double gamma, double J12) {
  if (gamma > J12) throw std::domain_error("PT-broken regime: gamma exceeds J12");
  return g_eff * n - std::sqrt(J12 * J12 - gamma * gamma);
}

double stationary_phase(double gamma, double J12) {
  if (J12 <= 0.0) throw std::domain_error("J12 must be positive");
  if (gamma > J12) throw std::domain_error("PT-broken regime: gamma exceeds J12");
  return -0.5 * std::asin(gamma / J12);
}

MFState two_mode_stationary(double n, double gamma, double J12) {
  if (!(n > 0.0)) throw std::invalid_argument("embedded population must be positive");
  const double phi = stationary_phase(gamma, J12);
  return {std::polar(std::sqrt(n), phi), std::polar(std::sqrt(n), -phi)};
}

MFState stationary_init(double n, double n0, double n3, double gamma, double J12) {
  if (n0 < 0.0 || n3 < 0.0) throw std::invalid_argument("reservoir population negative");
  const MFState inner = two_mode_stationary(n, gamma, J12);
  const double phi = stationary_phase(gamma, J12);
  constexpr double half_pi = 0.5 * std::numbers::pi;
  return {std::polar(std::sqrt(n0), phi - half_pi), inner[0], inner[1],
          std::polar(std::sqrt(n3), -(phi - half_pi))};
}

double breakdown_time(double n0_initial, double gamma, double n) {
  if (!(gamma > 0.0) || !(n > 0.0))
    throw std::invalid_argument("breakdown_time: gamma and n must be positive");
  return n0_initial / (2.0 * gamma * n);
}

ReservoirParams analytic_params(double t, double n, double n0_initial, double n3_initial,
                                double gamma, double J12, double g_eff) {
  const double drained = 2.0 * gamma * n * t;
  const double n0 = n0_initial - drained;
  const double n3 = n3_initial + drained;
  if (!(n0 > 0.0)) throw BreakdownError(BreakdownCause::kReservoirEmpty);
  const double mu = chemical_potential(g_eff, n, gamma, J12);
  return {gamma * std::sqrt(n / n0), gamma * std::sqrt(n / n3), mu - g_eff * n0,
          mu - g_eff * n3};
}

LatticeParams four_mode_lattice(const ReservoirParams& r, double J12, double interaction) {
  return LatticeParams{{r.J01, J12, r.J23}, interaction, {r.mu0, 0.0, 0.0, r.mu3}};
}

}  // namespace bhgl
