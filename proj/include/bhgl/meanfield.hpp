#ifndef BHGL_MEANFIELD_HPP
#define BHGL_MEANFIELD_HPP

#include <span>

#include "bhgl/types.hpp"

namespace bhgl {

// Mean-field amplitudes psi_m = sqrt(n_m) exp(i phi_m). Populations are kept
// in whatever unit the caller chose (particles or unit embedded norm).
using MFState = ComplexVector;

// PT-symmetric dimer parameters. g multiplies |psi_k|^2 in the same
// population unit as the amplitudes it acts on.
struct TwoModeParams {
  double gamma = 0.0;
  double g = 0.0;
  double J12 = 1.0;
};

// d psi/dt of the discrete Gross-Pitaevskii equation; params.U is the
// effective interaction multiplying n_m.
ComplexVector gpe_rhs(std::span<const Complex> psi, const LatticeParams& params);

// d psi/dt = -i H psi with H = [[g|psi1|^2 + i gamma, -J12], [-J12, g|psi2|^2 - i gamma]].
ComplexVector two_mode_rhs(std::span<const Complex> psi, const TwoModeParams& params);

// Eigenvalue of the PT-symmetric stationary state, g n - sqrt(J12^2 - gamma^2).
double chemical_potential(double g_eff, double n, double gamma, double J12);

// Inner-well phase -asin(gamma/J12)/2 of the stationary state.
double stationary_phase(double gamma, double J12);

// Four-mode initial state whose embedded pair is the PT-symmetric stationary
// state and whose reservoir phases lag/lead by pi/2, so c01 = c23 = 0 and
// all three currents equal 2 gamma n.
MFState stationary_init(double n, double n0, double n3, double gamma, double J12);

// Two-mode PT stationary state (the inner components of stationary_init).
MFState two_mode_stationary(double n, double gamma, double J12);

struct ReservoirParams {
  double J01 = 0.0;
  double J23 = 0.0;
  double mu0 = 0.0;
  double mu3 = 0.0;
};

// Closed-form reservoir schedule keeping the embedded wells stationary while
// the reservoirs drain linearly. Throws BreakdownError once the left
// reservoir is empty (t >= tau).
ReservoirParams analytic_params(double t, double n, double n0_initial, double n3_initial,
                                double gamma, double J12, double g_eff);

// tau = n0(0) / (2 gamma n).
double breakdown_time(double n0_initial, double gamma, double n);

// Four-mode lattice with reservoir parameters filled in and mu1 = mu2 = 0.
LatticeParams four_mode_lattice(const ReservoirParams& reservoir, double J12, double interaction);

}  // namespace bhgl

#endif  // BHGL_MEANFIELD_HPP
