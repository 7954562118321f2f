#include "bhgl/bbr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bhgl {

MomentState::MomentState(int wells) : wells_(wells), data_(flat_size(wells)) {
  if (wells < 1) throw std::invalid_argument("MomentState: at least one well required");
}

Complex triple_factorize(const MomentSource& ms, int i, int j, int k, int l, int m, int n) {
  const Complex s_ij = ms.sigma(i, j);
  const Complex s_kl = ms.sigma(k, l);
  const Complex s_mn = ms.sigma(m, n);
  return s_ij * ms.delta(k, l, m, n) + s_mn * ms.delta(i, j, k, l) +
         s_kl * ms.delta(i, j, m, n) - 2.0 * s_ij * s_kl * s_mn;
}

MomentState pure_moments(std::span<const Complex> psi, int particles) {
  if (particles < 1) throw std::invalid_argument("pure_moments: at least one particle required");
  const int M = static_cast<int>(psi.size());
  double total = 0.0;
  for (const auto& c : psi) total += std::norm(c);
  if (!(total > 0.0)) throw std::invalid_argument("pure_moments: zero orbital");
  ComplexVector phi(psi.begin(), psi.end());
  for (auto& c : phi) c /= std::sqrt(total);

  const double N = particles;
  MomentState ms(M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) ms.sigma(i, j) = N * std::conj(phi[i]) * phi[j];
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k)
        for (int l = 0; l < M; ++l) {
          Complex value = N * (N - 1.0) * std::conj(phi[i]) * phi[j] * std::conj(phi[k]) * phi[l];
          if (j == k) value += N * std::conj(phi[i]) * phi[l];
          ms.delta(i, j, k, l) = value;
        }
  return ms;
}

void bbr_rhs(std::span<const Complex> state, int M, const LatticeParams& params,
             std::span<Complex> derivative) {
  params.validate(M);
  if (state.size() != MomentState::flat_size(M) || derivative.size() != state.size())
    throw std::invalid_argument("bbr_rhs: moment vector has the wrong size");
  const ClosureMoments ms(state, M);
  const auto& mu = params.mu;
  std::size_t at = 0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j, ++at)
      derivative[at] = -kI * (zeta1(ms, params, i, j) - (mu[i] - mu[j]) * ms.sigma(i, j));
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k)
        for (int l = 0; l < M; ++l, ++at)
          derivative[at] = -kI * (zeta2(ms, params, i, j, k, l) -
                                  (mu[i] - mu[j] + mu[k] - mu[l]) * ms.delta(i, j, k, l));
}

namespace {

template <typename Visit>
void for_each_conjugate_pair(int M, Visit&& visit) {
  const auto m = static_cast<std::size_t>(M);
  for (int i = 0; i < M; ++i)
    for (int j = i; j < M; ++j) visit(i * m + j, j * m + i);
  const std::size_t base = m * m;
  auto at = [&](int i, int j, int k, int l) {
    return base + ((static_cast<std::size_t>(i) * m + j) * m + k) * m + l;
  };
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k)
        for (int l = 0; l < M; ++l) {
          const std::size_t a = at(i, j, k, l);
          const std::size_t b = at(l, k, j, i);
          if (a <= b) visit(a, b);
        }
}

}  // namespace

void symmetrize(std::span<Complex> state, int M) {
  for_each_conjugate_pair(M, [&](std::size_t a, std::size_t b) {
    const Complex mean = 0.5 * (state[a] + std::conj(state[b]));
    state[a] = mean;
    state[b] = std::conj(mean);
  });
}

double symmetry_defect(std::span<const Complex> state, int M) {
  double worst = 0.0;
  for_each_conjugate_pair(M, [&](std::size_t a, std::size_t b) {
    worst = std::max(worst, std::abs(state[a] - std::conj(state[b])));
  });
  return worst;
}

}  // namespace bhgl
