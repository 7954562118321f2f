#include "bhgl/moments.hpp"

#include <algorithm>
#include <stdexcept>

namespace bhgl {

Complex zeta1(const MomentSource& ms, const LatticeParams& p, int i, int j) {
  const int M = ms.wells();
  Complex z = 0.0;
  for (int a : {i - 1, i + 1})
    if (a >= 0 && a < M) z += p.hop(a, i) * ms.sigma(a, j);
  for (int b : {j - 1, j + 1})
    if (b >= 0 && b < M) z -= p.hop(j, b) * ms.sigma(i, b);
  if (p.U != 0.0 && i != j) z -= p.U * (ms.delta(i, i, i, j) - ms.delta(i, j, j, j));
  return z;
}

Complex zeta2(const MomentSource& ms, const LatticeParams& p, int i, int j, int k, int l) {
  const int M = ms.wells();
  Complex z = 0.0;
  for (int a : {i - 1, i + 1})
    if (a >= 0 && a < M) z += p.hop(a, i) * ms.delta(a, j, k, l);
  for (int b : {j - 1, j + 1})
    if (b >= 0 && b < M) z -= p.hop(j, b) * ms.delta(i, b, k, l);
  for (int c : {k - 1, k + 1})
    if (c >= 0 && c < M) z += p.hop(c, k) * ms.delta(i, j, c, l);
  for (int d : {l - 1, l + 1})
    if (d >= 0 && d < M) z -= p.hop(l, d) * ms.delta(i, j, k, d);
  if (p.U != 0.0) {
    z -= p.U * (ms.triple(i, i, i, j, k, l) - ms.triple(i, j, j, j, k, l) +
                ms.triple(i, j, k, k, k, l) - ms.triple(i, j, k, l, l, l));
  }
  return z;
}

MeanFieldMoments::MeanFieldMoments(std::span<const Complex> psi) : psi_(psi.begin(), psi.end()) {}

ExactMoments::ExactMoments(const HubbardKernel& kernel)
    : kernel_(&kernel),
      pairs_(static_cast<std::size_t>(kernel.wells()) * kernel.wells()),
      have_pair_(pairs_.size(), false) {
  if (kernel.wells() > 8) throw std::invalid_argument("ExactMoments supports at most 8 wells");
}

void ExactMoments::bind(std::span<const Complex> state) {
  if (state.size() != kernel_->size())
    throw std::invalid_argument("ExactMoments: state does not match the basis");
  state_ = state;
  std::fill(have_pair_.begin(), have_pair_.end(), false);
  cache_.clear();
}

std::uint32_t ExactMoments::key(std::initializer_list<int> indices) const {
  // Base-8 digits plus the tuple length, so tuples of different order never collide.
  std::uint32_t k = static_cast<std::uint32_t>(indices.size());
  for (int v : indices) k = k * 8u + static_cast<std::uint32_t>(v);
  return k;
}

std::span<const Complex> ExactMoments::pair(int dest, int src) const {
  const std::size_t slot = static_cast<std::size_t>(dest) * kernel_->wells() + src;
  if (!have_pair_[slot]) {
    pairs_[slot].resize(kernel_->size());
    kernel_->apply_pair(state_, dest, src, pairs_[slot]);
    have_pair_[slot] = true;
  }
  return pairs_[slot];
}

Complex ExactMoments::sigma(int i, int j) const {
  const auto k = key({i, j});
  if (auto it = cache_.find(k); it != cache_.end()) return it->second;
  const Complex value = inner(state_, pair(i, j));
  cache_.emplace(k, value);
  return value;
}

Complex ExactMoments::delta(int i, int j, int k, int l) const {
  const auto h = key({i, j, k, l});
  if (auto it = cache_.find(h); it != cache_.end()) return it->second;
  const Complex value = inner(pair(j, i), pair(k, l));
  cache_.emplace(h, value);
  return value;
}

Complex ExactMoments::triple(int i, int j, int k, int l, int m, int n) const {
  const auto h = key({i, j, k, l, m, n});
  if (auto it = cache_.find(h); it != cache_.end()) return it->second;
  scratch_.resize(kernel_->size());
  kernel_->apply_pair(pair(m, n), k, l, scratch_);
  const Complex value = inner(pair(j, i), scratch_);
  cache_.emplace(h, value);
  return value;
}

}  // namespace bhgl
