#include "bhgl/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bhgl {

std::string to_string(WideCount value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

WideCount dimension(int particles, int wells) {
  if (wells < 1) throw std::invalid_argument("dimension: at least one well required");
  if (particles < 0) throw std::invalid_argument("dimension: negative particle number");
  // binomial(N+M-1, M-1) accumulated exactly: after step k the value is
  // binomial(N+k, k), so every division is exact.
  WideCount result = 1;
  for (int k = 1; k < wells; ++k) {
    result = result * static_cast<WideCount>(particles + k) / static_cast<WideCount>(k);
  }
  return result;
}

FockBasis::FockBasis(int particles, int wells) : particles_(particles), wells_(wells) {
  const WideCount d = dimension(particles, wells);
  if (d > static_cast<WideCount>(std::numeric_limits<std::uint64_t>::max()))
    throw std::overflow_error("Fock basis dimension " + to_string(d) + " not addressable");
  size_ = static_cast<std::size_t>(d);

  // Pascal table: D(n, m) = D(n, m-1) + D(n-1, m), D(0, m) = 1, D(n, 1) = 1.
  const int rows = particles_ + 2;
  const int cols = wells_ + 1;
  table_.assign(static_cast<std::size_t>(rows) * cols, 0);
  for (int n = 0; n < rows; ++n) {
    for (int m = 1; m < cols; ++m) {
      std::uint64_t value = 1;
      if (n > 0 && m > 1)
        value = table_[static_cast<std::size_t>(n) * cols + m - 1] +
                table_[static_cast<std::size_t>(n - 1) * cols + m];
      table_[static_cast<std::size_t>(n) * cols + m] = value;
    }
  }
}

void FockBasis::check_state(std::span<const int> occupations) const {
  if (static_cast<int>(occupations.size()) != wells_)
    throw std::invalid_argument("Fock state has wrong number of wells");
  int total = 0;
  for (int n : occupations) {
    if (n < 0) throw std::invalid_argument("negative occupation");
    total += n;
  }
  if (total != particles_)
    throw std::invalid_argument("occupations sum to " + std::to_string(total) +
                                ", basis holds " + std::to_string(particles_));
}

std::size_t FockBasis::lex_index(std::span<const int> occupations) const {
  check_state(occupations);
  // nu = sum_{m=1}^{M-1} sum_{k=0}^{N_m-1} D(k, M-m) = sum_m D(N_m - 1, M-m+1),
  // where N_m counts the particles beyond the first m wells.
  std::size_t index = 0;
  int remaining = particles_;
  for (int m = 1; m < wells_; ++m) {
    remaining -= occupations[m - 1];
    index += count(remaining - 1, wells_ - m + 1);
  }
  return index;
}

FockState FockBasis::state_at(std::size_t index) const {
  if (index >= size_)
    throw std::out_of_range("Fock index " + std::to_string(index) + " outside basis of size " +
                            std::to_string(size_));
  FockState state(wells_, 0);
  int remaining = particles_;
  for (int m = 1; m < wells_; ++m) {
    // Block with remaining' particles beyond well m starts at D(remaining'-1, M-m+1);
    // pick the largest remaining' whose block start does not exceed the index.
    int beyond = 0;
    while (beyond < remaining && count(beyond, wells_ - m + 1) <= index) ++beyond;
    index -= count(beyond - 1, wells_ - m + 1);
    state[m - 1] = remaining - beyond;
    remaining = beyond;
  }
  state[wells_ - 1] = remaining;
  return state;
}

std::ptrdiff_t FockBasis::hop_shift(std::span<const int> occupations, int dest, int src) const {
  if (dest == src) return 0;
  if (dest < 0 || src < 0 || dest >= wells_ || src >= wells_)
    throw std::out_of_range("hop between wells outside the lattice");
  if (occupations[src] < 1) throw std::invalid_argument("hop from empty well");
  const int low = std::min(dest, src);
  const int high = std::max(dest, src);
  int remaining = particles_;
  for (int k = 0; k < low; ++k) remaining -= occupations[k];
  std::ptrdiff_t shift = 0;
  // Only N_m for m in [low+1, high] (1-based) change, each by one particle.
  for (int m = low + 1; m <= high; ++m) {
    remaining -= occupations[m - 1];
    if (dest == low)
      shift -= static_cast<std::ptrdiff_t>(count(remaining - 1, wells_ - m));
    else
      shift += static_cast<std::ptrdiff_t>(count(remaining, wells_ - m));
  }
  return shift;
}

bool FockBasis::next_state(std::span<int> occupations) {
  const int M = static_cast<int>(occupations.size());
  int p = M - 2;
  while (p >= 0 && occupations[p] == 0) --p;
  if (p < 0) return false;
  int tail = 0;
  for (int k = p + 1; k < M; ++k) {
    tail += occupations[k];
    occupations[k] = 0;
  }
  --occupations[p];
  occupations[p + 1] = tail + 1;
  return true;
}

std::pair<FockState, double> apply_hop(const FockState& state, int dest, int src) {
  const int M = static_cast<int>(state.size());
  if (dest < 0 || src < 0 || dest >= M || src >= M)
    throw std::out_of_range("hop between wells outside the lattice");
  FockState target = state;
  if (dest == src) return {target, static_cast<double>(state[src])};
  if (state[src] < 1) throw std::invalid_argument("hop from empty well");
  const double amplitude =
      std::sqrt(static_cast<double>(state[dest] + 1) * static_cast<double>(state[src]));
  --target[src];
  ++target[dest];
  return {target, amplitude};
}

}  // namespace bhgl
