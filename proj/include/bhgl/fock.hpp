#ifndef BHGL_FOCK_HPP
#define BHGL_FOCK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bhgl {

// Wide enough for binomial(N+M-1, N) with N <= 2000, M <= 8 (about 2.6e19).
using WideCount = unsigned __int128;

std::string to_string(WideCount value);

// Number of Fock states for N bosons in M wells, binomial(N+M-1, N).
WideCount dimension(int particles, int wells);

// Occupation numbers, one entry per well (0-based wells).
using FockState = std::vector<int>;

// Lexicographically ordered Fock basis. Index 0 is |N,0,...,0>, the order
// descends in n_1, then recursively in n_2, ... . All well indices are
// 0-based in this interface.
class FockBasis {
 public:
  FockBasis(int particles, int wells);

  int particles() const { return particles_; }
  int wells() const { return wells_; }
  std::size_t size() const { return size_; }

  // D(n, m) = binomial(n+m-1, n) from the precomputed table; zero for n < 0
  // or m < 1.
  std::uint64_t count(int n, int m) const {
    if (n < 0 || m < 1) return 0;
    return table_[static_cast<std::size_t>(n) * (wells_ + 1) + m];
  }

  std::size_t lex_index(std::span<const int> occupations) const;
  FockState state_at(std::size_t index) const;

  // Index shift s such that lex_index(a+_dest a_src |n>) = lex_index(|n>) + s.
  std::ptrdiff_t hop_shift(std::span<const int> occupations, int dest, int src) const;

  // Successor in the basis order; returns false after the last state.
  static bool next_state(std::span<int> occupations);

 private:
  void check_state(std::span<const int> occupations) const;

  int particles_;
  int wells_;
  std::size_t size_;
  std::vector<std::uint64_t> table_;
};

// a+_dest a_src |n> = amplitude |n'>; amplitude is sqrt((n_dest+1) n_src).
std::pair<FockState, double> apply_hop(const FockState& state, int dest, int src);

}  // namespace bhgl

#endif  // BHGL_FOCK_HPP
