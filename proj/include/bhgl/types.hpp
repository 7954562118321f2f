#ifndef BHGL_TYPES_HPP
#define BHGL_TYPES_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhgl {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr Complex kI{0.0, 1.0};

// Instantaneous Bose-Hubbard lattice parameters for an open chain of M wells.
// J[m] couples wells m and m+1; U is the on-site interaction (g_eff for the
// mean-field back-ends); mu[m] is the on-site energy of well m.
struct LatticeParams {
  std::vector<double> J;
  double U = 0.0;
  std::vector<double> mu;

  int wells() const { return static_cast<int>(mu.size()); }

  // Tunneling between two wells, zero unless they are nearest neighbors.
  double hop(int a, int b) const {
    if (a > b) std::swap(a, b);
    if (a < 0 || b != a + 1 || a >= static_cast<int>(J.size())) return 0.0;
    return J[a];
  }

  void validate(int M) const {
    if (static_cast<int>(mu.size()) != M || static_cast<int>(J.size()) != M - 1)
      throw std::invalid_argument("lattice parameters sized for " +
                                  std::to_string(mu.size()) + " wells, expected " +
                                  std::to_string(M));
  }
};

// Dense M x M complex matrix, row-major. Only used for single-particle
// density matrices, so M is tiny.
class SmallMatrix {
 public:
  SmallMatrix() = default;
  explicit SmallMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

  int size() const { return n_; }
  Complex& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const Complex& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }

  Complex trace() const {
    Complex t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

 private:
  int n_ = 0;
  std::vector<Complex> data_;
};

}  // namespace bhgl

#endif  // BHGL_TYPES_HPP
