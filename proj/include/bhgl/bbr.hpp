#ifndef BHGL_BBR_HPP
#define BHGL_BBR_HPP

#include <span>

#include "bhgl/moments.hpp"
#include "bhgl/types.hpp"

namespace bhgl {

// Second-order moment state: the SPDM sigma (trace N) followed by the full
// TPDM tensor delta_ijkl = <a+_i a_j a+_k a_l>, stored contiguously so the
// integrator can treat it as one flat vector.
class MomentState {
 public:
  MomentState() = default;
  explicit MomentState(int wells);

  int wells() const { return wells_; }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Complex& sigma(int i, int j) { return data_[sigma_at(i, j)]; }
  Complex sigma(int i, int j) const { return data_[sigma_at(i, j)]; }
  Complex& delta(int i, int j, int k, int l) { return data_[delta_at(i, j, k, l)]; }
  Complex delta(int i, int j, int k, int l) const { return data_[delta_at(i, j, k, l)]; }

  static std::size_t flat_size(int wells) {
    const auto m2 = static_cast<std::size_t>(wells) * wells;
    return m2 + m2 * m2;
  }

 private:
  std::size_t sigma_at(int i, int j) const { return static_cast<std::size_t>(i) * wells_ + j; }
  std::size_t delta_at(int i, int j, int k, int l) const {
    const auto M = static_cast<std::size_t>(wells_);
    return M * M + ((static_cast<std::size_t>(i) * M + j) * M + k) * M + l;
  }

  int wells_ = 0;
  ComplexVector data_;
};

// Triple moment from the second-order closure,
// chi_ijklmn ~ s_ij D_klmn + s_mn D_ijkl + s_kl D_ijmn - 2 s_ij s_kl s_mn.
Complex triple_factorize(const MomentSource& moments, int i, int j, int k, int l, int m, int n);

// MomentSource over a flat (sigma, delta) vector with the closure supplying
// the third order.
class ClosureMoments final : public MomentSource {
 public:
  ClosureMoments(std::span<const Complex> data, int wells) : data_(data), wells_(wells) {}

  int wells() const override { return wells_; }
  Complex sigma(int i, int j) const override {
    return data_[static_cast<std::size_t>(i) * wells_ + j];
  }
  Complex delta(int i, int j, int k, int l) const override {
    const auto M = static_cast<std::size_t>(wells_);
    return data_[M * M + ((static_cast<std::size_t>(i) * M + j) * M + k) * M + l];
  }
  Complex triple(int i, int j, int k, int l, int m, int n) const override {
    return triple_factorize(*this, i, j, k, l, m, n);
  }

 private:
  std::span<const Complex> data_;
  int wells_;
};

// Moments of the N-particle condensate in orbital psi (normalized to unit
// population internally): sigma_ij = N conj(psi_i) psi_j,
// delta_ijkl = N(N-1) conj(psi_i) psi_j conj(psi_k) psi_l + N conj(psi_i) d_jk psi_l.
MomentState pure_moments(std::span<const Complex> psi, int particles);

// Time derivative of the closed second-order hierarchy. `derivative` must
// have MomentState::flat_size(wells) entries.
void bbr_rhs(std::span<const Complex> state, int wells, const LatticeParams& params,
             std::span<Complex> derivative);

// Enforces sigma = sigma^dagger and conj(delta_ijkl) = delta_lkji by
// averaging each conjugate pair.
void symmetrize(std::span<Complex> state, int wells);

// Largest violation of the two conjugation symmetries above.
double symmetry_defect(std::span<const Complex> state, int wells);

}  // namespace bhgl

#endif  // BHGL_BBR_HPP
