#ifndef BHGL_MOMENTS_HPP
#define BHGL_MOMENTS_HPP

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "bhgl/exact.hpp"
#include "bhgl/types.hpp"

namespace bhgl {

// Read access to the moments of one instantaneous state:
//   sigma(i,j)          = <a+_i a_j>
//   delta(i,j,k,l)      = <a+_i a_j a+_k a_l>
//   triple(i,j,k,l,m,n) = <a+_i a_j a+_k a_l a+_m a_n>
// Each back-end supplies its own, so the hierarchy terms and the controllers
// see self-consistent moments: exact expectation values, the second-order
// closure, or mean-field products.
class MomentSource {
 public:
  virtual ~MomentSource() = default;
  virtual int wells() const = 0;
  virtual Complex sigma(int i, int j) const = 0;
  virtual Complex delta(int i, int j, int k, int l) const = 0;
  virtual Complex triple(int i, int j, int k, int l, int m, int n) const = 0;
};

// Hierarchy source terms: i d sigma_ij/dt = zeta1_ij - (mu_i - mu_j) sigma_ij
// and i d delta_ijkl/dt = zeta2_ijkl - (mu_i - mu_j + mu_k - mu_l) delta_ijkl.
// Hops to wells outside the open chain contribute nothing.
Complex zeta1(const MomentSource& moments, const LatticeParams& params, int i, int j);
Complex zeta2(const MomentSource& moments, const LatticeParams& params, int i, int j, int k,
              int l);

// Condensate moments: sigma_ij = conj(psi_i) psi_j and all higher moments
// factorize into products of sigma.
class MeanFieldMoments final : public MomentSource {
 public:
  explicit MeanFieldMoments(std::span<const Complex> psi);
  int wells() const override { return static_cast<int>(psi_.size()); }
  Complex sigma(int i, int j) const override { return std::conj(psi_[i]) * psi_[j]; }
  Complex delta(int i, int j, int k, int l) const override {
    return sigma(i, j) * sigma(k, l);
  }
  Complex triple(int i, int j, int k, int l, int m, int n) const override {
    return sigma(i, j) * sigma(k, l) * sigma(m, n);
  }

 private:
  ComplexVector psi_;
};

// Exact expectation values of a many-body state, evaluated on demand and
// cached until the next bind(). Only the index tuples that are actually
// requested are ever computed; the pair vectors a+_p a_q |psi> are kept in
// reusable buffers.
class ExactMoments final : public MomentSource {
 public:
  explicit ExactMoments(const HubbardKernel& kernel);

  // Points the source at a new state and drops all cached values. The state
  // must outlive every subsequent query.
  void bind(std::span<const Complex> state);

  int wells() const override { return kernel_->wells(); }
  Complex sigma(int i, int j) const override;
  Complex delta(int i, int j, int k, int l) const override;
  Complex triple(int i, int j, int k, int l, int m, int n) const override;

 private:
  std::span<const Complex> pair(int dest, int src) const;
  std::uint32_t key(std::initializer_list<int> indices) const;

  const HubbardKernel* kernel_;
  std::span<const Complex> state_;
  mutable std::vector<ComplexVector> pairs_;
  mutable std::vector<bool> have_pair_;
  mutable ComplexVector scratch_;
  mutable std::unordered_map<std::uint32_t, Complex> cache_;
};

}  // namespace bhgl

#endif  // BHGL_MOMENTS_HPP
