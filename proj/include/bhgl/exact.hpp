#ifndef BHGL_EXACT_HPP
#define BHGL_EXACT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "bhgl/fock.hpp"
#include "bhgl/types.hpp"

namespace bhgl {

// Matrix-free Bose-Hubbard operators on a fixed-N Fock basis.
//
// Every kernel is written in gather form: output element s is computed from
// the occupations of state s and the amplitudes of the states that hop into
// it, so the loop over s runs in parallel without write conflicts. Source
// indices come from the lexicographic index shift; no state lookup table is
// ever built.
class HubbardKernel {
 public:
  explicit HubbardKernel(FockBasis basis);

  const FockBasis& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }
  int wells() const { return wells_; }
  int particles() const { return basis_.particles(); }

  const std::uint16_t* occupations(std::size_t s) const {
    return occupations_.data() + s * static_cast<std::size_t>(wells_);
  }

  // out = (H - energy_shift) in, with H the Bose-Hubbard Hamiltonian for params.
  void apply_hamiltonian(std::span<const Complex> in, const LatticeParams& params,
                         std::span<Complex> out, double energy_shift = 0.0) const;

  // out = a+_dest a_src in (a number operator when dest == src).
  void apply_pair(std::span<const Complex> in, int dest, int src, std::span<Complex> out) const;

 private:
  FockBasis basis_;
  int wells_;
  std::vector<std::uint16_t> occupations_;
  std::vector<double> sqrt_;
};

// Serial scatter-form kernels built directly on FockBasis::hop_shift and
// apply_hop. Kept as the reference the parallel kernels are tested and
// benchmarked against.
namespace reference {
void apply_hamiltonian(const FockBasis& basis, std::span<const Complex> in,
                       const LatticeParams& params, std::span<Complex> out);
void apply_pair(const FockBasis& basis, std::span<const Complex> in, int dest, int src,
                std::span<Complex> out);
}  // namespace reference

// sum_s conj(a_s) b_s, accumulated in fixed blocks so the result does not
// depend on the thread count.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm_squared(std::span<const Complex> a);

// sigma_ij = <a+_i a_j>.
SmallMatrix spdm(const HubbardKernel& kernel, std::span<const Complex> state);

// <a+_i a_j a+_k a_l>, not normal ordered.
Complex tpdm_entry(const HubbardKernel& kernel, std::span<const Complex> state, int i, int j,
                   int k, int l);

// <a+_i a_j a+_k a_l a+_m a_n>.
Complex triple_entry(const HubbardKernel& kernel, std::span<const Complex> state, int i, int j,
                     int k, int l, int m, int n);

// Coefficients sqrt(N!) prod_m psi_m^{n_m} / sqrt(n_m!) of the N-particle
// state with every boson in the single-particle orbital psi. psi is
// normalized to unit total population first; the coefficients are built from
// log-factorials so large N does not overflow.
ComplexVector pure_state(const FockBasis& basis, std::span<const Complex> psi);

}  // namespace bhgl

#endif  // BHGL_EXACT_HPP
