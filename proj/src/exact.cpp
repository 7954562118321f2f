#include "bhgl/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bhgl {

namespace {

constexpr std::size_t kBlock = 4096;

void check_sizes(std::size_t expected, std::size_t in, std::size_t out) {
  if (in != expected || out != expected)
    throw std::invalid_argument("state vector size does not match the Fock basis");
}

// Index shift for moving one particle from well `from` into well `to`.
template <typename Occ>
inline std::ptrdiff_t move_shift(const FockBasis& basis, const Occ* occ, int to, int from) {
  const int low = to < from ? to : from;
  const int high = to < from ? from : to;
  const int M = basis.wells();
  int remaining = basis.particles();
  for (int k = 0; k < low; ++k) remaining -= occ[k];
  std::ptrdiff_t shift = 0;
  for (int m = low + 1; m <= high; ++m) {
    remaining -= occ[m - 1];
    if (to == low)
      shift -= static_cast<std::ptrdiff_t>(basis.count(remaining - 1, M - m));
    else
      shift += static_cast<std::ptrdiff_t>(basis.count(remaining, M - m));
  }
  return shift;
}

}  // namespace

HubbardKernel::HubbardKernel(FockBasis basis) : basis_(std::move(basis)), wells_(basis_.wells()) {
  if (basis_.particles() > std::numeric_limits<std::uint16_t>::max())
    throw std::invalid_argument("particle number too large for the occupation table");
  occupations_.resize(basis_.size() * static_cast<std::size_t>(wells_));
  FockState state(wells_, 0);
  state[0] = basis_.particles();
  std::size_t s = 0;
  do {
    for (int m = 0; m < wells_; ++m)
      occupations_[s * wells_ + m] = static_cast<std::uint16_t>(state[m]);
    ++s;
  } while (FockBasis::next_state(state));
  sqrt_.resize(static_cast<std::size_t>(basis_.particles()) + 2);
  for (std::size_t k = 0; k < sqrt_.size(); ++k) sqrt_[k] = std::sqrt(static_cast<double>(k));
}

void HubbardKernel::apply_hamiltonian(std::span<const Complex> in, const LatticeParams& params,
                                      std::span<Complex> out, double energy_shift) const {
  params.validate(wells_);
  check_sizes(size(), in.size(), out.size());
  const int M = wells_;
  const int N = basis_.particles();
  const double half_u = 0.5 * params.U;
  const auto D = static_cast<std::ptrdiff_t>(size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < D; ++s) {
    const std::uint16_t* occ = occupations(static_cast<std::size_t>(s));
    double diagonal = -energy_shift;
    for (int m = 0; m < M; ++m) {
      const double n = occ[m];
      diagonal += half_u * n * (n - 1.0) + params.mu[m] * n;
    }
    Complex value = diagonal * in[s];
    int remaining = N;
    for (int m = 0; m + 1 < M; ++m) {
      remaining -= occ[m];
      const int left = occ[m];
      const int right = occ[m + 1];
      Complex hops = 0.0;
      if (left > 0) {
        // a+_m a_{m+1}: the source state has this particle in well m+1.
        const std::ptrdiff_t src = s + static_cast<std::ptrdiff_t>(basis_.count(remaining, M - m - 1));
        hops += (sqrt_[left] * sqrt_[right + 1]) * in[src];
      }
      if (right > 0) {
        // a+_{m+1} a_m: the source state has this particle in well m.
        const std::ptrdiff_t src =
            s - static_cast<std::ptrdiff_t>(basis_.count(remaining - 1, M - m - 1));
        hops += (sqrt_[right] * sqrt_[left + 1]) * in[src];
      }
      value -= params.J[m] * hops;
    }
    out[s] = value;
  }
}

void HubbardKernel::apply_pair(std::span<const Complex> in, int dest, int src,
                               std::span<Complex> out) const {
  check_sizes(size(), in.size(), out.size());
  if (dest < 0 || src < 0 || dest >= wells_ || src >= wells_)
    throw std::out_of_range("operator index outside the lattice");
  const auto D = static_cast<std::ptrdiff_t>(size());
  if (dest == src) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < D; ++s)
      out[s] = static_cast<double>(occupations(static_cast<std::size_t>(s))[dest]) * in[s];
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < D; ++s) {
    const std::uint16_t* occ = occupations(static_cast<std::size_t>(s));
    const int n_dest = occ[dest];
    if (n_dest == 0) {
      out[s] = 0.0;
      continue;
    }
    // Undo the hop: the source state has this particle back in `src`.
    const std::ptrdiff_t from = s + move_shift(basis_, occ, src, dest);
    out[s] = (sqrt_[n_dest] * sqrt_[occ[src] + 1]) * in[from];
  }
}

namespace reference {

void apply_hamiltonian(const FockBasis& basis, std::span<const Complex> in,
                       const LatticeParams& params, std::span<Complex> out) {
  const int M = basis.wells();
  params.validate(M);
  check_sizes(basis.size(), in.size(), out.size());
  for (auto& v : out) v = 0.0;
  FockState state(M, 0);
  state[0] = basis.particles();
  std::size_t s = 0;
  do {
    double diagonal = 0.0;
    for (int m = 0; m < M; ++m)
      diagonal += 0.5 * params.U * state[m] * (state[m] - 1) + params.mu[m] * state[m];
    out[s] += diagonal * in[s];
    for (int m = 0; m + 1 < M; ++m) {
      for (const auto& [dest, src] : {std::pair{m, m + 1}, std::pair{m + 1, m}}) {
        if (state[src] == 0) continue;
        const auto [target, amplitude] = apply_hop(state, dest, src);
        const auto t = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(s) +
                                                basis.hop_shift(state, dest, src));
        out[t] -= params.J[m] * amplitude * in[s];
      }
    }
    ++s;
  } while (FockBasis::next_state(state));
}

void apply_pair(const FockBasis& basis, std::span<const Complex> in, int dest, int src,
                std::span<Complex> out) {
  check_sizes(basis.size(), in.size(), out.size());
  for (auto& v : out) v = 0.0;
  FockState state(basis.wells(), 0);
  state[0] = basis.particles();
  std::size_t s = 0;
  do {
    if (state[src] > 0 || dest == src) {
      const auto [target, amplitude] = apply_hop(state, dest, src);
      const auto t = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(s) +
                                              basis.hop_shift(state, dest, src));
      out[t] += amplitude * in[s];
    }
    ++s;
  } while (FockBasis::next_state(state));
}

}  // namespace reference

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  const std::size_t blocks = (a.size() + kBlock - 1) / kBlock;
  std::vector<Complex> partial(blocks);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < nb; ++blk) {
    const std::size_t begin = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t end = std::min(a.size(), begin + kBlock);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t s = begin; s < end; ++s) {
      const double ar = a[s].real(), ai = a[s].imag();
      const double br = b[s].real(), bi = b[s].imag();
      re += ar * br + ai * bi;
      im += ar * bi - ai * br;
    }
    partial[blk] = {re, im};
  }
  Complex total = 0.0;
  for (const auto& p : partial) total += p;
  return total;
}

double norm_squared(std::span<const Complex> a) { return inner(a, a).real(); }

SmallMatrix spdm(const HubbardKernel& kernel, std::span<const Complex> state) {
  const int M = kernel.wells();
  SmallMatrix sigma(M);
  ComplexVector work(kernel.size());
  for (int i = 0; i < M; ++i) {
    for (int j = i; j < M; ++j) {
      kernel.apply_pair(state, i, j, work);
      sigma(i, j) = inner(state, work);
      if (i == j)
        sigma(i, i) = sigma(i, i).real();
      else
        sigma(j, i) = std::conj(sigma(i, j));
    }
  }
  return sigma;
}

Complex tpdm_entry(const HubbardKernel& kernel, std::span<const Complex> state, int i, int j,
                   int k, int l) {
  ComplexVector left(kernel.size());
  ComplexVector right(kernel.size());
  kernel.apply_pair(state, j, i, left);
  kernel.apply_pair(state, k, l, right);
  return inner(left, right);
}

Complex triple_entry(const HubbardKernel& kernel, std::span<const Complex> state, int i, int j,
                     int k, int l, int m, int n) {
  ComplexVector left(kernel.size());
  ComplexVector inner_pair(kernel.size());
  ComplexVector right(kernel.size());
  kernel.apply_pair(state, j, i, left);
  kernel.apply_pair(state, m, n, inner_pair);
  kernel.apply_pair(inner_pair, k, l, right);
  return inner(left, right);
}

ComplexVector pure_state(const FockBasis& basis, std::span<const Complex> psi) {
  const int M = basis.wells();
  if (static_cast<int>(psi.size()) != M)
    throw std::invalid_argument("pure_state: orbital has wrong number of wells");
  double total = 0.0;
  for (const auto& c : psi) total += std::norm(c);
  if (!(total > 0.0)) throw std::invalid_argument("pure_state: zero orbital");

  std::vector<double> log_mod(M);
  std::vector<double> phase(M);
  std::vector<bool> empty(M);
  for (int m = 0; m < M; ++m) {
    const double mod = std::abs(psi[m]) / std::sqrt(total);
    empty[m] = mod == 0.0;
    log_mod[m] = empty[m] ? 0.0 : std::log(mod);
    phase[m] = std::arg(psi[m]);
  }

  const int N = basis.particles();
  const double log_prefactor = 0.5 * std::lgamma(N + 1.0);
  ComplexVector coefficients(basis.size());
  FockState state(M, 0);
  state[0] = N;
  std::size_t s = 0;
  do {
    double log_amplitude = log_prefactor;
    double angle = 0.0;
    bool zero = false;
    for (int m = 0; m < M; ++m) {
      const int n = state[m];
      if (n == 0) continue;
      if (empty[m]) {
        zero = true;
        break;
      }
      log_amplitude += n * log_mod[m] - 0.5 * std::lgamma(n + 1.0);
      angle += n * phase[m];
    }
    coefficients[s] = zero ? Complex{0.0} : std::polar(std::exp(log_amplitude), angle);
    ++s;
  } while (FockBasis::next_state(state));

  const double norm = std::sqrt(norm_squared(coefficients));
  for (auto& c : coefficients) c /= norm;
  return coefficients;
}

}  // namespace bhgl
