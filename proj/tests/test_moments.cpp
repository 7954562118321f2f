#include <doctest.h>

#include <random>

#include "bhgl/exact.hpp"
#include "bhgl/meanfield.hpp"
#include "bhgl/moments.hpp"
#include "oracles.hpp"

using namespace bhgl;

namespace {

// <[A, H]> for A = a+_i a_j a+_k a_l ... from dense matrices.
Complex commutator(const oracle::DenseSpace& space, const oracle::DenseVector& psi,
                   const LatticeParams& p, const std::vector<int>& idx) {
  oracle::DenseMatrix A = oracle::DenseMatrix::Identity(space.size(), space.size());
  for (std::size_t q = 0; q < idx.size(); q += 2) A = A * space.pair(idx[q], idx[q + 1]);
  const oracle::DenseMatrix H = space.hamiltonian(p);
  return psi.dot((A * H - H * A) * psi);
}

}  // namespace

TEST_CASE("exact moments match the dense oracle and are cached consistently") {
  std::mt19937 rng(17);
  const HubbardKernel k{FockBasis(3, 4)};
  const oracle::DenseSpace space(3, 4);
  const auto psi = oracle::random_state(rng, k.size());
  const auto dpsi = oracle::to_dense(psi);
  ExactMoments ms(k);
  ms.bind(psi);
  for (int rep = 0; rep < 2; ++rep) {
    CHECK(std::abs(ms.sigma(1, 2) - oracle::expectation(space, dpsi, {1, 2})) < 1e-12);
    CHECK(std::abs(ms.delta(0, 1, 2, 3) - oracle::expectation(space, dpsi, {0, 1, 2, 3})) < 1e-12);
    CHECK(std::abs(ms.triple(0, 1, 1, 2, 3, 0) -
                   oracle::expectation(space, dpsi, {0, 1, 1, 2, 3, 0})) < 1e-12);
  }
  // Rebinding drops the cache.
  const auto other = oracle::random_state(rng, k.size());
  ms.bind(other);
  CHECK(std::abs(ms.sigma(1, 2) - oracle::expectation(space, oracle::to_dense(other), {1, 2})) <
        1e-12);
  CHECK_THROWS_AS(ms.bind(ComplexVector(3)), std::invalid_argument);
}

TEST_CASE("hierarchy source terms equal the Heisenberg commutators") {
  std::mt19937 rng(23);
  for (int M : {2, 3, 4}) {
    const int N = M == 4 ? 3 : 4;
    const HubbardKernel k{FockBasis(N, M)};
    const oracle::DenseSpace space(N, M);
    const auto psi = oracle::random_state(rng, k.size());
    const auto dpsi = oracle::to_dense(psi);
    const auto p = oracle::random_params(rng, M);
    ExactMoments ms(k);
    ms.bind(psi);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        // i d sigma/dt = <[A, H]> = zeta1 - (mu_i - mu_j) sigma.
        const Complex want = commutator(space, dpsi, p, {i, j});
        const Complex got = zeta1(ms, p, i, j) - (p.mu[i] - p.mu[j]) * ms.sigma(i, j);
        CHECK(std::abs(got - want) < 1e-11);
      }
    std::uniform_int_distribution<int> w(0, M - 1);
    for (int trial = 0; trial < 25; ++trial) {
      const int i = w(rng), j = w(rng), kk = w(rng), l = w(rng);
      const Complex want = commutator(space, dpsi, p, {i, j, kk, l});
      const Complex got = zeta2(ms, p, i, j, kk, l) -
                          (p.mu[i] - p.mu[j] + p.mu[kk] - p.mu[l]) * ms.delta(i, j, kk, l);
      CHECK(std::abs(got - want) < 1e-10);
      // Conjugation: zeta2_lkji = -conj(zeta2_ijkl).
      CHECK(std::abs(zeta2(ms, p, l, kk, j, i) + std::conj(zeta2(ms, p, i, j, kk, l))) < 1e-10);
    }
  }
}

TEST_CASE("single-particle two-well hierarchy is the two-level algebra") {
  const HubbardKernel k{FockBasis(1, 2)};
  const ComplexVector psi{Complex(0.6, 0.0), Complex(0.0, 0.8)};
  ExactMoments ms(k);
  ms.bind(psi);
  LatticeParams p{{0.9}, 5.0, {0.0, 0.0}};
  // H = -J sx: <[a+_0 a_1, H]> = J (n1 - n0); the interaction drops out for one particle.
  CHECK(std::abs(zeta1(ms, p, 0, 1) - 0.9 * (0.64 - 0.36)) < 1e-14);
}

TEST_CASE("source terms vanish without hopping and interaction") {
  std::mt19937 rng(1);
  const HubbardKernel k{FockBasis(4, 3)};
  const auto psi = oracle::random_state(rng, k.size());
  ExactMoments ms(k);
  ms.bind(psi);
  LatticeParams p{{0.0, 0.0}, 0.0, {0.3, -1.0, 2.0}};
  CHECK(std::abs(zeta1(ms, p, 0, 2)) == 0.0);
  CHECK(std::abs(zeta2(ms, p, 0, 1, 2, 1)) == 0.0);
}

TEST_CASE("mean-field moments reproduce the GPE density-matrix flow") {
  std::mt19937 rng(4);
  const auto psi = oracle::random_state(rng, 4);
  MeanFieldMoments ms(psi);
  for (int q = 0; q < 5; ++q) {
    const auto p = oracle::random_params(rng, 4);
    const auto d = gpe_rhs(psi, p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Complex dsigma = std::conj(d[i]) * psi[j] + std::conj(psi[i]) * d[j];
        CHECK(std::abs(kI * dsigma - (zeta1(ms, p, i, j) - (p.mu[i] - p.mu[j]) * ms.sigma(i, j))) <
              1e-12);
      }
  }
  CHECK(std::abs(ms.delta(0, 1, 2, 3) - ms.sigma(0, 1) * ms.sigma(2, 3)) < 1e-15);
}
