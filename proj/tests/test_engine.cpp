#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "trispin/engine.hpp"
#include "trispin/error.hpp"
#include "trispin/models.hpp"

using namespace trispin;

namespace {

void expect_lowest_match(const OperatorSum& h, int k, double tol, const SolverOptions& base = {}) {
  SolverOptions o = base;
  o.k = k;
  const SpectrumResult r = ground_states(h, o);
  const Eigen::VectorXd ref = oracle::eigenvalues(oracle::kron_sum(h));
  ASSERT_GE(static_cast<int>(r.eigenvalues.size()), k);
  for (int i = 0; i < k; ++i) EXPECT_NEAR(r.eigenvalues[i], ref(i), tol) << "level " << i;
  for (int i = 0; i < k; ++i) EXPECT_LT(r.residual_norms[i], 1e-8);
}

}  // namespace

TEST(DenseMatrix, MatchesKronecker) {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 6; ++n) {
    const OperatorSum h = oracle::random_hermitian(n, 15, rng);
    EXPECT_LT((dense_matrix(h) - oracle::kron_sum(h)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DenseOracle, SortedSpectrum) {
  std::mt19937_64 rng(22);
  const OperatorSum h = oracle::random_hermitian(5, 20, rng);
  const SpectrumResult r = dense_oracle(h);
  ASSERT_EQ(r.eigenvalues.size(), 32u);
  EXPECT_TRUE(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
}

TEST(Lanczos, RandomComplexHamiltonians) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 4 + trial % 7;
    expect_lowest_match(oracle::random_hermitian(n, 3 * n, rng), 3, 1e-9);
  }
}

TEST(Lanczos, RandomRealHamiltonians) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 4 + trial % 7;
    const OperatorSum h = oracle::random_hermitian(n, 3 * n, rng, true);
    ASSERT_TRUE(h.is_real_in_basis());
    expect_lowest_match(h, 3, 1e-9);
  }
}

TEST(Lanczos, RealAndComplexPathsAgree) {
  std::mt19937_64 rng(25);
  const OperatorSum h = oracle::random_hermitian(9, 30, rng, true);
  SolverOptions fast, slow;
  fast.k = slow.k = 3;
  slow.allow_real = false;
  const auto a = ground_states(h, fast), b = ground_states(h, slow);
  EXPECT_TRUE(a.real_arithmetic);
  EXPECT_FALSE(b.real_arithmetic);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a.eigenvalues[i], b.eigenvalues[i], 1e-10);
}

TEST(Lanczos, ResolvesFourfoldGround) {
  const OperatorSum h = build_zzz_field_chain(chain(9, true), 0.0, 0.0);
  SolverOptions o;
  o.k = 5;
  const SpectrumResult r = ground_states(h, o);
  EXPECT_EQ(r.ground_degeneracy, 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.eigenvalues[i], -9.0, 1e-10);
  EXPECT_NEAR(r.eigenvalues[4], -5.0, 1e-9);
}

TEST(Lanczos, SmallBlockStillFindsDegenerateStates) {
  const OperatorSum h = build_zzz_field_chain(chain(9, true), 0.0, 0.0);
  SolverOptions o;
  o.k = 4;
  o.block_size = 1;
  const SpectrumResult r = ground_states(h, o);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.eigenvalues[i], -9.0, 1e-9);
}

TEST(Lanczos, DeterministicUnderFixedSeed) {
  const OperatorSum h = build_zzz_field_chain(chain(12, false), 1.0, 0.0);
  SolverOptions o;
  o.k = 2;
  o.seed = 99;
  const auto a = ground_states(h, o), b = ground_states(h, o);
  ASSERT_EQ(a.eigenvalues.size(), b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) EXPECT_EQ(a.eigenvalues[i], b.eigenvalues[i]);
  for (std::size_t i = 0; i < a.eigenvectors[0].dim(); ++i) {
    EXPECT_EQ(a.eigenvectors[0][i], b.eigenvectors[0][i]);
  }
}

TEST(Lanczos, EigenvectorsAreOrthonormal) {
  std::mt19937_64 rng(26);
  const OperatorSum h = oracle::random_hermitian(8, 25, rng);
  SolverOptions o;
  o.k = 4;
  const SpectrumResult r = ground_states(h, o);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(std::abs(inner(r.eigenvectors[i], r.eigenvectors[j])), i == j ? 1.0 : 0.0, 1e-9);
}

TEST(Lanczos, ExhaustedIterationsThrow) {
  const OperatorSum h = build_zzz_field_chain(chain(14, false), 1.0, 0.0);
  SolverOptions o;
  o.max_iter = 2;
  o.tol = 1e-14;
  EXPECT_THROW(ground_states(h, o), ConvergenceError);
}

TEST(Lanczos, RejectsBadInput) {
  OperatorSum h(3);
  h += PauliString::single(3, 0, Pauli::Z, Complex(0, 1));
  EXPECT_THROW(ground_states(h), InvalidArgument);
  SolverOptions o;
  o.k = 0;
  EXPECT_THROW(ground_states(build_zzz_field_chain(chain(5, false), 1, 0), o), InvalidArgument);
}

TEST(Lanczos, TinySpaceFallsBackCleanly) {
  OperatorSum h(2);
  h += PauliString::single(2, 0, Pauli::X, 1.0);
  h += PauliString::single(2, 1, Pauli::Z, 0.5);
  expect_lowest_match(h, 3, 1e-12);
}

TEST(DegeneracyTolerance, ScalesWithNorm) {
  OperatorSum h(2);
  h += PauliString::single(2, 0, Pauli::Z, 1e6);
  EXPECT_DOUBLE_EQ(degeneracy_tolerance(h), 1e-6);
  OperatorSum small(2);
  small += PauliString::single(2, 0, Pauli::Z, 1.0);
  EXPECT_DOUBLE_EQ(degeneracy_tolerance(small), 1e-9);
}
