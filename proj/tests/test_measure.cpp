#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "trispin/engine.hpp"
#include "trispin/error.hpp"
#include "trispin/measure.hpp"
#include "trispin/models.hpp"

using namespace trispin;

namespace {

StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector v(n);
  for (std::size_t i = 0; i < v.dim(); ++i) v[i] = Complex(g(rng), g(rng));
  return v.normalize();
}

// Partial trace by direct summation over the full basis.
Eigen::MatrixXcd brute_reduce(const StateVector& v, const std::vector<int>& sub) {
  const int n = v.n_sites();
  const Eigen::Index d = Eigen::Index{1} << sub.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  auto sub_index = [&](std::size_t x) {
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < sub.size(); ++k) r |= ((x >> sub[k]) & 1u) << k;
    return r;
  };
  std::uint64_t sub_mask = 0;
  for (int s : sub) sub_mask |= 1ull << s;
  for (std::size_t a = 0; a < v.dim(); ++a)
    for (std::size_t b = 0; b < v.dim(); ++b) {
      if ((a & ~sub_mask) != (b & ~sub_mask)) continue;
      rho(sub_index(a), sub_index(b)) += v[a] * std::conj(v[b]);
    }
  (void)n;
  return rho;
}

StateVector product_state(const std::vector<std::pair<double, double>>& angles) {
  const int n = static_cast<int>(angles.size());
  StateVector v(n);
  for (std::size_t i = 0; i < v.dim(); ++i) {
    Complex amp = 1.0;
    for (int s = 0; s < n; ++s) {
      const auto [theta, phi] = angles[s];
      amp *= ((i >> s) & 1u) ? std::polar(std::sin(theta / 2), phi) : Complex(std::cos(theta / 2));
    }
    v[i] = amp;
  }
  return v;
}

}  // namespace

TEST(Reduce, MatchesBruteForce) {
  std::mt19937_64 rng(31);
  const StateVector v = random_state(6, rng);
  for (const std::vector<int>& sub : {std::vector<int>{0}, {2, 4}, {5, 1, 3}, {0, 1, 2, 3, 4}}) {
    const auto rho = reduce(v, sub);
    EXPECT_LT((rho.matrix - brute_reduce(v, sub)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Reduce, DensityMatrixInvariants) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector v = random_state(7, rng);
    const auto rho = reduce(v, {1, 3, 4});
    EXPECT_LT((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(rho.matrix.trace().imag(), 0.0, 1e-12);
    EXPECT_GT(oracle::eigenvalues(rho.matrix).minCoeff(), -1e-12);
  }
}

TEST(Reduce, SchmidtSymmetry) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const StateVector v = random_state(8, rng);
    const double a = entropy(reduce(v, {0, 2, 5}));
    const double b = entropy(reduce(v, {1, 3, 4, 6, 7}));
    EXPECT_NEAR(a, b, 1e-10);
  }
}

TEST(Reduce, RejectsBadSubsystems) {
  const StateVector v(4);
  EXPECT_THROW(reduce(v, {}), InvalidArgument);
  EXPECT_THROW(reduce(v, {0, 0}), InvalidArgument);
  EXPECT_THROW(reduce(v, {4}), InvalidArgument);
}

TEST(Entropy, BoundsOnRandomStates) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector v = random_state(8, rng);
    for (int l = 1; l <= 4; ++l) {
      std::vector<int> sub;
      for (int s = 0; s < l; ++s) sub.push_back(s);
      const double s = entropy(reduce(v, sub));
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, l * std::log(2.0) + 1e-12);
    }
  }
}

TEST(Entropy, ProductStateIsPure) {
  const StateVector v = product_state({{0.3, 0.1}, {1.2, -0.4}, {2.0, 0.9}, {0.5, 2.2}});
  EXPECT_NEAR(entropy(reduce(v, {0, 1})), 0.0, 1e-10);
}

TEST(Entropy, BellPairIsMaximal) {
  StateVector v(2);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(entropy(reduce(v, {0})), std::log(2.0), 1e-14);
}

TEST(Entropy, CurveAndCsv) {
  std::mt19937_64 rng(35);
  const StateVector v = random_state(6, rng);
  const EntropyCurve c = entropy_curve(v, 5);
  ASSERT_EQ(c.points.size(), 5u);
  for (int l = 1; l <= 5; ++l) {
    std::vector<int> sub;
    for (int s = 0; s < l; ++s) sub.push_back(s);
    EXPECT_EQ(c.points[l - 1].L, l);
    EXPECT_NEAR(c.points[l - 1].S, entropy(reduce(v, sub)), 1e-14);
  }
  EXPECT_THROW(entropy_curve(v, 6), InvalidArgument);
  EXPECT_THROW(entropy_curve(v, 0), InvalidArgument);
  std::ostringstream nats, bits;
  write_csv(nats, c);
  write_csv(bits, c, true);
  EXPECT_EQ(nats.str().substr(0, 4), "L,S\n");
  EXPECT_NE(nats.str(), bits.str());
}

TEST(Magnetization, BasisState) {
  const auto m = magnetization(StateVector::basis_state(3, 0b101));
  EXPECT_DOUBLE_EQ(m[0], -1.0);
  EXPECT_DOUBLE_EQ(m[1], 1.0);
  EXPECT_DOUBLE_EQ(m[2], -1.0);
}

TEST(Chirality, ProductStatesStayBelowOne) {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const LatticeGraph g = triangle();
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::pair<double, double>> a;
    for (int s = 0; s < 3; ++s) a.emplace_back(std::acos(1 - 2 * u(rng)), 2 * M_PI * u(rng));
    const auto map = chirality_map(product_state(a), g);
    EXPECT_LE(std::abs(map.plaquettes[0].chi), 1.0 + 1e-9);
  }
}

TEST(Chirality, ReversedOrientationFlipsSign) {
  std::mt19937_64 rng(37);
  const StateVector v = random_state(3, rng);
  const LatticeGraph ccw = triangle();
  const LatticeGraph cw("cw", ccw.positions(), ccw.edges(), {{0, 2, 1}}, {}, TripleKind::Plaquette);
  const double a = chirality_map(v, ccw).plaquettes[0].chi;
  const double b = chirality_map(v, cw).plaquettes[0].chi;
  EXPECT_NEAR(a, -b, 1e-13);
  EXPECT_NEAR(a, expectation(chirality_operator(3, {0, 1, 2}), v), 1e-13);
}

TEST(Chirality, ExtremalEigenstateReachesNorm) {
  const SpectrumResult r = dense_oracle(Complex(-1.0) * chirality_operator(3, {0, 1, 2}));
  const double chi = chirality_map(r.eigenvectors[0], triangle()).plaquettes[0].chi;
  EXPECT_NEAR(chi, 2.0 * std::sqrt(3.0), 1e-10);
  EXPECT_EQ(classify_chirality(chi), EntanglementClass::RequiresTripartite);
}

TEST(Chirality, Classification) {
  EXPECT_EQ(classify_chirality(0.99), EntanglementClass::ConsistentWithProduct);
  EXPECT_EQ(classify_chirality(1.0 + 5e-10), EntanglementClass::ConsistentWithProduct);
  EXPECT_EQ(classify_chirality(-1.5), EntanglementClass::RequiresBipartite);
  EXPECT_EQ(classify_chirality(2.0 + 5e-10), EntanglementClass::RequiresBipartite);
  EXPECT_EQ(classify_chirality(2.5), EntanglementClass::RequiresTripartite);
  EXPECT_THROW(classify_chirality(3.5), InvalidArgument);
  EXPECT_EQ(to_string(EntanglementClass::RequiresTripartite), "requires-tripartite");
}

TEST(Chirality, MapCsv) {
  std::ostringstream os;
  write_csv(os, chirality_map(StateVector::basis_state(19, 0), hexagon19()));
  std::string first;
  std::istringstream is(os.str());
  std::getline(is, first);
  EXPECT_EQ(first, "x,y,chi");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  EXPECT_EQ(rows, 24);
}

TEST(Witness, BoundsHoldOnSmallSample) {
  const WitnessReport r = witness_bound_check(5000, 3);
  EXPECT_TRUE(r.product_bound_holds);
  EXPECT_TRUE(r.bipartite_bound_holds);
  EXPECT_LE(r.max_product, 1.0 + 1e-9);
  EXPECT_LE(r.max_bipartite, 2.0 + 1e-9);
  EXPECT_GT(r.max_bipartite, 1.0);
  EXPECT_NEAR(r.operator_norm, 2.0 * std::sqrt(3.0), 1e-10);
}

TEST(Witness, Deterministic) {
  const WitnessReport a = witness_bound_check(500, 5), b = witness_bound_check(500, 5);
  EXPECT_EQ(a.max_product, b.max_product);
  EXPECT_EQ(a.max_bipartite, b.max_bipartite);
}
