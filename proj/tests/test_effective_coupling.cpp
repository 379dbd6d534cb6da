#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "trispin/effective_coupling.hpp"
#include "trispin/error.hpp"
#include "trispin/models.hpp"

using namespace trispin;

namespace {

BoseHubbardSpec spec(Complex jup, Complex jdn, double uuu = 2.12, double udd = 2.12,
                     double uud = 1.0) {
  BoseHubbardSpec s;
  s.J_up = jup;
  s.J_dn = jdn;
  s.U_uu = uuu;
  s.U_dd = udd;
  s.U_ud = uud;
  return s;
}

Matrix8 to8(const Eigen::MatrixXcd& m) { return m; }

double max_abs(const Matrix8& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Hubbard, SectorDimensionsMatchCompositionCount) {
  const BoseHubbardSpec s = spec(0.05, 0.05);
  for (int nu = 0; nu <= 4; ++nu)
    for (int nd = 0; nd <= 4; ++nd) {
      const HubbardBlock b = build_hubbard(3, {{1, 0}, {2, 1}, {0, 2}}, nu, nd, s);
      EXPECT_EQ(static_cast<long>(b.basis.size()),
                oracle::capped_compositions(nu, 3, 3) * oracle::capped_compositions(nd, 3, 3));
    }
}

TEST(Hubbard, TriangleSpectrumMatchesIndependentBuilder) {
  for (Complex j : {Complex(0.07), Complex(0, 0.07), std::polar(0.07, 0.4)}) {
    const BoseHubbardSpec s = spec(j, 0.5 * j, 2.12, 1.7, 1.0);
    const HubbardBlock lib = build_hubbard_triangle(s);
    const oracle::TriangleHubbard ref = oracle::triangle_hubbard(s);
    ASSERT_EQ(lib.H.rows(), ref.H.rows());
    const Eigen::VectorXd a = oracle::eigenvalues(lib.H), b = oracle::eigenvalues(ref.H);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Hubbard, ValidationGuards) {
  EXPECT_THROW(spec(0.05, 0.05, -1.0).validate(), InvalidArgument);
  EXPECT_THROW(spec(0.6, 0.05).validate(), InvalidArgument);
  BoseHubbardSpec s = spec(0.05, 0.05);
  s.n_max = 1;
  EXPECT_THROW(s.validate(), InvalidArgument);
  EXPECT_TRUE(spec(0.3, 0.05).beyond_comfort_zone());
  EXPECT_FALSE(spec(0.1, 0.05).beyond_comfort_zone());
}

TEST(EffectiveBlock, SpectrumIsTheSelectedExactLevels) {
  const EffectiveBlock b = effective_hamiltonian(spec(0.08, 0.05));
  EXPECT_LT(max_abs(b.h - b.h.adjoint()), 1e-14);
  const Eigen::VectorXd ev = oracle::eigenvalues(b.h);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(ev(i), b.energies[i], 1e-12);
  EXPECT_GT(b.min_overlap, 0.9);
}

TEST(EffectiveBlock, StableUnderLargerOccupationCap) {
  BoseHubbardSpec a = spec(std::polar(0.08, 0.3), 0.05, 2.12, 1.9, 1.0);
  BoseHubbardSpec b = a;
  b.n_max = 4;
  const Matrix8 ha = effective_hamiltonian(a).h, hb = effective_hamiltonian(b).h;
  EXPECT_LT(max_abs(ha - hb), 1e-10);
}

TEST(EffectiveBlock, MatchesThirdOrderOracleToFourthOrder) {
  // Deviation from P V R V P + P V R V R V P must shrink as (J/U)^4.
  std::vector<double> dev;
  for (double j : {0.02, 0.01}) {
    const auto s = spec(j, j);
    dev.push_back(max_abs(effective_hamiltonian(s).h - oracle::third_order_block(s)));
  }
  const double slope = std::log2(dev[0] / dev[1]);
  EXPECT_NEAR(slope, 4.0, 0.3);
}

TEST(EffectiveBlock, ComplexTunnellingMatchesOracle) {
  const auto s = spec(Complex(0, 0.01), std::polar(0.01, 0.7));
  EXPECT_LT(max_abs(effective_hamiltonian(s).h - oracle::third_order_block(s)), 2e-6);
}

TEST(Couplings, RecoverKnownModel) {
  const Couplings1D c{{0.1, -0.2, 0.3}, 0.4, 0.5, 0.6, 0.7};
  const Matrix8 h = to8(oracle::kron_sum(build_three_spin_model(triangle(), c)) +
                        0.25 * Eigen::MatrixXcd::Identity(8, 8));
  const EffectiveCouplings e = extract_couplings(h);
  EXPECT_NEAR(e.B.x, 0.1, 1e-14);
  EXPECT_NEAR(e.B.y, -0.2, 1e-14);
  EXPECT_NEAR(e.B.z, 0.3, 1e-14);
  EXPECT_NEAR(e.lambda1, 0.4, 1e-14);
  EXPECT_NEAR(e.lambda2, 0.5, 1e-14);
  EXPECT_NEAR(e.lambda3, 0.6, 1e-14);
  EXPECT_NEAR(e.lambda4, 0.7, 1e-14);
  EXPECT_NEAR(e.identity, 0.25, 1e-14);
  EXPECT_LT(e.residual, 1e-13);
  EXPECT_NEAR(pauli_coefficient(e.pauli, "XZX"), 0.7, 1e-14);
  EXPECT_THROW(pauli_coefficient(e.pauli, "XQ"), InvalidArgument);
}

TEST(Couplings, RejectsNonHermitian) {
  Matrix8 h = Matrix8::Zero();
  h(0, 1) = 1.0;
  EXPECT_THROW(extract_couplings(h), InvalidArgument);
}

TEST(Couplings, ScaleCovariance) {
  const double s = 3.0;
  const auto a = extract_couplings(effective_hamiltonian(spec(0.04, 0.03)).h);
  const auto b = extract_couplings(effective_hamiltonian(spec(s * 0.04, s * 0.03, s * 2.12, s * 2.12, s)).h);
  EXPECT_NEAR(b.lambda1, s * a.lambda1, 1e-12);
  EXPECT_NEAR(b.lambda2, s * a.lambda2, 1e-12);
  EXPECT_NEAR(b.lambda3, s * a.lambda3, 1e-12);
  EXPECT_NEAR(b.lambda4, s * a.lambda4, 1e-12);
  EXPECT_NEAR(b.B.z, s * a.B.z, 1e-12);
}

TEST(Couplings, SpeciesSwapFlipsOddTerms) {
  const auto a = extract_couplings(effective_hamiltonian(spec(0.06, 0.03, 2.12, 1.8)).h);
  const auto b = extract_couplings(effective_hamiltonian(spec(0.03, 0.06, 1.8, 2.12)).h);
  EXPECT_NEAR(b.B.z, -a.B.z, 1e-12);
  EXPECT_NEAR(b.lambda1, a.lambda1, 1e-12);
  EXPECT_NEAR(b.lambda2, a.lambda2, 1e-12);
  EXPECT_NEAR(b.lambda3, -a.lambda3, 1e-12);
  EXPECT_NEAR(b.lambda4, -a.lambda4, 1e-12);
}

TEST(Couplings, RealTunnellingHasNoChiralTerms) {
  const auto e = extract_couplings(effective_hamiltonian(spec(0.05, 0.05)).h);
  EXPECT_NEAR(e.extended.tau3, 0.0, 1e-14);
  EXPECT_NEAR(e.extended.tau4, 0.0, 1e-14);
  EXPECT_NEAR(e.B.x, 0.0, 1e-14);
  EXPECT_NEAR(e.B.y, 0.0, 1e-14);
  EXPECT_LT(e.residual, 1e-12);
}

TEST(Couplings, ImaginaryTunnellingProducesChirality) {
  const auto e = extract_couplings(effective_hamiltonian(spec(Complex(0, 0.05), Complex(0, 0.05))).h);
  EXPECT_GT(std::abs(e.extended.tau4), 1e-5);
  EXPECT_LT(e.extended.residual, 1e-12);
}

TEST(Couplings, OneFrozenSpeciesKillsExchange) {
  const auto e = extract_couplings(effective_hamiltonian(spec(0.0, 0.08)).h);
  EXPECT_NEAR(e.lambda2, 0.0, 1e-14);
  EXPECT_NEAR(e.lambda4, 0.0, 1e-14);
  EXPECT_GT(std::abs(e.lambda1), 1e-4);
}

TEST(Couplings, ScalingExponents) {
  auto at = [](double j) { return extract_couplings(effective_hamiltonian(spec(j, j, 2.12, 1.9)).h); };
  const auto a = at(0.01), b = at(0.005);
  EXPECT_NEAR(std::log2(a.lambda2 / b.lambda2), 2.0, 0.05);
  EXPECT_NEAR(std::log2(a.lambda3 / b.lambda3), 3.0, 0.05);
}

TEST(Surface, GridAndCsv) {
  const std::vector<double> axis = {0.01, 0.02, 0.3};
  const auto surf = coupling_surface(axis, axis, spec(1.0, 1.0));
  ASSERT_EQ(surf.size(), 9u);
  int ok = 0;
  for (const auto& p : surf) ok += p.ok;
  EXPECT_GE(ok, 4);
  std::ostringstream os;
  write_csv(os, surf);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "Jup_over_U,Jdn_over_U,B_x,B_y,B_z,lambda1,lambda2,lambda3,lambda4,residual");
}

TEST(Surface, DeterministicAcrossRuns) {
  const std::vector<double> axis = {0.02, 0.05};
  const auto a = coupling_surface(axis, axis, spec(1.0, 1.0));
  const auto b = coupling_surface(axis, axis, spec(1.0, 1.0));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].couplings.lambda3, b[i].couplings.lambda3);
}
