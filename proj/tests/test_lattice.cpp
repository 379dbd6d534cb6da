#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <json.hpp>

#include "trispin/error.hpp"
#include "trispin/lattice.hpp"

using namespace trispin;

namespace {

double dist(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

TEST(Lattice, SingleTriangle) {
  const LatticeGraph g = triangle();
  EXPECT_EQ(g.n_sites(), 3);
  EXPECT_EQ(g.edges().size(), 3u);
  ASSERT_EQ(g.triangles().size(), 1u);
  const auto& t = g.triangles()[0];
  EXPECT_GT(signed_area2(g.positions()[t[0]], g.positions()[t[1]], g.positions()[t[2]]), 0.0);
}

TEST(Lattice, OpenTriangularChainCounts) {
  for (int nt = 1; nt <= 8; ++nt) {
    const LatticeGraph g = triangular_chain(nt, false);
    EXPECT_EQ(g.n_sites(), nt + 2);
    EXPECT_EQ(static_cast<int>(g.triangles().size()), nt);
    EXPECT_EQ(static_cast<int>(g.edges().size()), 2 * nt + 1);
  }
}

TEST(Lattice, PeriodicTriangularChain) {
  const LatticeGraph g = triangular_chain(6, true);
  EXPECT_EQ(g.n_sites(), 6);
  EXPECT_EQ(g.triangles().size(), 6u);
  EXPECT_EQ(g.edges().size(), 12u);
  EXPECT_THROW(triangular_chain(5, true), InvalidArgument);
  EXPECT_THROW(triangular_chain(2, true), InvalidArgument);
}

TEST(Lattice, HexagonPatchGeometry) {
  const LatticeGraph g = hexagon19();
  EXPECT_EQ(g.n_sites(), 19);
  EXPECT_EQ(g.edges().size(), 42u);
  EXPECT_EQ(g.triangles().size(), 24u);
  EXPECT_EQ(g.boundary().size(), 12u);
  EXPECT_NEAR(dist(g.positions()[0], {0, 0}), 0.0, 1e-12);
  for (int s = 1; s <= 6; ++s) {
    EXPECT_NEAR(dist(g.positions()[s], {0, 0}), 1.0, 1e-12);
    EXPECT_FALSE(g.is_boundary(s));
  }
  for (int s = 7; s < 19; ++s) EXPECT_TRUE(g.is_boundary(s));
  for (const auto& [a, b] : g.edges()) EXPECT_NEAR(dist(g.positions()[a], g.positions()[b]), 1.0, 1e-9);
}

TEST(Lattice, PlaquettesAreCounterclockwise) {
  for (const LatticeGraph& g : {hexagon19(), triangular_chain(7, false), triangle()}) {
    for (const auto& t : g.triangles()) {
      const double a = signed_area2(g.positions()[t[0]], g.positions()[t[1]], g.positions()[t[2]]);
      EXPECT_NEAR(a, std::sqrt(3.0) / 2.0, 1e-9) << g.name();
    }
  }
}

TEST(Lattice, HexagonHasSixCentralTriangles) {
  const LatticeGraph g = hexagon19();
  int central = 0;
  for (const auto& t : g.triangles())
    if (t[0] == 0 || t[1] == 0 || t[2] == 0) ++central;
  EXPECT_EQ(central, 6);
}

TEST(Lattice, ChainWindows) {
  const LatticeGraph open = chain(9, false);
  EXPECT_EQ(open.triangles().size(), 7u);
  EXPECT_EQ(open.kind(), TripleKind::Window);
  const LatticeGraph ring = chain(9, true);
  ASSERT_EQ(ring.triangles().size(), 9u);
  EXPECT_EQ(ring.triangles()[8], (Triple{8, 0, 1}));
  EXPECT_THROW(chain(2, false), InvalidArgument);
}

TEST(Lattice, RejectsInvalidGraphs) {
  EXPECT_THROW(LatticeGraph("bad", {{0, 0}, {1, 0}}, {{0, 0}}, {}, {}, TripleKind::Plaquette),
               InvalidArgument);
  EXPECT_THROW(LatticeGraph("bad", {{0, 0}, {1, 0}}, {{0, 2}}, {}, {}, TripleKind::Plaquette),
               InvalidArgument);
  EXPECT_THROW(LatticeGraph("bad", {}, {}, {}, {}, TripleKind::Plaquette), InvalidArgument);
}

TEST(Lattice, JsonExport) {
  const auto j = nlohmann::json::parse(hexagon19().to_json());
  EXPECT_EQ(j.at("positions").size(), 19u);
  EXPECT_EQ(j.at("edges").size(), 42u);
  EXPECT_EQ(j.at("triangles").size(), 24u);
  EXPECT_EQ(j.at("boundary").size(), 12u);
}
