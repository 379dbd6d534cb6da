#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace trispin {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

using Edge = std::pair<int, int>;
using Triple = std::array<int, 3>;

/// Whether `triangles` holds geometric plaquettes or the consecutive windows
/// (j, j+1, j+2) of a linear chain.
enum class TripleKind { Plaquette, Window };

/**
 * Sites with planar positions (lattice-constant units), edges, ordered site
 * triples and a boundary set. Plaquette triples are stored counterclockwise.
 */
class LatticeGraph {
 public:
  LatticeGraph(std::string name, std::vector<Point2> positions, std::vector<Edge> edges,
               std::vector<Triple> triangles, std::vector<int> boundary, TripleKind kind);

  const std::string& name() const { return name_; }
  int n_sites() const { return static_cast<int>(positions_.size()); }
  const std::vector<Point2>& positions() const { return positions_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Triple>& triangles() const { return triangles_; }
  const std::vector<int>& boundary() const { return boundary_; }
  TripleKind kind() const { return kind_; }
  bool is_boundary(int site) const;

  Point2 centroid(const Triple& t) const;

  /// JSON document with sites, positions, edges, triangles and boundary.
  std::string to_json() const;

 private:
  std::string name_;
  std::vector<Point2> positions_;
  std::vector<Edge> edges_;
  std::vector<Triple> triangles_;
  std::vector<int> boundary_;
  TripleKind kind_;
};

/// z-component of (b - a) x (c - a); positive for a counterclockwise turn.
double signed_area2(const Point2& a, const Point2& b, const Point2& c);

LatticeGraph triangle();

/// Edge-sharing equilateral triangles. Open: n_triangles + 2 sites. Periodic
/// (n_triangles even, >= 4): n_triangles sites, the closing triangles are
/// oriented as in the unrolled strip.
LatticeGraph triangular_chain(int n_triangles, bool periodic);

/// Two-shell hexagonal patch of the triangular lattice: site 0 at the center,
/// sites 1..6 the first ring, 7..18 the outer ring (counterclockwise from the
/// +x axis). 42 edges, 24 triangles, the outer ring as boundary.
LatticeGraph hexagon19();

/// Linear chain with edges (j, j+1) and windows (j, j+1, j+2), wrapped when
/// periodic.
LatticeGraph chain(int n_sites, bool periodic);

}  // namespace trispin
