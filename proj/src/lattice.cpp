#include "trispin/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "trispin/error.hpp"

namespace trispin {

namespace {

constexpr double kRowHeight = std::numbers::sqrt3 / 2.0;

Triple counterclockwise(const std::vector<Point2>& pos, int i, int j, int k) {
  if (signed_area2(pos[i], pos[j], pos[k]) > 0) return {i, j, k};
  return {i, k, j};
}

}  // namespace

double signed_area2(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

LatticeGraph::LatticeGraph(std::string name, std::vector<Point2> positions,
                           std::vector<Edge> edges, std::vector<Triple> triangles,
                           std::vector<int> boundary, TripleKind kind)
    : name_(std::move(name)),
      positions_(std::move(positions)),
      edges_(std::move(edges)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary)),
      kind_(kind) {
  const int n = n_sites();
  if (n < 1) throw InvalidArgument("lattice needs at least one site");
  auto valid = [n](int s) { return s >= 0 && s < n; };
  for (const auto& [a, b] : edges_) {
    if (!valid(a) || !valid(b) || a == b) throw InvalidArgument("invalid edge");
  }
  for (const auto& t : triangles_) {
    if (!valid(t[0]) || !valid(t[1]) || !valid(t[2]) || t[0] == t[1] || t[1] == t[2] ||
        t[0] == t[2]) {
      throw InvalidArgument("triangle must hold three distinct valid sites");
    }
  }
  for (int s : boundary_) {
    if (!valid(s)) throw InvalidArgument("invalid boundary site");
  }
  std::sort(boundary_.begin(), boundary_.end());
}

bool LatticeGraph::is_boundary(int site) const {
  return std::binary_search(boundary_.begin(), boundary_.end(), site);
}

Point2 LatticeGraph::centroid(const Triple& t) const {
  const auto& p = positions_;
  return {(p[t[0]].x + p[t[1]].x + p[t[2]].x) / 3.0, (p[t[0]].y + p[t[1]].y + p[t[2]].y) / 3.0};
}

std::string LatticeGraph::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["sites"] = n_sites();
  j["kind"] = kind_ == TripleKind::Plaquette ? "plaquette" : "window";
  auto& pos = j["positions"] = nlohmann::json::array();
  for (const auto& p : positions_) pos.push_back({p.x, p.y});
  auto& e = j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : edges_) e.push_back({a, b});
  auto& t = j["triangles"] = nlohmann::json::array();
  for (const auto& tri : triangles_) t.push_back({tri[0], tri[1], tri[2]});
  j["boundary"] = boundary_;
  return j.dump(2);
}

LatticeGraph triangle() {
  std::vector<Point2> pos{{0.0, 0.0}, {1.0, 0.0}, {0.5, kRowHeight}};
  return LatticeGraph("triangle", pos, {{0, 1}, {1, 2}, {0, 2}}, {{0, 1, 2}}, {},
                      TripleKind::Plaquette);
}

LatticeGraph triangular_chain(int n_triangles, bool periodic) {
  if (n_triangles < 1) throw InvalidArgument("triangular_chain needs at least one triangle");
  if (periodic && n_triangles % 2 != 0) {
    throw InvalidArgument("periodic triangular chain needs an even number of triangles");
  }
  if (periodic && n_triangles < 4) {
    throw InvalidArgument("periodic triangular chain needs at least 4 triangles");
  }
  const int unrolled = n_triangles + 2;
  std::vector<Point2> strip(unrolled);
  for (int k = 0; k < unrolled; ++k) strip[k] = {0.5 * k, (k % 2) ? kRowHeight : 0.0};

  const int n = periodic ? n_triangles : unrolled;
  std::vector<Point2> pos(strip.begin(), strip.begin() + n);
  std::set<Edge> edge_set;
  std::vector<Triple> tris;
  auto wrap = [n](int s) { return s % n; };
  auto add_edge = [&](int a, int b) { edge_set.insert({std::min(a, b), std::max(a, b)}); };
  for (int k = 0; k < n_triangles; ++k) {
    const Triple local = counterclockwise(strip, k, k + 1, k + 2);
    tris.push_back({wrap(local[0]), wrap(local[1]), wrap(local[2])});
    add_edge(wrap(k), wrap(k + 1));
    add_edge(wrap(k + 1), wrap(k + 2));
    add_edge(wrap(k), wrap(k + 2));
  }
  return LatticeGraph(periodic ? "triangular_chain_periodic" : "triangular_chain", pos,
                      {edge_set.begin(), edge_set.end()}, tris, {}, TripleKind::Plaquette);
}

LatticeGraph hexagon19() {
  struct Site {
    Point2 p;
    int ring;
    double angle;
  };
  std::vector<Site> sites;
  for (int q = -2; q <= 2; ++q) {
    for (int r = -2; r <= 2; ++r) {
      const int s = -q - r;
      const int ring = std::max({std::abs(q), std::abs(r), std::abs(s)});
      if (ring > 2) continue;
      const Point2 p{q + 0.5 * r, kRowHeight * r};
      double angle = std::atan2(p.y, p.x);
      if (angle < -1e-12) angle += 2.0 * std::numbers::pi;
      sites.push_back({p, ring, ring == 0 ? 0.0 : angle});
    }
  }
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    if (a.ring != b.ring) return a.ring < b.ring;
    return a.angle < b.angle;
  });

  const int n = static_cast<int>(sites.size());
  std::vector<Point2> pos;
  std::vector<int> boundary;
  for (int i = 0; i < n; ++i) {
    pos.push_back(sites[i].p);
    if (sites[i].ring == 2) boundary.push_back(i);
  }

  auto adjacent = [&](int a, int b) {
    return std::abs(std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y) - 1.0) < 1e-9;
  };
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (adjacent(i, j)) edges.emplace_back(i, j);
    }
  }
  std::vector<Triple> tris;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!adjacent(i, j)) continue;
      for (int k = j + 1; k < n; ++k) {
        if (adjacent(i, k) && adjacent(j, k)) tris.push_back(counterclockwise(pos, i, j, k));
      }
    }
  }
  return LatticeGraph("hexagon19", pos, edges, tris, boundary, TripleKind::Plaquette);
}

LatticeGraph chain(int n_sites, bool periodic) {
  if (n_sites < 3) throw InvalidArgument("chain needs at least 3 sites");
  std::vector<Point2> pos(n_sites);
  for (int j = 0; j < n_sites; ++j) pos[j] = {static_cast<double>(j), 0.0};
  std::vector<Edge> edges;
  for (int j = 0; j + 1 < n_sites; ++j) edges.emplace_back(j, j + 1);
  if (periodic && n_sites > 2) edges.emplace_back(n_sites - 1, 0);
  std::vector<Triple> windows;
  const int count = periodic ? n_sites : n_sites - 2;
  for (int j = 0; j < count; ++j) {
    windows.push_back({j, (j + 1) % n_sites, (j + 2) % n_sites});
  }
  return LatticeGraph(periodic ? "chain_periodic" : "chain", pos, edges, windows, {},
                      TripleKind::Window);
}

}  // namespace trispin
