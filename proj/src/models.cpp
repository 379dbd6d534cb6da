#include "trispin/models.hpp"

#include <cmath>

#include "trispin/error.hpp"

namespace trispin {

namespace {

using P = Pauli;

bool consecutive(int a, int b, int n) {
  const int d = std::abs(a - b);
  return d == 1 || d == n - 1;
}

void add_zeeman(OperatorSum& h, int site, const Vec3& b) {
  const int n = h.n_sites();
  h += PauliString::single(n, site, P::X, b.x);
  h += PauliString::single(n, site, P::Y, b.y);
  h += PauliString::single(n, site, P::Z, b.z);
}

void add_pair(OperatorSum& h, int a, int b, P pa, P pb, Complex c) {
  h += PauliString(h.n_sites(), {{a, pa}, {b, pb}}, c);
}

void add_triple(OperatorSum& h, const Triple& t, P p0, P p1, P p2, Complex c) {
  h += PauliString(h.n_sites(), {{t[0], p0}, {t[1], p1}, {t[2], p2}}, c);
}

// XZX + YZY with the controlling Z on t[1].
void add_controlled_exchange(OperatorSum& h, const Triple& t, double c) {
  add_triple(h, t, P::X, P::Z, P::X, c);
  add_triple(h, t, P::Y, P::Z, P::Y, c);
}

}  // namespace

OperatorSum build_three_spin_model(const LatticeGraph& g, const Couplings1D& c, EdgeWeights w) {
  if (g.triangles().empty()) {
    throw InvalidArgument("three-spin model needs a graph with site triples");
  }
  const int n = g.n_sites();
  OperatorSum h(n);
  for (int s = 0; s < n; ++s) add_zeeman(h, s, c.B);
  for (const auto& [a, b] : g.edges()) {
    const double scale = consecutive(a, b, n) ? 1.0 : w.next_neighbor_weight;
    add_pair(h, a, b, P::Z, P::Z, scale * c.lambda1);
    add_pair(h, a, b, P::X, P::X, scale * c.lambda2);
    add_pair(h, a, b, P::Y, P::Y, scale * c.lambda2);
  }
  for (const auto& t : g.triangles()) {
    add_triple(h, t, P::Z, P::Z, P::Z, c.lambda3);
    if (g.kind() == TripleKind::Window) {
      add_controlled_exchange(h, t, c.lambda4);
    } else {
      add_controlled_exchange(h, {t[0], t[1], t[2]}, c.lambda4);
      add_controlled_exchange(h, {t[1], t[2], t[0]}, c.lambda4);
      add_controlled_exchange(h, {t[2], t[0], t[1]}, c.lambda4);
    }
  }
  return h;
}

OperatorSum build_zzz_field_chain(const LatticeGraph& g, double bx, double bz) {
  if (g.kind() != TripleKind::Window) {
    throw InvalidArgument("ZZZ field model is defined on chains");
  }
  const int n = g.n_sites();
  OperatorSum h(n);
  for (int s = 0; s < n; ++s) {
    h += PauliString::single(n, s, P::X, -bx);
    h += PauliString::single(n, s, P::Z, -bz);
  }
  for (const auto& t : g.triangles()) add_triple(h, t, P::Z, P::Z, P::Z, -1.0);
  return h;
}

PauliString dual_x(int j, int n_sites) {
  if (j < 0 || j + 2 >= n_sites) {
    throw InvalidArgument("dual x operator at site " + std::to_string(j) + " leaves a " +
                          std::to_string(n_sites) + "-site chain");
  }
  return PauliString(n_sites, {{j, P::Z}, {j + 1, P::Z}, {j + 2, P::Z}});
}

PauliString dual_z(int j, int n_sites) {
  if (j < 0 || j >= n_sites) throw InvalidArgument("dual z operator outside the chain");
  std::vector<std::pair<int, P>> xs;
  for (int k = 0; j - 3 * k >= 0; ++k) {
    xs.emplace_back(j - 3 * k, P::X);
    if (j - 3 * k - 1 >= 0) xs.emplace_back(j - 3 * k - 1, P::X);
  }
  return PauliString(n_sites, xs);
}

DualPair dual_operators(int j, int n_sites) { return {dual_x(j, n_sites), dual_z(j, n_sites)}; }

OperatorSum chirality_operator(int n_sites, const Triple& t) {
  OperatorSum c(n_sites);
  add_triple(c, t, P::X, P::Y, P::Z, 1.0);
  add_triple(c, t, P::Y, P::Z, P::X, 1.0);
  add_triple(c, t, P::Z, P::X, P::Y, 1.0);
  add_triple(c, t, P::X, P::Z, P::Y, -1.0);
  add_triple(c, t, P::Z, P::Y, P::X, -1.0);
  add_triple(c, t, P::Y, P::X, P::Z, -1.0);
  return c;
}

OperatorSum build_chiral_tunnelling_model(const LatticeGraph& g, const CouplingsChiral& c) {
  const int n = g.n_sites();
  OperatorSum h(n);
  for (int s = 0; s < n; ++s) add_zeeman(h, s, c.B);
  for (const auto& [a, b] : g.edges()) {
    add_pair(h, a, b, P::Z, P::Z, c.tau1);
    add_pair(h, a, b, P::X, P::X, c.tau2);
    add_pair(h, a, b, P::Y, P::Y, c.tau2);
    add_pair(h, a, b, P::X, P::Y, c.tau3);
    add_pair(h, a, b, P::Y, P::X, -c.tau3);
  }
  for (const auto& t : g.triangles()) h += c.tau4 * chirality_operator(n, t);
  return h;
}

OperatorSum build_chiral_heisenberg_model(const LatticeGraph& g, double tau,
                                          double boundary_field) {
  const int n = g.n_sites();
  OperatorSum h(n);
  for (const auto& [a, b] : g.edges()) {
    add_pair(h, a, b, P::X, P::X, tau);
    add_pair(h, a, b, P::Y, P::Y, tau);
    add_pair(h, a, b, P::Z, P::Z, tau);
  }
  for (const auto& t : g.triangles()) h += chirality_operator(n, t);
  for (int s : g.boundary()) h += PauliString::single(n, s, P::Z, -boundary_field);
  return h;
}

FieldGradientSpec FieldGradientSpec::rectangle(double dipole, double dbz_dx, double width,
                                               double height) {
  return {dipole, dbz_dx, {{0, 0}, {width, 0}, {width, height}, {0, height}}};
}

LoopPhase dipole_loop_phase(const FieldGradientSpec& spec) {
  if (spec.polygon.size() < 3) throw InvalidArgument("loop needs at least three vertices");
  double twice_area = 0.0;
  const auto& p = spec.polygon;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    twice_area += a.x * b.y - b.x * a.y;
  }
  LoopPhase out;
  out.area = 0.5 * twice_area;
  out.effective_charge_field = spec.dipole * spec.dbz_dx;
  out.phase = out.effective_charge_field * out.area;
  return out;
}

std::complex<double> link_phase_to_coupling(double phi, double j_mag) {
  if (j_mag < 0.0) throw InvalidArgument("tunnelling magnitude must be non-negative");
  return std::polar(j_mag, phi);
}

}  // namespace trispin
