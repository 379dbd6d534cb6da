#include "trispin/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include "trispin/engine.hpp"
#include "trispin/error.hpp"
#include "trispin/models.hpp"

namespace trispin {

namespace {

constexpr double kMaxChirality = 2.0 * std::numbers::sqrt3;

std::uint64_t gather_bits(std::uint64_t x, const std::vector<int>& sites) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) out |= ((x >> sites[i]) & 1U) << i;
  return out;
}

}  // namespace

ReducedDensityMatrix reduce(const StateVector& v, const std::vector<int>& subsystem) {
  const int n = v.n_sites();
  if (subsystem.empty()) throw InvalidArgument("reduce: empty subsystem");
  if (static_cast<int>(subsystem.size()) > kMaxSubsystem) {
    throw InvalidArgument("reduce: subsystem larger than " + std::to_string(kMaxSubsystem));
  }
  std::set<int> seen;
  for (int s : subsystem) {
    if (s < 0 || s >= n) throw InvalidArgument("reduce: site out of range");
    if (!seen.insert(s).second) throw InvalidArgument("reduce: repeated site");
  }
  std::vector<int> rest;
  for (int s = 0; s < n; ++s) {
    if (!seen.count(s)) rest.push_back(s);
  }

  const Eigen::Index da = Eigen::Index{1} << subsystem.size();
  const Eigen::Index db = Eigen::Index{1} << rest.size();
  Eigen::MatrixXcd psi(da, db);
  for (std::size_t x = 0; x < v.dim(); ++x) {
    psi(static_cast<Eigen::Index>(gather_bits(x, subsystem)),
        static_cast<Eigen::Index>(gather_bits(x, rest))) = v[x];
  }
  return {subsystem, psi * psi.adjoint()};
}

double entropy(const ReducedDensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho.matrix, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("entropy: eigensolver failed");
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double p = eig.eigenvalues()(i);
    if (p < -1e-10) {
      throw NumericalError("entropy: density-matrix eigenvalue " + std::to_string(p));
    }
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

EntropyCurve entropy_curve(const StateVector& v, int l_max) {
  const int n = v.n_sites();
  if (l_max < 1 || l_max > std::min(kMaxSubsystem, n - 1)) {
    throw InvalidArgument("entropy_curve: l_max must be in [1, min(14, N-1)]");
  }
  EntropyCurve curve;
  curve.n_sites = n;
  curve.points.resize(static_cast<std::size_t>(l_max));
  for (int L = 1; L <= l_max; ++L) {
    std::vector<int> block(static_cast<std::size_t>(L));
    for (int s = 0; s < L; ++s) block[s] = s;
    curve.points[L - 1] = {L, entropy(reduce(v, block))};
  }
  return curve;
}

void write_csv(std::ostream& os, const EntropyCurve& curve, bool bits) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "L,S\n";
  for (const auto& p : curve.points) {
    os << p.L << ',' << (bits ? p.S / std::numbers::ln2 : p.S) << '\n';
  }
  os.precision(old);
}

std::vector<double> magnetization(const StateVector& v) {
  std::vector<double> m(static_cast<std::size_t>(v.n_sites()), 0.0);
  for (std::size_t x = 0; x < v.dim(); ++x) {
    const double p = std::norm(v[x]);
    for (int j = 0; j < v.n_sites(); ++j) m[j] += ((x >> j) & 1U) ? -p : p;
  }
  return m;
}

ChiralityMap chirality_map(const StateVector& v, const LatticeGraph& g) {
  if (v.n_sites() != g.n_sites()) throw InvalidArgument("chirality_map: site count mismatch");
  ChiralityMap map;
  for (const auto& t : g.triangles()) {
    map.plaquettes.push_back(
        {t, g.centroid(t), expectation(chirality_operator(g.n_sites(), t), v)});
  }
  return map;
}

void write_csv(std::ostream& os, const ChiralityMap& map) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "x,y,chi\n";
  for (const auto& p : map.plaquettes) os << p.centroid.x << ',' << p.centroid.y << ',' << p.chi << '\n';
  os.precision(old);
}

std::string to_string(EntanglementClass c) {
  switch (c) {
    case EntanglementClass::ConsistentWithProduct: return "consistent-with-product";
    case EntanglementClass::RequiresBipartite: return "requires-bipartite";
    case EntanglementClass::RequiresTripartite: return "requires-tripartite";
  }
  return "unknown";
}

EntanglementClass classify_chirality(double chi) {
  const double a = std::abs(chi);
  if (!(a <= kMaxChirality + 1e-9)) {
    throw InvalidArgument("chirality " + std::to_string(chi) + " exceeds the operator norm");
  }
  if (a <= 1.0 + 1e-9) return EntanglementClass::ConsistentWithProduct;
  if (a <= 2.0 + 1e-9) return EntanglementClass::RequiresBipartite;
  return EntanglementClass::RequiresTripartite;
}

WitnessReport witness_bound_check(std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("witness_bound_check: need at least one sample");
  const OperatorSum chi_op = chirality_operator(3, {0, 1, 2});
  const CompiledOperator op(chi_op);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;

  auto haar = [&](std::size_t dim) {
    std::vector<Complex> a(dim);
    double nrm = 0.0;
    for (auto& x : a) {
      const double re = gauss(rng);
      x = Complex(re, gauss(rng));
      nrm += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(nrm);
    return a;
  };
  std::vector<Complex> state(8), image(8);
  auto chi_of = [&]() {
    op.apply(state, image);
    Complex e = 0.0;
    for (std::size_t i = 0; i < 8; ++i) e += std::conj(state[i]) * image[i];
    return std::abs(e.real());
  };

  WitnessReport r;
  r.samples = n_samples;
  constexpr int kPairs[3][3] = {{0, 1, 2}, {1, 2, 0}, {0, 2, 1}};
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const auto q0 = haar(2), q1 = haar(2), q2 = haar(2);
    for (std::size_t b = 0; b < 8; ++b) state[b] = q0[b & 1] * q1[(b >> 1) & 1] * q2[(b >> 2) & 1];
    r.max_product = std::max(r.max_product, chi_of());

    const auto& [i, j, k] = kPairs[s % 3];
    const auto pair = haar(4), single = haar(2);
    for (std::size_t b = 0; b < 8; ++b) {
      state[b] = pair[((b >> i) & 1) + 2 * ((b >> j) & 1)] * single[(b >> k) & 1];
    }
    r.max_bipartite = std::max(r.max_bipartite, chi_of());

    state = haar(8);
    r.max_unconstrained = std::max(r.max_unconstrained, chi_of());
  }
  const auto spectrum = dense_oracle(chi_op);
  r.operator_norm = std::max(std::abs(spectrum.eigenvalues.front()),
                             std::abs(spectrum.eigenvalues.back()));
  r.product_bound_holds = r.max_product <= 1.0 + 1e-9;
  r.bipartite_bound_holds = r.max_bipartite <= 2.0 + 1e-9;
  return r;
}

}  // namespace trispin
