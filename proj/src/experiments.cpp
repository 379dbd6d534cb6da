#include "trispin/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "trispin/error.hpp"

namespace trispin {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::ofstream open_csv(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  os.precision(std::numeric_limits<double>::max_digits10);
  return os;
}

SolverOptions with_k(SolverOptions o, int k) {
  o.k = std::max(o.k, k);
  return o;
}

}  // namespace

// ---------------------------------------------------------------- degeneracy

std::vector<std::uint64_t> zzz_product_patterns(int n_sites, bool periodic) {
  if (n_sites < 3) throw InvalidArgument("zzz_product_patterns: need at least 3 sites");
  std::vector<std::uint64_t> out;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::uint64_t b = seed;
    for (int j = 2; j < n_sites; ++j) {
      b |= (((b >> (j - 2)) ^ (b >> (j - 1))) & 1U) << j;
    }
    bool ok = true;
    if (periodic) {
      for (int j = n_sites - 2; j < n_sites; ++j) {
        const auto bit = [&](int s) { return (b >> (s % n_sites)) & 1U; };
        if ((bit(j) ^ bit(j + 1) ^ bit(j + 2)) != 0) ok = false;
      }
    }
    if (ok) out.push_back(b);
  }
  return out;
}

DegeneracyReport run_degeneracy_check(int n_sites, bool periodic, double bx,
                                      const SolverOptions& opts) {
  DegeneracyReport r;
  r.n_sites = n_sites;
  r.periodic = periodic;
  r.bx = bx;
  r.hamiltonian = build_zzz_field_chain(chain(n_sites, periodic), bx, 0.0);
  const SpectrumResult s = ground_states(r.hamiltonian, with_k(opts, 5));
  r.energies.assign(s.eigenvalues.begin(), s.eigenvalues.begin() + 5);
  r.residuals.assign(s.residual_norms.begin(), s.residual_norms.begin() + 5);
  r.ground_degeneracy = s.ground_degeneracy;
  r.degeneracy_tol = s.degeneracy_tol;
  r.gap = r.energies[4] - r.energies[0];
  r.ground_splitting = r.energies[3] - r.energies[0];

  const auto patterns = zzz_product_patterns(n_sites, periodic);
  for (std::uint64_t b : patterns) {
    std::string p(static_cast<std::size_t>(n_sites), 'u');
    for (int j = 0; j < n_sites; ++j) {
      if ((b >> j) & 1U) p[j] = 'd';
    }
    r.patterns.push_back(p);
  }
  // tr(P_V P_ref) = sum_{v, p} |<p|v>|^2 over orthonormal v and basis patterns p.
  double overlap = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (std::uint64_t b : patterns) overlap += std::norm(s.eigenvectors[i][b]);
  }
  r.projector_fidelity = overlap / 4.0;
  return r;
}

// --------------------------------------------------------------- criticality

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw InvalidArgument("grid needs start <= stop and step > 0");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-6));
  for (long i = 0; i <= n; ++i) g.push_back(start + static_cast<double>(i) * step);
  return g;
}

LogFit fit_central_charge(const EntropyCurve& curve, int l_min, int l_max) {
  LogFit f;
  f.l_min = l_min;
  f.l_max = l_max;
  std::vector<double> x, y;
  for (const auto& p : curve.points) {
    if (p.L >= l_min && p.L <= l_max) {
      x.push_back(std::log(static_cast<double>(p.L)));
      y.push_back(p.S);
    }
  }
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  f.intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - slope * x[i];
    ssr += e * e;
  }
  f.c_eff = 6.0 * slope;
  f.c_err = x.size() > 2 ? 6.0 * std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  f.fitted = true;
  return f;
}

double CriticalityScan::peak_by_c() const {
  double best = -std::numeric_limits<double>::infinity(), at = std::nan("");
  for (const auto& p : points) {
    if (p.fit.fitted && p.fit.c_eff > best) {
      best = p.fit.c_eff;
      at = p.bx;
    }
  }
  return at;
}

double CriticalityScan::peak_by_saturation() const {
  double best = -std::numeric_limits<double>::infinity(), at = std::nan("");
  for (const auto& p : points) {
    if (p.saturation > best) {
      best = p.saturation;
      at = p.bx;
    }
  }
  return at;
}

CriticalityScan run_criticality_scan(int n_sites, const std::vector<double>& bx_grid, bool periodic,
                                     const SolverOptions& opts) {
  if (n_sites < 6 || n_sites > kMaxScanSites) {
    throw InvalidArgument("criticality scan needs 6 <= N <= " + std::to_string(kMaxScanSites));
  }
  if (bx_grid.empty()) throw InvalidArgument("empty Bx grid");
  for (std::size_t i = 1; i < bx_grid.size(); ++i) {
    if (!(bx_grid[i] > bx_grid[i - 1])) throw InvalidArgument("Bx grid must be strictly increasing");
  }
  const LatticeGraph g = chain(n_sites, periodic);
  const int l_max = n_sites / 2;

  CriticalityScan scan;
  scan.n_sites = n_sites;
  scan.periodic = periodic;
  for (double bx : bx_grid) {
    CriticalityPoint p;
    p.bx = bx;
    const SpectrumResult s = ground_states(build_zzz_field_chain(g, bx, 0.0), with_k(opts, 2));
    p.energy = s.eigenvalues[0];
    p.gap = s.eigenvalues[1] - s.eigenvalues[0];
    p.ground_degeneracy = s.ground_degeneracy;
    p.degenerate = s.ground_degeneracy > 1;
    p.curve = entropy_curve(s.eigenvectors[0], l_max);
    p.curve.parameters = "N=" + std::to_string(n_sites) + " Bx=" + fmt(bx) + " Bz=0" +
                         (periodic ? " periodic" : " open");
    if (l_max >= 3) p.saturation = p.curve.points[l_max - 1].S - p.curve.points[l_max - 3].S;
    if (p.curve.points.size() >= 5) p.fit = fit_central_charge(p.curve, 3, l_max);
    scan.points.push_back(std::move(p));
  }
  return scan;
}

// ------------------------------------------------------------------ duality

DualityReport run_duality_report(int n_sites, double bx, const std::vector<int>& trend_sizes,
                                 const SolverOptions& opts) {
  if (n_sites < 9) throw InvalidArgument("duality report needs N >= 9");
  if (!(bx > 0.0)) throw InvalidArgument("duality report needs Bx > 0");
  const LatticeGraph g = chain(n_sites, false);
  const OperatorSum h = build_zzz_field_chain(g, bx, 0.0);
  const OperatorSum target = bx * build_zzz_field_chain(g, 1.0 / bx, 0.0);

  DualityReport r;
  r.n_sites = n_sites;
  r.bx = bx;
  OperatorSum reached(n_sites);
  for (const auto& t : h.terms()) {
    TermImage im;
    im.source = t.label();
    im.coeff = t.coeff();
    std::optional<PauliString> image;
    const auto letters = t.letters();
    if (letters.size() == 3 && letters[0].second == Pauli::Z) {
      // A window term is the dual x at its first site.
      const int j = letters[0].first;
      if (dual_x(j, n_sites).same_letters(t)) image = PauliString::single(n_sites, j, Pauli::X);
    } else if (letters.size() == 1 && letters[0].second == Pauli::X) {
      // X_m = zbar_{m-2} zbar_{m-1} zbar_m, available once m >= 2.
      const int m = letters[0].first;
      if (m >= 2) {
        const PauliString prod =
            dual_z(m - 2, n_sites) * dual_z(m - 1, n_sites) * dual_z(m, n_sites);
        if (prod == PauliString::single(n_sites, m, Pauli::X)) {
          image = PauliString(n_sites, {{m - 2, Pauli::Z}, {m - 1, Pauli::Z}, {m, Pauli::Z}});
        }
      }
    }
    if (image) {
      ++r.bulk_terms;
      im.image = image->label();
      const Complex want = target.coefficient(*image);
      im.matched = std::abs(want - im.coeff) < 1e-12;
      r.symbolic_residual = std::max(r.symbolic_residual, std::abs(want - im.coeff));
      reached += image->with_coeff(1.0);
    }
    if (im.matched) {
      ++r.bulk_mapped;
    } else {
      r.boundary.push_back(im.source);
    }
    r.images.push_back(im);
  }
  for (const auto& t : target.terms()) {
    if (std::abs(reached.coefficient(t)) == 0.0) r.boundary.push_back("dual " + t.label());
  }
  const int windows = static_cast<int>(g.triangles().size());
  r.expected_boundary = 2 * (n_sites - windows);

  bool ok = true;
  for (int j = 0; j + 2 < n_sites; ++j) {
    const PauliString xj = dual_x(j, n_sites);
    for (int k = 0; k + 2 < n_sites; ++k) {
      const bool commute = xj.commutes_with(dual_z(k, n_sites));
      if (commute == (j == k)) ok = false;
    }
  }
  r.dual_algebra_ok = ok;

  for (int n : trend_sizes) {
    const LatticeGraph gn = chain(n, false);
    EnergyTrend e;
    e.n_sites = n;
    e.e_at_half = ground_states(build_zzz_field_chain(gn, 0.5, 0.0), opts).eigenvalues[0] / n;
    e.e_at_two = ground_states(build_zzz_field_chain(gn, 2.0, 0.0), opts).eigenvalues[0] / n;
    e.discrepancy = std::abs(e.e_at_two - 2.0 * e.e_at_half);
    r.trend.push_back(e);
  }
  return r;
}

// ------------------------------------------------------------------ hexagon

std::vector<int> hexagon_center_triangles(const LatticeGraph& g) {
  std::vector<int> out;
  for (std::size_t t = 0; t < g.triangles().size(); ++t) {
    const auto& tr = g.triangles()[t];
    if (std::find(tr.begin(), tr.end(), 0) != tr.end()) out.push_back(static_cast<int>(t));
  }
  return out;
}

namespace {

// Image of each triangle under a 60-degree rotation about site 0.
std::vector<int> rotate_triangles(const LatticeGraph& g) {
  const auto& pos = g.positions();
  const Point2 c = pos[0];
  const double cs = 0.5, sn = std::numbers::sqrt3 / 2.0;
  std::vector<int> site(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double dx = pos[i].x - c.x, dy = pos[i].y - c.y;
    const Point2 q{c.x + cs * dx - sn * dy, c.y + sn * dx + cs * dy};
    const auto it = std::find_if(pos.begin(), pos.end(), [&](const Point2& p) {
      return std::hypot(p.x - q.x, p.y - q.y) < 1e-9;
    });
    if (it == pos.end()) throw Error("lattice is not 6-fold symmetric about site 0");
    site[i] = static_cast<int>(it - pos.begin());
  }
  const auto& tris = g.triangles();
  std::vector<int> out(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    Triple r{site[tris[t][0]], site[tris[t][1]], site[tris[t][2]]};
    std::sort(r.begin(), r.end());
    for (std::size_t u = 0; u < tris.size(); ++u) {
      Triple s = tris[u];
      std::sort(s.begin(), s.end());
      if (s == r) out[t] = static_cast<int>(u);
    }
  }
  return out;
}

}  // namespace

ChiralitySweep run_hexagon_sweep(const std::vector<double>& taus, double boundary_field,
                                 const SolverOptions& opts) {
  if (taus.empty()) throw InvalidArgument("empty tau grid");
  for (double t : taus) {
    if (!(t >= -5.0 && t <= 5.0)) throw InvalidArgument("tau must lie in [-5, 5]");
  }
  const LatticeGraph g = hexagon19();
  const auto center = hexagon_center_triangles(g);
  const auto rot = rotate_triangles(g);

  ChiralitySweep sweep;
  sweep.boundary_field = boundary_field;
  for (double tau : taus) {
    HexagonPoint p;
    p.tau = tau;
    const SpectrumResult s =
        ground_states(build_chiral_heisenberg_model(g, tau, boundary_field), with_k(opts, 2));
    p.energy = s.eigenvalues[0];
    p.gap = s.eigenvalues[1] - s.eigenvalues[0];
    p.ground_degeneracy = s.ground_degeneracy;
    p.degenerate = s.ground_degeneracy > 1;
    p.map = chirality_map(s.eigenvectors[0], g);

    const auto& pl = p.map.plaquettes;
    double sum_c = 0.0, sum_c_abs = 0.0, sum_o_abs = 0.0;
    for (std::size_t t = 0; t < pl.size(); ++t) {
      const double a = std::abs(pl[t].chi);
      if (std::find(center.begin(), center.end(), static_cast<int>(t)) != center.end()) {
        sum_c += pl[t].chi;
        sum_c_abs += a;
      } else {
        sum_o_abs += a;
      }
      if (a > p.max_abs) {
        p.max_abs = a;
        p.max_index = static_cast<int>(t);
      }
      p.rotation_asymmetry = std::max(p.rotation_asymmetry, std::abs(pl[t].chi - pl[rot[t]].chi));
    }
    p.center_mean = sum_c / static_cast<double>(center.size());
    p.center_mean_abs = sum_c_abs / static_cast<double>(center.size());
    p.outer_mean_abs = sum_o_abs / static_cast<double>(pl.size() - center.size());
    p.max_class = classify_chirality(pl[p.max_index].chi);

    const auto mz = magnetization(s.eigenvectors[0]);
    for (int b : g.boundary()) p.boundary_mz += mz[b];
    p.boundary_mz /= static_cast<double>(g.boundary().size());
    sweep.points.push_back(std::move(p));
  }
  return sweep;
}

// ------------------------------------------------------------------ output

nlohmann::json to_json(const DegeneracyReport& r) {
  return {{"N", r.n_sites},
          {"periodic", r.periodic},
          {"bx", r.bx},
          {"energies", r.energies},
          {"residuals", r.residuals},
          {"ground_degeneracy", r.ground_degeneracy},
          {"degeneracy_tol", r.degeneracy_tol},
          {"gap", r.gap},
          {"ground_splitting", r.ground_splitting},
          {"projector_fidelity", r.projector_fidelity},
          {"patterns", r.patterns}};
}

nlohmann::json to_json(const CriticalityScan& s) {
  json pts = json::array();
  for (const auto& p : s.points) {
    json curve = json::array();
    for (const auto& e : p.curve.points) curve.push_back({{"L", e.L}, {"S", e.S}});
    pts.push_back({{"bx", p.bx},
                   {"energy", p.energy},
                   {"gap", p.gap},
                   {"ground_degeneracy", p.ground_degeneracy},
                   {"degenerate", p.degenerate},
                   {"saturation", p.saturation},
                   {"fitted", p.fit.fitted},
                   {"c_eff", p.fit.c_eff},
                   {"c_err", p.fit.c_err},
                   {"fit_window", {p.fit.l_min, p.fit.l_max}},
                   {"entropy", curve}});
  }
  return {{"N", s.n_sites},
          {"periodic", s.periodic},
          {"peak_by_c", s.peak_by_c()},
          {"peak_by_saturation", s.peak_by_saturation()},
          {"points", pts}};
}

nlohmann::json to_json(const DualityReport& r) {
  json trend = json::array();
  for (const auto& e : r.trend) {
    trend.push_back({{"N", e.n_sites},
                     {"e_half", e.e_at_half},
                     {"e_two", e.e_at_two},
                     {"discrepancy", e.discrepancy}});
  }
  return {{"N", r.n_sites},
          {"bx", r.bx},
          {"bulk_terms", r.bulk_terms},
          {"bulk_mapped", r.bulk_mapped},
          {"symbolic_residual", r.symbolic_residual},
          {"boundary", r.boundary},
          {"expected_boundary", r.expected_boundary},
          {"dual_algebra_ok", r.dual_algebra_ok},
          {"energy_trend", trend}};
}

nlohmann::json to_json(const ChiralitySweep& s) {
  json pts = json::array();
  for (const auto& p : s.points) {
    pts.push_back({{"tau", p.tau},
                   {"energy", p.energy},
                   {"gap", p.gap},
                   {"ground_degeneracy", p.ground_degeneracy},
                   {"degenerate", p.degenerate},
                   {"center_mean", p.center_mean},
                   {"center_mean_abs", p.center_mean_abs},
                   {"outer_mean_abs", p.outer_mean_abs},
                   {"max_abs_chi", p.max_abs},
                   {"max_plaquette", p.max_index},
                   {"max_class", to_string(p.max_class)},
                   {"boundary_mz", p.boundary_mz},
                   {"rotation_asymmetry", p.rotation_asymmetry}});
  }
  return {{"boundary_field", s.boundary_field}, {"points", pts}};
}

std::filesystem::path make_run_directory(const std::filesystem::path& out_dir,
                                         const std::string& experiment) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream name;
  name << experiment << '_' << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  std::filesystem::create_directories(out_dir);
  std::filesystem::path dir = out_dir / name.str();
  for (int i = 1; std::filesystem::exists(dir); ++i) {
    dir = out_dir / (name.str() + "_" + std::to_string(i));
  }
  std::filesystem::create_directory(dir);
  return dir;
}

void write_data(const std::filesystem::path& dir, const DegeneracyReport& r) {
  auto os = open_csv(dir / "data_spectrum.csv");
  os << "level,energy,residual\n";
  for (std::size_t i = 0; i < r.energies.size(); ++i) {
    os << i << ',' << r.energies[i] << ',' << r.residuals[i] << '\n';
  }
}

void write_data(const std::filesystem::path& dir, const CriticalityScan& s, bool bits) {
  auto os = open_csv(dir / "data_scan.csv");
  os << "Bx,energy,gap,ground_degeneracy,saturation,c_eff,c_err,fitted\n";
  for (const auto& p : s.points) {
    os << p.bx << ',' << p.energy << ',' << p.gap << ',' << p.ground_degeneracy << ','
       << p.saturation << ',' << p.fit.c_eff << ',' << p.fit.c_err << ',' << p.fit.fitted << '\n';
    auto curve = open_csv(dir / ("data_entropy_Bx" + fmt(p.bx) + ".csv"));
    write_csv(curve, p.curve, bits);
  }
}

void write_data(const std::filesystem::path& dir, const DualityReport& r) {
  auto os = open_csv(dir / "data_terms.csv");
  os << "source,image,coeff_re,coeff_im,matched\n";
  for (const auto& t : r.images) {
    os << '"' << t.source << "\",\"" << t.image << "\"," << t.coeff.real() << ',' << t.coeff.imag()
       << ',' << t.matched << '\n';
  }
  auto tr = open_csv(dir / "data_energy_trend.csv");
  tr << "N,e_half,e_two,discrepancy\n";
  for (const auto& e : r.trend) {
    tr << e.n_sites << ',' << e.e_at_half << ',' << e.e_at_two << ',' << e.discrepancy << '\n';
  }
}

void write_data(const std::filesystem::path& dir, const ChiralitySweep& s) {
  auto os = open_csv(dir / "data_sweep.csv");
  os << "tau,energy,gap,center_mean_abs,outer_mean_abs,max_abs_chi,max_class,boundary_mz\n";
  for (const auto& p : s.points) {
    os << p.tau << ',' << p.energy << ',' << p.gap << ',' << p.center_mean_abs << ','
       << p.outer_mean_abs << ',' << p.max_abs << ',' << to_string(p.max_class) << ','
       << p.boundary_mz << '\n';
    auto map = open_csv(dir / ("data_chirality_tau" + fmt(p.tau) + ".csv"));
    write_csv(map, p.map);
  }
}

}  // namespace trispin
