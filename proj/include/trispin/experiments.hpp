#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "trispin/engine.hpp"
#include "trispin/measure.hpp"
#include "trispin/models.hpp"

namespace trispin {

// ---------------------------------------------------------------- degeneracy

struct DegeneracyReport {
  int n_sites = 0;
  bool periodic = true;
  double bx = 0.0;
  std::vector<double> energies;  // five lowest
  std::vector<double> residuals;
  int ground_degeneracy = 0;
  double degeneracy_tol = 0.0;
  double gap = 0.0;                 // E_4 - E_0
  double ground_splitting = 0.0;    // E_3 - E_0
  double projector_fidelity = 0.0;  // tr(P_ground P_patterns) / 4
  std::vector<std::string> patterns;  // classical ground patterns, site 0 first
  OperatorSum hamiltonian{1};
};

/// Classical ground states of -sum ZZZ: the first two spins are free and every
/// window fixes the next one. Periodic chains keep only consistent patterns.
std::vector<std::uint64_t> zzz_product_patterns(int n_sites, bool periodic);

/// Five lowest levels of H(bx, 0) and the overlap of the four lowest with the
/// classical pattern span.
DegeneracyReport run_degeneracy_check(int n_sites, bool periodic, double bx,
                                      const SolverOptions& opts = {});

// --------------------------------------------------------------- criticality

struct LogFit {
  bool fitted = false;
  double c_eff = 0.0;  // 6 * slope of S_L against ln L
  double c_err = 0.0;  // 6 * standard error of the slope
  double intercept = 0.0;
  int l_min = 0;
  int l_max = 0;
};

/// Least-squares fit of S_L = a + (c/6) ln L over l_min <= L <= l_max.
LogFit fit_central_charge(const EntropyCurve& curve, int l_min, int l_max);

struct CriticalityPoint {
  double bx = 0.0;
  double energy = 0.0;
  double gap = 0.0;  // E_1 - E_0
  int ground_degeneracy = 0;
  bool degenerate = false;  // entropy taken on the solver's own ground vector
  EntropyCurve curve;
  double saturation = 0.0;  // S_Lmax - S_{Lmax-2}
  LogFit fit;
};

struct CriticalityScan {
  int n_sites = 0;
  bool periodic = false;
  std::vector<CriticalityPoint> points;

  /// Grid value with the largest fitted c_eff / saturation metric.
  double peak_by_c() const;
  double peak_by_saturation() const;
};

inline constexpr int kMaxScanSites = 19;

CriticalityScan run_criticality_scan(int n_sites, const std::vector<double>& bx_grid,
                                     bool periodic = false, const SolverOptions& opts = {});

/// start, start + step, ... up to stop inclusive (within step/1e6).
std::vector<double> linear_grid(double start, double stop, double step);

// ------------------------------------------------------------------ duality

struct TermImage {
  std::string source;  // e.g. "Z0 Z1 Z2"
  std::string image;   // dual-chain letters, empty when the dual string exits the chain
  Complex coeff = 0.0;
  bool matched = false;
};

struct EnergyTrend {
  int n_sites = 0;
  double e_at_half = 0.0;  // ground energy per site at Bx = 1/2
  double e_at_two = 0.0;   // ground energy per site at Bx = 2
  double discrepancy = 0.0;  // |e(2) - 2 e(1/2)|
};

struct DualityReport {
  int n_sites = 0;
  double bx = 0.0;
  std::vector<TermImage> images;
  int bulk_terms = 0;
  int bulk_mapped = 0;
  double symbolic_residual = 0.0;  // max |coefficient| mismatch over mapped terms
  std::vector<std::string> boundary;  // unmatched source terms and unreached target terms
  int expected_boundary = 0;          // 2 * (sites - windows)
  bool dual_algebra_ok = false;       // Pauli relations of the dual pair on the bulk
  std::vector<EnergyTrend> trend;
};

/// Maps each term of H(bx, 0) on an open chain through the dual operators and
/// compares with bx H(1/bx, 0). Energy trend over `trend_sizes` is optional.
DualityReport run_duality_report(int n_sites, double bx, const std::vector<int>& trend_sizes = {},
                                 const SolverOptions& opts = {});

// ------------------------------------------------------------------ hexagon

struct HexagonPoint {
  double tau = 0.0;
  double energy = 0.0;
  double gap = 0.0;
  int ground_degeneracy = 0;
  bool degenerate = false;
  ChiralityMap map;
  double center_mean_abs = 0.0;  // triangles incident on site 0
  double outer_mean_abs = 0.0;   // the remaining triangles
  double center_mean = 0.0;
  int max_index = 0;             // plaquette with the largest |chi|
  double max_abs = 0.0;
  EntanglementClass max_class = EntanglementClass::ConsistentWithProduct;
  double boundary_mz = 0.0;      // mean <sigma^z> over boundary sites
  double rotation_asymmetry = 0.0;  // max |chi(t) - chi(R t)| over 60-degree rotations
};

struct ChiralitySweep {
  double boundary_field = 0.0;
  std::vector<HexagonPoint> points;
};

inline constexpr double kDefaultBoundaryField = 10.0;

ChiralitySweep run_hexagon_sweep(const std::vector<double>& taus,
                                 double boundary_field = kDefaultBoundaryField,
                                 const SolverOptions& opts = {});

/// Triangles of hexagon19() incident on the central site.
std::vector<int> hexagon_center_triangles(const LatticeGraph& g);

// ------------------------------------------------------------------ output

nlohmann::json to_json(const DegeneracyReport& r);
nlohmann::json to_json(const CriticalityScan& s);
nlohmann::json to_json(const DualityReport& r);
nlohmann::json to_json(const ChiralitySweep& s);

/// Creates `<out_dir>/<experiment>_<UTC timestamp>`; a numeric suffix is
/// appended when the name is taken.
std::filesystem::path make_run_directory(const std::filesystem::path& out_dir,
                                         const std::string& experiment);

/// data_*.csv files for each report type.
void write_data(const std::filesystem::path& dir, const DegeneracyReport& r);
void write_data(const std::filesystem::path& dir, const CriticalityScan& s, bool bits = false);
void write_data(const std::filesystem::path& dir, const DualityReport& r);
void write_data(const std::filesystem::path& dir, const ChiralitySweep& s);

}  // namespace trispin
