#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "trispin/models.hpp"
#include "trispin/pauli.hpp"

namespace trispin {

/// Two-species Bose-Hubbard parameters on one triangle.
struct BoseHubbardSpec {
  Complex J_up = 0.0;
  Complex J_dn = 0.0;
  double U_uu = 1.0;
  double U_dd = 1.0;
  double U_ud = 1.0;
  int n_max = 3;  // per site, per species

  /// max |J| / min U.
  double perturbative_ratio() const;
  /// Throws InvalidArgument unless all U > 0, n_max >= 2 and the ratio is below 0.5.
  void validate() const;
  /// Ratio above 0.2: still accepted, callers should warn.
  bool beyond_comfort_zone() const { return perturbative_ratio() > 0.2; }
};

struct FockState {
  std::vector<int> up;
  std::vector<int> dn;
};

struct HubbardBlock {
  int n_sites = 0;
  std::vector<FockState> basis;
  Eigen::MatrixXcd H;
};

/// Hopping -J a+_a a_b - conj(J) a+_b a_a for every ordered bond (a, b).
/// Bonds and particle numbers are fixed; the basis holds every occupation
/// pattern with at most n_max bosons per site and species.
HubbardBlock build_hubbard(int n_sites, const std::vector<std::pair<int, int>>& bonds, int n_up,
                           int n_dn, const BoseHubbardSpec& spec);

/// Three sites, three atoms, every species split. Hopping along 0 -> 1 -> 2 -> 0
/// carries J, so the loop phase of J is the flux through the triangle.
HubbardBlock build_hubbard_triangle(const BoseHubbardSpec& spec);

using Matrix8 = Eigen::Matrix<Complex, 8, 8>;

struct EffectiveBlock {
  /// Spin basis: bit k set when site k holds the down atom.
  Matrix8 h;
  std::array<double, 8> energies{};  // the selected exact eigenvalues, ascending
  double min_overlap = 0.0;         // weight on single occupancy, worst selected state
};

/// Direct-rotation effective Hamiltonian on the single-occupancy subspace.
/// Throws NumericalError("non-perturbative regime") when a selected
/// eigenvector has overlap below 0.6.
EffectiveBlock effective_hamiltonian(const BoseHubbardSpec& spec);

/// Weights outside the uniform three-spin pattern that appear for complex
/// tunnelling: DM term (X_a Y_b - Y_a X_b) on the bonds 0->1->2->0 and the
/// scalar chirality.
struct ExtendedCouplings {
  double tau3 = 0.0;
  double tau4 = 0.0;
  double residual = 0.0;  // after also removing tau3 and tau4
};

struct EffectiveCouplings {
  Vec3 B;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  double identity = 0.0;  // c_I, excluded from the couplings
  double residual = 0.0;  // Frobenius norm of h - c_I - reconstruction
  ExtendedCouplings extended;
  /// tr(h P)/8 indexed by letter code l0 + 4 l1 + 16 l2 (I=0, X=1, Y=2, Z=3).
  std::array<double, 64> pauli{};

  Couplings1D as_couplings() const { return {B, lambda1, lambda2, lambda3, lambda4}; }
};

/// Pauli decomposition onto the uniform triangle couplings, averaging over
/// the sites, bonds and rotations that share a coupling.
EffectiveCouplings extract_couplings(const Matrix8& h);

/// tr(h P)/8 for one 3-site letter string, e.g. "XZX" (site 0 first).
double pauli_coefficient(const std::array<double, 64>& pauli, const std::string& letters);

struct SurfacePoint {
  double jup_over_u = 0.0;
  double jdn_over_u = 0.0;
  bool ok = false;
  EffectiveCouplings couplings;
  std::string error;
};

/// Effective couplings over a grid of J_up/U and J_dn/U, with U = U_ud of the
/// template. Failed points are recorded with their message.
std::vector<SurfacePoint> coupling_surface(const std::vector<double>& jup_over_u,
                                           const std::vector<double>& jdn_over_u,
                                           const BoseHubbardSpec& tmpl);

void write_csv(std::ostream& os, const std::vector<SurfacePoint>& surface);

}  // namespace trispin
