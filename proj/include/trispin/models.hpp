#pragma once

#include <complex>
#include <string>
#include <vector>

#include "trispin/lattice.hpp"
#include "trispin/pauli.hpp"

namespace trispin {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Uniform couplings of the two-species effective spin model: Zeeman field,
/// Ising (lambda1), XX (lambda2), ZZZ (lambda3) and the sigma^z-controlled
/// exchange XZX + YZY (lambda4).
struct Couplings1D {
  Vec3 B;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
};

/// Couplings of the imaginary-tunnelling model: Zeeman, Ising (tau1), XX
/// (tau2), Dzyaloshinskii-Moriya XY - YX (tau3), scalar chirality (tau4).
struct CouplingsChiral {
  Vec3 B;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;
  double tau4 = 0.0;
};

/// Two-spin couplings on edges whose site indices are not consecutive (modulo
/// wrap-around) are multiplied by `next_neighbor_weight`. On a triangular
/// chain these are the (k, k+2) rails.
struct EdgeWeights {
  double next_neighbor_weight = 1.0;
};

/// Effective three-spin Hamiltonian on a graph with triples:
///   sum_sites B.sigma + sum_edges [l1 ZZ + l2 (XX + YY)]
///   + sum_triples [l3 ZZZ + l4 (XZX + YZY)].
/// For chain windows (a, b, c) the controlling sigma^z sits on b. For
/// plaquettes each of the three sites takes the middle role once; ZZZ is
/// counted once per plaquette.
OperatorSum build_three_spin_model(const LatticeGraph& g, const Couplings1D& c,
                                   EdgeWeights w = {});

/// H(Bx, Bz) = -sum_j (Bx X_j + Bz Z_j) - sum_windows Z Z Z on a chain.
OperatorSum build_zzz_field_chain(const LatticeGraph& g, double bx, double bz);

struct DualPair {
  PauliString x_bar;  // Z_j Z_{j+1} Z_{j+2}
  PauliString z_bar;  // prod_{k>=0} X_{j-3k} X_{j-3k-1}, truncated at site 0
};

/// Dual spin operators of the ZZZ chain at site j; needs j + 2 < n_sites.
DualPair dual_operators(int j, int n_sites);
PauliString dual_x(int j, int n_sites);
/// Defined on every site; the string is cut at site 0.
PauliString dual_z(int j, int n_sites);

/// sum_i eps_{lmn} sigma^l_a sigma^m_b sigma^n_c = sigma_a . (sigma_b x sigma_c).
OperatorSum chirality_operator(int n_sites, const Triple& t);

/// Imaginary-tunnelling effective Hamiltonian: Zeeman, tau1 ZZ, tau2 (XX + YY)
/// and tau3 (X_i Y_j - Y_i X_j) on every stored edge (i, j), tau4 chirality
/// on every triple.
OperatorSum build_chiral_tunnelling_model(const LatticeGraph& g, const CouplingsChiral& c);

/// tau sum_edges sigma_i.sigma_j + sum_triangles sigma_i.(sigma_j x sigma_k)
/// - boundary_field sum_{boundary} Z. The chirality coupling is fixed to 1.
OperatorSum build_chiral_heisenberg_model(const LatticeGraph& g, double tau,
                                          double boundary_field);

/// Constant field gradient dBz/dx acting on an electric dipole d_e oriented
/// along x that encircles a planar polygon.
struct FieldGradientSpec {
  double dipole = 0.0;
  double dbz_dx = 0.0;
  std::vector<Point2> polygon;

  static FieldGradientSpec rectangle(double dipole, double dbz_dx, double width, double height);
};

struct LoopPhase {
  double phase = 0.0;               // radians
  double effective_charge_field = 0.0;  // q* B* = d_e dBz/dx
  double area = 0.0;                // signed, positive for counterclockwise loops
};

LoopPhase dipole_loop_phase(const FieldGradientSpec& spec);

/// |J| e^{i phi}.
std::complex<double> link_phase_to_coupling(double phi, double j_mag);

}  // namespace trispin
