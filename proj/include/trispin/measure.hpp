#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trispin/lattice.hpp"
#include "trispin/pauli.hpp"

namespace trispin {

/// Largest subsystem `reduce` will build densely.
inline constexpr int kMaxSubsystem = 14;

struct ReducedDensityMatrix {
  std::vector<int> subsystem;  // bit i of the row index is subsystem[i]
  Eigen::MatrixXcd matrix;
};

/// Partial trace of |v><v| over the complement of `subsystem`.
ReducedDensityMatrix reduce(const StateVector& v, const std::vector<int>& subsystem);

/// Von Neumann entropy -tr(rho ln rho) in nats. Eigenvalues in [-1e-12, 0) are
/// clamped to zero; anything below -1e-10 is a NumericalError.
double entropy(const ReducedDensityMatrix& rho);

struct EntropyPoint {
  int L = 0;
  double S = 0.0;  // nats
};

struct EntropyCurve {
  int n_sites = 0;
  std::vector<EntropyPoint> points;
  std::string parameters;  // free-form echo of the model parameters
};

/// S_L for the leftmost blocks {0..L-1}, L = 1..l_max.
EntropyCurve entropy_curve(const StateVector& v, int l_max);

void write_csv(std::ostream& os, const EntropyCurve& curve, bool bits = false);

/// <sigma^z_j> for every site.
std::vector<double> magnetization(const StateVector& v);

struct PlaquetteChirality {
  Triple triangle;
  Point2 centroid;
  double chi = 0.0;
};

struct ChiralityMap {
  std::vector<PlaquetteChirality> plaquettes;
};

/// <sigma_i . (sigma_j x sigma_k)> on every oriented triangle of g.
ChiralityMap chirality_map(const StateVector& v, const LatticeGraph& g);

void write_csv(std::ostream& os, const ChiralityMap& map);

enum class EntanglementClass { ConsistentWithProduct, RequiresBipartite, RequiresTripartite };

std::string to_string(EntanglementClass c);

/// Product states satisfy |chi| <= 1 and biseparable states |chi| <= 2; values
/// within 1e-9 of a threshold fall to the weaker class.
EntanglementClass classify_chirality(double chi);

struct WitnessReport {
  std::int64_t samples = 0;
  double max_product = 0.0;
  double max_bipartite = 0.0;
  double max_unconstrained = 0.0;
  double operator_norm = 0.0;  // largest |eigenvalue| of the 3-site chirality operator
  bool product_bound_holds = false;
  bool bipartite_bound_holds = false;
};

/// Samples Haar-random 3-qubit product states, pair (x) single states over all
/// three bipartitions, and unconstrained states; reports max |chi| per class.
WitnessReport witness_bound_check(std::int64_t n_samples, std::uint64_t seed = 7);

}  // namespace trispin
