#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "trispin/error.hpp"
#include "trispin/pauli.hpp"

namespace trispin {

/// Largest system the Lanczos solver accepts (2^24 amplitudes).
inline constexpr int kMaxSolverSites = 24;
/// Largest system the dense oracle accepts.
inline constexpr int kMaxDenseSites = 12;

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<StateVector> eigenvectors;
  std::vector<double> residual_norms;  // ||H v - E v||
  int ground_degeneracy = 0;
  double degeneracy_tol = 0.0;
  int iterations = 0;  // block expansions (Lanczos) or 1 (dense)
  bool real_arithmetic = false;
};

struct SolverOptions {
  int k = 1;                // eigenpairs wanted
  double tol = 1e-10;       // residual tolerance
  int max_iter = 2000;      // block expansions
  std::uint64_t seed = 20240531;
  int block_size = 0;       // 0: use k
  int max_basis = 0;        // 0: automatic
  bool allow_real = true;   // real-symmetric fast path when the operator permits
};

/// max(1e-9, 1e-12 * ||H||_1).
double degeneracy_tolerance(const OperatorSum& h);

/// Thrown when the solver exhausts max_iter; carries the best residuals.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : NumericalError(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/**
 * Lowest k eigenpairs of a Hermitian operator by thick-restart block Lanczos
 * with full reorthogonalization.
 *
 * The start block (width = block_size, default k) is drawn from a seeded
 * generator; blocks that lose rank during expansion are refilled with fresh
 * random directions, so degenerate manifolds up to the block width are fully
 * resolved. The projected matrix is accumulated explicitly from <v_i|H v_j>,
 * which keeps Rayleigh-Ritz exact across restarts. When the operator is real
 * in the computational basis the iteration runs in real arithmetic.
 */
SpectrumResult ground_states(const OperatorSum& h, const SolverOptions& opts = {});

/// Matrix of h in the computational basis; n_sites <= 12.
Eigen::MatrixXcd dense_matrix(const OperatorSum& h);

/// Full spectrum by dense Hermitian diagonalization; n_sites <= 12.
SpectrumResult dense_oracle(const OperatorSum& h);

}  // namespace trispin
