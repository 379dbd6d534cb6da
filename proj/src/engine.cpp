#include "trispin/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace trispin {

namespace {

// Reductions are summed per fixed-size chunk and the chunk partials are added
// in order, so results do not depend on the thread count.
constexpr std::int64_t kChunk = 1 << 14;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Col = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using ColMap = Eigen::Map<Col<S>>;

std::int64_t chunk_count(std::int64_t dim) { return (dim + kChunk - 1) / kChunk; }
std::int64_t chunk_len(std::int64_t dim, std::int64_t c) { return std::min(kChunk, dim - c * kChunk); }

template <class S>
using Strided = Eigen::OuterStride<>;

// V(:, col0:col0+cols)^H W for the nw dim-long columns starting at w.
template <class S>
Mat<S> project(const Mat<S>& V, int col0, int cols, const S* w, int nw) {
  const std::int64_t dim = V.rows();
  const std::int64_t n = chunk_count(dim);
  std::vector<Mat<S>> part(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < n; ++c) {
    const std::int64_t lo = c * kChunk, len = chunk_len(dim, c);
    const Eigen::Map<const Mat<S>, 0, Strided<S>> wc(w + lo, len, nw, Strided<S>(dim));
    part[c] = V.block(lo, col0, len, cols).adjoint() * wc;
  }
  Mat<S> out = Mat<S>::Zero(cols, nw);
  for (const auto& p : part) out += p;
  return out;
}

// W -= V(:, col0:col0+cols) C
template <class S>
void subtract(const Mat<S>& V, int col0, int cols, const Mat<S>& C, S* w, int nw) {
  const std::int64_t dim = V.rows();
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunk_count(dim); ++c) {
    const std::int64_t lo = c * kChunk, len = chunk_len(dim, c);
    Eigen::Map<Mat<S>, 0, Strided<S>> wc(w + lo, len, nw, Strided<S>(dim));
    wc.noalias() -= V.block(lo, col0, len, cols) * C;
  }
}

// V(:, 0:r) = V(:, 0:cols) C with C of shape cols x r, row chunk by row chunk.
template <class S>
void rotate(Mat<S>& V, int cols, const Mat<S>& C) {
  const std::int64_t dim = V.rows();
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunk_count(dim); ++c) {
    const std::int64_t lo = c * kChunk, len = chunk_len(dim, c);
    const Mat<S> tmp = V.block(lo, 0, len, cols) * C;
    V.block(lo, 0, len, C.cols()) = tmp;
  }
}

template <class S>
double norm(const S* w, std::int64_t dim) {
  const std::int64_t n = chunk_count(dim);
  std::vector<double> part(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < n; ++c) {
    const std::int64_t lo = c * kChunk;
    part[c] = Eigen::Map<const Col<S>>(w + lo, chunk_len(dim, c)).squaredNorm();
  }
  double s = 0.0;
  for (double p : part) s += p;
  return std::sqrt(s);
}

template <class S>
void fill_random(S* w, std::int64_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (std::int64_t i = 0; i < dim; ++i) {
    if constexpr (std::is_same_v<S, double>) {
      w[i] = gauss(rng);
    } else {
      const double re = gauss(rng);
      w[i] = S(re, gauss(rng));
    }
  }
}

template <class S>
S conj_if(S v) {
  if constexpr (std::is_same_v<S, double>) {
    return v;
  } else {
    return std::conj(v);
  }
}

template <class S>
class BlockLanczos {
 public:
  BlockLanczos(const CompiledOperator& op, const SolverOptions& opts)
      : op_(op), opts_(opts), dim_(static_cast<std::int64_t>(op.dim())), rng_(opts.seed) {
    const auto dim = static_cast<std::size_t>(dim_);
    k_ = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(opts.k), dim));
    b_ = opts.block_size > 0 ? opts.block_size : k_;
    b_ = std::min(b_, k_);
    int m = opts.max_basis > 0 ? opts.max_basis : std::max(40, 3 * k_ + 2 * b_);
    m = std::max(m, k_ + 2 * b_);
    max_basis_ = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(m), dim));
    keep_ = std::min(std::max(k_, std::min(max_basis_ - b_, max_basis_ / 2)), max_basis_);
    V_.resize(dim_, max_basis_);
    T_ = Mat<S>::Zero(max_basis_, max_basis_);
  }

  SpectrumResult run() {
    Mat<S> start(dim_, b_);
    fill_random(start.data(), dim_ * b_, rng_);
    append_block(start, nullptr);

    int iterations = 0;
    std::vector<double> residuals;
    while (true) {
      iterations += expand(opts_.max_iter - iterations);
      const int e = size_;
      Eigen::SelfAdjointEigenSolver<Mat<S>> eig(T_.topLeftCorner(e, e));
      if (eig.info() != Eigen::Success) throw NumericalError("projected eigenproblem failed");
      const auto& theta = eig.eigenvalues();

      const int n_ritz = std::min(keep_, e);
      rotate(V_, e, Mat<S>(eig.eigenvectors().leftCols(n_ritz)));
      const int want = std::min(k_, n_ritz);
      Mat<S> resid(dim_, want);
      residuals.assign(static_cast<std::size_t>(want), 0.0);
      bool converged = true;
      for (int i = 0; i < want; ++i) {
        apply(V_.col(i).data(), resid.col(i).data());
        resid.col(i) -= S(theta(i)) * V_.col(i);
        residuals[i] = norm(resid.col(i).data(), dim_);
        if (!(residuals[i] < opts_.tol)) converged = false;
      }
      if (converged || e == dim_) return finish(theta, residuals, iterations);
      if (iterations >= opts_.max_iter) {
        throw ConvergenceError("Lanczos did not converge in " + std::to_string(opts_.max_iter) +
                                   " block expansions",
                               residuals);
      }
      // Thick restart: keep the leading Ritz vectors, continue from the
      // residual directions of the lowest b unconverged ones.
      T_.setZero();
      for (int i = 0; i < n_ritz; ++i) T_(i, i) = S(theta(i));
      size_ = expanded_ = n_ritz;
      std::vector<int> open;
      for (int i = 0; i < want && static_cast<int>(open.size()) < b_; ++i) {
        if (!(residuals[i] < opts_.tol)) open.push_back(i);
      }
      Mat<S> next(dim_, static_cast<Eigen::Index>(open.size()));
      for (std::size_t i = 0; i < open.size(); ++i) next.col(i) = resid.col(open[i]);
      append_block(next, nullptr);
    }
  }

 private:
  void apply(const S* in, S* out) const {
    const auto n = static_cast<std::size_t>(dim_);
    op_.apply(std::span<const S>(in, n), std::span<S>(out, n));
  }

  // Full two-pass Gram-Schmidt of one vector against the basis; on rank loss
  // w is refilled at random. Appends and returns true on success.
  bool append_one(S* w, double before) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (attempt > 0) {
        fill_random(w, dim_, rng_);
        before = norm(w, dim_);
      }
      for (int pass = 0; pass < 2; ++pass) {
        subtract(V_, 0, size_, project(V_, 0, size_, w, 1), w, 1);
      }
      const double after = norm(w, dim_);
      if (after >= 1e-10 * before) {
        V_.col(size_) = ColMap<S>(w, dim_) / after;
        ++size_;
        return true;
      }
    }
    return false;
  }

  // Orthonormalizes the columns of W against the basis and each other and
  // appends them. `first` optionally holds the first-pass coefficients
  // against the leading first->rows() basis columns. Returns the count added.
  int append_block(Mat<S>& W, const Mat<S>* first) {
    const int nb = static_cast<int>(W.cols());
    std::vector<double> before(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) before[i] = norm(W.col(i).data(), dim_);
    if (first != nullptr) {
      subtract(V_, 0, static_cast<int>(first->rows()), *first, W.data(), nb);
    } else if (size_ > 0) {
      subtract(V_, 0, size_, project(V_, 0, size_, W.data(), nb), W.data(), nb);
    }
    if (size_ > 0) subtract(V_, 0, size_, project(V_, 0, size_, W.data(), nb), W.data(), nb);

    const int base = size_;
    int added = 0;
    for (int i = 0; i < nb && size_ < max_basis_ && size_ < dim_; ++i) {
      S* w = W.col(i).data();
      if (before[i] > 0.0) {
        for (int pass = 0; pass < 2 && size_ > base; ++pass) {
          subtract(V_, base, size_ - base, project(V_, base, size_ - base, w, 1), w, 1);
        }
        const double after = norm(w, dim_);
        if (after >= 1e-10 * before[i]) {
          V_.col(size_) = ColMap<S>(w, dim_) / after;
          ++size_;
          ++added;
          continue;
        }
      }
      if (append_one(w, before[i])) ++added;
    }
    return added;
  }

  // Applies H to every basis vector not yet expanded, fills the projected
  // matrix, and grows the basis with the new block until it is full.
  int expand(int budget) {
    int steps = 0;
    while (expanded_ < size_ && steps < std::max(budget, 1)) {
      const int lo = expanded_;
      const int hi = size_;
      Mat<S> W(dim_, hi - lo);
      for (int j = lo; j < hi; ++j) apply(V_.col(j).data(), W.col(j - lo).data());
      const Mat<S> C = project(V_, 0, hi, W.data(), hi - lo);
      for (int j = lo; j < hi; ++j) {
        for (int i = 0; i < j; ++i) {
          T_(i, j) = C(i, j - lo);
          T_(j, i) = conj_if(C(i, j - lo));
        }
        T_(j, j) = S(std::real(C(j, j - lo)));
      }
      expanded_ = hi;
      ++steps;
      if (size_ >= max_basis_ || size_ >= dim_) break;
      if (append_block(W, &C) == 0) break;
    }
    return steps;
  }

  template <class Values>
  SpectrumResult finish(const Values& theta, const std::vector<double>& residuals, int iterations) {
    SpectrumResult out;
    out.iterations = iterations;
    out.real_arithmetic = std::is_same_v<S, double>;
    const int n_sites = op_.n_sites();
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      out.eigenvalues.push_back(theta(static_cast<Eigen::Index>(i)));
      std::vector<Complex> amps(static_cast<std::size_t>(dim_));
      for (std::int64_t x = 0; x < dim_; ++x) amps[x] = Complex(V_(x, static_cast<Eigen::Index>(i)));
      StateVector v(n_sites, std::move(amps));
      v.normalize();
      out.eigenvectors.push_back(std::move(v));
    }
    out.residual_norms = residuals;
    return out;
  }

  const CompiledOperator& op_;
  SolverOptions opts_;
  std::int64_t dim_;
  std::mt19937_64 rng_;
  int k_ = 1;
  int b_ = 1;
  int max_basis_ = 1;
  int keep_ = 1;
  int size_ = 0;
  int expanded_ = 0;
  Mat<S> V_;
  Mat<S> T_;
};

void set_degeneracy(SpectrumResult& r, double tol) {
  r.degeneracy_tol = tol;
  r.ground_degeneracy = 0;
  for (double e : r.eigenvalues) {
    if (std::abs(e - r.eigenvalues.front()) < tol) ++r.ground_degeneracy;
  }
}

}  // namespace

double degeneracy_tolerance(const OperatorSum& h) { return std::max(1e-9, 1e-12 * h.one_norm()); }

SpectrumResult ground_states(const OperatorSum& h, const SolverOptions& opts) {
  if (!h.is_hermitian()) throw InvalidArgument("ground_states: operator is not Hermitian");
  if (h.n_sites() > kMaxSolverSites) {
    throw InvalidArgument("ground_states: at most " + std::to_string(kMaxSolverSites) + " sites");
  }
  if (opts.k < 1) throw InvalidArgument("ground_states: k must be >= 1");
  if (!(opts.tol > 0.0)) throw InvalidArgument("ground_states: tol must be positive");

  const CompiledOperator op(h);
  SpectrumResult r = (opts.allow_real && op.is_real())
                         ? BlockLanczos<double>(op, opts).run()
                         : BlockLanczos<Complex>(op, opts).run();
  set_degeneracy(r, degeneracy_tolerance(h));
  return r;
}

Eigen::MatrixXcd dense_matrix(const OperatorSum& h) {
  const int n = h.n_sites();
  if (n > kMaxDenseSites) {
    throw InvalidArgument("dense_matrix: at most " + std::to_string(kMaxDenseSites) + " sites");
  }
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  const Complex i_unit(0.0, 1.0);
  // Column by column, each letter acting on its own site.
  for (const auto& term : h.terms()) {
    const auto letters = term.letters();
    for (std::size_t col = 0; col < dim; ++col) {
      std::size_t row = col;
      Complex amp = term.coeff();
      for (const auto& [site, p] : letters) {
        const bool down = (row >> site) & 1U;
        switch (p) {
          case Pauli::X: row ^= std::size_t{1} << site; break;
          case Pauli::Y:
            row ^= std::size_t{1} << site;
            amp *= down ? -i_unit : i_unit;
            break;
          case Pauli::Z:
            if (down) amp = -amp;
            break;
          case Pauli::I: break;
        }
      }
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += amp;
    }
  }
  return m;
}

SpectrumResult dense_oracle(const OperatorSum& h) {
  if (!h.is_hermitian()) throw InvalidArgument("dense_oracle: operator is not Hermitian");
  const int n = h.n_sites();
  const Eigen::MatrixXcd m = dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
  if (eig.info() != Eigen::Success) throw NumericalError("dense_oracle: eigensolver failed");

  SpectrumResult r;
  r.iterations = 1;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    r.eigenvalues.push_back(eig.eigenvalues()(i));
    const Eigen::VectorXcd v = eig.eigenvectors().col(i);
    r.residual_norms.push_back((m * v - eig.eigenvalues()(i) * v).norm());
    r.eigenvectors.emplace_back(n, std::vector<Complex>(v.data(), v.data() + v.size()));
  }
  set_degeneracy(r, degeneracy_tolerance(h));
  return r;
}

}  // namespace trispin
