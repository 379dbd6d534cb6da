#include "trispin/effective_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "trispin/engine.hpp"
#include "trispin/error.hpp"
#include "trispin/lattice.hpp"

namespace trispin {

namespace {

constexpr int kTriangleSites = 3;
constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};

void patterns(int n_sites, int n, int cap, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  const int site = static_cast<int>(cur.size());
  if (site == n_sites - 1) {
    if (n <= cap) {
      cur.push_back(n);
      out.push_back(cur);
      cur.pop_back();
    }
    return;
  }
  for (int k = std::min(n, cap); k >= 0; --k) {
    cur.push_back(k);
    patterns(n_sites, n - k, cap, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> patterns(int n_sites, int n, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  patterns(n_sites, n, cap, cur, out);
  return out;
}

bool single_occupancy(const FockState& s) {
  for (std::size_t k = 0; k < s.up.size(); ++k) {
    if (s.up[k] + s.dn[k] != 1) return false;
  }
  return true;
}

int spin_index(const FockState& s) {
  int b = 0;
  for (std::size_t k = 0; k < s.dn.size(); ++k) b |= s.dn[k] << k;
  return b;
}

const std::vector<std::pair<int, int>>& triangle_bonds() {
  static const std::vector<std::pair<int, int>> bonds = {{1, 0}, {2, 1}, {0, 2}};
  return bonds;
}

int letter_code(const std::string& letters) {
  if (letters.size() != kTriangleSites) throw InvalidArgument("expected 3 Pauli letters");
  int code = 0;
  for (int k = kTriangleSites - 1; k >= 0; --k) {
    const auto* it = std::find(std::begin(kLetters), std::end(kLetters), letters[k]);
    if (it == std::end(kLetters)) throw InvalidArgument("bad Pauli letter in " + letters);
    code = 4 * code + static_cast<int>(it - std::begin(kLetters));
  }
  return code;
}

std::string letters_of(const PauliString& p) {
  std::string s(static_cast<std::size_t>(p.n_sites()), 'I');
  for (int k = 0; k < p.n_sites(); ++k) s[k] = to_char(p.letter(k));
  return s;
}

// Average of the letter-string coefficients of op, each weighted by the
// inverse of its own coefficient in op.
double project_onto(const std::array<double, 64>& pauli, const OperatorSum& op) {
  double sum = 0.0;
  for (const auto& t : op.terms()) {
    sum += pauli_coefficient(pauli, letters_of(t)) / t.coeff().real();
  }
  return sum / static_cast<double>(op.size());
}

OperatorSum dm_triangle(double tau3) {
  OperatorSum op(kTriangleSites);
  for (auto [a, b] : std::array<std::pair<int, int>, 3>{{{0, 1}, {1, 2}, {2, 0}}}) {
    op += PauliString(kTriangleSites, {{a, Pauli::X}, {b, Pauli::Y}}, tau3);
    op += PauliString(kTriangleSites, {{a, Pauli::Y}, {b, Pauli::X}}, -tau3);
  }
  return op;
}

}  // namespace

double BoseHubbardSpec::perturbative_ratio() const {
  const double u = std::min({U_uu, U_dd, U_ud});
  return std::max(std::abs(J_up), std::abs(J_dn)) / u;
}

void BoseHubbardSpec::validate() const {
  if (!(U_uu > 0.0 && U_dd > 0.0 && U_ud > 0.0)) {
    throw InvalidArgument("collisional couplings must be positive");
  }
  if (n_max < 2) throw InvalidArgument("n_max must be at least 2 to hold double occupancy");
  if (!(perturbative_ratio() < 0.5)) {
    throw InvalidArgument("|J|/U = " + std::to_string(perturbative_ratio()) +
                          " outside the perturbative guard (< 0.5)");
  }
}

HubbardBlock build_hubbard(int n_sites, const std::vector<std::pair<int, int>>& bonds, int n_up,
                           int n_dn, const BoseHubbardSpec& spec) {
  spec.validate();
  if (n_sites < 1 || n_up < 0 || n_dn < 0) throw InvalidArgument("build_hubbard: bad sizes");
  for (auto [a, b] : bonds) {
    if (a < 0 || b < 0 || a >= n_sites || b >= n_sites || a == b) {
      throw InvalidArgument("build_hubbard: bad bond");
    }
  }

  HubbardBlock blk;
  blk.n_sites = n_sites;
  const auto ups = patterns(n_sites, n_up, spec.n_max);
  const auto dns = patterns(n_sites, n_dn, spec.n_max);
  for (const auto& u : ups) {
    for (const auto& d : dns) blk.basis.push_back({u, d});
  }
  const auto dim = static_cast<Eigen::Index>(blk.basis.size());
  blk.H = Eigen::MatrixXcd::Zero(dim, dim);

  auto find = [&](const FockState& s) {
    const auto it = std::find_if(blk.basis.begin(), blk.basis.end(), [&](const FockState& t) {
      return t.up == s.up && t.dn == s.dn;
    });
    return static_cast<Eigen::Index>(it - blk.basis.begin());
  };

  for (Eigen::Index i = 0; i < dim; ++i) {
    const FockState& s = blk.basis[static_cast<std::size_t>(i)];
    double diag = 0.0;
    for (int k = 0; k < n_sites; ++k) {
      diag += 0.5 * spec.U_uu * s.up[k] * (s.up[k] - 1) + 0.5 * spec.U_dd * s.dn[k] * (s.dn[k] - 1) +
              spec.U_ud * s.up[k] * s.dn[k];
    }
    blk.H(i, i) = diag;

    for (int species = 0; species < 2; ++species) {
      const Complex J = species == 0 ? spec.J_up : spec.J_dn;
      const auto& occ = species == 0 ? s.up : s.dn;
      for (auto [a, b] : bonds) {
        // a+_a a_b with amplitude -J, and its conjugate a+_b a_a.
        for (int dir = 0; dir < 2; ++dir) {
          const int to = dir == 0 ? a : b;
          const int from = dir == 0 ? b : a;
          if (occ[from] == 0 || occ[to] == spec.n_max) continue;
          FockState t = s;
          auto& n = species == 0 ? t.up : t.dn;
          const double amp = std::sqrt(static_cast<double>(n[from])) *
                             std::sqrt(static_cast<double>(n[to] + 1));
          --n[from];
          ++n[to];
          blk.H(find(t), i) += -(dir == 0 ? J : std::conj(J)) * amp;
        }
      }
    }
  }
  return blk;
}

HubbardBlock build_hubbard_triangle(const BoseHubbardSpec& spec) {
  HubbardBlock out;
  out.n_sites = kTriangleSites;
  std::vector<HubbardBlock> sectors;
  Eigen::Index dim = 0;
  for (int n_up = 0; n_up <= kTriangleSites; ++n_up) {
    sectors.push_back(build_hubbard(kTriangleSites, triangle_bonds(), n_up, kTriangleSites - n_up, spec));
    dim += sectors.back().H.rows();
  }
  out.H = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::Index off = 0;
  for (const auto& s : sectors) {
    out.H.block(off, off, s.H.rows(), s.H.cols()) = s.H;
    out.basis.insert(out.basis.end(), s.basis.begin(), s.basis.end());
    off += s.H.rows();
  }
  return out;
}

EffectiveBlock effective_hamiltonian(const BoseHubbardSpec& spec) {
  spec.validate();
  Matrix8 X = Matrix8::Zero();
  std::array<double, 8> energy{};
  std::array<int, 8> row_spin{};
  int filled = 0;
  double min_overlap = 1.0;

  // Species numbers are conserved, so each sector is diagonalized on its own.
  for (int n_up = 0; n_up <= kTriangleSites; ++n_up) {
    const HubbardBlock blk =
        build_hubbard(kTriangleSites, triangle_bonds(), n_up, kTriangleSites - n_up, spec);
    std::vector<Eigen::Index> p;
    for (std::size_t i = 0; i < blk.basis.size(); ++i) {
      if (single_occupancy(blk.basis[i])) p.push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(blk.H);
    if (eig.info() != Eigen::Success) throw NumericalError("effective_hamiltonian: eigensolver failed");
    const auto& vecs = eig.eigenvectors();

    std::vector<double> overlap(static_cast<std::size_t>(vecs.cols()), 0.0);
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
      for (Eigen::Index r : p) overlap[c] += std::norm(vecs(r, c));
    }
    std::vector<Eigen::Index> order(overlap.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return overlap[a] > overlap[b]; });

    for (std::size_t j = 0; j < p.size(); ++j) {
      const Eigen::Index c = order[j];
      min_overlap = std::min(min_overlap, overlap[c]);
      energy[filled + j] = eig.eigenvalues()(c);
      for (std::size_t r = 0; r < p.size(); ++r) {
        X(filled + static_cast<Eigen::Index>(r), filled + static_cast<Eigen::Index>(j)) = vecs(p[r], c);
      }
      row_spin[filled + j] = spin_index(blk.basis[static_cast<std::size_t>(p[j])]);
    }
    filled += static_cast<int>(p.size());
  }
  if (filled != 8) throw NumericalError("effective_hamiltonian: single-occupancy subspace is not 8-dimensional");
  if (min_overlap < 0.6) {
    throw NumericalError("non-perturbative regime: single-occupancy overlap " +
                         std::to_string(min_overlap));
  }

  Eigen::JacobiSVD<Matrix8> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix8 W = svd.matrixU() * svd.matrixV().adjoint();
  Eigen::Matrix<double, 8, 1> e;
  for (int j = 0; j < 8; ++j) e(j) = energy[j];
  const Matrix8 h_rows = W * e.cast<Complex>().asDiagonal() * W.adjoint();

  EffectiveBlock out;
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) out.h(row_spin[a], row_spin[b]) = h_rows(a, b);
  }
  std::sort(energy.begin(), energy.end());
  out.energies = energy;
  out.min_overlap = min_overlap;
  return out;
}

double pauli_coefficient(const std::array<double, 64>& pauli, const std::string& letters) {
  return pauli[static_cast<std::size_t>(letter_code(letters))];
}

EffectiveCouplings extract_couplings(const Matrix8& h) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument("extract_couplings: input is not Hermitian");
  }

  EffectiveCouplings c;
  for (int code = 0; code < 64; ++code) {
    std::string letters(kTriangleSites, 'I');
    for (int k = 0, x = code; k < kTriangleSites; ++k, x /= 4) letters[k] = kLetters[x % 4];
    OperatorSum p(kTriangleSites);
    p += PauliString(kTriangleSites, {{0, pauli_from_char(letters[0])},
                                      {1, pauli_from_char(letters[1])},
                                      {2, pauli_from_char(letters[2])}});
    c.pauli[code] = (h * dense_matrix(p)).trace().real() / 8.0;
  }

  auto mean_of = [&](std::initializer_list<const char*> labels) {
    double s = 0.0;
    for (const char* l : labels) s += pauli_coefficient(c.pauli, l);
    return s / static_cast<double>(labels.size());
  };
  c.identity = pauli_coefficient(c.pauli, "III");
  c.B = {mean_of({"XII", "IXI", "IIX"}), mean_of({"YII", "IYI", "IIY"}),
         mean_of({"ZII", "IZI", "IIZ"})};
  c.lambda1 = mean_of({"ZZI", "IZZ", "ZIZ"});
  c.lambda2 = mean_of({"XXI", "YYI", "IXX", "IYY", "XIX", "YIY"});
  c.lambda3 = pauli_coefficient(c.pauli, "ZZZ");
  c.lambda4 = mean_of({"XZX", "YZY", "ZXX", "ZYY", "XXZ", "YYZ"});

  const LatticeGraph tri = triangle();
  const Matrix8 rest = h - c.identity * Matrix8::Identity() -
                       Matrix8(dense_matrix(build_three_spin_model(tri, c.as_couplings())));
  c.residual = rest.norm();

  const OperatorSum chi = chirality_operator(kTriangleSites, {0, 1, 2});
  c.extended.tau3 = project_onto(c.pauli, dm_triangle(1.0));
  c.extended.tau4 = project_onto(c.pauli, chi);
  const Matrix8 rest_ext = rest - Matrix8(dense_matrix(dm_triangle(c.extended.tau3))) -
                           c.extended.tau4 * Matrix8(dense_matrix(chi));
  c.extended.residual = rest_ext.norm();
  return c;
}

std::vector<SurfacePoint> coupling_surface(const std::vector<double>& jup_over_u,
                                           const std::vector<double>& jdn_over_u,
                                           const BoseHubbardSpec& tmpl) {
  const double u = tmpl.U_ud;
  auto phase_of = [](Complex j) { return std::abs(j) > 0.0 ? j / std::abs(j) : Complex(1.0); };
  std::vector<SurfacePoint> out(jup_over_u.size() * jdn_over_u.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    SurfacePoint& pt = out[idx];
    pt.jup_over_u = jup_over_u[idx / jdn_over_u.size()];
    pt.jdn_over_u = jdn_over_u[idx % jdn_over_u.size()];
    BoseHubbardSpec s = tmpl;
    s.J_up = pt.jup_over_u * u * phase_of(tmpl.J_up);
    s.J_dn = pt.jdn_over_u * u * phase_of(tmpl.J_dn);
    try {
      pt.couplings = extract_couplings(effective_hamiltonian(s).h);
      pt.ok = true;
    } catch (const Error& e) {
      pt.error = e.what();
    }
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<SurfacePoint>& surface) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "Jup_over_U,Jdn_over_U,B_x,B_y,B_z,lambda1,lambda2,lambda3,lambda4,residual\n";
  for (const auto& p : surface) {
    os << p.jup_over_u << ',' << p.jdn_over_u;
    if (p.ok) {
      const auto& c = p.couplings;
      os << ',' << c.B.x << ',' << c.B.y << ',' << c.B.z << ',' << c.lambda1 << ',' << c.lambda2
         << ',' << c.lambda3 << ',' << c.lambda4 << ',' << c.residual << '\n';
    } else {
      os << ",nan,nan,nan,nan,nan,nan,nan,nan\n";
    }
  }
  os.precision(old);
}

}  // namespace trispin
