#pragma once

// Test-side reference implementations. Nothing here calls into the library
// beyond reading term letters and coefficients.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "trispin/effective_coupling.hpp"
#include "trispin/pauli.hpp"

namespace oracle {

using cd = std::complex<double>;

inline Eigen::Matrix2cd pauli2(trispin::Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case trispin::Pauli::I: m << 1, 0, 0, 1; break;
    case trispin::Pauli::X: m << 0, 1, 1, 0; break;
    case trispin::Pauli::Y: m << 0, cd(0, -1), cd(0, 1), 0; break;
    case trispin::Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Site 0 is the least significant factor: kron(s_{n-1}, ..., s_0).
inline Eigen::MatrixXcd kron_string(const trispin::PauliString& p) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int s = p.n_sites() - 1; s >= 0; --s) m = kron(m, pauli2(p.letter(s)));
  return p.coeff() * m;
}

inline Eigen::MatrixXcd kron_sum(const trispin::OperatorSum& h) {
  const Eigen::Index d = Eigen::Index{1} << h.n_sites();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : h.terms()) m += kron_string(t);
  return m;
}

inline Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Three-letter Pauli matrix, site 0 first in the string.
inline Eigen::Matrix<cd, 8, 8> pauli3(const std::string& s) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 2; k >= 0; --k) m = kron(m, pauli2(trispin::pauli_from_char(s[k])));
  return m;
}

inline trispin::OperatorSum random_hermitian(int n, int n_terms, std::mt19937_64& rng,
                                             bool real_only = false) {
  std::uniform_int_distribution<int> letter(0, 3);
  std::normal_distribution<double> g;
  trispin::OperatorSum h(n);
  for (int t = 0; t < n_terms; ++t) {
    std::vector<std::pair<int, trispin::Pauli>> ls;
    int n_y = 0;
    for (int s = 0; s < n; ++s) {
      const auto p = static_cast<trispin::Pauli>(letter(rng));
      if (p == trispin::Pauli::Y) ++n_y;
      if (p != trispin::Pauli::I) ls.emplace_back(s, p);
    }
    if (real_only && n_y % 2) continue;
    h += trispin::PauliString(n, std::span<const std::pair<int, trispin::Pauli>>(ls), g(rng));
  }
  return h;
}

/// Ways to place n bosons on `parts` sites with at most `cap` per site.
inline long capped_compositions(int n, int parts, int cap) {
  if (parts == 0) return n == 0 ? 1 : 0;
  long total = 0;
  for (int k = 0; k <= std::min(n, cap); ++k) total += capped_compositions(n - k, parts - 1, cap);
  return total;
}

// Two-species bosons on a triangle, three atoms in total, all species splits.
struct Fock {
  std::array<int, 3> up;
  std::array<int, 3> dn;
  bool operator<(const Fock& o) const { return std::tie(up, dn) < std::tie(o.up, o.dn); }
};

struct TriangleHubbard {
  std::vector<Fock> states;
  Eigen::MatrixXcd H;
};

inline TriangleHubbard triangle_hubbard(const trispin::BoseHubbardSpec& s) {
  TriangleHubbard out;
  const int c = s.n_max;
  for (int nu = 0; nu <= 3; ++nu)
    for (int a = 0; a <= c; ++a)
      for (int b = 0; b <= c; ++b)
        for (int e = 0; e <= c; ++e) {
          if (a + b + e != nu) continue;
          for (int f = 0; f <= c; ++f)
            for (int g = 0; g <= c; ++g)
              for (int h = 0; h <= c; ++h)
                if (f + g + h == 3 - nu) out.states.push_back({{a, b, e}, {f, g, h}});
        }
  std::map<Fock, int> index;
  for (int i = 0; i < static_cast<int>(out.states.size()); ++i) index[out.states[i]] = i;
  const int d = static_cast<int>(out.states.size());
  out.H = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const Fock& st = out.states[i];
    double e = 0;
    for (int k = 0; k < 3; ++k) {
      e += 0.5 * s.U_uu * st.up[k] * (st.up[k] - 1) + 0.5 * s.U_dd * st.dn[k] * (st.dn[k] - 1) +
           s.U_ud * st.up[k] * st.dn[k];
    }
    out.H(i, i) = e;
    for (int species = 0; species < 2; ++species) {
      const cd J = species == 0 ? s.J_up : s.J_dn;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const auto& occ = species == 0 ? st.up : st.dn;
          if (a == b || occ[b] == 0 || occ[a] == c) continue;
          Fock nx = st;
          auto& n = species == 0 ? nx.up : nx.dn;
          const double amp = std::sqrt(double(n[b])) * std::sqrt(double(n[a] + 1));
          n[b] -= 1;
          n[a] += 1;
          // a+_a a_b carries J when a follows b around 0 -> 1 -> 2 -> 0
          const cd Jab = ((a - b + 3) % 3 == 1) ? J : std::conj(J);
          out.H(index.at(nx), i) += -Jab * amp;
        }
    }
  }
  return out;
}

inline bool singly_occupied(const Fock& f) {
  for (int k = 0; k < 3; ++k)
    if (f.up[k] + f.dn[k] != 1) return false;
  return true;
}

inline int spin_index(const Fock& f) {
  int idx = 0;
  for (int k = 0; k < 3; ++k)
    if (f.dn[k] == 1) idx |= 1 << k;
  return idx;
}

/// P V R V P + P V R V R V P with R = -Q / H0 (the P block has H0 = 0 and
/// P V P = 0).
inline Eigen::Matrix<cd, 8, 8> third_order_block(const trispin::BoseHubbardSpec& s) {
  const TriangleHubbard t = triangle_hubbard(s);
  const Eigen::Index d = t.H.rows();
  Eigen::MatrixXcd H0 = t.H.diagonal().asDiagonal();
  Eigen::MatrixXcd V = t.H - H0;
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(d, d);
  std::vector<int> P;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (singly_occupied(t.states[i])) P.push_back(static_cast<int>(i));
    else R(i, i) = -1.0 / H0(i, i).real();
  }
  const Eigen::MatrixXcd full = V * R * V + V * R * V * R * V;
  Eigen::Matrix<cd, 8, 8> out = Eigen::Matrix<cd, 8, 8>::Zero();
  for (int a : P)
    for (int b : P) out(spin_index(t.states[a]), spin_index(t.states[b])) = full(a, b);
  return out;
}

}  // namespace oracle
