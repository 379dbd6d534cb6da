#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trispin {

using Complex = std::complex<double>;

/// Largest chain the bitmask representation can address.
inline constexpr int kMaxSites = 64;

/// Terms with |coeff| below this are dropped when an OperatorSum is simplified.
inline constexpr double kCoeffTolerance = 1e-14;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/**
 * A coefficient times a tensor product of single-site Pauli matrices.
 *
 * Letters are held as two bitmasks: bit s of `x_mask` is set for X or Y on
 * site s, bit s of `z_mask` for Z or Y. The coefficient multiplies the
 * product of the literal Pauli matrices, so X0 Y1 with coeff 1 is exactly
 * sigma^x_0 sigma^y_1. Identity sites are implicit.
 */
class PauliString {
 public:
  explicit PauliString(int n_sites, Complex coeff = 1.0);
  PauliString(int n_sites, std::initializer_list<std::pair<int, Pauli>> letters,
              Complex coeff = 1.0);
  PauliString(int n_sites, std::span<const std::pair<int, Pauli>> letters,
              Complex coeff = 1.0);

  static PauliString single(int n_sites, int site, Pauli p, Complex coeff = 1.0);

  int n_sites() const { return n_sites_; }
  Complex coeff() const { return coeff_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }

  Pauli letter(int site) const;
  /// Non-identity letters in increasing site order.
  std::vector<std::pair<int, Pauli>> letters() const;
  int weight() const;
  bool is_identity() const { return (x_mask_ | z_mask_) == 0; }

  /// Number of Y letters; the string acts on basis states as
  /// coeff * i^{n_y} * X^{x_mask} Z^{z_mask}.
  int y_count() const;

  bool same_letters(const PauliString& o) const {
    return n_sites_ == o.n_sites_ && x_mask_ == o.x_mask_ && z_mask_ == o.z_mask_;
  }
  bool commutes_with(const PauliString& o) const;

  PauliString with_coeff(Complex c) const;
  PauliString adjoint() const { return with_coeff(std::conj(coeff_)); }

  /// "X0 Z2" style label of the letters (coefficient not included).
  std::string label() const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.same_letters(b) && a.coeff_ == b.coeff_;
  }

 private:
  void set_letter(int site, Pauli p);

  int n_sites_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
  Complex coeff_;
};

/// Product a*b with the accumulated phase folded into the coefficient.
PauliString multiply(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) { return multiply(a, b); }

/**
 * Sum of Pauli strings, kept canonical: sorted by letters, one entry per
 * distinct letter set, no terms with |coeff| < kCoeffTolerance.
 */
class OperatorSum {
 public:
  explicit OperatorSum(int n_sites);
  OperatorSum(int n_sites, std::span<const PauliString> terms);

  int n_sites() const { return n_sites_; }
  const std::vector<PauliString>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  OperatorSum& add(const PauliString& term);
  OperatorSum& operator+=(const PauliString& term) { return add(term); }
  OperatorSum& operator+=(const OperatorSum& other);

  /// Coefficient of the term with the given letters (0 if absent).
  Complex coefficient(const PauliString& letters) const;

  /// True when every coefficient is real within `tol` (each Pauli string is
  /// itself Hermitian).
  bool is_hermitian(double tol = 1e-12) const;

  /// Sum of |coeff|, an upper bound on the operator norm.
  double one_norm() const;

  /// True when the matrix is real in the computational basis.
  bool is_real_in_basis(double tol = 1e-14) const;

  friend OperatorSum operator*(Complex s, const OperatorSum& op);
  friend OperatorSum operator+(const OperatorSum& a, const OperatorSum& b);
  friend bool operator==(const OperatorSum& a, const OperatorSum& b) {
    return a.n_sites_ == b.n_sites_ && a.terms_ == b.terms_;
  }

  /// One term per line: `coeff_re coeff_im site:letter ...`, preceded by a
  /// `# n_sites N` header.
  void write_text(std::ostream& os) const;
  std::string to_text() const;
  /// Parses the text format. `n_sites` is taken from the header when present,
  /// otherwise from `default_sites` (which must then be positive).
  static OperatorSum read_text(std::istream& is, int default_sites = 0);

 private:
  int n_sites_;
  std::vector<PauliString> terms_;
};

/// Dense state over the 2^n computational basis. Bit s of the basis index is
/// site s; bit value 0 is spin up (sigma^z = +1).
class StateVector {
 public:
  explicit StateVector(int n_sites);
  StateVector(int n_sites, std::vector<Complex> amplitudes);

  static StateVector basis_state(int n_sites, std::uint64_t index);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](std::size_t i) { return amps_[i]; }

  double norm() const;
  StateVector& normalize();

 private:
  int n_sites_;
  std::vector<Complex> amps_;
};

/// <a|b>, conjugating the first argument.
Complex inner(const StateVector& a, const StateVector& b);

/**
 * Operator compiled for repeated matrix-free application: terms are grouped by
 * their X-flip mask so each output amplitude is a gather over the distinct
 * flips. When the matrix is real in the computational basis the real kernel
 * may be used.
 */
class CompiledOperator {
 public:
  explicit CompiledOperator(const OperatorSum& op);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return std::size_t{1} << n_sites_; }
  bool is_real() const { return real_; }

  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  /// Only valid when is_real().
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  struct Group {
    std::uint64_t flip;
    std::vector<std::uint64_t> z_masks;
    std::vector<Complex> coeffs;  // coeff * i^{n_y}
    std::vector<double> real_coeffs;
  };

  int n_sites_;
  bool real_ = true;
  std::vector<Group> groups_;  // flip != 0
  // Tabulated diagonal (flip == 0) part; one of the two is filled.
  std::vector<double> diag_real_;
  std::vector<Complex> diag_;
};

/// op|v> without forming the matrix.
StateVector apply(const OperatorSum& op, const StateVector& v);

/// <v|op|v> for Hermitian op; throws on non-Hermitian op or a non-negligible
/// imaginary residue.
double expectation(const OperatorSum& op, const StateVector& v);

}  // namespace trispin
