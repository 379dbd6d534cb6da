#include "trispin/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "trispin/error.hpp"

namespace trispin {

namespace {

constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

Complex i_pow(int e) { return kIPow[((e % 4) + 4) % 4]; }

void check_sites(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw InvalidArgument("n_sites must be in [1, 64], got " + std::to_string(n_sites));
  }
}

bool letter_less(const PauliString& a, const PauliString& b) {
  if (a.x_mask() != b.x_mask()) return a.x_mask() < b.x_mask();
  return a.z_mask() < b.z_mask();
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw InvalidArgument(std::string("unknown Pauli letter '") + c + "'");
  }
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(int n_sites, Complex coeff) : n_sites_(n_sites), coeff_(coeff) {
  check_sites(n_sites);
}

PauliString::PauliString(int n_sites, std::initializer_list<std::pair<int, Pauli>> letters,
                         Complex coeff)
    : PauliString(n_sites, std::span<const std::pair<int, Pauli>>(letters.begin(), letters.size()),
                  coeff) {}

PauliString::PauliString(int n_sites, std::span<const std::pair<int, Pauli>> letters,
                         Complex coeff)
    : PauliString(n_sites, coeff) {
  for (const auto& [site, p] : letters) {
    if (letter(site) != Pauli::I && p != Pauli::I) {
      throw InvalidArgument("site " + std::to_string(site) + " given twice");
    }
    set_letter(site, p);
  }
}

PauliString PauliString::single(int n_sites, int site, Pauli p, Complex coeff) {
  return PauliString(n_sites, {{site, p}}, coeff);
}

void PauliString::set_letter(int site, Pauli p) {
  if (site < 0 || site >= n_sites_) {
    throw InvalidArgument("site index " + std::to_string(site) + " out of range for " +
                          std::to_string(n_sites_) + " sites");
  }
  const std::uint64_t bit = std::uint64_t{1} << site;
  x_mask_ &= ~bit;
  z_mask_ &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x_mask_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z_mask_ |= bit;
}

Pauli PauliString::letter(int site) const {
  if (site < 0 || site >= n_sites_) {
    throw InvalidArgument("site index " + std::to_string(site) + " out of range");
  }
  const bool x = (x_mask_ >> site) & 1U;
  const bool z = (z_mask_ >> site) & 1U;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

std::vector<std::pair<int, Pauli>> PauliString::letters() const {
  std::vector<std::pair<int, Pauli>> out;
  std::uint64_t support = x_mask_ | z_mask_;
  while (support) {
    const int s = std::countr_zero(support);
    out.emplace_back(s, letter(s));
    support &= support - 1;
  }
  return out;
}

int PauliString::weight() const { return std::popcount(x_mask_ | z_mask_); }

int PauliString::y_count() const { return std::popcount(x_mask_ & z_mask_); }

bool PauliString::commutes_with(const PauliString& o) const {
  return ((std::popcount(x_mask_ & o.z_mask_) + std::popcount(z_mask_ & o.x_mask_)) & 1) == 0;
}

PauliString PauliString::with_coeff(Complex c) const {
  PauliString p = *this;
  p.coeff_ = c;
  return p;
}

std::string PauliString::label() const {
  if (is_identity()) return "I";
  std::string s;
  for (const auto& [site, p] : letters()) {
    if (!s.empty()) s += ' ';
    s += to_char(p);
    s += std::to_string(site);
  }
  return s;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.n_sites() != b.n_sites()) throw InvalidArgument("multiply: site count mismatch");
  // a = ca i^{ya} X^{xa} Z^{za}; moving Z^{za} past X^{xb} costs (-1)^{|za & xb|}.
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  const int y = std::popcount(x & z);
  const int e = a.y_count() + b.y_count() - y + 2 * std::popcount(a.z_mask() & b.x_mask());

  const Complex coeff = a.coeff() * b.coeff() * i_pow(e);
  std::vector<std::pair<int, Pauli>> letters;
  std::uint64_t support = x | z;
  while (support) {
    const int s = std::countr_zero(support);
    const bool xs = (x >> s) & 1U;
    const bool zs = (z >> s) & 1U;
    letters.emplace_back(s, xs && zs ? Pauli::Y : (xs ? Pauli::X : Pauli::Z));
    support &= support - 1;
  }
  return PauliString(a.n_sites(), letters, coeff);
}

// ---------------------------------------------------------------------------
// OperatorSum

OperatorSum::OperatorSum(int n_sites) : n_sites_(n_sites) { check_sites(n_sites); }

OperatorSum::OperatorSum(int n_sites, std::span<const PauliString> terms) : OperatorSum(n_sites) {
  for (const auto& t : terms) add(t);
}

OperatorSum& OperatorSum::add(const PauliString& term) {
  if (term.n_sites() != n_sites_) {
    throw InvalidArgument("term acts on " + std::to_string(term.n_sites()) + " sites, sum on " +
                          std::to_string(n_sites_));
  }
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term, letter_less);
  if (it != terms_.end() && it->same_letters(term)) {
    const Complex c = it->coeff() + term.coeff();
    if (std::abs(c) < kCoeffTolerance) {
      terms_.erase(it);
    } else {
      *it = it->with_coeff(c);
    }
  } else if (std::abs(term.coeff()) >= kCoeffTolerance) {
    terms_.insert(it, term);
  }
  return *this;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  for (const auto& t : other.terms_) add(t);
  return *this;
}

Complex OperatorSum::coefficient(const PauliString& letters) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), letters, letter_less);
  if (it != terms_.end() && it->same_letters(letters)) return it->coeff();
  return 0.0;
}

bool OperatorSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const PauliString& t) {
    return std::abs(t.coeff().imag()) <= tol * std::max(1.0, std::abs(t.coeff()));
  });
}

double OperatorSum::one_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff());
  return s;
}

bool OperatorSum::is_real_in_basis(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const PauliString& t) {
    const Complex c = t.coeff() * i_pow(t.y_count());
    return std::abs(c.imag()) <= tol * std::abs(c);
  });
}

OperatorSum operator*(Complex s, const OperatorSum& op) {
  OperatorSum out(op.n_sites_);
  for (const auto& t : op.terms_) out.add(t.with_coeff(s * t.coeff()));
  return out;
}

OperatorSum operator+(const OperatorSum& a, const OperatorSum& b) {
  OperatorSum out = a;
  out += b;
  return out;
}

void OperatorSum::write_text(std::ostream& os) const {
  os << "# n_sites " << n_sites_ << '\n';
  const auto old_prec = os.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& t : terms_) {
    os << t.coeff().real() << ' ' << t.coeff().imag();
    for (const auto& [site, p] : t.letters()) os << ' ' << site << ':' << to_char(p);
    os << '\n';
  }
  os.precision(old_prec);
}

std::string OperatorSum::to_text() const {
  std::ostringstream os;
  write_text(os);
  return os.str();
}

OperatorSum OperatorSum::read_text(std::istream& is, int default_sites) {
  int n_sites = default_sites;
  std::string line;
  int line_no = 0;
  std::vector<std::pair<int, std::string>> body;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string key;
      int n = 0;
      if (hs >> key >> n && key == "n_sites") n_sites = n;
      continue;
    }
    body.emplace_back(line_no, line);
  }
  if (n_sites <= 0) throw InvalidArgument("operator text has no '# n_sites' header");
  OperatorSum out(n_sites);
  for (const auto& [no, text] : body) {
    std::istringstream ls(text);
    double re = 0, im = 0;
    if (!(ls >> re >> im)) {
      throw InvalidArgument("line " + std::to_string(no) + ": expected 'coeff_re coeff_im'");
    }
    std::vector<std::pair<int, Pauli>> letters;
    std::string tok;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon + 2 != tok.size()) {
        throw InvalidArgument("line " + std::to_string(no) + ": bad token '" + tok + "'");
      }
      int site = 0;
      try {
        site = std::stoi(tok.substr(0, colon));
      } catch (const std::exception&) {
        throw InvalidArgument("line " + std::to_string(no) + ": bad site in '" + tok + "'");
      }
      letters.emplace_back(site, pauli_from_char(tok[colon + 1]));
    }
    out.add(PauliString(n_sites, letters, Complex(re, im)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > 30) throw InvalidArgument("state vectors support 1..30 sites");
  amps_.assign(std::size_t{1} << n_sites, Complex(0.0));
}

StateVector::StateVector(int n_sites, std::vector<Complex> amplitudes)
    : n_sites_(n_sites), amps_(std::move(amplitudes)) {
  if (n_sites < 1 || n_sites > 30) throw InvalidArgument("state vectors support 1..30 sites");
  if (amps_.size() != (std::size_t{1} << n_sites)) {
    throw InvalidArgument("amplitude count does not match 2^n_sites");
  }
}

StateVector StateVector::basis_state(int n_sites, std::uint64_t index) {
  StateVector v(n_sites);
  if (index >= v.dim()) throw InvalidArgument("basis index out of range");
  v.amps_[index] = 1.0;
  return v;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

StateVector& StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw NumericalError("cannot normalize the zero vector");
  for (auto& a : amps_) a /= n;
  return *this;
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.n_sites() != b.n_sites()) throw InvalidArgument("inner: site count mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// CompiledOperator

namespace {

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

}  // namespace

CompiledOperator::CompiledOperator(const OperatorSum& op) : n_sites_(op.n_sites()) {
  if (n_sites_ > 30) throw InvalidArgument("matrix-free action supports at most 30 sites");
  for (const auto& t : op.terms()) {
    auto it = std::find_if(groups_.begin(), groups_.end(),
                           [&](const Group& g) { return g.flip == t.x_mask(); });
    if (it == groups_.end()) {
      groups_.push_back(Group{t.x_mask(), {}, {}, {}});
      it = std::prev(groups_.end());
    }
    const Complex c = t.coeff() * i_pow(t.y_count());
    if (std::abs(c.imag()) > 1e-14 * std::abs(c)) real_ = false;
    it->z_masks.push_back(t.z_mask());
    it->coeffs.push_back(c);
    it->real_coeffs.push_back(c.real());
  }
  std::sort(groups_.begin(), groups_.end(),
            [](const Group& a, const Group& b) { return a.flip < b.flip; });
  if (groups_.empty() || groups_.front().flip != 0) return;

  const Group diag = std::move(groups_.front());
  groups_.erase(groups_.begin());
  const auto n = static_cast<std::int64_t>(dim());
  if (real_) {
    diag_real_.resize(dim());
  } else {
    diag_.resize(dim());
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t bi = 0; bi < n; ++bi) {
    const auto b = static_cast<std::uint64_t>(bi);
    Complex f = 0.0;
    for (std::size_t t = 0; t < diag.z_masks.size(); ++t) {
      f += parity_sign(b & diag.z_masks[t]) * diag.coeffs[t];
    }
    if (real_) {
      diag_real_[b] = f.real();
    } else {
      diag_[b] = f;
    }
  }
}

void CompiledOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != dim() || out.size() != dim()) {
    throw InvalidArgument("apply: vector length does not match 2^n_sites");
  }
  const auto n = static_cast<std::int64_t>(dim());
#pragma omp parallel for schedule(static)
  for (std::int64_t bi = 0; bi < n; ++bi) {
    const auto b = static_cast<std::uint64_t>(bi);
    Complex acc = diag_.empty() ? (diag_real_.empty() ? 0.0 : diag_real_[b]) : diag_[b];
    acc *= in[b];
    for (const auto& g : groups_) {
      const std::uint64_t src = b ^ g.flip;
      const Complex amp = in[src];
      Complex f = 0.0;
      for (std::size_t t = 0; t < g.z_masks.size(); ++t) {
        f += parity_sign(src & g.z_masks[t]) * g.coeffs[t];
      }
      acc += f * amp;
    }
    out[b] = acc;
  }
}

void CompiledOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (!real_) throw InvalidArgument("real kernel requested for a complex operator");
  if (in.size() != dim() || out.size() != dim()) {
    throw InvalidArgument("apply: vector length does not match 2^n_sites");
  }
  const auto n = static_cast<std::int64_t>(dim());
#pragma omp parallel for schedule(static)
  for (std::int64_t bi = 0; bi < n; ++bi) {
    const auto b = static_cast<std::uint64_t>(bi);
    double acc = diag_real_.empty() ? 0.0 : diag_real_[b] * in[b];
    for (const auto& g : groups_) {
      const std::uint64_t src = b ^ g.flip;
      double f = 0.0;
      for (std::size_t t = 0; t < g.z_masks.size(); ++t) {
        f += parity_sign(src & g.z_masks[t]) * g.real_coeffs[t];
      }
      acc += f * in[src];
    }
    out[b] = acc;
  }
}

StateVector apply(const OperatorSum& op, const StateVector& v) {
  if (op.n_sites() != v.n_sites()) {
    throw InvalidArgument("apply: operator has " + std::to_string(op.n_sites()) +
                          " sites, state has " + std::to_string(v.n_sites()));
  }
  StateVector out(v.n_sites());
  CompiledOperator(op).apply(v.amplitudes(), out.amplitudes());
  return out;
}

double expectation(const OperatorSum& op, const StateVector& v) {
  if (!op.is_hermitian()) throw InvalidArgument("expectation: operator is not Hermitian");
  const Complex e = inner(v, apply(op, v));
  if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
    throw NumericalError("expectation: imaginary residue " + std::to_string(e.imag()));
  }
  return e.real();
}

}  // namespace trispin
