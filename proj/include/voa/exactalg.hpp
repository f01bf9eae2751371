#ifndef VOA_EXACTALG_HPP
#define VOA_EXACTALG_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace voa {

/// Exact rational number; always stored in lowest terms with positive denominator.
class Rat {
public:
  Rat() = default;
  Rat(long n) : q_(n) {}
  Rat(int n) : q_(static_cast<long>(n)) {}
  Rat(long n, long d);
  explicit Rat(const mpq_class &q) : q_(q) { q_.canonicalize(); }
  explicit Rat(const mpz_class &z) : q_(z) {}

  /// Parses "p", "-p/q".
  static Rat parse(std::string_view s);

  Rat &operator+=(const Rat &o) { q_ += o.q_; return *this; }
  Rat &operator-=(const Rat &o) { q_ -= o.q_; return *this; }
  Rat &operator*=(const Rat &o) { q_ *= o.q_; return *this; }
  Rat &operator/=(const Rat &o);
  friend Rat operator+(Rat a, const Rat &b) { return a += b; }
  friend Rat operator-(Rat a, const Rat &b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat &b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat &b) { return a /= b; }
  Rat operator-() const { return Rat(mpq_class(-q_)); }

  friend bool operator==(const Rat &a, const Rat &b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rat &a, const Rat &b) { return a.q_ != b.q_; }
  friend bool operator<(const Rat &a, const Rat &b) { return a.q_ < b.q_; }
  friend bool operator>(const Rat &a, const Rat &b) { return a.q_ > b.q_; }
  friend bool operator<=(const Rat &a, const Rat &b) { return a.q_ <= b.q_; }
  friend bool operator>=(const Rat &a, const Rat &b) { return a.q_ >= b.q_; }

  bool isZero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  bool isInteger() const { return q_.get_den() == 1; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  /// Integer value; throws if not an integer or out of range.
  long toLong() const;
  std::string str() const { return q_.get_str(); }
  const mpq_class &raw() const { return q_; }

private:
  mpq_class q_;
};

/// Integer binomial with the generalized convention for negative top.
Rat binom(long top, long k);
/// Binomial top(top-1)...(top-k+1)/k! with rational top.
Rat binom(const Rat &top, long k);

// ---------------------------------------------------------------------------
// Indeterminates are interned by name; ids are stable for the process.

using VarId = std::uint16_t;
VarId var(std::string_view name);
const std::string &varName(VarId v);
/// Returns true and sets id when a variable of this name was interned.
bool findVar(std::string_view name, VarId &id);

/// Exponent vector: sorted (variable, exponent>0) pairs.
struct Monom {
  std::vector<std::pair<VarId, std::uint16_t>> e;

  int degree() const;
  int degreeIn(VarId v) const;
  Monom times(const Monom &o) const;
  bool divides(const Monom &o) const;
  Monom without(VarId v) const;
  bool isOne() const { return e.empty(); }
  std::string str() const;
  friend bool operator==(const Monom &a, const Monom &b) { return a.e == b.e; }
  friend bool operator!=(const Monom &a, const Monom &b) { return a.e != b.e; }
};
/// Graded order: total degree, then lexicographic on the pair list.
bool operator<(const Monom &a, const Monom &b);

class PolyQ {
public:
  using Term = std::pair<Monom, Rat>;

  PolyQ() = default;
  PolyQ(const Rat &c);
  PolyQ(long c) : PolyQ(Rat(c)) {}
  PolyQ(int c) : PolyQ(Rat(static_cast<long>(c))) {}
  static PolyQ variable(VarId v, int exp = 1);
  static PolyQ variable(std::string_view name, int exp = 1) { return variable(var(name), exp); }
  static PolyQ monomial(const Monom &m, const Rat &c);

  bool isZero() const { return t_.empty(); }
  bool isConstant() const { return t_.empty() || (t_.size() == 1 && t_[0].first.isOne()); }
  /// Constant term value; throws unless isConstant().
  Rat constant() const;
  Rat constantTerm() const;
  std::size_t size() const { return t_.size(); }
  const std::vector<Term> &terms() const { return t_; }

  int degree() const;
  int degreeIn(VarId v) const;
  /// Coefficient of v^k, as a polynomial in the remaining variables.
  PolyQ coeffIn(VarId v, int k) const;
  /// Leading term in the graded order.
  const Term &leading() const;
  std::vector<VarId> variables() const;

  PolyQ &operator+=(const PolyQ &o);
  PolyQ &operator-=(const PolyQ &o);
  PolyQ &operator*=(const PolyQ &o);
  PolyQ &operator*=(const Rat &c);
  PolyQ &addScaled(const PolyQ &o, const Rat &c);
  friend PolyQ operator+(PolyQ a, const PolyQ &b) { return a += b; }
  friend PolyQ operator-(PolyQ a, const PolyQ &b) { return a -= b; }
  friend PolyQ operator*(const PolyQ &a, const PolyQ &b);
  friend PolyQ operator*(PolyQ a, const Rat &c) { return a *= c; }
  friend PolyQ operator*(const Rat &c, PolyQ a) { return a *= c; }
  PolyQ operator-() const;
  PolyQ pow(unsigned n) const;

  friend bool operator==(const PolyQ &a, const PolyQ &b) { return a.t_ == b.t_; }
  friend bool operator!=(const PolyQ &a, const PolyQ &b) { return !(a == b); }
  friend bool operator<(const PolyQ &a, const PolyQ &b);

  PolyQ subst(VarId v, const PolyQ &value) const;
  PolyQ subst(const std::map<VarId, PolyQ> &values) const;
  /// gcd of numerators over lcm of denominators, sign of the leading coefficient.
  Rat content() const;
  /// Divides by content(): integer coefficients, gcd 1, positive leading coefficient.
  PolyQ primitive() const;
  /// True if b == c * a for some nonzero rational c.
  bool isAssociate(const PolyQ &o) const;
  /// Exact division; throws if the divisor does not divide.
  PolyQ divExact(const PolyQ &d) const;

  /// Canonical text: terms in descending graded order, explicit rational coefficients.
  std::string str() const;

private:
  std::vector<Term> t_; // ascending by Monom, no zeros
  void normalize(std::map<Monom, Rat> &&m);
  friend class PolyBuilder;
};

std::ostream &operator<<(std::ostream &os, const Rat &r);
std::ostream &operator<<(std::ostream &os, const PolyQ &p);

/// Accumulates terms into a map and produces a PolyQ.
class PolyBuilder {
public:
  void add(const Monom &m, const Rat &c);
  void add(const PolyQ &p, const Rat &c = Rat(1));
  PolyQ build();

private:
  std::map<Monom, Rat> acc_;
};

/// binom(top, k) with polynomial top.
PolyQ binomialPoly(const PolyQ &top, long k);

/// Parses +, -, *, ^ (nonnegative integer exponent), / by a nonzero constant, parentheses,
/// integers and identifiers ([A-Za-z_][A-Za-z0-9_]*). Juxtaposition is not multiplication.
PolyQ parsePoly(std::string_view text);

// ---------------------------------------------------------------------------

/// Polynomial in one distinguished variable with PolyQ coefficients.
class UniPoly {
public:
  UniPoly() = default;
  UniPoly(VarId x, std::vector<PolyQ> coeffs);
  static UniPoly from(const PolyQ &p, VarId x);

  VarId var() const { return x_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
  bool isZero() const { return c_.empty(); }
  const PolyQ &lc() const { return c_.back(); }
  const PolyQ &coeff(int k) const;
  const std::vector<PolyQ> &coeffs() const { return c_; }
  PolyQ toPoly() const;

  UniPoly operator+(const UniPoly &o) const;
  UniPoly operator-(const UniPoly &o) const;
  UniPoly operator*(const PolyQ &c) const;
  UniPoly shift(int k) const; // multiply by x^k
  friend bool operator==(const UniPoly &a, const UniPoly &b) { return a.x_ == b.x_ && a.c_ == b.c_; }

  std::string str() const { return toPoly().str(); }

private:
  VarId x_ = 0;
  std::vector<PolyQ> c_;
  void trim();
};

struct PseudoDivision {
  UniPoly quotient;
  UniPoly remainder;
};

/// lc(b)^(deg a - deg b + 1) * a = quotient * b + remainder, deg remainder < deg b.
PseudoDivision pseudoDivide(const UniPoly &a, const UniPoly &b);

/// Last nonzero element of the pseudo-remainder chain, content-normalized.
UniPoly gPoly(const UniPoly &a1, const UniPoly &a2);
/// Same, returning the whole chain A1, A2, ..., A_{n} (last nonzero).
std::vector<UniPoly> gChain(const UniPoly &a1, const UniPoly &a2);

/// Rational content normalization of a univariate polynomial (all coefficients jointly).
UniPoly normalizeContent(const UniPoly &p);

} // namespace voa

#endif
