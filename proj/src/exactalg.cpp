#include "voa/exactalg.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace voa {

Rat::Rat(long n, long d) : q_(n, d) {
  if (d == 0)
    throw std::domain_error("zero denominator");
  q_.canonicalize();
}

Rat Rat::parse(std::string_view s) {
  std::string str(s);
  if (str.empty())
    throw std::invalid_argument("empty rational");
  if (str[0] == '+')
    str.erase(0, 1);
  mpq_class q;
  if (q.set_str(str, 10) != 0)
    throw std::invalid_argument("bad rational: " + std::string(s));
  if (q.get_den() == 0)
    throw std::domain_error("zero denominator");
  q.canonicalize();
  return Rat(q);
}

Rat &Rat::operator/=(const Rat &o) {
  if (o.isZero())
    throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

long Rat::toLong() const {
  if (!isInteger() || !q_.get_num().fits_slong_p())
    throw std::range_error("not a machine integer: " + str());
  return q_.get_num().get_si();
}

std::ostream &operator<<(std::ostream &os, const Rat &r) { return os << r.str(); }

Rat binom(long top, long k) {
  if (k < 0)
    return Rat(0);
  if (top < 0) {
    // binom(-m, k) = (-1)^k binom(m+k-1, k)
    Rat r = binom(-top + k - 1, k);
    return (k % 2) ? -r : r;
  }
  if (k > top)
    return Rat(0);
  mpz_class z;
  mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(top), static_cast<unsigned long>(k));
  return Rat(z);
}

Rat binom(const Rat &top, long k) {
  if (k < 0)
    return Rat(0);
  if (top.isInteger())
    return binom(top.toLong(), k);
  Rat r(1);
  for (long i = 0; i < k; ++i)
    r *= (top - Rat(i)) / Rat(i + 1);
  return r;
}

// ---------------------------------------------------------------------------

namespace {
struct VarTable {
  std::mutex mu;
  std::vector<std::string> names;
  std::unordered_map<std::string, VarId> ids;
};
VarTable &vars() {
  static VarTable t;
  return t;
}
} // namespace

VarId var(std::string_view name) {
  auto &t = vars();
  std::lock_guard<std::mutex> g(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end())
    return it->second;
  VarId id = static_cast<VarId>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return id;
}

const std::string &varName(VarId v) {
  auto &t = vars();
  std::lock_guard<std::mutex> g(t.mu);
  return t.names.at(v);
}

bool findVar(std::string_view name, VarId &id) {
  auto &t = vars();
  std::lock_guard<std::mutex> g(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it == t.ids.end())
    return false;
  id = it->second;
  return true;
}

int Monom::degree() const {
  int d = 0;
  for (auto &p : e)
    d += p.second;
  return d;
}

int Monom::degreeIn(VarId v) const {
  for (auto &p : e)
    if (p.first == v)
      return p.second;
  return 0;
}

Monom Monom::times(const Monom &o) const {
  Monom r;
  r.e.reserve(e.size() + o.e.size());
  auto a = e.begin(), b = o.e.begin();
  while (a != e.end() || b != o.e.end()) {
    if (b == o.e.end() || (a != e.end() && a->first < b->first))
      r.e.push_back(*a++);
    else if (a == e.end() || b->first < a->first)
      r.e.push_back(*b++);
    else {
      r.e.emplace_back(a->first, static_cast<std::uint16_t>(a->second + b->second));
      ++a, ++b;
    }
  }
  return r;
}

bool Monom::divides(const Monom &o) const {
  for (auto &p : e)
    if (o.degreeIn(p.first) < p.second)
      return false;
  return true;
}

Monom Monom::without(VarId v) const {
  Monom r;
  for (auto &p : e)
    if (p.first != v)
      r.e.push_back(p);
  return r;
}

std::string Monom::str() const {
  std::string s;
  for (auto &p : e) {
    if (!s.empty())
      s += '*';
    s += varName(p.first);
    if (p.second > 1)
      s += '^' + std::to_string(p.second);
  }
  return s;
}

bool operator<(const Monom &a, const Monom &b) {
  int da = a.degree(), db = b.degree();
  if (da != db)
    return da < db;
  // larger exponent on a smaller variable id ranks higher
  std::size_t n = std::min(a.e.size(), b.e.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.e[i].first != b.e[i].first)
      return a.e[i].first > b.e[i].first;
    if (a.e[i].second != b.e[i].second)
      return a.e[i].second < b.e[i].second;
  }
  return a.e.size() < b.e.size();
}

// ---------------------------------------------------------------------------

PolyQ::PolyQ(const Rat &c) {
  if (!c.isZero())
    t_.emplace_back(Monom{}, c);
}

PolyQ PolyQ::variable(VarId v, int exp) {
  PolyQ p;
  Monom m;
  if (exp > 0)
    m.e.emplace_back(v, static_cast<std::uint16_t>(exp));
  p.t_.emplace_back(std::move(m), Rat(1));
  return p;
}

PolyQ PolyQ::monomial(const Monom &m, const Rat &c) {
  PolyQ p;
  if (!c.isZero())
    p.t_.emplace_back(m, c);
  return p;
}

Rat PolyQ::constant() const {
  if (!isConstant())
    throw std::logic_error("polynomial is not constant: " + str());
  return t_.empty() ? Rat(0) : t_[0].second;
}

Rat PolyQ::constantTerm() const {
  if (!t_.empty() && t_[0].first.isOne())
    return t_[0].second;
  return Rat(0);
}

int PolyQ::degree() const { return t_.empty() ? -1 : t_.back().first.degree(); }

int PolyQ::degreeIn(VarId v) const {
  int d = t_.empty() ? -1 : 0;
  for (auto &t : t_)
    d = std::max(d, t.first.degreeIn(v));
  return d;
}

PolyQ PolyQ::coeffIn(VarId v, int k) const {
  PolyBuilder b;
  for (auto &t : t_)
    if (t.first.degreeIn(v) == k)
      b.add(t.first.without(v), t.second);
  return b.build();
}

const PolyQ::Term &PolyQ::leading() const {
  if (t_.empty())
    throw std::logic_error("leading term of zero polynomial");
  return t_.back();
}

std::vector<VarId> PolyQ::variables() const {
  std::vector<VarId> v;
  for (auto &t : t_)
    for (auto &p : t.first.e)
      v.push_back(p.first);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void PolyQ::normalize(std::map<Monom, Rat> &&m) {
  t_.clear();
  t_.reserve(m.size());
  for (auto &kv : m)
    if (!kv.second.isZero())
      t_.emplace_back(kv.first, std::move(kv.second));
}

PolyQ &PolyQ::addScaled(const PolyQ &o, const Rat &c) {
  if (c.isZero() || o.t_.empty())
    return *this;
  std::vector<Term> r;
  r.reserve(t_.size() + o.t_.size());
  auto a = t_.begin();
  auto b = o.t_.begin();
  while (a != t_.end() || b != o.t_.end()) {
    if (b == o.t_.end() || (a != t_.end() && a->first < b->first))
      r.push_back(std::move(*a++));
    else if (a == t_.end() || b->first < a->first) {
      r.emplace_back(b->first, b->second * c);
      ++b;
    } else {
      Rat s = a->second + b->second * c;
      if (!s.isZero())
        r.emplace_back(std::move(a->first), std::move(s));
      ++a, ++b;
    }
  }
  t_ = std::move(r);
  return *this;
}

PolyQ &PolyQ::operator+=(const PolyQ &o) { return addScaled(o, Rat(1)); }
PolyQ &PolyQ::operator-=(const PolyQ &o) { return addScaled(o, Rat(-1)); }

PolyQ &PolyQ::operator*=(const Rat &c) {
  if (c.isZero()) {
    t_.clear();
    return *this;
  }
  for (auto &t : t_)
    t.second *= c;
  return *this;
}

PolyQ operator*(const PolyQ &a, const PolyQ &b) {
  if (a.isZero() || b.isZero())
    return PolyQ();
  if (a.isConstant())
    return b * a.t_[0].second;
  if (b.isConstant())
    return a * b.t_[0].second;
  std::map<Monom, Rat> acc;
  for (auto &x : a.t_)
    for (auto &y : b.t_) {
      auto m = x.first.times(y.first);
      auto it = acc.find(m);
      if (it == acc.end())
        acc.emplace(std::move(m), x.second * y.second);
      else
        it->second += x.second * y.second;
    }
  PolyQ r;
  r.normalize(std::move(acc));
  return r;
}

PolyQ &PolyQ::operator*=(const PolyQ &o) { return *this = *this * o; }

PolyQ PolyQ::operator-() const {
  PolyQ r = *this;
  for (auto &t : r.t_)
    t.second = -t.second;
  return r;
}

PolyQ PolyQ::pow(unsigned n) const {
  PolyQ r(1), b = *this;
  while (n) {
    if (n & 1)
      r *= b;
    n >>= 1;
    if (n)
      b = b * b;
  }
  return r;
}

bool operator<(const PolyQ &a, const PolyQ &b) {
  if (a.t_.size() != b.t_.size())
    return a.t_.size() < b.t_.size();
  for (std::size_t i = 0; i < a.t_.size(); ++i) {
    if (a.t_[i].first != b.t_[i].first)
      return a.t_[i].first < b.t_[i].first;
    if (a.t_[i].second != b.t_[i].second)
      return a.t_[i].second < b.t_[i].second;
  }
  return false;
}

PolyQ PolyQ::subst(VarId v, const PolyQ &value) const {
  std::map<VarId, PolyQ> m;
  m.emplace(v, value);
  return subst(m);
}

PolyQ PolyQ::subst(const std::map<VarId, PolyQ> &values) const {
  PolyQ r;
  std::map<std::pair<VarId, int>, PolyQ> powers;
  for (auto &t : t_) {
    PolyQ term = PolyQ::monomial(Monom{}, t.second);
    Monom rest;
    for (auto &p : t.first.e) {
      auto it = values.find(p.first);
      if (it == values.end()) {
        rest.e.push_back(p);
        continue;
      }
      auto key = std::make_pair(p.first, static_cast<int>(p.second));
      auto pw = powers.find(key);
      if (pw == powers.end())
        pw = powers.emplace(key, it->second.pow(p.second)).first;
      term = term * pw->second;
    }
    r += term * PolyQ::monomial(rest, Rat(1));
  }
  return r;
}

Rat PolyQ::content() const {
  if (t_.empty())
    return Rat(0);
  mpz_class g = 0, l = 1;
  for (auto &t : t_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.num().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.second.den().get_mpz_t());
  }
  mpq_class c(g, l);
  c.canonicalize();
  Rat r(c);
  return leading().second.sign() < 0 ? -r : r;
}

PolyQ PolyQ::primitive() const {
  if (t_.empty())
    return *this;
  return *this * (Rat(1) / content());
}

bool PolyQ::isAssociate(const PolyQ &o) const {
  if (isZero() || o.isZero())
    return isZero() && o.isZero();
  return primitive() == o.primitive();
}

PolyQ PolyQ::divExact(const PolyQ &d) const {
  if (d.isZero())
    throw std::domain_error("division by zero polynomial");
  if (d.isConstant())
    return *this * (Rat(1) / d.constant());
  PolyQ rem = *this, q;
  const Term &ld = d.leading();
  while (!rem.isZero()) {
    const Term &lr = rem.leading();
    if (!ld.first.divides(lr.first))
      throw std::domain_error("inexact polynomial division");
    Monom m;
    for (auto &p : lr.first.e) {
      int e = p.second - ld.first.degreeIn(p.first);
      if (e > 0)
        m.e.emplace_back(p.first, static_cast<std::uint16_t>(e));
    }
    PolyQ t = PolyQ::monomial(m, lr.second / ld.second);
    q += t;
    rem -= t * d;
  }
  return q;
}

std::string PolyQ::str() const {
  if (t_.empty())
    return "0";
  std::string s;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    Rat c = it->second;
    bool neg = c.sign() < 0;
    if (neg)
      c = -c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    if (it->first.isOne())
      s += c.str();
    else if (c == Rat(1))
      s += it->first.str();
    else
      s += c.str() + "*" + it->first.str();
  }
  return s;
}

std::ostream &operator<<(std::ostream &os, const PolyQ &p) { return os << p.str(); }

void PolyBuilder::add(const Monom &m, const Rat &c) {
  if (c.isZero())
    return;
  auto it = acc_.find(m);
  if (it == acc_.end())
    acc_.emplace(m, c);
  else
    it->second += c;
}

void PolyBuilder::add(const PolyQ &p, const Rat &c) {
  for (auto &t : p.terms())
    add(t.first, t.second * c);
}

PolyQ PolyBuilder::build() {
  PolyQ r;
  r.normalize(std::move(acc_));
  acc_.clear();
  return r;
}

PolyQ binomialPoly(const PolyQ &top, long k) {
  if (k < 0)
    return PolyQ();
  if (top.isConstant())
    return PolyQ(binom(top.constant(), k));
  PolyQ r(1);
  for (long i = 0; i < k; ++i)
    r = r * (top - PolyQ(Rat(i))) * Rat(1, i + 1);
  return r;
}

namespace {
struct PolyParser {
  std::string_view s;
  std::size_t p = 0;

  [[noreturn]] void fail(const std::string &why) const {
    throw std::invalid_argument("polynomial parse error at " + std::to_string(p) + ": " + why + " in '" +
                                std::string(s) + "'");
  }
  void skip() {
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p])))
      ++p;
  }
  bool eat(char c) {
    skip();
    if (p < s.size() && s[p] == c) {
      ++p;
      return true;
    }
    return false;
  }
  PolyQ expr() {
    PolyQ r;
    bool neg = eat('-');
    if (!neg)
      eat('+');
    r = term();
    if (neg)
      r = -r;
    for (;;) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        return r;
    }
  }
  PolyQ term() {
    PolyQ r = power();
    for (;;) {
      if (eat('*'))
        r = r * power();
      else if (eat('/')) {
        PolyQ d = power();
        if (!d.isConstant() || d.isZero())
          fail("division by a non-constant or zero");
        r *= Rat(1) / d.constant();
      } else
        return r;
    }
  }
  PolyQ power() {
    PolyQ b = atom();
    if (eat('^')) {
      skip();
      std::size_t q = p;
      while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])))
        ++p;
      if (q == p)
        fail("exponent must be a nonnegative integer");
      b = b.pow(static_cast<unsigned>(std::stoul(std::string(s.substr(q, p - q)))));
    }
    return b;
  }
  PolyQ atom() {
    skip();
    if (p >= s.size())
      fail("unexpected end");
    if (eat('(')) {
      PolyQ r = expr();
      if (!eat(')'))
        fail("missing )");
      return r;
    }
    if (eat('-'))
      return -power();
    std::size_t q = p;
    if (std::isdigit(static_cast<unsigned char>(s[p]))) {
      while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])))
        ++p;
      return PolyQ(Rat(mpz_class(std::string(s.substr(q, p - q)))));
    }
    if (std::isalpha(static_cast<unsigned char>(s[p])) || s[p] == '_') {
      while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])) || s[p] == '_'))
        ++p;
      return PolyQ::variable(s.substr(q, p - q));
    }
    fail(std::string("unexpected '") + s[p] + "'");
  }
};
} // namespace

PolyQ parsePoly(std::string_view text) {
  PolyParser ps{text};
  PolyQ r = ps.expr();
  ps.skip();
  if (ps.p != text.size())
    ps.fail("trailing input");
  return r;
}

// ---------------------------------------------------------------------------

UniPoly::UniPoly(VarId x, std::vector<PolyQ> coeffs) : x_(x), c_(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
  while (!c_.empty() && c_.back().isZero())
    c_.pop_back();
}

UniPoly UniPoly::from(const PolyQ &p, VarId x) {
  int d = p.degreeIn(x);
  std::vector<PolyQ> c;
  for (int k = 0; k <= d; ++k)
    c.push_back(p.coeffIn(x, k));
  return UniPoly(x, std::move(c));
}

const PolyQ &UniPoly::coeff(int k) const {
  static const PolyQ zero;
  return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : zero;
}

PolyQ UniPoly::toPoly() const {
  PolyQ r;
  for (std::size_t k = 0; k < c_.size(); ++k)
    r += c_[k] * PolyQ::variable(x_, static_cast<int>(k));
  return r;
}

UniPoly UniPoly::operator+(const UniPoly &o) const {
  std::vector<PolyQ> c(std::max(c_.size(), o.c_.size()));
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = coeff(static_cast<int>(k)) + o.coeff(static_cast<int>(k));
  return UniPoly(c_.empty() ? o.x_ : x_, std::move(c));
}

UniPoly UniPoly::operator-(const UniPoly &o) const {
  std::vector<PolyQ> c(std::max(c_.size(), o.c_.size()));
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = coeff(static_cast<int>(k)) - o.coeff(static_cast<int>(k));
  return UniPoly(c_.empty() ? o.x_ : x_, std::move(c));
}

UniPoly UniPoly::operator*(const PolyQ &s) const {
  std::vector<PolyQ> c;
  for (auto &p : c_)
    c.push_back(p * s);
  return UniPoly(x_, std::move(c));
}

UniPoly UniPoly::shift(int k) const {
  if (c_.empty())
    return *this;
  std::vector<PolyQ> c(static_cast<std::size_t>(k));
  c.insert(c.end(), c_.begin(), c_.end());
  return UniPoly(x_, std::move(c));
}

PseudoDivision pseudoDivide(const UniPoly &a, const UniPoly &b) {
  if (b.isZero())
    throw std::domain_error("pseudo-division by the zero polynomial");
  VarId x = b.var();
  int db = b.degree();
  UniPoly q(x, {}), r = a;
  int e = std::max(a.degree() - db + 1, 0);
  const PolyQ &lb = b.lc();
  while (!r.isZero() && r.degree() >= db) {
    int sh = r.degree() - db;
    PolyQ lr = r.lc();
    q = q * lb + UniPoly(x, {lr}).shift(sh);
    r = r * lb - b.shift(sh) * lr;
    --e;
  }
  PolyQ f = lb.pow(static_cast<unsigned>(std::max(e, 0)));
  return {q * f, r * f};
}

UniPoly normalizeContent(const UniPoly &p) {
  if (p.isZero())
    return p;
  PolyQ all = p.toPoly();
  Rat c = all.content();
  // sign: leading coefficient (in x) has a positive leading term
  Rat s = p.lc().leading().second * (Rat(1) / c);
  if (s.sign() < 0)
    c = -c;
  return p * PolyQ(Rat(1) / c);
}

std::vector<UniPoly> gChain(const UniPoly &a1, const UniPoly &a2) {
  if (a1.isZero() && a2.isZero())
    throw std::invalid_argument("gPoly of two zero polynomials");
  std::vector<UniPoly> chain;
  UniPoly a = a1, b = a2;
  if (a.degree() < b.degree())
    std::swap(a, b);
  chain.push_back(a);
  if (b.isZero())
    return chain;
  chain.push_back(b);
  while (true) {
    auto pd = pseudoDivide(a, b);
    if (pd.remainder.isZero())
      return chain;
    a = b;
    b = normalizeContent(pd.remainder);
    chain.push_back(b);
  }
}

UniPoly gPoly(const UniPoly &a1, const UniPoly &a2) { return normalizeContent(gChain(a1, a2).back()); }

} // namespace voa
