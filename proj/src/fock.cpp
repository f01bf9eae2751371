#include "voa/fock.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

namespace voa {

ModulePtr vacuumModule(int rank) {
  static std::mutex mu;
  static std::map<int, ModulePtr> cache;
  std::lock_guard<std::mutex> g(mu);
  auto &p = cache[rank];
  if (!p)
    p = std::make_shared<ModuleKind>(ModuleKind{BaseKind::Vacuum, rank, {}});
  return p;
}

ModulePtr expModule(int rank) {
  static std::mutex mu;
  static std::map<int, ModulePtr> cache;
  std::lock_guard<std::mutex> g(mu);
  auto &p = cache[rank];
  if (!p) {
    std::vector<PolyQ> lam;
    for (int i = 1; i <= rank; ++i)
      lam.push_back(PolyQ::variable("lam_" + std::to_string(i)));
    p = std::make_shared<ModuleKind>(ModuleKind{BaseKind::Exp, rank, lam});
  }
  return p;
}

ModulePtr expModule(std::vector<PolyQ> lam) {
  int r = static_cast<int>(lam.size());
  return std::make_shared<ModuleKind>(ModuleKind{BaseKind::Exp, r, std::move(lam)});
}

ModulePtr twistedModule(int rank) {
  static std::mutex mu;
  static std::map<int, ModulePtr> cache;
  std::lock_guard<std::mutex> g(mu);
  auto &p = cache[rank];
  if (!p)
    p = std::make_shared<ModuleKind>(ModuleKind{BaseKind::Twisted, rank, {}});
  return p;
}

bool sameModule(const ModulePtr &a, const ModulePtr &b) { return a == b || *a == *b; }

// ---------------------------------------------------------------------------

Monomial::Monomial(std::vector<CreationOp> o) : ops(std::move(o)) { std::sort(ops.begin(), ops.end()); }

int Monomial::deg2() const {
  int d = 0;
  for (auto &o : ops)
    d += o.deg2;
  return d;
}

Monomial Monomial::with(CreationOp op) const {
  Monomial r;
  r.ops.reserve(ops.size() + 1);
  auto it = std::upper_bound(ops.begin(), ops.end(), op);
  r.ops.insert(r.ops.end(), ops.begin(), it);
  r.ops.push_back(op);
  r.ops.insert(r.ops.end(), it, ops.end());
  return r;
}

int Monomial::count(CreationOp op) const {
  auto rg = std::equal_range(ops.begin(), ops.end(), op);
  return static_cast<int>(rg.second - rg.first);
}

Monomial Monomial::without(CreationOp op) const {
  Monomial r = *this;
  auto it = std::lower_bound(r.ops.begin(), r.ops.end(), op);
  if (it == r.ops.end() || !(*it == op))
    throw std::logic_error("monomial does not contain the operator");
  r.ops.erase(it);
  return r;
}

// ---------------------------------------------------------------------------

State::State(ModulePtr m, const Monomial &mono, const PolyQ &c) : mod_(std::move(m)) { add(mono, c); }

State State::base(const ModulePtr &m) { return State(m, Monomial{}, PolyQ(1)); }

PolyQ State::coeff(const Monomial &m) const {
  auto it = t_.find(m);
  return it == t_.end() ? PolyQ() : it->second;
}

State &State::add(const Monomial &m, const PolyQ &c) {
  if (c.isZero())
    return *this;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.isZero())
      t_.erase(it);
  }
  return *this;
}

State &State::addScaled(const State &o, const PolyQ &c) {
  if (c.isZero())
    return *this;
  if (t_.empty() && !o.t_.empty())
    mod_ = o.mod_;
  else if (!o.t_.empty() && !sameModule(mod_, o.mod_))
    throw std::invalid_argument("adding states of different modules");
  bool one = c.isConstant() && c.constant() == Rat(1);
  for (auto &kv : o.t_)
    add(kv.first, one ? kv.second : kv.second * c);
  return *this;
}

State &State::operator+=(const State &o) { return addScaled(o, PolyQ(1)); }
State &State::operator-=(const State &o) { return addScaled(o, PolyQ(-1)); }

State State::operator*(const PolyQ &c) const {
  State r(mod_);
  if (c.isZero())
    return r;
  for (auto &kv : t_)
    r.add(kv.first, kv.second * c);
  return r;
}

bool operator==(const State &a, const State &b) {
  if (a.t_.empty() || b.t_.empty())
    return a.t_.empty() && b.t_.empty();
  return sameModule(a.mod_, b.mod_) && a.t_ == b.t_;
}

State State::subst(const std::map<VarId, PolyQ> &values) const {
  State r(mod_);
  for (auto &kv : t_)
    r.add(kv.first, kv.second.subst(values));
  return r;
}

namespace {
std::string degStr(int deg2) {
  if (deg2 % 2 == 0)
    return std::to_string(-deg2 / 2);
  return "-" + std::to_string(deg2) + "/2";
}

std::string ketStr(const ModuleKind &m) {
  switch (m.kind) {
  case BaseKind::Vacuum:
    return "|0>";
  case BaseKind::Exp:
    return "|lam>";
  case BaseKind::Twisted:
    return "|tw>";
  }
  return "|?>";
}
} // namespace

std::string State::str() const {
  if (t_.empty())
    return "0";
  std::string out;
  // highest degree first
  std::vector<const Terms::value_type *> order;
  for (auto &kv : t_)
    order.push_back(&kv);
  std::stable_sort(order.begin(), order.end(), [](auto *a, auto *b) { return a->first.deg2() > b->first.deg2(); });
  for (auto *kv : order) {
    std::string mono;
    const auto &ops = kv->first.ops;
    for (std::size_t i = 0; i < ops.size();) {
      std::size_t j = i;
      while (j < ops.size() && ops[j] == ops[i])
        ++j;
      if (!mono.empty())
        mono += '*';
      mono += "h[" + std::to_string(ops[i].gen) + "](" + degStr(ops[i].deg2) + ")";
      if (j - i > 1)
        mono += "^" + std::to_string(j - i);
      i = j;
    }
    const PolyQ &c = kv->second;
    std::string cs;
    bool neg = false;
    if (c.isConstant()) {
      Rat r = c.constant();
      neg = r.sign() < 0;
      if (neg)
        r = -r;
      if (r != Rat(1))
        cs = r.str();
    } else {
      cs = "(" + c.str() + ")";
    }
    std::string term = cs;
    if (!mono.empty())
      term += (term.empty() ? "" : "*") + mono;
    else if (!term.empty())
      term += "*";
    term += ketStr(*mod_);
    if (out.empty())
      out = (neg ? "-" : "") + term;
    else
      out += (neg ? " - " : " + ") + term;
  }
  return out;
}

std::ostream &operator<<(std::ostream &os, const State &s) { return os << s.str(); }

// ---------------------------------------------------------------------------

PolyQ baseWeight(const ModuleKind &m) {
  switch (m.kind) {
  case BaseKind::Vacuum:
    return PolyQ();
  case BaseKind::Exp: {
    PolyQ w;
    for (auto &l : m.lam)
      w += l * l;
    return w * Rat(1, 2);
  }
  case BaseKind::Twisted:
    return PolyQ(Rat(m.rank, 16));
  }
  return PolyQ();
}

int creationDeg2(const State &s) {
  std::set<int> degs;
  for (auto &kv : s.terms())
    degs.insert(kv.first.deg2());
  if (degs.size() > 1) {
    std::string msg = "inhomogeneous state, degrees:";
    for (int d : degs)
      msg += " " + (d % 2 ? std::to_string(d) + "/2" : std::to_string(d / 2));
    throw std::invalid_argument(msg);
  }
  return degs.empty() ? 0 : *degs.begin();
}

PolyQ weight(const State &s) { return PolyQ(Rat(creationDeg2(s), 2)) + baseWeight(*s.module()); }

int elementWeight(const VAElement &a) {
  int d2 = creationDeg2(a);
  if (d2 % 2)
    throw std::invalid_argument("element has half-integer weight");
  return d2 / 2;
}

std::map<int, State> homogeneousParts(const State &s) {
  std::map<int, State> parts;
  for (auto &kv : s.terms()) {
    auto it = parts.find(kv.first.deg2());
    if (it == parts.end())
      it = parts.emplace(kv.first.deg2(), State(s.module())).first;
    it->second.add(kv.first, kv.second);
  }
  return parts;
}

State theta(const State &s) {
  if (s.module()->kind == BaseKind::Exp)
    throw std::invalid_argument("theta maps M(1,lambda) to M(1,-lambda); use thetaTwist");
  State r(s.module());
  for (auto &kv : s.terms())
    r.add(kv.first, kv.first.size() % 2 ? -kv.second : kv.second);
  return r;
}

State projectPlusMinus(const State &s, int sign) {
  State t = theta(s);
  return (sign >= 0 ? s + t : s - t) * PolyQ(Rat(1, 2));
}

std::uint32_t parityPattern(const Monomial &m) {
  std::uint32_t p = 0;
  for (auto &o : m.ops)
    p ^= (1u << (o.gen - 1));
  return p;
}

std::string patternStr(std::uint32_t p) {
  std::string s = "{";
  for (int i = 0; i < 32; ++i)
    if (p & (1u << i)) {
      if (s.size() > 1)
        s += ",";
      s += std::to_string(i + 1);
    }
  return s + "}";
}

// ---------------------------------------------------------------------------

namespace {
void checkGen(int rank, int i) {
  if (i < 1 || i > rank)
    throw std::out_of_range("generator index " + std::to_string(i) + " outside 1.." + std::to_string(rank));
}
void checkPair(int rank, int i, int j) {
  checkGen(rank, i);
  checkGen(rank, j);
  if (i == j)
    throw std::invalid_argument("indices must be distinct");
}
CreationOp op(int i, int m) { return CreationOp{static_cast<std::uint8_t>(i), static_cast<std::int16_t>(2 * m)}; }
State mono(int rank, std::initializer_list<CreationOp> ops, const Rat &c) {
  return State(vacuumModule(rank), Monomial(std::vector<CreationOp>(ops)), PolyQ(c));
}
} // namespace

VAElement vacuum(int rank) { return State::base(vacuumModule(rank)); }

VAElement heis(int rank, int i, int m) {
  checkGen(rank, i);
  return mono(rank, {op(i, m)}, Rat(1));
}

VAElement omega(int rank, int i) {
  checkGen(rank, i);
  return mono(rank, {op(i, 1), op(i, 1)}, Rat(1, 2));
}

VAElement omegaTotal(int rank) {
  State w(vacuumModule(rank));
  for (int i = 1; i <= rank; ++i)
    w += omega(rank, i);
  return w;
}

VAElement harH(int rank, int i) {
  checkGen(rank, i);
  return mono(rank, {op(i, 3), op(i, 1)}, Rat(1, 3)) + mono(rank, {op(i, 2), op(i, 2)}, Rat(-1, 3));
}

VAElement harJ(int rank, int i) {
  checkGen(rank, i);
  return mono(rank, {op(i, 1), op(i, 1), op(i, 1), op(i, 1)}, Rat(1)) + mono(rank, {op(i, 3), op(i, 1)}, Rat(-2)) +
         mono(rank, {op(i, 2), op(i, 2)}, Rat(3, 2));
}

VAElement S(int rank, int i, int j, int r, int s) {
  checkPair(rank, i, j);
  if (r < 1 || s < 1)
    throw std::invalid_argument("S(i,j;r,s) needs r,s >= 1");
  return mono(rank, {op(i, r), op(j, s)}, Rat(1));
}

namespace {
VAElement combo(int rank, int i, int j, std::initializer_list<long> c) {
  State e(vacuumModule(rank));
  int s = 2;
  for (long x : c)
    e.addScaled(S(rank, i, j, 1, s++), PolyQ(Rat(x)));
  return e;
}
} // namespace

VAElement Eu(int rank, int i, int j) { return combo(rank, i, j, {5, 25, 36, 16}); }
VAElement Et(int rank, int i, int j) { return combo(rank, i, j, {-16, 145, 19, 8}); }
VAElement Lambda(int rank, int i, int j) { return combo(rank, i, j, {45, 190, 240, 96}); }

VAElement generator(const std::string &name, int rank) {
  static const std::regex single(R"((omega|H|J)_(\d+))");
  static const std::regex pair(R"((Eu|Et|Lambda)\((\d+),(\d+)\))");
  static const std::regex sgen(R"(S\((\d+),(\d+);(\d+),(\d+)\))");
  std::smatch m;
  if (name == "omega")
    return omegaTotal(rank);
  if (std::regex_match(name, m, single)) {
    int i = std::stoi(m[2]);
    if (m[1] == "omega")
      return omega(rank, i);
    if (m[1] == "H")
      return harH(rank, i);
    return harJ(rank, i);
  }
  if (std::regex_match(name, m, pair)) {
    int i = std::stoi(m[2]), j = std::stoi(m[3]);
    if (m[1] == "Eu")
      return Eu(rank, i, j);
    if (m[1] == "Et")
      return Et(rank, i, j);
    return Lambda(rank, i, j);
  }
  if (std::regex_match(name, m, sgen))
    return S(rank, std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), std::stoi(m[4]));
  throw std::invalid_argument("unknown generator: " + name);
}

} // namespace voa
