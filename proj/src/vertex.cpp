#include "voa/vertex.hpp"

#include "mode_kernel.hpp"
#include "voa/twisted.hpp"

#include <mutex>
#include <unordered_map>

namespace voa {

namespace detail {

State create(int gen, int deg2, const State &s) {
  CreationOp op{static_cast<std::uint8_t>(gen), static_cast<std::int16_t>(deg2)};
  State r(s.module());
  for (auto &kv : s.terms())
    r.add(kv.first.with(op), kv.second);
  return r;
}

namespace {

struct Key {
  const ModuleKind *mod;
  int n2;
  Monomial a, s;
  friend bool operator==(const Key &x, const Key &y) {
    return x.mod == y.mod && x.n2 == y.n2 && x.a == y.a && x.s == y.s;
  }
};

struct KeyHash {
  std::size_t operator()(const Key &k) const {
    std::size_t h = std::hash<const void *>()(k.mod) ^ (static_cast<std::size_t>(k.n2 + 1000) * 0x9e3779b97f4a7c15ULL);
    for (auto &o : k.a.ops)
      h = h * 1315423911u + (o.gen * 4096u + static_cast<unsigned>(o.deg2));
    h ^= 0x5bd1e995;
    for (auto &o : k.s.ops)
      h = h * 2654435761u + (o.gen * 4096u + static_cast<unsigned>(o.deg2));
    return h;
  }
};

struct Cache {
  std::mutex mu;
  std::unordered_map<Key, State, KeyHash> map;
  std::vector<ModulePtr> keepAlive;
};

Cache &cache() {
  static Cache c;
  return c;
}

// binom((-k2-2)/2, m-1) in doubled units
Rat modeBinom(int k2, int m) {
  if (k2 % 2 == 0)
    return binom(static_cast<long>(-k2 / 2 - 1), m - 1);
  return binom(Rat(-k2 - 2, 2), m - 1);
}

State compute(const Monomial &a, int n2, const Monomial &s, const ModulePtr &mod) {
  State res(mod);
  if (a.ops.empty()) {
    if (n2 == -2)
      res.add(s, PolyQ(1));
    return res;
  }
  const bool tw = mod->twisted();
  const int D2 = s.deg2();
  const CreationOp last = a.ops.back();
  const int g = last.gen, m = last.deg2 / 2;
  Monomial rest = a;
  rest.ops.pop_back();
  const int wr2 = rest.deg2();

  // creation part, k < 0: h(k) rest_{n-k-m} s, with rest_j s = 0 for j > wt rest + deg s - 1
  int kmin2 = n2 - 2 * m - wr2 - D2 + 2;
  int kstart = tw ? -1 : -2;
  for (int k2 = kstart; k2 >= kmin2; k2 -= 2) {
    int j2 = n2 - k2 - 2 * m;
    State inner = monoProduct(rest, j2, s, mod);
    if (inner.isZero())
      continue;
    res.addScaled(create(g, -k2, inner), PolyQ(modeBinom(k2, m)));
  }
  // annihilation part, k >= 0: rest_{n-k-m} h(k) s
  if (mod->kind == BaseKind::Exp) {
    const PolyQ &lam = mod->lam.at(g - 1);
    if (!lam.isZero()) {
      State inner = monoProduct(rest, n2 - 2 * m, s, mod);
      res.addScaled(inner, lam * PolyQ(modeBinom(0, m)));
    }
  }
  for (std::size_t idx = 0; idx < s.ops.size(); ++idx) {
    const CreationOp &o = s.ops[idx];
    if (o.gen != g || (idx > 0 && s.ops[idx - 1] == o))
      continue;
    int k2 = o.deg2;
    int cnt = s.count(o);
    Monomial t = s.without(o);
    Rat c = modeBinom(k2, m) * Rat(cnt) * Rat(k2, 2);
    State inner = monoProduct(rest, n2 - k2 - 2 * m, t, mod);
    res.addScaled(inner, PolyQ(c));
  }
  return res;
}

} // namespace

State monoProduct(const Monomial &a, int n2, const Monomial &s, const ModulePtr &mod) {
  // resulting creation degree (doubled) must be nonnegative
  if (a.deg2() + s.deg2() - n2 - 2 < 0)
    return State(mod);
  if (a.ops.empty())
    return compute(a, n2, s, mod);
  auto &c = cache();
  Key key{mod.get(), n2, a, s};
  {
    std::lock_guard<std::mutex> g(c.mu);
    auto it = c.map.find(key);
    if (it != c.map.end())
      return it->second;
  }
  State r = compute(a, n2, s, mod);
  std::lock_guard<std::mutex> g(c.mu);
  if (c.keepAlive.empty() || c.keepAlive.back() != mod) {
    bool found = false;
    for (auto &p : c.keepAlive)
      if (p == mod)
        found = true;
    if (!found)
      c.keepAlive.push_back(mod);
  }
  c.map.emplace(std::move(key), r);
  return r;
}

} // namespace detail

void clearProductCache() {
  auto &c = detail::cache();
  std::lock_guard<std::mutex> g(c.mu);
  c.map.clear();
  c.keepAlive.clear();
}

std::size_t productCacheSize() {
  auto &c = detail::cache();
  std::lock_guard<std::mutex> g(c.mu);
  return c.map.size();
}

State heisMode(int i, int k2, const State &s) {
  const ModulePtr &mod = s.module();
  bool odd = (k2 % 2) != 0;
  if (odd != mod->twisted())
    throw std::invalid_argument(mod->twisted() ? "twisted module needs half-integer modes"
                                               : "untwisted module needs integer modes");
  if (k2 < 0)
    return detail::create(i, -k2, s);
  if (k2 == 0) {
    if (mod->kind == BaseKind::Exp)
      return s * mod->lam.at(i - 1);
    return State(mod);
  }
  CreationOp o{static_cast<std::uint8_t>(i), static_cast<std::int16_t>(k2)};
  State r(mod);
  for (auto &kv : s.terms()) {
    int cnt = kv.first.count(o);
    if (cnt)
      r.add(kv.first.without(o), kv.second * PolyQ(Rat(cnt) * Rat(k2, 2)));
  }
  return r;
}

State nProduct(const VAElement &a, int n, const State &b) {
  if (b.module()->twisted())
    throw std::invalid_argument("use twistedNProduct");
  State r(b.module());
  for (auto &x : a.terms())
    for (auto &y : b.terms()) {
      State t = detail::monoProduct(x.first, 2 * n, y.first, b.module());
      r.addScaled(t, x.second * y.second);
    }
  return r;
}

State modeAction(const VAElement &a, int n2, const State &s) {
  if (s.module()->twisted())
    return twistedNProduct(a, n2, s);
  if (n2 % 2)
    throw std::invalid_argument("half-integer mode on an untwisted module");
  return nProduct(a, n2 / 2, s);
}

std::vector<std::pair<int, VAElement>> commutatorTable(const VAElement &a, const VAElement &b) {
  std::vector<std::pair<int, VAElement>> out;
  int top = elementWeight(a) + elementWeight(b) - 1;
  for (int k = 0; k <= top; ++k) {
    State p = nProduct(a, k, b);
    if (!p.isZero())
      out.emplace_back(k, p);
  }
  return out;
}

State evalCommutator(const VAElement &a, int i, const VAElement &b, int j, const State &s) {
  State r(s.module());
  for (auto &[k, ab] : commutatorTable(a, b)) {
    Rat c = binom(static_cast<long>(i), k);
    if (c.isZero())
      continue;
    r.addScaled(modeAction(ab, 2 * (i + j - k), s), PolyQ(c));
  }
  return r;
}

std::optional<Rat> epsilonOf(const VAElement &a, const State &u) {
  if (a.isZero() || u.isZero())
    return std::nullopt;
  int wa2 = creationDeg2(a);
  int du2 = creationDeg2(u);
  // a_k u has creation degree wt a + deg u - k - 1 >= 0
  int top2 = wa2 + du2 - 2;
  bool tw = u.module()->twisted();
  bool odd = tw && (static_cast<int>(a.terms().begin()->first.size()) % 2 == 1);
  if (tw && ((top2 % 2 != 0) != odd))
    top2 -= 1;
  if (!tw && top2 % 2)
    top2 -= 1;
  for (int k2 = top2; k2 >= top2 - 128; k2 -= 2)
    if (!modeAction(a, k2, u).isZero())
      return Rat(k2, 2);
  return std::nullopt;
}

bool isOmegaVector(const State &u, int rank) {
  auto below = [&](const VAElement &a, int bound) {
    auto e = epsilonOf(a, u);
    return !e || *e <= Rat(bound);
  };
  for (int i = 1; i <= rank; ++i) {
    if (!below(omega(rank, i), 1) || !below(harH(rank, i), 3))
      return false;
  }
  for (int l = 1; l <= rank; ++l)
    for (int m = 1; m < l; ++m)
      for (int r = 1; r <= 3; ++r)
        if (!below(S(rank, l, m, 1, r), r))
          return false;
  return true;
}

} // namespace voa
