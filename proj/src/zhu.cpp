#include "voa/zhu.hpp"

#include "voa/twisted.hpp"
#include "voa/vertex.hpp"

#include <cstdlib>
#include <functional>

namespace voa {

namespace {
template <class F> VAElement byParts(const VAElement &a, const VAElement &b, F f) {
  State r(b.module());
  for (auto &[d2, part] : homogeneousParts(a)) {
    if (d2 % 2)
      throw std::invalid_argument("Zhu products need integer weights");
    r += f(part, d2 / 2);
  }
  return r;
}
} // namespace

VAElement star(const VAElement &a, const VAElement &b) {
  return byParts(a, b, [&](const VAElement &p, int w) {
    State r(b.module());
    for (int i = 0; i <= w; ++i)
      r.addScaled(nProduct(p, i - 1, b), PolyQ(binom(static_cast<long>(w), i)));
    return r;
  });
}

VAElement circ(const VAElement &a, const VAElement &b) {
  return byParts(a, b, [&](const VAElement &p, int w) {
    State r(b.module());
    for (int i = 0; i <= w; ++i)
      r.addScaled(nProduct(p, i - 2, b), PolyQ(binom(static_cast<long>(w), i)));
    return r;
  });
}

// ---------------------------------------------------------------------------

std::vector<Monomial> plusBasis(int rank, int maxWeight) {
  std::vector<Monomial> out;
  // all multisets of (gen, deg) with total degree <= maxWeight
  std::vector<CreationOp> cur;
  std::function<void(int, int, int)> rec = [&](int gen, int deg, int left) {
    if (cur.size() % 2 == 0)
      out.push_back(Monomial(cur));
    for (int g = gen; g <= rank; ++g)
      for (int d = (g == gen ? deg : 1); d <= left; ++d) {
        cur.push_back(CreationOp{static_cast<std::uint8_t>(g), static_cast<std::int16_t>(2 * d)});
        rec(g, d, left - d);
        cur.pop_back();
      }
  };
  rec(1, 1, maxWeight);
  std::stable_sort(out.begin(), out.end(), [](const Monomial &x, const Monomial &y) { return x.deg2() < y.deg2(); });
  return out;
}

std::vector<std::size_t> plusDimensions(int rank, int maxWeight) {
  std::vector<std::size_t> dims(static_cast<std::size_t>(maxWeight) + 1, 0);
  for (auto &m : plusBasis(rank, maxWeight))
    ++dims[static_cast<std::size_t>(m.deg2() / 2)];
  return dims;
}

std::string CircGenerator::str(int rank) const {
  auto render = [&](const Monomial &m) { return State(vacuumModule(rank), m, PolyQ(1)).str(); };
  return "(" + render(a) + ") o (" + render(b) + ")";
}

Monomial OSpanBasis::lead(const std::map<Monomial, Rat> &v) {
  // highest degree, then largest monomial
  const Monomial *best = nullptr;
  for (auto &kv : v)
    if (!best || kv.first.deg2() > best->deg2() || (kv.first.deg2() == best->deg2() && *best < kv.first))
      best = &kv.first;
  return *best;
}

void OSpanBasis::reduce(std::map<Monomial, Rat> &v, std::map<std::size_t, Rat> &cert) const {
  // repeatedly eliminate the leading monomial while a row owns it
  std::map<Monomial, Rat> done;
  while (!v.empty()) {
    Monomial l = lead(v);
    auto it = pivot_.find(l);
    if (it == pivot_.end()) {
      done.emplace(l, v[l]);
      v.erase(l);
      continue;
    }
    const Row &row = rows_[it->second];
    Rat f = v[l] / row.vec.at(l);
    for (auto &kv : row.vec) {
      Rat &x = v[kv.first];
      x -= f * kv.second;
      if (x.isZero())
        v.erase(kv.first);
    }
    for (auto &kv : row.cert) {
      Rat &x = cert[kv.first];
      x -= f * kv.second;
      if (x.isZero())
        cert.erase(kv.first);
    }
  }
  v = std::move(done);
}

void OSpanBasis::addGenerator(const CircGenerator &g, const VAElement &value) {
  std::map<Monomial, Rat> v;
  for (auto &kv : value.terms())
    v.emplace(kv.first, kv.second.constant());
  std::size_t idx = generators.size();
  std::map<std::size_t, Rat> cert{{idx, Rat(1)}};
  reduce(v, cert);
  if (v.empty())
    return;
  generators.push_back(g);
  Monomial l = lead(v);
  pivot_.emplace(l, rows_.size());
  rows_.push_back(Row{std::move(v), std::move(cert)});
}

std::optional<std::map<std::size_t, Rat>> OSpanBasis::solve(const VAElement &value) const {
  std::map<Monomial, Rat> v;
  for (auto &kv : value.terms())
    v.emplace(kv.first, kv.second.constant());
  std::map<std::size_t, Rat> cert;
  reduce(v, cert);
  if (!v.empty())
    return std::nullopt;
  // v - sum(cert) = 0, so v = -cert
  for (auto &kv : cert)
    kv.second = -kv.second;
  return cert;
}

VAElement OSpanBasis::evaluate(const std::map<std::size_t, Rat> &cert) const {
  State r(vacuumModule(rank));
  for (auto &[idx, c] : cert) {
    const auto &g = generators.at(idx);
    r.addScaled(circ(State(vacuumModule(rank), g.a, PolyQ(1)), State(vacuumModule(rank), g.b, PolyQ(1))), PolyQ(c));
  }
  return r;
}

int maxOSpanWeight(int rank) {
  if (const char *env = std::getenv("VOA_MAX_WEIGHT"))
    return std::atoi(env);
  return rank == 1 ? 12 : rank == 2 ? 8 : 6;
}

OSpanBasis oSpan(int rank, int weightBound) {
  int cap = maxOSpanWeight(rank);
  if (weightBound > cap) {
    auto dims = plusDimensions(rank, weightBound);
    std::size_t total = 0;
    for (auto d : dims)
      total += d;
    throw std::length_error("weight bound " + std::to_string(weightBound) + " exceeds cap " + std::to_string(cap) +
                            " (ambient dimension " + std::to_string(total) + "); raise VOA_MAX_WEIGHT");
  }
  OSpanBasis span;
  span.rank = rank;
  span.weightBound = weightBound;
  if (weightBound <= 0)
    return span;
  auto basis = plusBasis(rank, weightBound);
  auto mod = vacuumModule(rank);
  // generators ordered by top weight so low-weight rows come first
  for (int top = 1; top <= weightBound; ++top)
    for (auto &a : basis) {
      int wa = a.deg2() / 2;
      if (wa + 1 > top)
        break;
      for (auto &b : basis) {
        int wb = b.deg2() / 2;
        if (wa + wb + 1 != top)
          continue;
        State va(mod, a, PolyQ(1)), vb(mod, b, PolyQ(1));
        State c = circ(va, vb);
        if (!c.isZero())
          span.addGenerator(CircGenerator{a, b}, c);
      }
    }
  return span;
}

MemberResult memberO(const VAElement &v, const OSpanBasis &span) {
  MemberResult res;
  res.weightBound = span.weightBound;
  res.spanDimension = span.dimension();
  for (auto &kv : v.terms())
    if (kv.first.deg2() > 2 * span.weightBound)
      throw std::out_of_range("element weight exceeds the O(V) weight bound " + std::to_string(span.weightBound));
  auto cert = span.solve(v);
  if (!cert)
    return res;
  res.member = true;
  for (auto &[idx, c] : *cert)
    res.certificate.emplace_back(span.generators.at(idx), c);
  return res;
}

MemberResult memberO(const VAElement &v, int rank, int weightBound) {
  for (auto &kv : v.terms())
    if (kv.first.deg2() > 2 * weightBound)
      throw std::out_of_range("element weight exceeds the O(V) weight bound " + std::to_string(weightBound));
  return memberO(v, oSpan(rank, weightBound));
}

State zhuActionOnTop(const VAElement &a, const State &top) {
  State r(top.module());
  for (auto &[d2, part] : homogeneousParts(a))
    r += modeAction(part, d2 - 2, top);
  return r;
}

} // namespace voa
