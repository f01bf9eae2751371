#include "voa/twisted.hpp"

#include "mode_kernel.hpp"
#include "voa/vertex.hpp"

#include <mutex>
#include <vector>

namespace voa {

Rat CmnTable::at(int m, int n) const {
  auto it = entries.find({m, n});
  if (it == entries.end()) {
    if (m + n > maxTotal)
      throw std::out_of_range("c_mn outside computed table");
    return Rat(0);
  }
  return it->second;
}

namespace {
// dense truncated bivariate series, index [i][j] with i+j <= N
using Series = std::vector<std::vector<Rat>>;

Series zeroSeries(int N) {
  Series s(N + 1);
  for (int i = 0; i <= N; ++i)
    s[i].assign(N + 1 - i, Rat(0));
  return s;
}

Series mul(const Series &a, const Series &b, int N) {
  Series r = zeroSeries(N);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; i + j <= N; ++j) {
      if (a[i][j].isZero())
        continue;
      for (int k = 0; i + k <= N; ++k)
        for (int l = 0; i + j + k + l <= N; ++l)
          if (!b[k][l].isZero())
            r[i + k][j + l] += a[i][j] * b[k][l];
    }
  return r;
}
} // namespace

CmnTable cCoeffs(int maxTotal) {
  const int N = maxTotal;
  // w = ((1+x)^{1/2} - 1)/2 + ((1+y)^{1/2} - 1)/2
  Series w = zeroSeries(N);
  for (int k = 1; k <= N; ++k) {
    Rat b = binom(Rat(1, 2), k) * Rat(1, 2);
    w[k][0] += b;
    w[0][k] += b;
  }
  // -log(1+w) = sum_k (-1)^k w^k / k
  Series f = zeroSeries(N), p = w;
  for (int k = 1; k <= N; ++k) {
    Rat c = Rat(k % 2 ? -1 : 1, k);
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j)
        f[i][j] += c * p[i][j];
    if (k < N)
      p = mul(p, w, N);
  }
  CmnTable t;
  t.maxTotal = N;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; i + j <= N; ++j)
      if (!f[i][j].isZero())
        t.entries[{i, j}] = f[i][j];
  return t;
}

namespace {
const CmnTable &sharedTable(int need) {
  static std::mutex mu;
  static CmnTable table;
  std::lock_guard<std::mutex> g(mu);
  if (table.entries.empty() || table.maxTotal < need)
    table = cCoeffs(std::max(need, 16));
  return table;
}

// Delta applied to one x-component, accumulating into out[t + m + n]
void deltaOnce(const State &s, int t, int rank, const CmnTable &c, DeltaExpansion &out) {
  int deg = creationDeg2(s) / 2;
  for (int m = 1; m < deg; ++m)
    for (int n = 1; m + n <= deg; ++n) {
      Rat cmn = c.at(m, n);
      if (cmn.isZero())
        continue;
      for (int i = 1; i <= rank; ++i) {
        State r = heisModeInt(i, m, heisModeInt(i, n, s));
        if (r.isZero())
          continue;
        auto it = out.find(t + m + n);
        if (it == out.end())
          it = out.emplace(t + m + n, State(s.module())).first;
        it->second.addScaled(r, PolyQ(cmn));
      }
    }
}
} // namespace

DeltaExpansion deltaApply(const VAElement &u, int rank) {
  DeltaExpansion result;
  if (u.isZero())
    return result;
  int wt = creationDeg2(u) / 2;
  const CmnTable &c = sharedTable(wt);
  result[0] = u;
  DeltaExpansion cur;
  cur[0] = u;
  for (int k = 1; !cur.empty(); ++k) {
    DeltaExpansion next;
    for (auto &[t, s] : cur)
      deltaOnce(s, t, rank, c, next);
    cur.clear();
    for (auto &[t, s] : next) {
      if (s.isZero())
        continue;
      State scaled = s * PolyQ(Rat(1, k));
      cur[t] = scaled;
      auto it = result.find(t);
      if (it == result.end())
        result.emplace(t, scaled);
      else
        it->second += scaled;
    }
  }
  for (auto it = result.begin(); it != result.end();)
    it = it->second.isZero() ? result.erase(it) : std::next(it);
  return result;
}

State y0Mode(const VAElement &u, int n2, const State &s) {
  State r(s.module());
  for (auto &x : u.terms())
    for (auto &y : s.terms())
      r.addScaled(detail::monoProduct(x.first, n2, y.first, s.module()), x.second * y.second);
  return r;
}

State twistedNProduct(const VAElement &u, int n2, const State &s) {
  if (!s.module()->twisted())
    throw std::invalid_argument("twistedNProduct needs a twisted-module state");
  State r(s.module());
  for (auto &[part2, comp] : homogeneousParts(u)) {
    (void)part2;
    bool odd = comp.terms().begin()->first.size() % 2 == 1;
    for (auto &kv : comp.terms())
      if ((kv.first.size() % 2 == 1) != odd)
        throw std::invalid_argument("twisted mode of a theta-mixed element");
    if ((n2 % 2 != 0) != odd)
      throw std::invalid_argument("mode index parity does not match the element");
    for (auto &[t, v] : deltaApply(comp, s.module()->rank))
      r += y0Mode(v, n2 - 2 * t, s);
  }
  return r;
}

} // namespace voa
