#include "properties.hpp"

#include "voa/fock.hpp"
#include "voa/twisted.hpp"
#include "voa/vertex.hpp"

#include <map>
#include <random>
#include <sstream>

namespace props {

using namespace voa;

namespace {

constexpr int kRank = 3;

struct Rng {
  std::mt19937 g;
  explicit Rng(std::uint32_t s) : g(s) {}
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
  Rat rat() {
    int p = pick(-5, 5);
    return Rat(p == 0 ? 1 : p, pick(1, 4));
  }
};

/// Random creation monomial on `gens` generators, doubled degrees of the given parity.
Monomial randomMonomial(Rng &r, int maxOps, int maxDeg, bool twisted) {
  std::vector<CreationOp> ops;
  int n = r.pick(0, maxOps);
  for (int k = 0; k < n; ++k) {
    int d = r.pick(1, maxDeg);
    ops.push_back({static_cast<std::uint8_t>(r.pick(1, kRank)),
                   static_cast<std::int16_t>(twisted ? 2 * d - 1 : 2 * d)});
  }
  return Monomial(ops);
}

/// Homogeneous element: a named generator, a Heisenberg vector or a random monomial.
VAElement randomElement(Rng &r) {
  int i = r.pick(1, kRank), j = r.pick(1, kRank - 1);
  if (j >= i)
    ++j;
  switch (r.pick(0, 5)) {
  case 0: return heis(kRank, i, r.pick(1, 3));
  case 1: return omega(kRank, i);
  case 2: return harH(kRank, i);
  case 3: return S(kRank, i, j, r.pick(1, 3), r.pick(1, 3));
  case 4: return harJ(kRank, i);
  default: {
    Monomial m = randomMonomial(r, 3, 3, false);
    return State(vacuumModule(kRank), m, PolyQ(r.rat()));
  }
  }
}

State randomTwisted(Rng &r) {
  return State(twistedModule(kRank), randomMonomial(r, 2, 2, true), PolyQ(r.rat()));
}

bool odd(const VAElement &a) { return theta(a) == -a && !a.isZero(); }

void fail(Outcome &o, const std::string &what) {
  if (!o.failures++)
    o.first = what;
}

} // namespace

Outcome thetaAutomorphism(std::uint32_t seed, int cases) {
  Outcome o{"theta-automorphism"};
  Rng r(seed);
  for (int c = 0; c < cases; ++c, ++o.cases) {
    VAElement a = randomElement(r);
    if (c % 3 == 2) {
      // twisted side: theta acts on M(1)(theta) by -1 on every creation operator
      State s = randomTwisted(r);
      int n2 = 2 * r.pick(-2, 3) + (odd(a) ? 1 : 0);
      State lhs = theta(twistedNProduct(a, n2, s));
      State rhs = twistedNProduct(theta(a), n2, theta(s));
      if (lhs != rhs)
        fail(o, "twisted: " + a.str() + " mode " + std::to_string(n2) + "/2 on " + s.str());
      continue;
    }
    VAElement b = randomElement(r);
    if (b.isZero() || a.isZero())
      continue;
    int n = r.pick(-3, elementWeight(a) + elementWeight(b));
    if (theta(nProduct(a, n, b)) != nProduct(theta(a), n, theta(b)))
      fail(o, a.str() + " _" + std::to_string(n) + " " + b.str());
    if (theta(theta(b)) != b)
      fail(o, "theta^2 on " + b.str());
  }
  return o;
}

Outcome gradingAdditivity(std::uint32_t seed, int cases) {
  Outcome o{"grading additivity"};
  Rng r(seed);
  for (int c = 0; c < cases; ++c, ++o.cases) {
    VAElement a = randomElement(r), b = randomElement(r);
    int wa = elementWeight(a), wb = elementWeight(b);
    int n = r.pick(-3, wa + wb);
    State p = nProduct(a, n, b);
    if (!p.isZero() && weight(p) != PolyQ(Rat(wa + wb - n - 1)))
      fail(o, a.str() + " _" + std::to_string(n) + " " + b.str());
    // creation degrees add under concatenation
    Monomial m1 = randomMonomial(r, 3, 4, false), m2 = randomMonomial(r, 3, 4, false);
    std::vector<CreationOp> ops = m1.ops;
    ops.insert(ops.end(), m2.ops.begin(), m2.ops.end());
    if (Monomial(ops).deg2() != m1.deg2() + m2.deg2())
      fail(o, "deg2 of a concatenation");
  }
  return o;
}

Outcome creationAxioms(std::uint32_t seed, int cases) {
  Outcome o{"creation axioms"};
  Rng r(seed);
  VAElement v = vacuum(kRank);
  for (int c = 0; c < cases; ++c, ++o.cases) {
    VAElement a = randomElement(r);
    int n = r.pick(0, 6);
    if (!nProduct(a, n, v).isZero())
      fail(o, a.str() + " _" + std::to_string(n) + " vac");
    if (nProduct(a, -1, v) != a)
      fail(o, a.str() + " _-1 vac");
    // the vacuum field is the identity
    int k = r.pick(-4, 4);
    State expect = k == -1 ? a : State(a.module());
    if (nProduct(v, k, a) != expect)
      fail(o, "vac _" + std::to_string(k) + " " + a.str());
  }
  return o;
}

Outcome parityRule(std::uint32_t seed, int cases) {
  Outcome o{"parity rule"};
  Rng r(seed);
  for (int c = 0; c < cases; ++c, ++o.cases) {
    bool tw = c % 2;
    Monomial m1 = randomMonomial(r, 4, 3, tw), m2 = randomMonomial(r, 4, 3, tw);
    std::vector<CreationOp> ops = m1.ops;
    ops.insert(ops.end(), m2.ops.begin(), m2.ops.end());
    Monomial cat(ops);
    if (parityPattern(cat) != (parityPattern(m1) ^ parityPattern(m2)))
      fail(o, "pattern of a concatenation");
    // every monomial of a product of S elements carries the xor of their patterns
    int i = r.pick(1, kRank), j = r.pick(1, kRank - 1);
    if (j >= i)
      ++j;
    VAElement a = S(kRank, i, j, r.pick(1, 2), r.pick(1, 2));
    VAElement b = State(vacuumModule(kRank), m2, PolyQ(1));
    State p = nProduct(a, r.pick(-2, 1), b);
    std::uint32_t want = parityPattern(a.terms().begin()->first) ^ parityPattern(m2);
    for (auto &[m, coeff] : p.terms())
      if (parityPattern(m) != want)
        fail(o, "pattern of " + a.str() + " acting on " + b.str());
  }
  return o;
}

Outcome cmnSymmetry(std::uint32_t seed, int cases) {
  Outcome o{"c_mn symmetry"};
  Rng r(seed);
  const int N = 12;
  CmnTable t = cCoeffs(N);
  for (int c = 0; c < cases; ++c, ++o.cases) {
    int m = r.pick(0, N), n = r.pick(0, N - m);
    if (t.at(m, n) != t.at(n, m))
      fail(o, "c(" + std::to_string(m) + "," + std::to_string(n) + ")");
    // x = y: the series is -log(1+x)/2, so each total degree sums to (-1)^s/(2s)
    int s = m + n;
    if (s > 0) {
      Rat sum;
      for (int a = 0; a <= s; ++a)
        sum += t.at(a, s - a);
      if (sum != Rat(s % 2 ? -1 : 1, 2 * s))
        fail(o, "diagonal sum at total degree " + std::to_string(s));
    }
  }
  return o;
}

Outcome truncationStability(std::uint32_t seed, int cases) {
  Outcome o{"truncation stability"};
  Rng r(seed);
  std::map<int, CmnTable> tables;
  auto table = [&](int n) -> const CmnTable & {
    auto it = tables.find(n);
    if (it == tables.end())
      it = tables.emplace(n, cCoeffs(n)).first;
    return it->second;
  };
  for (int c = 0; c < cases; ++c, ++o.cases) {
    int M = r.pick(1, 10);
    int m = r.pick(0, M), n = r.pick(0, M - m);
    if (table(M).at(m, n) != table(M + 2).at(m, n))
      fail(o, "c(" + std::to_string(m) + "," + std::to_string(n) + ") at " + std::to_string(M));
    // products truncate: a_k b = 0 once k >= wt a + wt b
    VAElement a = randomElement(r), b = randomElement(r);
    int k = elementWeight(a) + elementWeight(b) + r.pick(0, 4);
    if (!nProduct(a, k, b).isZero())
      fail(o, a.str() + " _" + std::to_string(k) + " " + b.str());
  }
  return o;
}

std::vector<Outcome> all(std::uint32_t seed, int cases) {
  return {thetaAutomorphism(seed, cases), gradingAdditivity(seed + 1, cases), creationAxioms(seed + 2, cases),
          parityRule(seed + 3, cases),    cmnSymmetry(seed + 4, cases),      truncationStability(seed + 5, cases)};
}

} // namespace props
