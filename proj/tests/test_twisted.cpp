#include "voa/twisted.hpp"
#include "voa/vertex.hpp"

#include <doctest.h>

using namespace voa;

namespace {
State twVac(int d) { return State::base(twistedModule(d)); }
State twH(int d, int i) { return heisMode(i, -1, twVac(d)); } // h^[i](-1/2)vac_tw
} // namespace

TEST_CASE("c_mn coefficients") {
  CmnTable t = cCoeffs(8);
  CHECK(t.at(0, 0) == Rat(0));
  // sqrt(1+x) = 1 + x/2 - x^2/8: w = x/4 - x^2/16 + y/4 - y^2/16, -log(1+w) = -w + w^2/2 - ...
  CHECK(t.at(1, 0) == Rat(-1, 4));
  CHECK(t.at(1, 1) == Rat(1, 16));
  CHECK(t.at(2, 0) == Rat(1, 16) + Rat(1, 32));
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; m + n <= 8; ++n)
      CHECK(t.at(m, n) == t.at(n, m));
  CHECK_THROWS(t.at(5, 5));
}

TEST_CASE("Delta expansion") {
  auto v = deltaApply(vacuum(1), 1);
  REQUIRE(v.size() == 1);
  CHECK(v.at(0) == vacuum(1));

  auto h = deltaApply(heis(2, 1), 2);
  REQUIRE(h.size() == 1);
  CHECK(h.at(0) == heis(2, 1));

  auto w = deltaApply(omega(2, 1), 2);
  REQUIRE(w.size() == 2);
  CHECK(w.at(0) == omega(2, 1));
  CHECK(w.at(2) == vacuum(2) * PolyQ(Rat(1, 16)));
}

TEST_CASE("twisted modes on the top level") {
  const int d = 2;
  CHECK(twistedNProduct(omega(d, 1), 2, twVac(d)) == twVac(d) * PolyQ(Rat(1, 16)));
  CHECK(twistedNProduct(harH(d, 1), 6, twVac(d)) == twVac(d) * PolyQ(Rat(-1, 128)));
  CHECK(twistedNProduct(S(d, 1, 2, 1, 3), 6, twH(d, 2)) == twH(d, 1) * PolyQ(Rat(15, 16)));
  CHECK(twistedNProduct(omega(d, 2), 2, twH(d, 2)) == twH(d, 2) * PolyQ(Rat(9, 16)));
  CHECK(twistedNProduct(omega(d, 1), 2, twH(d, 2)) == twH(d, 2) * PolyQ(Rat(1, 16)));
  CHECK(twistedNProduct(S(d, 1, 2, 1, 1), 2, twVac(d)).isZero());
  CHECK_THROWS(twistedNProduct(heis(d, 1), 2, twVac(d)));
}

TEST_CASE("twisted L(0) spectrum") {
  // basis up to weight d/16 + 2 on one generator: L(0) = omega_1 is diagonal with
  // eigenvalue d/16 + creation degree
  const int d = 1;
  std::vector<std::vector<CreationOp>> shapes = {
      {}, {{1, 1}}, {{1, 3}}, {{1, 1}, {1, 1}}, {{1, 1}, {1, 3}}, {{1, 1}, {1, 1}, {1, 1}}, {{1, 1}, {1, 1}, {1, 1}, {1, 1}}};
  for (auto &ops : shapes) {
    Monomial m(ops);
    State s(twistedModule(d), m, PolyQ(1));
    Rat w = Rat(d, 16) + Rat(m.deg2(), 2);
    CHECK(twistedNProduct(omegaTotal(d), 2, s) == s * PolyQ(w));
    CHECK(weight(s) == PolyQ(w));
  }
}

TEST_CASE("twisted products are theta-equivariant") {
  const int d = 2;
  State s = heisMode(2, -3, twH(d, 1));
  for (int n2 = -4; n2 <= 6; n2 += 2) {
    for (auto u : {omega(d, 1), harH(d, 2), S(d, 1, 2, 2, 1)})
      CHECK(theta(twistedNProduct(u, n2, s)) == twistedNProduct(theta(u), n2, theta(s)));
    CHECK(theta(twistedNProduct(heis(d, 1), n2 + 1, s)) == twistedNProduct(theta(heis(d, 1)), n2 + 1, theta(s)));
  }
}
