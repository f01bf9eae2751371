#include "voa/exactalg.hpp"

#include <doctest.h>

#include <random>

using namespace voa;

namespace {
PolyQ P(const char *s) { return parsePoly(s); }
}

TEST_CASE("rationals stay reduced") {
  Rat a(6, -4);
  CHECK(a.str() == "-3/2");
  CHECK(a.den() == 2);
  CHECK((a + Rat(3, 2)).isZero());
  CHECK(Rat::parse("-10/4") == Rat(-5, 2));
  CHECK_THROWS(Rat(1) / Rat(0));
}

TEST_CASE("binomial polynomials") {
  PolyQ eps = PolyQ::variable("eps");
  CHECK(binomialPoly(eps, 2) == eps * (eps - PolyQ(1)) * Rat(1, 2));
  CHECK(binomialPoly(PolyQ(-2), 3) == PolyQ(-4));
  CHECK(binomialPoly(eps + PolyQ(2), 1) == eps + PolyQ(2));
  CHECK(binomialPoly(eps, 0) == PolyQ(1));
}

TEST_CASE("integer binomials agree with the polynomial form") {
  for (long n = -10; n <= 10; ++n)
    for (long k = 0; k <= 10; ++k) {
      // Pascal recursion as the oracle
      Rat expect = k == 0 ? Rat(1) : binom(n - 1, k) + binom(n - 1, k - 1);
      CHECK(binom(n, k) == expect);
      CHECK(binomialPoly(PolyQ(Rat(n)), k) == PolyQ(binom(n, k)));
    }
}

TEST_CASE("polynomial parsing and printing round trip") {
  PolyQ p = P("3*x^2*y - 1/2*x + 7");
  CHECK(parsePoly(p.str()) == p);
  CHECK(P("(x+1)^2") == P("x^2 + 2*x + 1"));
  CHECK(P("(x-1)/4") == P("1/4*x - 1/4"));
  CHECK_THROWS(P("x y"));
  CHECK_THROWS(P("x/y"));
}

TEST_CASE("pseudo division") {
  VarId x = var("x");
  auto U = [&](const char *s) { return UniPoly::from(P(s), x); };

  auto d = pseudoDivide(U("x^2"), U("x"));
  CHECK(d.quotient.toPoly() == P("x"));
  CHECK(d.remainder.isZero());

  // hand division by x - 1: the remainder is the value at x = 1
  auto h = pseudoDivide(U("132*x^2 - 65*x - 70*H + 3"), U("x - 1"));
  CHECK(h.remainder.toPoly() == P("70 - 70*H"));

  CHECK_THROWS(pseudoDivide(U("x"), UniPoly()));
}

TEST_CASE("pseudo division is exact on random inputs") {
  std::mt19937 g(7);
  auto r = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); };
  VarId x = var("x"), t = var("t");
  auto randomPoly = [&](int deg) {
    std::vector<PolyQ> c;
    for (int k = 0; k <= deg; ++k)
      c.push_back(PolyQ(Rat(r(-4, 4))) + PolyQ::variable(t) * Rat(r(-2, 2)));
    if (c.back().isZero())
      c.back() = PolyQ(1);
    return UniPoly(x, c);
  };
  for (int n = 0; n < 60; ++n) {
    UniPoly a = randomPoly(r(1, 5)), b = randomPoly(r(1, 3));
    if (b.isZero() || a.degree() < b.degree())
      continue;
    auto d = pseudoDivide(a, b);
    PolyQ scale = b.lc().pow(static_cast<unsigned>(a.degree() - b.degree() + 1));
    CHECK((a * scale).toPoly() == d.quotient.toPoly() * b.toPoly() + d.remainder.toPoly());
    CHECK(d.remainder.degree() < b.degree());
  }
}

TEST_CASE("gPoly") {
  VarId x = var("x");
  auto U = [&](const char *s) { return UniPoly::from(P(s), x); };
  CHECK(gPoly(U("x"), U("x")).toPoly() == P("x"));

  // a common root survives the chain
  PolyQ g = gPoly(U("(x-2)*(x+3)*(x-5)"), U("(x-2)*(x+7)")).toPoly();
  CHECK(g.isAssociate(P("x - 2")));

  // content normalized, leading coefficient positive
  PolyQ h = gPoly(U("-6*x^2 + 6"), U("4*x - 4")).toPoly();
  CHECK(h == P("x - 1"));

  // the Zhu algebra elimination: w as the variable, H a parameter
  VarId w = var("w");
  PolyQ r = gPoly(UniPoly::from(P("(w-1)*(w-1/16)*(w-9/16)"), w),
                  UniPoly::from(P("132*w^2 - 65*w - 70*H + 3"), w))
                .toPoly();
  CHECK(r.isAssociate(P("(H-1)*(H+1/128)*(H-15/128)")));

  CHECK_THROWS(gPoly(UniPoly(), UniPoly()));
}

TEST_CASE("common roots of factored products reach gPoly") {
  std::mt19937 gen(11);
  auto r = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
  VarId x = var("x");
  for (int n = 0; n < 40; ++n) {
    int c = r(-5, 5), a1 = r(-5, 5), b1 = r(-5, 5);
    if (a1 == c || b1 == c || a1 == b1)
      continue;
    auto lin = [&](int root) { return PolyQ::variable(x) - PolyQ(root); };
    PolyQ A = lin(c) * lin(a1) * lin(a1), B = lin(c) * lin(b1);
    PolyQ g = gPoly(UniPoly::from(A, x), UniPoly::from(B, x)).toPoly();
    CHECK(g.subst(x, PolyQ(c)).isZero());
  }
}
