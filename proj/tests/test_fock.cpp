#include "voa/fock.hpp"
#include "voa/vertex.hpp"

#include <doctest.h>

using namespace voa;

namespace {
Monomial mono(std::initializer_list<std::pair<int, int>> ops) {
  std::vector<CreationOp> v;
  for (auto [g, d2] : ops)
    v.push_back({static_cast<std::uint8_t>(g), static_cast<std::int16_t>(d2)});
  return Monomial(v);
}
State st(int rank, std::initializer_list<std::pair<int, int>> ops, Rat c = Rat(1)) {
  return State(vacuumModule(rank), mono(ops), PolyQ(c));
}
} // namespace

TEST_CASE("named generators") {
  CHECK(omega(1, 1) == st(1, {{1, 2}, {1, 2}}, Rat(1, 2)));
  CHECK(omegaTotal(2) == omega(2, 1) + omega(2, 2));
  CHECK(harH(1, 1) == st(1, {{1, 6}, {1, 2}}, Rat(1, 3)) - st(1, {{1, 4}, {1, 4}}, Rat(1, 3)));
  CHECK(S(3, 1, 2, 1, 3) == st(3, {{1, 2}, {2, 6}}));
  CHECK(generator("Lambda(1,2)", 2) ==
        S(2, 1, 2, 1, 2) * PolyQ(45) + S(2, 1, 2, 1, 3) * PolyQ(190) + S(2, 1, 2, 1, 4) * PolyQ(240) +
            S(2, 1, 2, 1, 5) * PolyQ(96));
  CHECK(generator("omega_1", 1) == omega(1, 1));
  CHECK_THROWS(S(2, 1, 1, 1, 1));
  CHECK_THROWS(generator("Eu(2,2)", 2));
}

TEST_CASE("J in terms of omega and H") {
  // J = -9 H + 4 (omega_{-1})^2 vac - 3 omega_{-3} vac
  VAElement w = omega(1, 1);
  VAElement rhs = harH(1, 1) * PolyQ(-9) + nProduct(w, -1, w) * PolyQ(4) - nProduct(w, -3, vacuum(1)) * PolyQ(3);
  CHECK(harJ(1, 1) == rhs);
}

TEST_CASE("theta") {
  State a = st(2, {{1, 2}, {2, 4}});
  CHECK(theta(a) == a);
  State tw(twistedModule(1), mono({{1, 1}}), PolyQ(1));
  CHECK(theta(tw) == -tw);
  CHECK(theta(vacuum(2)) == vacuum(2));
  CHECK_THROWS(theta(State::base(expModule(2))));
}

TEST_CASE("weights") {
  CHECK(weight(harH(2, 1)) == PolyQ(4));
  CHECK(weight(State::base(twistedModule(1))) == PolyQ(Rat(1, 16)));
  CHECK(weight(State::base(expModule(2))) == parsePoly("1/2*lam_1^2 + 1/2*lam_2^2"));
  CHECK_THROWS(weight(omega(1, 1) + vacuum(1)));
}

TEST_CASE("parity patterns") {
  CHECK(parityPattern(mono({{1, 2}, {2, 6}})) == 0b11u);
  CHECK(parityPattern(mono({{1, 2}, {1, 2}})) == 0u);
  State p = nProduct(S(4, 1, 2, 1, 1), -1, S(4, 3, 4, 1, 2));
  REQUIRE(!p.isZero());
  for (auto &[m, c] : p.terms())
    CHECK(parityPattern(m) == 0b1111u);
}

TEST_CASE("plus and minus projections") {
  State h = heis(1, 1);
  CHECK(projectPlusMinus(h, -1) == h);
  CHECK(projectPlusMinus(h, +1).isZero());
  CHECK(projectPlusMinus(S(2, 1, 2, 1, 1), +1) == S(2, 1, 2, 1, 1));
}

TEST_CASE("state arithmetic keeps no zero terms") {
  State a = omega(2, 1);
  CHECK((a - a).isZero());
  CHECK((a * PolyQ(0)).isZero());
  CHECK((a + a) == a * PolyQ(2));
  State e = State::base(expModule(2));
  CHECK_THROWS(a + e);
}
