#include "voa/boundary.hpp"
#include "voa/vertex.hpp"

#include <doctest.h>

using namespace voa;

namespace {
PolyQ P(const char *s) { return parsePoly(s); }

PolyQ det3(const std::array<Constraint, 3> &m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}
} // namespace

TEST_CASE("delta bounds") {
  PolyQ eps = PolyQ::variable("eps");
  CHECK(deltaBound(eps, 5) == eps + PolyQ(3));
  CHECK(deltaBound(eps, 6) == eps + PolyQ(4));
  CHECK(deltaBound(eps, 2) == eps);
}

TEST_CASE("eigenvalue rule") {
  auto u = GenericVectorSpec::symbolic(2, 1, 2);
  auto t = boundaryAction(omega(2, 2), u);
  REQUIRE(t.size() == 1);
  CHECK(t[0].r == 0);
  CHECK(t[0].coeff == P("zeta2"));
}

TEST_CASE("weight five constraint") {
  BoundaryEngine eng(GenericVectorSpec::symbolic(2, 1, 2));
  Constraint c = deriveConstraint("pair.w5", eng);
  CHECK(c[0] == P("-eps*(eps+1)^2 + 4*eps*zeta1 - 4*zeta2"));
  CHECK(c[1] == P("-(eps+2)*(3*eps+1) + 4*zeta1 - 4*zeta2"));
  CHECK(c[2] == P("-2*(3*eps+1)"));
}

TEST_CASE("symbolic and integer eps agree") {
  auto sym = GenericVectorSpec::symbolic(2, 1, 2);
  BoundaryEngine s(sym);
  for (auto &id : relationIds()) {
    Constraint cs = deriveConstraint(id, s);
    for (int e = -1; e <= 4; ++e) {
      BoundaryEngine concrete(sym.withEps(PolyQ(e)));
      Constraint cc = deriveConstraint(id, concrete);
      for (int r = 0; r < 3; ++r)
        CHECK(cc[r] == cs[r].subst(var("eps"), PolyQ(e)));
    }
  }
}

TEST_CASE("constraints hold on e^lambda") {
  // eps = 1, zeta_k = lam_k^2/2, xi = 0; the words are multiples of e^lambda there
  State e = State::base(expModule(2));
  std::map<VarId, PolyQ> at = {{var("eps"), PolyQ(1)},
                               {var("zeta1"), P("1/2*lam_1^2")},
                               {var("zeta2"), P("1/2*lam_2^2")},
                               {var("xi1"), PolyQ(0)},
                               {var("xi2"), PolyQ(0)}};
  CHECK(epsilonOf(S(2, 1, 2, 1, 1), e) == Rat(1));
  CHECK(modeAction(harH(2, 1), 6, e).isZero());
  BoundaryEngine eng(GenericVectorSpec::symbolic(2, 1, 2));
  for (auto &id : relationIds()) {
    Constraint c = deriveConstraint(id, eng);
    State total(e.module());
    for (int r = 1; r <= 3; ++r)
      total.addScaled(modeAction(S(2, 1, 2, 1, r), 2 * r, e), c[r - 1].subst(at));
    CHECK(total.isZero());
  }
}

TEST_CASE("elimination is an ideal combination") {
  BoundaryEngine eng(GenericVectorSpec::symbolic(2, 1, 2));
  std::array<Constraint, 3> m = {deriveConstraint("pair.w5", eng), deriveConstraint("pair.w6a", eng),
                                 deriveConstraint("pair.w6b", eng)};
  PolyQ d = eliminate(m[0], m[1], m[2]);
  CHECK(d == det3(m));
  // adj(M) M = det(M) I: row e of adj combines the three equations into d times word r
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      PolyQ sum;
      for (int e = 0; e < 3; ++e) {
        std::array<Constraint, 3> minor = m;
        for (int k = 0; k < 3; ++k)
          minor[e][k] = k == r ? PolyQ(1) : PolyQ(0);
        sum += det3(minor) * m[e][c];
      }
      CHECK(sum == (r == c ? d : PolyQ(0)));
    }
}

TEST_CASE("specializations of the eliminant") {
  BoundaryEngine eng(GenericVectorSpec::symbolic(2, 1, 2));
  PolyQ d = eliminate(deriveConstraint("pair.w5", eng), deriveConstraint("pair.w6a", eng),
                      deriveConstraint("pair.w6b", eng));
  auto spec = [&](const char *zi, const char *xi, const char *zj, const char *xj) {
    return specializeConstraint(d, {{"zeta1", P(zi)}, {"xi1", P(xi)}, {"zeta2", P(zj)}, {"xi2", P(xj)}});
  };
  CHECK(spec("0", "0", "0", "0").isAssociate(P("eps^2*(eps-1)*(eps+1)*(3*eps^2+3*eps-2)")));
  CHECK(spec("1/16", "-1/128", "1/16", "-1/128").isAssociate(P("eps*(11*eps^2-15*eps+6)*(6*eps^3+6*eps^2-7*eps+1)")));
  CHECK(spec("0", "0", "1", "1").isAssociate(P("(eps-2)*(eps-1)*(3*eps^4+12*eps^3-11*eps^2-20*eps-16)")));
}

TEST_CASE("level one calculus") {
  VermaEngine v(3);
  CHECK(v.symbols().size() > 0);
  auto checks = vermaSuite(3);
  CHECK(checks.size() == 120);
  for (auto &c : checks)
    CHECK_MESSAGE(c.ok, c.lhs << " == " << c.rhs);
}
