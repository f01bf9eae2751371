// Command line front end: suite runs and one-off computations.
// Exit status: 0 when everything requested passed, 1 on a failed or skipped check,
// 2 on bad input.

#include "voa/boundary.hpp"
#include "voa/catalog.hpp"
#include "voa/exactalg.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int printEval(const std::string &expr, int rank, const voa::SuiteOptions &opt) {
  auto v = voa::evaluate(expr, rank, opt);
  std::cout << v.text << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"exact computations in the rank-d free boson vertex operator algebra"};
  app.require_subcommand(1);

  voa::SuiteOptions opt;
  std::string suite, format = "text", out = "-";
  int rank = 0;
  auto *verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "appendix, relations, eigen, commutators, zhu, twisted, boundary, verma or all")
      ->required();
  verify->add_option("--rank", rank, "rank d (default depends on the suite)");
  verify->add_option("--weight-bound", opt.weightBound, "O(V) span bound for the zhu suite");
  verify->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--out", out, "report path, - for stdout");
  verify->add_option("--catalog", opt.catalogPath, "identity catalog (default: the shipped one)");

  std::string ea, eb, state;
  std::string na, nb;
  int prank = 4;
  auto *product = app.add_subcommand("product", "a_n b in M(1)");
  product->add_option("a", ea)->required();
  product->add_option("n", na)->required();
  product->add_option("b", eb)->required();
  product->add_option("--rank", prank);

  auto *commutator = app.add_subcommand("commutator", "[a_i, b_j] applied to a state");
  commutator->add_option("a", ea)->required();
  commutator->add_option("i", na)->required();
  commutator->add_option("b", eb)->required();
  commutator->add_option("j", nb)->required();
  commutator->add_option("--on", state, "state, e.g. exp(lam) or h(1,-2) vac")->required();
  commutator->add_option("--rank", prank);

  auto *zhu = app.add_subcommand("zhu", "Zhu algebra queries");
  zhu->require_subcommand(1);
  auto *member = zhu->add_subcommand("member", "is the expression in O(M(1)+)?");
  std::string zexpr;
  int zrank = 1;
  member->add_option("expr", zexpr)->required();
  member->add_option("--rank", zrank);
  member->add_option("--weight-bound", opt.weightBound);

  auto *boundary = app.add_subcommand("boundary", "boundary calculus");
  boundary->require_subcommand(1);
  auto *derive = boundary->add_subcommand("derive", "constraint of a pair relation on the generic vector");
  std::string relation, eps = "sym";
  int brank = 2;
  derive->add_option("--relation", relation, "pair.w5, pair.w6a, pair.w6b or pair.w6c")->required();
  derive->add_option("--eps", eps, "integer, or sym to keep it symbolic");
  derive->add_option("--rank", brank);

  std::string pa, pb, gvar;
  auto *gpoly = app.add_subcommand("gpoly", "last nonzero pseudo-remainder of two polynomials");
  gpoly->add_option("a", pa)->required();
  gpoly->add_option("b", pb)->required();
  gpoly->add_option("--var", gvar)->required();

  auto *twisted = app.add_subcommand("twisted", "modes on M(1)(theta)");
  twisted->require_subcommand(1);
  auto *tmode = twisted->add_subcommand("mode", "u_n applied to a twisted state");
  int trank = 2;
  state = "";
  tmode->add_option("u", ea)->required();
  tmode->add_option("n", na, "integer or half integer, e.g. 1/2")->required();
  tmode->add_option("--on", state, "twisted state (default vactw)");
  tmode->add_option("--rank", trank);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      auto rep = voa::runSuite(suite, rank, opt);
      voa::emitReport(rep, format, out);
      return rep.allPass() ? 0 : 1;
    }
    if (*product)
      return printEval(ea + "[" + na + "] " + eb, prank, opt);
    if (*commutator)
      return printEval("[" + ea + "[" + na + "], " + eb + "[" + nb + "]] " + state, prank, opt);
    if (*member) {
      auto recs = voa::parseCatalog("id zhu.member\ncheck zhuMember: " + zexpr + "\n");
      auto rep = voa::runRecords("zhu", recs, zrank, opt);
      auto &c = rep.checks.front();
      std::cout << (c.status == voa::CheckResult::Pass ? "member" : c.status == voa::CheckResult::Fail ? "not member"
                                                                                                        : "skipped")
                << ": " << c.detail << "\n";
      return c.status == voa::CheckResult::Pass ? 0 : 1;
    }
    if (*derive) {
      auto spec = voa::GenericVectorSpec::symbolic(brank, 1, 2);
      if (eps != "sym")
        spec = spec.withEps(voa::PolyQ(voa::Rat::parse(eps)));
      voa::BoundaryEngine eng(spec);
      auto c = voa::deriveConstraint(relation, eng);
      for (int r = 0; r < 3; ++r)
        std::cout << "S(1," << r + 1 << ")_{eps+" << r << "}u: " << c[r].str() << "\n";
      return 0;
    }
    if (*gpoly) {
      auto x = voa::var(gvar);
      auto g = voa::gPoly(voa::UniPoly::from(voa::parsePoly(pa), x), voa::UniPoly::from(voa::parsePoly(pb), x));
      std::cout << g.str() << "\n";
      return 0;
    }
    if (*tmode)
      return printEval(ea + "[" + na + "] " + (state.empty() ? "vactw" : state), trank, opt);
  } catch (const voa::CatalogError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
