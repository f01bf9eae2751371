#include "voa/catalog.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using namespace voa;

namespace {

std::vector<IdentityRecord> shipped() { return parseCatalog(readCatalogFile(defaultCatalogPath())); }

std::map<std::string, int> golden() {
  std::ifstream in(VOA_DATA_DIR "/catalog.golden");
  REQUIRE(in);
  std::map<std::string, int> m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream ls(line);
    std::string k;
    int v;
    ls >> k >> v;
    m[k] = v;
  }
  return m;
}

int count(const std::vector<IdentityRecord> &recs, const std::string &suite) {
  return static_cast<int>(std::count_if(recs.begin(), recs.end(), [&](const IdentityRecord &r) {
    return std::find(r.suites.begin(), r.suites.end(), suite) != r.suites.end();
  }));
}

} // namespace

TEST_CASE("parsing single records") {
  auto r = parseCatalog("check product: S(i,j;1,2)[5] S(i,j;1,2) == -6*vac\n");
  REQUIRE(r.size() == 1);
  CHECK(r[0].kind == RecordKind::Product);
  CHECK(r[0].id == "misc.Sij12_5_Sij12");
  CHECK(r[0].indexVars == std::vector<char>{'i', 'j'});

  auto z = parseCatalog("id rel.x\ncheck relationZero: 14*wmode(j,-3)@S(i,j;1,1) + 12*Hmode(j,-1)@S(i,j;1,1)"
                        " - 3*wmode(j,-2)@S(i,j;1,2) - 36*wmode(j,-1)@S(i,j;1,3)\n");
  REQUIRE(z.size() == 1);
  CHECK(z[0].kind == RecordKind::RelationZero);
  CHECK(z[0].lhs.terms.size() == 4);

  try {
    parseCatalog("check product: S(i,j;1,1)[3] S(i,j;1,1) == vac vac\n");
    FAIL("no parse error");
  } catch (const CatalogError &e) {
    CHECK(e.line == 1);
    CHECK(e.column == 48);
  }
  CHECK_THROWS_AS(parseCatalog("check product: S(i,i;1,1)[0] vac == 0\n"), CatalogError);
  CHECK_THROWS_AS(parseCatalog("check product: S(i,m;1,1)[0] vac == 0\n"), CatalogError);
  CHECK_THROWS_AS(parseCatalog("check relationZero: vac\n"), CatalogError);
  CHECK_THROWS_AS(parseCatalog("check product: omega(i)[0] vac == (eps+1)\n"), CatalogError);
}

TEST_CASE("every shipped record round-trips through render") {
  for (auto &r : shipped()) {
    auto again = parseCatalog("id " + r.id + "\n" + render(r));
    REQUIRE(again.size() == 1);
    CHECK_MESSAGE(again[0].lhs == r.lhs, r.id);
    CHECK_MESSAGE(again[0].rhs == r.rhs, r.id);
    CHECK(again[0].kind == r.kind);
    CHECK(again[0].assoc == r.assoc);
  }
}

TEST_CASE("record counts match the golden file") {
  auto recs = shipped();
  auto g = golden();
  CHECK(static_cast<int>(recs.size()) == g.at("total"));
  for (auto s : {"appendix", "relations", "eigen", "twisted", "zhu", "boundary"})
    CHECK_MESSAGE(count(recs, s) == g.at(s), s);
  auto rep = runSuite("appendix", 4);
  CHECK(static_cast<int>(rep.checks.size()) == g.at("appendix") + g.at("appendix.implicit"));
  for (auto &r : recs)
    CHECK_MESSAGE(!r.anchor.empty(), r.id);
}

TEST_CASE("ids are unique") {
  std::set<std::string> seen;
  for (auto &r : shipped())
    CHECK_MESSAGE(seen.insert(r.id).second, r.id);
}

TEST_CASE("suites on the shipped catalog") {
  for (auto s : {"relations", "eigen", "twisted", "boundary"}) {
    auto rep = runSuite(s, 0);
    CHECK_MESSAGE(rep.allPass(), reportText(rep));
    CHECK(std::is_sorted(rep.checks.begin(), rep.checks.end(),
                         [](const CheckResult &a, const CheckResult &b) { return a.id < b.id; }));
  }
  auto j = nlohmann::json::parse(reportJson(runSuite("relations", 2)));
  CHECK(j["failed"] == 0);
  CHECK(j["passed"] == 9);
}

TEST_CASE("index instantiation does not matter") {
  auto recs = shipped();
  std::vector<IdentityRecord> pairOnly;
  for (auto &r : recs)
    if (count({r}, "appendix") && r.indexVars.size() == 2)
      pairOnly.push_back(r);
  REQUIRE(pairOnly.size() > 20);
  SuiteOptions a, b;
  b.assignment = {4, 2};
  auto ra = runRecords("appendix", pairOnly, 4, a), rb = runRecords("appendix", pairOnly, 4, b);
  REQUIRE(ra.checks.size() == rb.checks.size());
  for (std::size_t k = 0; k < ra.checks.size(); ++k)
    CHECK(ra.checks[k].status == rb.checks[k].status);
}

TEST_CASE("failing checks explain themselves") {
  auto recs = parseCatalog("check product: omega(j)[0] S(i,j;1,1) == S(i,j;1,3)\n");
  auto rep = runRecords("appendix", recs, 2);
  REQUIRE(rep.checks.size() == 1);
  CHECK(rep.checks[0].status == CheckResult::Fail);
  CHECK(rep.checks[0].detail.find("lhs - rhs") != std::string::npos);
  CHECK(!rep.allPass());

  auto skip = runRecords("appendix", parseCatalog("check product: S(i,k;1,1)[0] S(k,j;1,1) == S(i,j;1,2)\n"), 2);
  CHECK(skip.checks[0].status == CheckResult::Skip);
}

TEST_CASE("expression evaluation") {
  CHECK(evaluate("omega(1)[1] H(1)", 1).text == evaluate("4*H(1)", 1).text);
  CHECK(evaluate("S(1,2;1,1)[4] S(1,2;1,1)", 2).zero);
  CHECK(evaluate("H(1)[3] vactw", 1).text == evaluate("-1/128*vactw", 1).text);
  CHECK(evaluate("omega(1)[1] exp(lam)", 1).type == "State");
}
