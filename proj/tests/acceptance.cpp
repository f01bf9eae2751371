// Acceptance run: one line per criterion. A criterion is PASS, or FAIL. A FAIL whose
// failing checks are exactly the known misprints (each confirmed independently) is
// marked "documented" and does not change the exit status; anything else does.

#include "oracle.hpp"
#include "properties.hpp"
#include "voa/catalog.hpp"
#include "voa/vertex.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace voa;

namespace {

struct Line {
  bool pass = false;
  bool documented = false;
  std::string what;
};

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f s", s);
  return b;
}

std::set<std::string> failing(const Report &r) {
  std::set<std::string> s;
  for (auto &c : r.checks)
    if (c.status != CheckResult::Pass)
      s.insert(c.id);
  return s;
}

std::vector<IdentityRecord> suiteRecords(const std::string &suite) {
  std::vector<IdentityRecord> out;
  for (auto &r : parseCatalog(readCatalogFile(defaultCatalogPath())))
    if (std::find(r.suites.begin(), r.suites.end(), suite) != r.suites.end())
      out.push_back(r);
  return out;
}

/// Letters in i, j, k, l order get 1, 2, ...; the same rule the runner applies.
std::map<char, int> letters(const IdentityRecord &r) {
  std::map<char, int> m;
  std::vector<char> v = r.indexVars;
  std::sort(v.begin(), v.end(), [](char a, char b) { return std::string("ijkl").find(a) < std::string("ijkl").find(b); });
  for (std::size_t k = 0; k < v.size(); ++k)
    m[v[k]] = static_cast<int>(k) + 1;
  return m;
}

Line appendix() {
  auto t0 = std::chrono::steady_clock::now();
  Report rep = runSuite("appendix", 4);
  double t = seconds(t0);

  std::set<std::string> known;
  {
    std::ifstream in(VOA_DATA_DIR "/appendix_discrepancies.txt");
    std::string line;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#')
        known.insert(line);
  }
  // independent verdicts: the Wick oracle evaluates both sides of every displayed row,
  // and for a disagreeing row must reproduce the engine's left side exactly
  int agree = 0, rows = 0;
  std::string oracleIssue;
  std::map<std::string, CheckResult::Status> engine;
  for (auto &c : rep.checks)
    engine[c.id] = c.status;
  for (auto &r : suiteRecords("appendix")) {
    ++rows;
    auto asg = letters(r);
    oracle::Vec l = oracle::eval(r.lhs, asg, 4), rv = oracle::eval(r.rhs, asg, 4);
    bool oracleSaysEqual = l == rv;
    bool engineSaysEqual = engine.at(r.id) == CheckResult::Pass;
    bool ok = oracleSaysEqual == engineSaysEqual;
    if (ok && !engineSaysEqual) {
      SuiteOptions o;
      for (char c : std::string("ijkl"))
        o.assignment.push_back(asg.count(c) ? asg[c] : 0);
      // unused letters must still be distinct; they never occur in the expression
      int next = static_cast<int>(asg.size()) + 1;
      for (auto &v : o.assignment)
        if (v == 0)
          v = next++;
      ok = oracle::fromState(evaluate(render(r.lhs), 4, o).state) == l;
    }
    if (ok)
      ++agree;
    else if (oracleIssue.empty())
      oracleIssue = r.id;
  }
  Line line;
  int total = static_cast<int>(rep.checks.size());
  line.pass = rep.allPass() && agree == rows && t < 60;
  std::ostringstream os;
  os << "appendix replay at rank 4: " << rep.passed << "/" << total << " exact (" << rows << " displayed + "
     << total - rows << " implicit zero rows); Wick oracle agrees on " << agree << "/" << rows << "; " << fmt(t)
     << " (limit 60 s)";
  if (!rep.allPass())
    os << "; " << rep.failed << " printed values differ from the computed products";
  if (!oracleIssue.empty())
    os << "; oracle disagrees first on " << oracleIssue;
  line.documented = !line.pass && failing(rep) == known && agree == rows && t < 60;
  line.what = os.str();
  return line;
}

Line simpleSuite(const std::string &label, const std::string &suite, int rank, double limit,
                 const SuiteOptions &opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep = runSuite(suite, rank, opt);
  double t = seconds(t0);
  Line l;
  l.pass = rep.allPass() && t < limit;
  std::ostringstream os;
  os << label << ": " << rep.passed << "/" << rep.checks.size() << " pass; " << fmt(t) << " (limit " << limit << " s)";
  for (auto &c : rep.checks)
    if (c.status != CheckResult::Pass) {
      os << "; first problem " << c.id << ": " << c.detail;
      break;
    }
  l.what = os.str();
  return l;
}

Line eigen() {
  Line l = simpleSuite("eigenvalue tables at rank 2, lambda symbolic", "eigen", 2, 5);
  // the twisted block must actually contain the listed values
  std::set<std::string> seen;
  for (auto &r : suiteRecords("twisted"))
    for (auto &t : r.rhs.terms) {
      Rat c(t.sign);
      for (auto &f : t.coeff)
        if (f.kind == ScalarFactor::Num)
          c *= f.num;
      seen.insert(c.str());
    }
  int found = 0;
  for (auto v : {"1/16", "-1/128", "9/16", "15/128", "1/2", "-3/4", "15/16"})
    found += seen.count(v);
  l.pass = l.pass && found == 7;
  l.what += "; twisted values present " + std::to_string(found) + "/7";
  return l;
}

/// Printed and derived right-hand sides as formal sums {(q, mode shift) -> coefficient}
/// of Y(1,q)_{l+m+shift}; a printed case is expected to fail exactly when they differ.
using Formal = std::map<std::pair<int, int>, Rat>;
void put(Formal &f, int q, int shift, const Rat &c) {
  if (c.isZero())
    return;
  Rat &s = f[{q, shift}];
  s += c;
  if (s.isZero())
    f.erase({q, shift});
}
Formal derived(int r, int l) {
  Formal f;
  for (int t = 0; t <= r; ++t)
    put(f, r + 1 - t, -t, binom(static_cast<long>(l), t) * Rat(r));
  return f;
}
Formal printedOmega(int r, int l) {
  Formal f;
  put(f, r + 1, 0, Rat(r));
  put(f, r, -1, Rat(l * r));
  return f;
}
Formal printedSkj(int r, int l) {
  Formal f;
  for (int t = 1; t <= r + 1; ++t)
    put(f, t, t - r - 1, binom(static_cast<long>(l), t) * Rat(r));
  return f;
}

Line commutators() {
  auto t0 = std::chrono::steady_clock::now();
  Report rep = runSuite("commutators", 3);
  double t = seconds(t0);
  std::set<std::string> expected;
  for (int l = -3; l <= 3; ++l)
    for (int m = -3; m <= 3; ++m)
      for (int r = 1; r <= 3; ++r) {
        std::string lm = ".l" + std::to_string(l) + ".m" + std::to_string(m);
        if (printedOmega(r, l) != derived(r, l))
          expected.insert("comm.wj_Sij1" + std::to_string(r) + lm);
        if (printedSkj(r, l) != derived(r, l))
          expected.insert("comm.Skj11_Sij1" + std::to_string(r) + lm);
      }
  int table = 0, derivedFail = 0, hFail = 0, printedCases = 0, printedPass = 0;
  for (auto &c : rep.checks) {
    if (c.detail.find("table commutator differs") != std::string::npos)
      ++table;
    bool isDerived = c.id.find(".derived") != std::string::npos;
    if (isDerived && c.status != CheckResult::Pass)
      ++derivedFail;
    if (c.id.rfind("comm.h_", 0) == 0 && c.status != CheckResult::Pass)
      ++hFail;
    if (!isDerived && c.id.rfind("comm.h_", 0) != 0) {
      ++printedCases;
      printedPass += c.status == CheckResult::Pass;
    }
  }
  Line l;
  l.pass = rep.allPass() && t < 120;
  std::ostringstream os;
  os << "commutator formulas on the M(1,lambda) basis up to weight 6, l,m in [-3,3]: " << rep.passed << "/"
     << rep.checks.size() << " pass; table vs composition mismatches " << table << "; h formula failures " << hFail
     << "; printed omega and S_kj forms hold in " << printedPass << "/" << printedCases
     << " cases; derived forms failures " << derivedFail << "; " << fmt(t) << " (limit 120 s)";
  l.documented = !l.pass && table == 0 && hFail == 0 && derivedFail == 0 && failing(rep) == expected && t < 120;
  if (l.documented)
    os << "; every printed failure is a case where the printed sum differs from the Borcherds expansion";
  l.what = os.str();
  return l;
}

Line zhu() {
  auto t0 = std::chrono::steady_clock::now();
  SuiteOptions low;
  low.weightBound = 10;
  Report a = runSuite("zhu", 1, low);
  int lowPass = 0;
  for (auto &c : a.checks)
    lowPass += c.status == CheckResult::Pass && c.id != "zhu.quartic_H";
  std::vector<IdentityRecord> quartic;
  for (auto &r : suiteRecords("zhu"))
    if (r.id == "zhu.quartic_H")
      quartic.push_back(r);
  SuiteOptions high;
  high.weightBound = 16;
  Report b = runRecords("zhu", quartic, 1, high);
  double t = seconds(t0);
  bool quarticOk = b.allPass() && b.checks.size() == 1;
  Line l;
  l.pass = lowPass == 4 && quarticOk && t < 300;
  l.what = "Zhu relations at rank 1: " + std::to_string(lowPass) + "/4 at weight bound 10 (three relations and gPoly)" +
           ", quartic in H at bound 16 " + (quarticOk ? "certified" : "not certified: " + b.checks.front().detail) +
           "; " + fmt(t) + " (limit 300 s)";
  return l;
}

Line properties() {
  auto t0 = std::chrono::steady_clock::now();
  auto out = props::all();
  double t = seconds(t0);
  Line l;
  l.pass = t < 60;
  std::ostringstream os;
  os << "property suites:";
  for (auto &o : out) {
    os << " " << o.name << " " << o.cases - o.failures << "/" << o.cases << ";";
    l.pass = l.pass && o.failures == 0 && o.cases >= 200;
    if (o.failures)
      os << " (first: " << o.first << ")";
  }
  os << " " << fmt(t) << " (limit 60 s)";
  l.what = os.str();
  return l;
}

} // namespace

int main() {
  // the quartic needs an O(V) span above the default cap
  setenv("VOA_MAX_WEIGHT", "16", 0);
  std::vector<std::function<Line()>> criteria = {
      appendix,
      [] { return simpleSuite("relation suite at rank 2", "relations", 2, 5); },
      eigen,
      commutators,
      [] { return simpleSuite("boundary derivations, eliminations and gPoly", "boundary", 2, 30); },
      zhu,
      [] { return simpleSuite("level one equations (two input axioms), all ordered triples at rank 3", "verma", 3, 10); },
      properties,
  };
  int bad = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Line l;
    try {
      l = criteria[k]();
    } catch (const std::exception &e) {
      l.what = std::string("error: ") + e.what();
    }
    std::cout << "criterion " << k + 1 << " " << (l.pass ? "PASS" : "FAIL") << (l.documented ? " (documented)" : "")
              << "  " << l.what << std::endl;
    bad += !l.pass && !l.documented;
  }
  std::cout << (bad ? "acceptance: " + std::to_string(bad) + " criteria failed unexpectedly"
                    : std::string("acceptance: no unexpected failures"))
            << std::endl;
  return bad ? 1 : 0;
}
