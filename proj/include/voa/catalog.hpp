#ifndef VOA_CATALOG_HPP
#define VOA_CATALOG_HPP

#include "voa/fock.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace voa {

// ---------------------------------------------------------------------------
// Expression AST. A side of a record is a sum of terms; a term is a product of
// scalar factors times an optional base (a mode chain on a state atom, or a
// polynomial-valued function).

/// A generator index: a letter bound per record, or a fixed integer.
struct Index {
  char letter = 0;
  int value = 0;
  bool operator==(const Index &) const = default;
};

struct ScalarFactor {
  enum Kind { Num, Eps, Zeta, Xi, Lam, Text } kind = Num;
  Rat num;
  Index idx;         // Zeta, Xi, Lam
  std::string text;  // Text: raw polynomial inside parentheses
  int power = 1;
  bool operator==(const ScalarFactor &) const = default;
};

struct Elem {
  enum Kind { S, Omega, OmegaTotal, H, J, Heis } kind = Omega;
  Index a, b;
  int r = 1, s = 1;
  bool operator==(const Elem &) const = default;
};

/// Mode index: n, or eps + n.
struct ModeIdx {
  bool eps = false;
  Rat n;
  bool operator==(const ModeIdx &) const = default;
};

struct Expr;

struct ChainOp {
  enum Kind { Mode, Commutator } kind = Mode;
  Elem e;
  ModeIdx n;
  int power = 1;
  Elem e2; // Commutator: [e[n], e2[n2]]
  ModeIdx n2;
  bool operator==(const ChainOp &) const = default;
};

struct Base {
  enum Kind {
    None,       // pure scalar term
    Vac,
    VacTw,
    Exp,
    U,          // generic constrained vector of the boundary calculus
    HState,     // h(i,-m)
    ElemState,  // element atom used as a state
    Star,       // star(x, y)
    Relation,   // relation(id): boundary constraint of a pair relation
    Eliminate,  // eliminate(id, id, id)
    Subst,      // subst(P; var = value, ...)
    GPoly       // gpoly(P, Q; var)
  } kind = None;
  std::vector<ChainOp> ops; // applied right to left
  Elem elem;                // ElemState
  Index hIdx;               // HState
  int hMode = -1;
  std::vector<std::string> names;    // Relation/Eliminate ids, GPoly variable
  std::vector<Expr> args;            // Star, Subst (first), GPoly
  std::vector<std::pair<ScalarFactor, Expr>> assigns; // Subst: variable -> value
  bool operator==(const Base &) const;
};

struct Term {
  int sign = 1;
  std::vector<ScalarFactor> coeff;
  Base base;
  bool operator==(const Term &) const = default;
};

struct Expr {
  std::vector<Term> terms; // empty means the literal 0
  bool operator==(const Expr &) const = default;
};

inline bool Base::operator==(const Base &o) const {
  return kind == o.kind && ops == o.ops && elem == o.elem && hIdx == o.hIdx && hMode == o.hMode &&
         names == o.names && args == o.args && assigns == o.assigns;
}

enum class RecordKind { Product, Commutator, RelationZero, Eigen, ZhuMember, BoundaryPoly, Twisted };
std::string kindName(RecordKind k);

struct IdentityRecord {
  std::string id;
  RecordKind kind = RecordKind::Product;
  bool assoc = false;
  Expr lhs, rhs; // rhs unused for relationZero and zhuMember
  std::vector<char> indexVars; // letters used, sorted
  std::vector<std::string> suites;
  std::string anchor;
  int line = 0;
};

struct CatalogError : std::runtime_error {
  int line, column;
  CatalogError(int l, int c, const std::string &msg);
};

/// Parses the line-oriented catalog grammar. Throws CatalogError at the first problem.
std::vector<IdentityRecord> parseCatalog(const std::string &text);
/// Parses one expression (no directives).
Expr parseExpr(const std::string &text, const std::vector<char> &declared = {'i', 'j', 'k', 'l'});
std::string render(const Expr &e);
std::string render(const IdentityRecord &r);
/// Text of the shipped catalog file.
std::string readCatalogFile(const std::string &path);
std::string defaultCatalogPath();

// ---------------------------------------------------------------------------

struct CheckResult {
  std::string id;
  enum Status { Pass, Fail, Skip } status = Pass;
  std::string detail;
};

struct Report {
  std::string suite;
  int rank = 0;
  std::vector<CheckResult> checks; // sorted by id
  int passed = 0, failed = 0, skipped = 0;
  double seconds = 0;
  bool allPass() const { return failed == 0 && skipped == 0; }
};

struct SuiteOptions {
  int weightBound = 10;              // zhu: O(V) span bound
  std::vector<int> assignment;       // generator for i, j, k, l; default 1, 2, 3, 4
  std::string catalogPath;           // empty: the shipped file
  int commutatorWeight = 6;          // commutators: basis weight bound
  int commutatorRange = 3;           // commutators: l, m in [-range, range]
};

/// One expression evaluated at a rank: type is "State", "Poly", "Boundary" or "Zero".
struct Evaluation {
  std::string type;
  std::string text;
  bool zero = false;
  State state; // type State only
};
/// Index letters i, j, k, l map to opt.assignment, else 1, 2, 3, 4.
Evaluation evaluate(const std::string &exprText, int rank, const SuiteOptions &opt = {});

std::vector<std::string> suiteNames();
/// Suites: appendix, relations, eigen, commutators, zhu, twisted, boundary, verma, all.
Report runSuite(const std::string &name, int rank, const SuiteOptions &opt = {});
/// Evaluates a list of records directly (appendix records also get their implicit zero rows
/// when withImplicit is set).
Report runRecords(const std::string &suite, const std::vector<IdentityRecord> &recs, int rank,
                  const SuiteOptions &opt = {}, bool withImplicit = false);

std::string reportJson(const Report &r);
std::string reportText(const Report &r);
/// Writes json or text to path ("-" or empty for stdout). Throws on I/O failure.
void emitReport(const Report &r, const std::string &format, const std::string &path);

} // namespace voa

#endif
