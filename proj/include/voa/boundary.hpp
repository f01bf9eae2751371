#ifndef VOA_BOUNDARY_HPP
#define VOA_BOUNDARY_HPP

#include "voa/fock.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace voa {

/// One generator used in words: omega^[i], H^[i] (the A set) or S_ij(1,r) (the B set).
struct WordGen {
  enum Kind : std::uint8_t { Omega, H, S } kind = Omega;
  int i = 1, j = 0, r = 0;

  static WordGen omega(int i) { return {Omega, i, 0, 0}; }
  static WordGen har(int i) { return {H, i, 0, 0}; }
  static WordGen s(int i, int j, int r) { return {S, i, j, r}; }

  int weight() const { return kind == Omega ? 2 : kind == H ? 4 : r + 1; }
  VAElement state(int rank) const;
  std::string str() const;
  friend bool operator==(const WordGen &a, const WordGen &b) {
    return a.kind == b.kind && a.i == b.i && a.j == b.j && a.r == b.r;
  }
  friend bool operator<(const WordGen &a, const WordGen &b) {
    return std::tie(a.kind, a.i, a.j, a.r) < std::tie(b.kind, b.i, b.j, b.r);
  }
};

/// Word trees: vac, b_{-s}vac, a_{-i}f, and omega_0 f (the total L(-1)).
struct Word {
  enum Kind : std::uint8_t { Vac, BVac, AMode, Deriv } kind = Vac;
  WordGen gen;
  int index = 0; // s for BVac, i for AMode
  int child = -1;
  int weight = 0;
  std::uint32_t pattern = 0;
};

using WordCombo = std::vector<std::pair<int, PolyQ>>;

/// Interned words with their Fock states, plus a pivot basis of words for each
/// (pattern, weight) used to rewrite concrete states as word combinations.
class WordStore {
public:
  /// A: the diagonal generators; B: for each pair pattern, the S generators of one orientation.
  WordStore(int rank, std::vector<WordGen> a, std::map<std::uint32_t, std::vector<WordGen>> b);

  int rank() const { return rank_; }
  int vac();
  int bvac(const WordGen &b, int s);
  int amode(const WordGen &a, int i, int child);
  int deriv(int child);

  const Word &word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  const VAElement &state(int id) const { return states_.at(static_cast<std::size_t>(id)); }
  std::string str(int id) const;
  const std::vector<WordGen> &aGens() const { return a_; }

  /// Pivot words spanning M(1)^+-pattern space of weight w.
  const std::vector<int> &pivots(std::uint32_t pattern, int w);
  /// Writes a homogeneous single-pattern state on the pivot words. Throws if the
  /// pivot words fail to span.
  std::vector<std::pair<int, Rat>> decompose(const VAElement &x);

private:
  struct Row {
    std::map<Monomial, Rat> vec;
    std::map<int, Rat> comb;
  };
  struct Level {
    std::vector<int> pivots;
    std::vector<Row> rows;
    std::map<Monomial, std::size_t> lead;
    bool built = false;
  };
  int rank_;
  std::vector<WordGen> a_;
  std::map<std::uint32_t, std::vector<WordGen>> b_;
  std::vector<Word> words_;
  std::vector<VAElement> states_;
  std::map<std::tuple<int, WordGen, int, int>, int> index_;
  std::map<std::pair<std::uint32_t, int>, Level> levels_;

  int intern(Word w, VAElement s);
  Level &level(std::uint32_t pattern, int w);
  void reduce(const Level &lv, std::map<Monomial, Rat> &v, std::map<int, Rat> &comb) const;
};

/// Number of Fock monomials of rank d, weight w and the given parity pattern.
std::size_t patternDimension(int rank, std::uint32_t pattern, int w);

// ---------------------------------------------------------------------------

/// The constrained vector u: epsilon(S_ij(1,r)) = eps + r - 1, epsilon(omega) = 1,
/// epsilon(H) = 3, omega^[k]_1 u = zeta_k u and H^[k]_3 u = xi_k u.
struct GenericVectorSpec {
  int rank = 2;
  int i = 1, j = 2;
  PolyQ eps;
  std::vector<PolyQ> zeta, xi; // index k-1

  /// eps, zeta_k, xi_k all indeterminates named eps, zeta<k>, xi<k>.
  static GenericVectorSpec symbolic(int rank = 2, int i = 1, int j = 2);
  /// Same eigenvalues, eps fixed to an integer.
  GenericVectorSpec withEps(const PolyQ &e) const;
};

/// coeff * S_ij(1,r)_{eps+r-1} u; r = 0 stands for u itself.
struct BoundaryTerm {
  int r = 0;
  PolyQ coeff;
  std::string word(const GenericVectorSpec &u) const;
};

/// Component r of the value c_{delta(wt c)} u on the word S_ij(1,r)_{eps+r-1} u.
using BoundaryValue = std::array<PolyQ, 4>;

/// delta(j) for the standard configuration: A = {omega, H} with epsilon = wt - 1 and
/// B = {S_ij(1,r)} with epsilon = eps + r - 1.
PolyQ deltaBound(const PolyQ &eps, int j);
/// General form: A and B given as (weight, epsilon) pairs with integer epsilons.
long deltaBound(const std::vector<std::pair<int, long>> &a, const std::vector<std::pair<int, long>> &b, int j);

class BoundaryEngine {
public:
  explicit BoundaryEngine(GenericVectorSpec u);

  const GenericVectorSpec &spec() const { return u_; }
  WordStore &store() { return store_; }

  BoundaryValue evalWord(int id);
  BoundaryValue evalCombo(const WordCombo &c);
  /// Concrete state: decomposed on pivot words first.
  BoundaryValue evalState(const VAElement &x);

private:
  GenericVectorSpec u_;
  WordStore store_;
  std::unordered_map<int, BoundaryValue> wordMemo_;
  std::map<std::string, BoundaryValue> stateMemo_;
  std::vector<int> active_;

  PolyQ sym(const WordGen &a) const;
  PolyQ delta(std::uint32_t pattern, int w) const;
  BoundaryValue applyTop(const WordGen &a, const BoundaryValue &v);
};

std::vector<BoundaryTerm> toTerms(const BoundaryValue &v);

/// c_{delta(wt c)}u for a word combination or for a concrete state.
std::vector<BoundaryTerm> boundaryAction(const WordCombo &c, BoundaryEngine &eng);
std::vector<BoundaryTerm> boundaryAction(const VAElement &c, const GenericVectorSpec &u);

/// The four pair relations of weights 5, 6, 6, 6 in word form: pair.w5, pair.w6a, pair.w6b, pair.w6c.
std::vector<std::string> relationIds();
WordCombo relationWords(const std::string &id, WordStore &store, int i, int j);
/// Parses a word combination such as "6 w(i)-2 S1 + 1 L L L S1 - 3 H(j)-1 S2" where
/// w(k)-n is omega^[k]_{-n}, H(k)-n is H^[k]_{-n}, L the total omega_0 and Sr = S_ij(1,r).
WordCombo parseWordCombo(const std::string &text, WordStore &store, int i, int j);

/// One polynomial per surviving word S_ij(1,r)_{eps+r-1}u, r = 1, 2, 3.
using Constraint = std::array<PolyQ, 3>;
struct ConstraintSet {
  std::vector<std::string> ids;
  std::vector<Constraint> equations;
};
ConstraintSet deriveConstraints(const GenericVectorSpec &u);
Constraint deriveConstraint(const std::string &relId, BoundaryEngine &eng);

/// True if a = c*b componentwise for one nonzero rational c.
bool associateConstraints(const Constraint &a, const Constraint &b);
/// a = c*b + q*base with c a nonzero rational and q a polynomial; returns (c, q).
std::optional<std::pair<Rat, PolyQ>> associateModulo(const Constraint &a, const Constraint &b, const Constraint &base);
/// det of the 3x3 coefficient matrix: the combination free of all three words.
PolyQ eliminate(const Constraint &c0, const Constraint &c1, const Constraint &c2);
PolyQ specializeConstraint(const PolyQ &p, const std::map<std::string, PolyQ> &assignments);

// ---------------------------------------------------------------------------

/// Level-one calculus for a lowest weight vector u of weight 0 annihilated by every
/// mode above wt - 2, with omega^[k]_1 u = H^[k]_3 u = 0. Symbols are a_{wt a-2}u for
/// the generators omega^[k], H^[k] and S_pq(1,r) with p < q.
class VermaEngine {
public:
  explicit VermaEngine(int rank = 3);

  using Level1 = std::map<int, Rat>; // symbol -> coefficient

  int rank() const { return rank_; }
  const std::vector<WordGen> &symbols() const { return syms_; }
  std::string symbolStr(int s) const;

  /// x_{wt x - 1}u, a scalar.
  Rat level0(const VAElement &x);
  /// x_{wt x - 2}u.
  Level1 level1(const VAElement &x);
  /// x_{wt x - 1} applied to a level-one vector.
  Level1 applyTop(const VAElement &x, const Level1 &v);

  /// The axiom span: omega^[k]_0 u - 3 H^[k]_2 u and S_pq(1,2)_1 u + S_pq(1,3)_2 u.
  std::vector<Level1> axioms();
  /// lhs - rhs lies in the axiom span.
  bool equalModAxioms(const Level1 &lhs, const Level1 &rhs);
  std::string str(const Level1 &v) const;

private:
  int rank_;
  std::vector<WordGen> syms_;
  WordStore store_;
  std::map<std::string, Rat> l0Memo_;
  std::map<std::string, Level1> l1Memo_;
  std::unordered_map<int, Rat> l0Word_;
  std::unordered_map<int, Level1> l1Word_;
  std::vector<int> active_;

  int symbolOf(const WordGen &g) const;
  Rat level0Word(int id);
  Level1 level1Word(int id);
};

struct VermaCheck {
  std::string lhs, rhs;
  bool ok = false;
};
/// The 20 displayed N_1 equations for every ordered triple of distinct indices.
std::vector<VermaCheck> vermaSuite(int rank = 3);

} // namespace voa

#endif
