#include "voa/boundary.hpp"

#include "voa/vertex.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace voa {

VAElement WordGen::state(int rank) const {
  switch (kind) {
  case Omega:
    return voa::omega(rank, i);
  case H:
    return voa::harH(rank, i);
  default:
    return voa::S(rank, i, j, 1, r);
  }
}

std::string WordGen::str() const {
  switch (kind) {
  case Omega:
    return "omega[" + std::to_string(i) + "]";
  case H:
    return "H[" + std::to_string(i) + "]";
  default:
    return "S[" + std::to_string(i) + std::to_string(j) + "](1," + std::to_string(r) + ")";
  }
}

static std::uint32_t pairBits(int i, int j) { return (1u << (i - 1)) | (1u << (j - 1)); }

// ---------------------------------------------------------------------------

WordStore::WordStore(int rank, std::vector<WordGen> a, std::map<std::uint32_t, std::vector<WordGen>> b)
    : rank_(rank), a_(std::move(a)), b_(std::move(b)) {}

int WordStore::intern(Word w, VAElement s) {
  auto key = std::make_tuple(static_cast<int>(w.kind), w.gen, w.index, w.child);
  auto it = index_.find(key);
  if (it != index_.end())
    return it->second;
  int id = static_cast<int>(words_.size());
  words_.push_back(w);
  states_.push_back(std::move(s));
  index_.emplace(key, id);
  return id;
}

int WordStore::vac() {
  Word w;
  w.kind = Word::Vac;
  return intern(w, vacuum(rank_));
}

int WordStore::bvac(const WordGen &b, int s) {
  if (b.kind != WordGen::S || s < 1)
    throw std::invalid_argument("bvac needs an S generator and s >= 1");
  Word w;
  w.kind = Word::BVac;
  w.gen = b;
  w.index = s;
  w.weight = b.weight() + s - 1;
  w.pattern = pairBits(b.i, b.j);
  return intern(w, nProduct(b.state(rank_), -s, vacuum(rank_)));
}

int WordStore::amode(const WordGen &a, int i, int child) {
  if (a.kind == WordGen::S || i < 1)
    throw std::invalid_argument("amode needs omega or H and i >= 1");
  const Word &f = word(child);
  Word w;
  w.kind = Word::AMode;
  w.gen = a;
  w.index = i;
  w.child = child;
  w.weight = a.weight() + i - 1 + f.weight;
  w.pattern = f.pattern;
  return intern(w, nProduct(a.state(rank_), -i, state(child)));
}

int WordStore::deriv(int child) {
  const Word &f = word(child);
  Word w;
  w.kind = Word::Deriv;
  w.child = child;
  w.weight = f.weight + 1;
  w.pattern = f.pattern;
  return intern(w, nProduct(omegaTotal(rank_), 0, state(child)));
}

std::string WordStore::str(int id) const {
  const Word &w = word(id);
  switch (w.kind) {
  case Word::Vac:
    return "vac";
  case Word::BVac:
    return w.gen.str() + "_{" + std::to_string(-w.index) + "}vac";
  case Word::AMode:
    return w.gen.str() + "_{" + std::to_string(-w.index) + "}" + str(w.child);
  default:
    return "omega_{0}" + str(w.child);
  }
}

std::size_t patternDimension(int rank, std::uint32_t pattern, int w) {
  if (w < 0)
    return 0;
  // count[n][par]: partitions of n with parity par of the number of parts
  std::vector<std::array<std::size_t, 2>> one(static_cast<std::size_t>(w) + 1, {0, 0});
  one[0][0] = 1;
  for (int part = 1; part <= w; ++part)
    for (int n = part; n <= w; ++n)
      for (int par = 0; par < 2; ++par)
        one[static_cast<std::size_t>(n)][par ^ 1] += one[static_cast<std::size_t>(n - part)][par];
  // the loop above allows repeated parts (unbounded knapsack), so it counts partitions
  std::vector<std::size_t> acc(static_cast<std::size_t>(w) + 1, 0);
  acc[0] = 1;
  for (int g = 1; g <= rank; ++g) {
    int par = (pattern >> (g - 1)) & 1;
    std::vector<std::size_t> next(acc.size(), 0);
    for (int a = 0; a <= w; ++a)
      for (int b = 0; a + b <= w; ++b)
        next[static_cast<std::size_t>(a + b)] += acc[static_cast<std::size_t>(a)] * one[static_cast<std::size_t>(b)][par];
    acc = std::move(next);
  }
  return acc[static_cast<std::size_t>(w)];
}

void WordStore::reduce(const Level &lv, std::map<Monomial, Rat> &v, std::map<int, Rat> &comb) const {
  std::map<Monomial, Rat> done;
  while (!v.empty()) {
    auto last = std::prev(v.end());
    auto it = lv.lead.find(last->first);
    if (it == lv.lead.end()) {
      done.insert(*last);
      v.erase(last);
      continue;
    }
    const Row &row = lv.rows[it->second];
    Rat f = last->second / row.vec.at(last->first);
    for (auto &kv : row.vec) {
      Rat &x = v[kv.first];
      x -= f * kv.second;
      if (x.isZero())
        v.erase(kv.first);
    }
    for (auto &kv : row.comb) {
      Rat &x = comb[kv.first];
      x -= f * kv.second;
      if (x.isZero())
        comb.erase(kv.first);
    }
  }
  v = std::move(done);
}

static std::map<Monomial, Rat> ratVector(const VAElement &x) {
  std::map<Monomial, Rat> v;
  for (auto &kv : x.terms())
    v.emplace(kv.first, kv.second.constant());
  return v;
}

WordStore::Level &WordStore::level(std::uint32_t pattern, int w) {
  Level &lv = levels_[{pattern, w}];
  if (lv.built)
    return lv;
  lv.built = true;
  std::size_t dim = patternDimension(rank_, pattern, w);
  auto tryAdd = [&](int id) {
    if (lv.rows.size() >= dim)
      return;
    auto v = ratVector(state(id));
    std::map<int, Rat> comb{{id, Rat(1)}};
    reduce(lv, v, comb);
    if (v.empty())
      return;
    lv.lead.emplace(std::prev(v.end())->first, lv.rows.size());
    lv.rows.push_back(Row{std::move(v), std::move(comb)});
    lv.pivots.push_back(id);
  };
  if (pattern == 0 && w == 0)
    tryAdd(vac());
  auto bit = b_.find(pattern);
  if (bit != b_.end())
    for (auto &b : bit->second)
      if (w - b.weight() + 1 >= 1)
        tryAdd(bvac(b, w - b.weight() + 1));
  for (auto &a : a_)
    for (int i = 1; w - a.weight() - i + 1 >= 0; ++i) {
      // copy, the inner level may still be under construction elsewhere
      std::vector<int> inner = level(pattern, w - a.weight() - i + 1).pivots;
      for (int f : inner)
        tryAdd(amode(a, i, f));
    }
  if (lv.rows.size() != dim)
    throw std::runtime_error("word basis does not span pattern " + patternStr(pattern) + " at weight " +
                             std::to_string(w) + ": rank " + std::to_string(lv.rows.size()) + " of " +
                             std::to_string(dim));
  return lv;
}

const std::vector<int> &WordStore::pivots(std::uint32_t pattern, int w) { return level(pattern, w).pivots; }

std::vector<std::pair<int, Rat>> WordStore::decompose(const VAElement &x) {
  std::vector<std::pair<int, Rat>> out;
  if (x.isZero())
    return out;
  std::uint32_t pattern = parityPattern(x.terms().begin()->first);
  for (auto &kv : x.terms())
    if (parityPattern(kv.first) != pattern)
      throw std::invalid_argument("decompose needs a single parity pattern");
  int w = creationDeg2(x) / 2;
  const Level &lv = level(pattern, w);
  auto v = ratVector(x);
  std::map<int, Rat> comb;
  reduce(lv, v, comb);
  if (!v.empty())
    throw std::logic_error("state outside the word span");
  for (auto &[id, c] : comb)
    out.emplace_back(id, -c);
  return out;
}

// ---------------------------------------------------------------------------

GenericVectorSpec GenericVectorSpec::symbolic(int rank, int i, int j) {
  GenericVectorSpec u;
  u.rank = rank;
  u.i = i;
  u.j = j;
  u.eps = PolyQ::variable("eps");
  for (int k = 1; k <= rank; ++k) {
    u.zeta.push_back(PolyQ::variable("zeta" + std::to_string(k)));
    u.xi.push_back(PolyQ::variable("xi" + std::to_string(k)));
  }
  return u;
}

GenericVectorSpec GenericVectorSpec::withEps(const PolyQ &e) const {
  GenericVectorSpec u = *this;
  u.eps = e;
  return u;
}

std::string BoundaryTerm::word(const GenericVectorSpec &u) const {
  if (r == 0)
    return "u";
  std::ostringstream os;
  os << "S[" << u.i << u.j << "](1," << r << ")_{eps+" << r - 1 << "}u";
  return os.str();
}

PolyQ deltaBound(const PolyQ &eps, int j) {
  // the max is attained by a single B element when j >= 2 (eps - 1 from it);
  // the n = 0 choice gives 0 and wins below weight 2
  if (j < 2)
    return PolyQ(static_cast<long>(j - 1));
  return eps - PolyQ(2) + PolyQ(static_cast<long>(j));
}

long deltaBound(const std::vector<std::pair<int, long>> &a, const std::vector<std::pair<int, long>> &b, int j) {
  // best[w]: max sum over A-sequences of total weight exactly w
  const long none = std::numeric_limits<long>::min();
  std::vector<long> best(static_cast<std::size_t>(std::max(j, 0)) + 1, none);
  best[0] = 0;
  for (int w = 1; w <= j; ++w)
    for (auto &[wt, e] : a)
      if (wt <= w && best[static_cast<std::size_t>(w - wt)] != none)
        best[static_cast<std::size_t>(w)] =
            std::max(best[static_cast<std::size_t>(w)], best[static_cast<std::size_t>(w - wt)] + e - wt + 1);
  long m = 0; // n = 0
  for (auto &[wt, e] : b)
    for (int w = 0; w + wt <= j; ++w)
      if (best[static_cast<std::size_t>(w)] != none)
        m = std::max(m, best[static_cast<std::size_t>(w)] + e - wt + 1);
  return m - 1 + j;
}

static WordStore boundaryStore(const GenericVectorSpec &u) {
  std::vector<WordGen> a;
  for (int k = 1; k <= u.rank; ++k)
    a.push_back(WordGen::omega(k));
  for (int k = 1; k <= u.rank; ++k)
    a.push_back(WordGen::har(k));
  std::map<std::uint32_t, std::vector<WordGen>> b;
  for (int r = 1; r <= 3; ++r)
    b[pairBits(u.i, u.j)].push_back(WordGen::s(u.i, u.j, r));
  return WordStore(u.rank, std::move(a), std::move(b));
}

BoundaryEngine::BoundaryEngine(GenericVectorSpec u) : u_(std::move(u)), store_(boundaryStore(u_)) {
  if (u_.i == u_.j || u_.i < 1 || u_.j < 1 || u_.i > u_.rank || u_.j > u_.rank)
    throw std::invalid_argument("boundary spec needs two distinct indices within the rank");
}

PolyQ BoundaryEngine::sym(const WordGen &a) const {
  auto k = static_cast<std::size_t>(a.i - 1);
  return a.kind == WordGen::Omega ? u_.zeta.at(k) : u_.xi.at(k);
}

PolyQ BoundaryEngine::delta(std::uint32_t pattern, int w) const {
  return pattern == 0 ? PolyQ(static_cast<long>(w - 1)) : u_.eps - PolyQ(2) + PolyQ(static_cast<long>(w));
}

static void addInto(BoundaryValue &acc, const BoundaryValue &v, const PolyQ &c) {
  for (std::size_t r = 0; r < 4; ++r)
    if (!v[r].isZero())
      acc[r] += v[r] * c;
}

BoundaryValue BoundaryEngine::applyTop(const WordGen &a, const BoundaryValue &v) {
  // a_top commutes past S_ij(1,r)_{eps+r-1} and then acts on u as its eigenvalue
  BoundaryValue out;
  PolyQ s = sym(a);
  int e = a.weight() - 1;
  for (int r = 0; r < 4; ++r) {
    if (v[static_cast<std::size_t>(r)].isZero())
      continue;
    out[static_cast<std::size_t>(r)] += s * v[static_cast<std::size_t>(r)];
    if (r == 0)
      continue;
    VAElement b = WordGen::s(u_.i, u_.j, r).state(u_.rank);
    for (int k = 0; k <= e; ++k) {
      VAElement x = nProduct(a.state(u_.rank), k, b);
      if (x.isZero())
        continue;
      addInto(out, evalState(x), v[static_cast<std::size_t>(r)] * PolyQ(binom(static_cast<long>(e), k)));
    }
  }
  return out;
}

BoundaryValue BoundaryEngine::evalWord(int id) {
  if (auto it = wordMemo_.find(id); it != wordMemo_.end())
    return it->second;
  if (std::find(active_.begin(), active_.end(), id) != active_.end())
    throw std::logic_error("cyclic boundary recursion at " + store_.str(id));
  active_.push_back(id);
  Word w = store_.word(id);
  BoundaryValue out;
  switch (w.kind) {
  case Word::Vac:
    out[0] = PolyQ(1);
    break;
  case Word::BVac: {
    if (w.gen.i != u_.i || w.gen.j != u_.j) {
      active_.pop_back();
      out = evalState(store_.state(id));
      wordMemo_.emplace(id, out);
      return out;
    }
    int r = w.gen.r, s = w.index;
    // (b_{-s}vac)_n = (-1)^{s-1} binom(n, s-1) b_{n-s+1}
    PolyQ c = binomialPoly(u_.eps + PolyQ(static_cast<long>(r + s - 2)), s - 1);
    out[static_cast<std::size_t>(r)] = (s % 2 ? c : -c);
    break;
  }
  case Word::AMode: {
    const WordGen a = w.gen;
    int i = w.index, e = a.weight() - 1;
    out = applyTop(a, evalWord(w.child));
    Rat lead = binom(static_cast<long>(-e - 1), i - 1);
    for (auto &p : out)
      p *= lead;
    VAElement f = store_.state(w.child);
    Rat sign = i % 2 ? Rat(-1) : Rat(1);
    for (int l = 0; l <= e; ++l) {
      VAElement x = nProduct(a.state(u_.rank), l, f);
      if (x.isZero())
        continue;
      Rat c = sign * binom(static_cast<long>(l + i - 1), i - 1) * binom(static_cast<long>(e + i), l + i);
      addInto(out, evalState(x), PolyQ(c));
    }
    break;
  }
  case Word::Deriv: {
    // (L(-1)f)_n = -n f_{n-1}
    const Word &f = store_.word(w.child);
    PolyQ n = delta(f.pattern, f.weight) + PolyQ(1);
    addInto(out, evalWord(w.child), -n);
    break;
  }
  }
  active_.pop_back();
  wordMemo_.emplace(id, out);
  return out;
}

BoundaryValue BoundaryEngine::evalCombo(const WordCombo &c) {
  BoundaryValue out;
  for (auto &[id, coef] : c)
    addInto(out, evalWord(id), coef);
  return out;
}

BoundaryValue BoundaryEngine::evalState(const VAElement &x) {
  BoundaryValue out;
  if (x.isZero())
    return out;
  std::string key = x.str();
  if (auto it = stateMemo_.find(key); it != stateMemo_.end())
    return it->second;
  for (auto &[id, c] : store_.decompose(x))
    addInto(out, evalWord(id), PolyQ(c));
  stateMemo_.emplace(key, out);
  return out;
}

std::vector<BoundaryTerm> toTerms(const BoundaryValue &v) {
  std::vector<BoundaryTerm> out;
  for (int r = 0; r < 4; ++r)
    if (!v[static_cast<std::size_t>(r)].isZero())
      out.push_back(BoundaryTerm{r, v[static_cast<std::size_t>(r)]});
  return out;
}

std::vector<BoundaryTerm> boundaryAction(const WordCombo &c, BoundaryEngine &eng) { return toTerms(eng.evalCombo(c)); }

std::vector<BoundaryTerm> boundaryAction(const VAElement &c, const GenericVectorSpec &u) {
  for (auto &kv : c.terms()) {
    std::uint32_t p = parityPattern(kv.first);
    if (p != 0 && p != pairBits(u.i, u.j))
      throw std::invalid_argument("boundary action needs pattern {} or {" + std::to_string(u.i) + "," +
                                  std::to_string(u.j) + "}, got " + patternStr(p));
  }
  BoundaryEngine eng(u);
  return toTerms(eng.evalState(c));
}

// ---------------------------------------------------------------------------

namespace {
struct RelationText {
  const char *id;
  const char *text;
};
// Relations in M(1)^+ of pattern {i,j}. Read right to left: Sr is S_ij(1,r) = S_ij(1,r)_{-1}vac,
// w(k)-n and H(k)-n are negative modes, L is the zero mode of the total conformal vector.
const RelationText kRelations[] = {
    {"pair.w5", "6 w(i)-2 S1 + 2 w(j)-2 S1 - 4 L w(i)-1 S1 + 1 L L L S1 + 4 w(i)-1 S2 - 4 w(j)-1 S2"
                " - 3 L L S2 + 6 L S3"},
    {"pair.w6a", "32 w(i)-3 S1 - 24 H(i)-1 S1 - 8 w(j)-3 S1 + 24 H(j)-1 S1 - 120 L w(i)-2 S1"
                 " + 36 L w(j)-2 S1 + 72 L L w(i)-1 S1 - 9 L L L L S1 + 12 w(i)-2 S2 + 12 w(j)-2 S2"
                 " - 72 L w(i)-1 S2 - 72 L w(j)-1 S2 + 18 L L L S2"},
    {"pair.w6b", "8 w(j)-3 S1 - 24 H(j)-1 S1 + 54 L w(i)-2 S1 - 36 L w(j)-2 S1 - 36 L L w(i)-1 S1"
                 " + 9 L L L L S1 + 54 w(i)-2 S2 - 12 w(j)-2 S2 + 72 L w(j)-1 S2 - 18 L L L S2"
                 " + 72 w(i)-1 S3"},
    {"pair.w6c", "14 w(j)-3 S1 + 12 H(j)-1 S1 - 3 w(j)-2 S2 - 36 w(j)-1 S3"},
};
} // namespace

std::vector<std::string> relationIds() {
  std::vector<std::string> out;
  for (auto &r : kRelations)
    out.emplace_back(r.id);
  return out;
}

WordCombo parseWordCombo(const std::string &text, WordStore &store, int i, int j) {
  std::istringstream in(text);
  std::vector<std::string> toks;
  for (std::string t; in >> t;)
    toks.push_back(t);
  WordCombo out;
  std::size_t p = 0;
  auto bad = [&](const std::string &why) { throw std::invalid_argument("word combination: " + why + " in '" + text + "'"); };
  while (p < toks.size()) {
    Rat sign(1);
    if (toks[p] == "+" || toks[p] == "-") {
      sign = toks[p] == "-" ? Rat(-1) : Rat(1);
      ++p;
    }
    if (p >= toks.size())
      bad("dangling sign");
    Rat coef = sign * Rat::parse(toks[p++]);
    std::vector<std::string> ops;
    while (p < toks.size() && toks[p] != "+" && toks[p] != "-")
      ops.push_back(toks[p++]);
    if (ops.empty() || ops.back().size() != 2 || ops.back()[0] != 'S')
      bad("term must end in S1, S2 or S3");
    int r = ops.back()[1] - '0';
    if (r < 1 || r > 3)
      bad("bad S index");
    int id = store.bvac(WordGen::s(i, j, r), 1);
    for (auto it = std::next(ops.rbegin()); it != ops.rend(); ++it) {
      const std::string &op = *it;
      if (op == "L") {
        id = store.deriv(id);
        continue;
      }
      // w(k)-n or H(k)-n
      if (op.size() < 6 || (op[0] != 'w' && op[0] != 'H') || op[1] != '(' || op[3] != ')' || op[4] != '-')
        bad("unknown operator " + op);
      if (op[2] != 'i' && op[2] != 'j')
        bad("index must be i or j");
      int k = op[2] == 'i' ? i : j;
      int n = std::stoi(op.substr(5));
      WordGen g = op[0] == 'w' ? WordGen::omega(k) : WordGen::har(k);
      id = store.amode(g, n, id);
    }
    out.emplace_back(id, PolyQ(coef));
  }
  return out;
}

WordCombo relationWords(const std::string &id, WordStore &store, int i, int j) {
  for (auto &r : kRelations)
    if (id == r.id)
      return parseWordCombo(r.text, store, i, j);
  throw std::invalid_argument("unknown relation " + id);
}

Constraint deriveConstraint(const std::string &relId, BoundaryEngine &eng) {
  const auto &u = eng.spec();
  BoundaryValue v = eng.evalCombo(relationWords(relId, eng.store(), u.i, u.j));
  if (!v[0].isZero())
    throw std::logic_error("pair relation produced a bare u term");
  return {v[1], v[2], v[3]};
}

ConstraintSet deriveConstraints(const GenericVectorSpec &u) {
  BoundaryEngine eng(u);
  ConstraintSet cs;
  for (auto &id : relationIds()) {
    cs.ids.push_back(id);
    cs.equations.push_back(deriveConstraint(id, eng));
  }
  return cs;
}

bool associateConstraints(const Constraint &a, const Constraint &b) {
  std::optional<Rat> ratio;
  for (std::size_t k = 0; k < 3; ++k) {
    if (a[k].isZero() != b[k].isZero())
      return false;
    if (a[k].isZero())
      continue;
    Rat c = a[k].leading().second / b[k].leading().second;
    if (ratio && *ratio != c)
      return false;
    ratio = c;
    if (a[k] != b[k] * c)
      return false;
  }
  return ratio.has_value();
}

std::optional<std::pair<Rat, PolyQ>> associateModulo(const Constraint &a, const Constraint &b,
                                                     const Constraint &base) {
  // a - c b is proportional to base iff every 2x2 minor with base vanishes; linear in c
  std::optional<Rat> c;
  for (std::size_t k = 0; k < 3 && !c; ++k)
    for (std::size_t l = k + 1; l < 3 && !c; ++l) {
      PolyQ mb = b[k] * base[l] - b[l] * base[k];
      if (mb.isZero())
        continue;
      PolyQ ma = a[k] * base[l] - a[l] * base[k];
      if (ma.isZero())
        return std::nullopt;
      Rat r = ma.leading().second / mb.leading().second;
      if (ma != mb * r)
        return std::nullopt;
      c = r;
    }
  if (!c)
    return std::nullopt; // b itself is proportional to base
  Constraint d{a[0] - b[0] * *c, a[1] - b[1] * *c, a[2] - b[2] * *c};
  PolyQ q;
  for (std::size_t k = 0; k < 3; ++k)
    if (!base[k].isZero()) {
      try {
        q = d[k].divExact(base[k]);
      } catch (const std::exception &) {
        return std::nullopt;
      }
      break;
    }
  for (std::size_t k = 0; k < 3; ++k)
    if (d[k] != q * base[k])
      return std::nullopt;
  return std::make_pair(*c, q);
}

PolyQ eliminate(const Constraint &a, const Constraint &b, const Constraint &c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

PolyQ specializeConstraint(const PolyQ &p, const std::map<std::string, PolyQ> &assignments) {
  std::map<VarId, PolyQ> m;
  for (auto &[name, v] : assignments)
    m.emplace(var(name), v);
  return p.subst(m);
}

// ---------------------------------------------------------------------------

static WordStore vermaStore(int rank) {
  std::vector<WordGen> a;
  for (int k = 1; k <= rank; ++k)
    a.push_back(WordGen::omega(k));
  for (int k = 1; k <= rank; ++k)
    a.push_back(WordGen::har(k));
  std::map<std::uint32_t, std::vector<WordGen>> b;
  for (int p = 1; p <= rank; ++p)
    for (int q = p + 1; q <= rank; ++q)
      for (int r = 1; r <= 3; ++r)
        b[pairBits(p, q)].push_back(WordGen::s(p, q, r));
  return WordStore(rank, std::move(a), std::move(b));
}

VermaEngine::VermaEngine(int rank) : rank_(rank), store_(vermaStore(rank)) {
  if (rank < 3)
    throw std::invalid_argument("the level-one suite needs rank >= 3");
  for (int k = 1; k <= rank; ++k)
    syms_.push_back(WordGen::omega(k));
  for (int k = 1; k <= rank; ++k)
    syms_.push_back(WordGen::har(k));
  for (int p = 1; p <= rank; ++p)
    for (int q = p + 1; q <= rank; ++q)
      for (int r = 1; r <= 3; ++r)
        syms_.push_back(WordGen::s(p, q, r));
}

int VermaEngine::symbolOf(const WordGen &g) const {
  auto it = std::find(syms_.begin(), syms_.end(), g);
  if (it == syms_.end())
    throw std::logic_error("no level-one symbol for " + g.str());
  return static_cast<int>(it - syms_.begin());
}

std::string VermaEngine::symbolStr(int s) const {
  const WordGen &g = syms_.at(static_cast<std::size_t>(s));
  return g.str() + "_{" + std::to_string(g.weight() - 2) + "}u";
}

Rat VermaEngine::level0Word(int id) {
  if (auto it = l0Word_.find(id); it != l0Word_.end())
    return it->second;
  const Word w = store_.word(id);
  Rat out(0);
  switch (w.kind) {
  case Word::Vac:
    out = Rat(1);
    break;
  case Word::BVac:
    break; // b_{wt b - 1}u = 0
  case Word::AMode: {
    // cut at e = wt a - 2 since a_{wt a - 1}u = 0; then f_{wt f}u = 0 kills the leading term
    int i = w.index, e = w.gen.weight() - 2;
    VAElement f = store_.state(w.child);
    Rat sign = i % 2 ? Rat(-1) : Rat(1);
    for (int k = 0; k <= e; ++k) {
      VAElement x = nProduct(w.gen.state(rank_), k, f);
      if (!x.isZero())
        out += sign * binom(static_cast<long>(k + i - 1), i - 1) * binom(static_cast<long>(e + i), k + i) * level0(x);
    }
    break;
  }
  case Word::Deriv:
    out = -Rat(static_cast<long>(store_.word(w.child).weight)) * level0Word(w.child);
    break;
  }
  l0Word_.emplace(id, out);
  return out;
}

Rat VermaEngine::level0(const VAElement &x) {
  if (x.isZero())
    return Rat(0);
  if (parityPattern(x.terms().begin()->first) != 0)
    return Rat(0);
  std::string key = x.str();
  if (auto it = l0Memo_.find(key); it != l0Memo_.end())
    return it->second;
  Rat out(0);
  for (auto &[id, c] : store_.decompose(x))
    out += c * level0Word(id);
  l0Memo_.emplace(key, out);
  return out;
}

static void addLevel1(VermaEngine::Level1 &acc, const VermaEngine::Level1 &v, const Rat &c) {
  if (c.isZero())
    return;
  for (auto &[s, x] : v) {
    Rat &y = acc[s];
    y += c * x;
    if (y.isZero())
      acc.erase(s);
  }
}

VermaEngine::Level1 VermaEngine::level1Word(int id) {
  if (auto it = l1Word_.find(id); it != l1Word_.end())
    return it->second;
  if (std::find(active_.begin(), active_.end(), id) != active_.end())
    throw std::logic_error("cyclic level-one recursion at " + store_.str(id));
  active_.push_back(id);
  const Word w = store_.word(id);
  Level1 out;
  switch (w.kind) {
  case Word::Vac:
    break;
  case Word::BVac: {
    int s = w.index;
    Rat c = binom(static_cast<long>(w.gen.weight() + s - 3), s - 1);
    out[symbolOf(w.gen)] = s % 2 ? c : -c;
    break;
  }
  case Word::AMode: {
    // cut at e = wt a - 2; the leading term is a_{wt a - 2}(f_{wt f - 1}u)
    int i = w.index, e = w.gen.weight() - 2;
    Rat lead = binom(static_cast<long>(-e - 1), i - 1) * level0Word(w.child);
    if (!lead.isZero())
      out[symbolOf(w.gen)] = lead;
    VAElement f = store_.state(w.child);
    Rat sign = i % 2 ? Rat(-1) : Rat(1);
    for (int k = 0; k <= e; ++k) {
      VAElement x = nProduct(w.gen.state(rank_), k, f);
      if (!x.isZero())
        addLevel1(out, level1(x),
                  sign * binom(static_cast<long>(k + i - 1), i - 1) * binom(static_cast<long>(e + i), k + i));
    }
    break;
  }
  case Word::Deriv:
    addLevel1(out, level1Word(w.child), -Rat(static_cast<long>(store_.word(w.child).weight - 1)));
    break;
  }
  active_.pop_back();
  l1Word_.emplace(id, out);
  return out;
}

VermaEngine::Level1 VermaEngine::level1(const VAElement &x) {
  Level1 out;
  if (x.isZero())
    return out;
  std::string key = x.str();
  if (auto it = l1Memo_.find(key); it != l1Memo_.end())
    return it->second;
  for (auto &[id, c] : store_.decompose(x))
    addLevel1(out, level1Word(id), c);
  l1Memo_.emplace(key, out);
  return out;
}

VermaEngine::Level1 VermaEngine::applyTop(const VAElement &x, const Level1 &v) {
  // x_{wt x - 1} Y_{wt Y - 2}u = Y_{wt Y - 2} x_{wt x - 1}u + sum_k binom(wt x - 1, k)(x_k Y)_{...}u
  int wx = elementWeight(x);
  Rat l0 = level0(x);
  Level1 out;
  for (auto &[s, c] : v) {
    if (!l0.isZero())
      addLevel1(out, Level1{{s, Rat(1)}}, c * l0);
    VAElement y = syms_.at(static_cast<std::size_t>(s)).state(rank_);
    for (int k = 0; k <= wx - 1; ++k) {
      VAElement z = nProduct(x, k, y);
      if (!z.isZero())
        addLevel1(out, level1(z), c * binom(static_cast<long>(wx - 1), k));
    }
  }
  return out;
}

std::vector<VermaEngine::Level1> VermaEngine::axioms() {
  std::vector<Level1> out;
  for (int k = 1; k <= rank_; ++k) {
    Level1 a = level1(omega(rank_, k));
    addLevel1(a, level1(harH(rank_, k)), Rat(-3));
    out.push_back(a);
  }
  for (int p = 1; p <= rank_; ++p)
    for (int q = 1; q <= rank_; ++q)
      if (p != q) {
        Level1 a = level1(S(rank_, p, q, 1, 2));
        addLevel1(a, level1(S(rank_, p, q, 1, 3)), Rat(1));
        out.push_back(a);
      }
  return out;
}

namespace {
// eliminates pivots (largest symbol of each row) from v, largest first
void reduceLevel1(const std::map<int, VermaEngine::Level1> &rows, VermaEngine::Level1 &v) {
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    auto hit = v.find(it->first);
    if (hit == v.end())
      continue;
    addLevel1(v, it->second, -(hit->second / std::prev(it->second.end())->second));
  }
}
} // namespace

bool VermaEngine::equalModAxioms(const Level1 &lhs, const Level1 &rhs) {
  std::map<int, Level1> rows;
  for (auto a : axioms()) {
    reduceLevel1(rows, a);
    if (!a.empty())
      rows.emplace(std::prev(a.end())->first, a);
  }
  Level1 d = lhs;
  addLevel1(d, rhs, Rat(-1));
  reduceLevel1(rows, d);
  return d.empty();
}

std::string VermaEngine::str(const Level1 &v) const {
  if (v.empty())
    return "0";
  std::string out;
  for (auto &[s, c] : v) {
    if (!out.empty())
      out += " + ";
    out += c.str() + "*" + symbolStr(s);
  }
  return out;
}

std::vector<VermaCheck> vermaSuite(int rank) {
  VermaEngine eng(rank);
  std::vector<VermaCheck> out;
  using L1 = VermaEngine::Level1;
  auto lv = [&](const VAElement &x) { return eng.level1(x); };
  auto scaled = [](L1 v, const Rat &c) {
    L1 r;
    if (!c.isZero())
      for (auto &[s, x] : v)
        r[s] = x * c;
    return r;
  };
  for (int i = 1; i <= rank; ++i)
    for (int j = 1; j <= rank; ++j)
      for (int k = 1; k <= rank; ++k) {
        if (i == j || j == k || i == k)
          continue;
        auto name = [&](const std::string &g, int a, int b) {
          return g + "[" + std::to_string(a) + (b ? std::to_string(b) : "") + "]";
        };
        L1 wj0 = lv(omega(rank, j));
        L1 s12 = lv(S(rank, i, j, 1, 2));
        std::string wj0s = name("omega", j, 0) + "_0u", s12s = name("S", i, j) + "(1,2)_1u";
        auto add = [&](const std::string &l, const L1 &lhs, const std::string &r, const L1 &rhs) {
          out.push_back(VermaCheck{l, r, eng.equalModAxioms(lhs, rhs)});
        };
        add(name("omega", j, 0) + "_1" + wj0s, eng.applyTop(omega(rank, j), wj0), wj0s, wj0);
        add(name("omega", i, 0) + "_1" + wj0s, eng.applyTop(omega(rank, i), wj0), "0", {});
        add(name("H", j, 0) + "_3" + wj0s, eng.applyTop(harH(rank, j), wj0), wj0s, wj0);
        add(name("H", i, 0) + "_3" + wj0s, eng.applyTop(harH(rank, i), wj0), "0", {});
        const int coefOnW[] = {-1, 2, -3};
        for (int r = 1; r <= 3; ++r)
          add(name("S", i, j) + "(1," + std::to_string(r) + ")_" + std::to_string(r) + wj0s,
              eng.applyTop(S(rank, i, j, 1, r), wj0), std::to_string(coefOnW[r - 1]) + "*" + s12s,
              scaled(s12, Rat(coefOnW[r - 1])));
        add(name("omega", i, 0) + "_1" + s12s, eng.applyTop(omega(rank, i), s12), s12s, s12);
        add(name("omega", j, 0) + "_1" + s12s, eng.applyTop(omega(rank, j), s12), "0", {});
        add(name("H", i, 0) + "_3" + s12s, eng.applyTop(harH(rank, i), s12), s12s, s12);
        add(name("H", j, 0) + "_3" + s12s, eng.applyTop(harH(rank, j), s12), "0", {});
        const int coefSelf[] = {-1, 0, 0};
        for (int r = 1; r <= 3; ++r)
          add(name("S", i, j) + "(1," + std::to_string(r) + ")_" + std::to_string(r) + s12s,
              eng.applyTop(S(rank, i, j, 1, r), s12), coefSelf[r - 1] ? "-" + wj0s : "0",
              scaled(wj0, Rat(coefSelf[r - 1])));
        for (int r = 1; r <= 3; ++r)
          add(name("S", k, j) + "(1," + std::to_string(r) + ")_" + std::to_string(r) + s12s,
              eng.applyTop(S(rank, k, j, 1, r), s12), "0", {});
        L1 skj = lv(S(rank, k, j, 1, 2));
        const int coefK[] = {1, -2, 3};
        for (int r = 1; r <= 3; ++r)
          add(name("S", k, i) + "(1," + std::to_string(r) + ")_" + std::to_string(r) + s12s,
              eng.applyTop(S(rank, k, i, 1, r), s12),
              std::to_string(coefK[r - 1]) + "*" + name("S", k, j) + "(1,2)_1u", scaled(skj, Rat(coefK[r - 1])));
      }
  return out;
}

} // namespace voa
