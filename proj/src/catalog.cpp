#include "voa/catalog.hpp"

#include "voa/boundary.hpp"
#include "voa/fock.hpp"
#include "voa/vertex.hpp"
#include "voa/zhu.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <variant>

#ifndef VOA_CATALOG_DEFAULT
#define VOA_CATALOG_DEFAULT "data/catalog.txt"
#endif

namespace voa {

CatalogError::CatalogError(int l, int c, const std::string &msg)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l),
      column(c) {}

std::string kindName(RecordKind k) {
  switch (k) {
  case RecordKind::Product: return "product";
  case RecordKind::Commutator: return "commutator";
  case RecordKind::RelationZero: return "relationZero";
  case RecordKind::Eigen: return "eigen";
  case RecordKind::ZhuMember: return "zhuMember";
  case RecordKind::BoundaryPoly: return "boundaryPoly";
  case RecordKind::Twisted: return "twisted";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Lexer over one logical record. Positions map back to physical (line, column).

struct SourceMap {
  std::vector<std::pair<std::size_t, std::pair<int, int>>> segs; // logical offset -> (line, col)
  std::pair<int, int> at(std::size_t off) const {
    if (segs.empty())
      return {1, static_cast<int>(off) + 1};
    auto it = std::upper_bound(segs.begin(), segs.end(), off,
                               [](std::size_t o, const auto &s) { return o < s.first; });
    if (it != segs.begin())
      --it;
    return {it->second.first, it->second.second + static_cast<int>(off - it->first)};
  }
};

enum class Tok { Ident, Int, LParen, RParen, LBrack, RBrack, Comma, Semi, Colon, Star, Plus, Minus, Slash, Caret, At, Assign, EqEq, End };

struct Token {
  Tok t = Tok::End;
  std::string text;
  std::size_t pos = 0;
};

std::string tokDesc(const Token &k) {
  if (k.t == Tok::End)
    return "end of input";
  return "'" + k.text + "'";
}

class Lexer {
public:
  Lexer(const std::string &s, const SourceMap *m) : s_(s), map_(m) {}

  const Token &peek() {
    if (!have_) {
      cur_ = lex();
      have_ = true;
    }
    return cur_;
  }
  Token next() {
    peek();
    have_ = false;
    return cur_;
  }
  bool accept(Tok t) {
    if (peek().t == t) {
      next();
      return true;
    }
    return false;
  }
  Token expect(Tok t, const char *what) {
    if (peek().t != t)
      fail(peek().pos, std::string("expected ") + what + ", found " + tokDesc(peek()));
    return next();
  }
  /// Raw text up to the parenthesis closing one already consumed '('.
  std::string rawUntilClose(std::size_t openPos) {
    if (have_)
      pos_ = cur_.pos, have_ = false;
    int depth = 1;
    std::size_t start = pos_;
    for (; pos_ < s_.size(); ++pos_) {
      if (s_[pos_] == '(')
        ++depth;
      else if (s_[pos_] == ')' && --depth == 0) {
        std::string out = s_.substr(start, pos_ - start);
        ++pos_;
        auto b = out.find_first_not_of(" \t");
        auto e = out.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : out.substr(b, e - b + 1);
      }
    }
    fail(openPos, "unbalanced parenthesis");
  }
  [[noreturn]] void fail(std::size_t pos, const std::string &msg) const {
    auto [l, c] = map_ ? map_->at(pos) : std::pair<int, int>{1, static_cast<int>(pos) + 1};
    throw CatalogError(l, c, msg);
  }
  std::size_t offset() { return peek().pos; }

private:
  const std::string &s_;
  const SourceMap *map_;
  std::size_t pos_ = 0;
  Token cur_;
  bool have_ = false;

  Token lex() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    Token k;
    k.pos = pos_;
    if (pos_ >= s_.size())
      return k;
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.'))
        ++pos_;
      k.t = Tok::Ident;
      k.text = s_.substr(b, pos_ - b);
      return k;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      k.t = Tok::Int;
      k.text = s_.substr(b, pos_ - b);
      return k;
    }
    ++pos_;
    k.text = std::string(1, c);
    switch (c) {
    case '(': k.t = Tok::LParen; break;
    case ')': k.t = Tok::RParen; break;
    case '[': k.t = Tok::LBrack; break;
    case ']': k.t = Tok::RBrack; break;
    case ',': k.t = Tok::Comma; break;
    case ';': k.t = Tok::Semi; break;
    case ':': k.t = Tok::Colon; break;
    case '*': k.t = Tok::Star; break;
    case '+': k.t = Tok::Plus; break;
    case '-': k.t = Tok::Minus; break;
    case '/': k.t = Tok::Slash; break;
    case '^': k.t = Tok::Caret; break;
    case '@': k.t = Tok::At; break;
    case '=':
      if (pos_ < s_.size() && s_[pos_] == '=') {
        ++pos_;
        k.t = Tok::EqEq;
        k.text = "==";
      } else {
        k.t = Tok::Assign;
      }
      break;
    default: fail(k.pos, "unexpected character '" + k.text + "'");
    }
    return k;
  }
};

// ---------------------------------------------------------------------------

enum class VType { Zero, State, Poly, Bnd };

const char *vtypeName(VType t) {
  switch (t) {
  case VType::Zero: return "zero";
  case VType::State: return "state";
  case VType::Poly: return "polynomial";
  case VType::Bnd: return "boundary value";
  }
  return "?";
}

std::string idxStr(const Index &i);

const std::set<std::string> kElemNames = {"omega", "H", "J", "S", "h"};
const std::set<std::string> kAtomNames = {"vac",   "vactw",    "exp",       "u",     "star",
                                          "relation", "eliminate", "subst", "gpoly"};

class Parser {
public:
  Parser(const std::string &s, const SourceMap *m, std::vector<char> declared)
      : lx_(s, m), declared_(std::move(declared)) {}

  Lexer &lexer() { return lx_; }
  const std::set<char> &used() const { return used_; }

  Expr parseExpr() {
    Expr e;
    auto start = lx_.peek();
    if (start.t == Tok::Int && start.text == "0") {
      // literal 0 only when it is the whole side
      Lexer probe = lx_;
      probe.next();
      auto after = probe.peek().t;
      if (after == Tok::End || after == Tok::EqEq || after == Tok::RParen || after == Tok::Comma || after == Tok::Semi) {
        lx_.next();
        return e;
      }
    }
    int sign = 1;
    if (lx_.accept(Tok::Minus))
      sign = -1;
    else
      lx_.accept(Tok::Plus);
    e.terms.push_back(parseTerm(sign));
    for (;;) {
      if (lx_.accept(Tok::Plus))
        e.terms.push_back(parseTerm(1));
      else if (lx_.accept(Tok::Minus))
        e.terms.push_back(parseTerm(-1));
      else
        break;
    }
    return e;
  }

  VType typeOf(const Expr &e, std::size_t pos) {
    VType t = VType::Zero;
    for (auto &term : e.terms) {
      VType u = typeOfBase(term.base, pos);
      if (t == VType::Zero)
        t = u;
      else if (u != t)
        lx_.fail(pos, std::string("type mismatch: ") + vtypeName(t) + " plus " + vtypeName(u));
    }
    return t;
  }

private:
  Lexer lx_;
  std::vector<char> declared_;
  std::set<char> used_;

  bool isScalarStart() {
    auto &k = lx_.peek();
    if (k.t == Tok::Int || k.t == Tok::LParen)
      return true;
    if (k.t != Tok::Ident)
      return false;
    return k.text == "eps" || k.text == "zeta" || k.text == "xi" || k.text == "lam";
  }

  Index parseIndex() {
    auto k = lx_.peek();
    Index ix;
    if (k.t == Tok::Int) {
      lx_.next();
      ix.value = std::stoi(k.text);
      if (ix.value < 1)
        lx_.fail(k.pos, "generator index must be positive");
      return ix;
    }
    if (k.t != Tok::Ident)
      lx_.fail(k.pos, "expected an index, found " + tokDesc(k));
    lx_.next();
    if (k.text.size() != 1)
      lx_.fail(k.pos, "index must be a single letter or a number, found '" + k.text + "'");
    char c = k.text[0];
    if (std::find(declared_.begin(), declared_.end(), c) == declared_.end())
      lx_.fail(k.pos, std::string("unbound index '") + c + "'");
    ix.letter = c;
    used_.insert(c);
    return ix;
  }

  long parseSignedInt() {
    bool neg = lx_.accept(Tok::Minus);
    auto k = lx_.expect(Tok::Int, "an integer");
    long v = std::stol(k.text);
    return neg ? -v : v;
  }

  Rat parseSignedRat() {
    bool neg = lx_.accept(Tok::Minus);
    auto k = lx_.expect(Tok::Int, "a number");
    Rat v = Rat::parse(k.text);
    if (lx_.accept(Tok::Slash)) {
      auto d = lx_.expect(Tok::Int, "a denominator");
      if (d.text.find_first_not_of('0') == std::string::npos)
        lx_.fail(d.pos, "zero denominator");
      v = v / Rat::parse(d.text);
    }
    return neg ? -v : v;
  }

  int parsePower() {
    if (!lx_.accept(Tok::Caret))
      return 1;
    auto k = lx_.expect(Tok::Int, "an exponent");
    int p = std::stoi(k.text);
    if (p < 1)
      lx_.fail(k.pos, "exponent must be positive");
    return p;
  }

  ScalarFactor parseScalar() {
    ScalarFactor f;
    auto k = lx_.peek();
    if (k.t == Tok::Int) {
      f.kind = ScalarFactor::Num;
      f.num = parseSignedRat();
    } else if (k.t == Tok::LParen) {
      lx_.next();
      f.kind = ScalarFactor::Text;
      f.text = lx_.rawUntilClose(k.pos);
      if (f.text.empty())
        lx_.fail(k.pos, "empty parentheses");
      // validate now so errors carry a position
      try {
        parsePoly(substituteIndexVars(f.text, nullptr, k.pos));
      } catch (const CatalogError &) {
        throw;
      } catch (const std::exception &ex) {
        lx_.fail(k.pos, ex.what());
      }
    } else {
      lx_.next();
      if (k.text == "eps") {
        f.kind = ScalarFactor::Eps;
      } else {
        f.kind = k.text == "zeta" ? ScalarFactor::Zeta : k.text == "xi" ? ScalarFactor::Xi : ScalarFactor::Lam;
        lx_.expect(Tok::LParen, "'('");
        f.idx = parseIndex();
        lx_.expect(Tok::RParen, "')'");
      }
    }
    f.power = parsePower();
    return f;
  }

public:
  /// Replaces zeta(x), xi(x), lam(x) inside polynomial text with variable names. With a
  /// null assignment only validates the letters and uses placeholders.
  std::string substituteIndexVars(const std::string &text, const std::map<char, int> *asg, std::size_t pos) {
    static const std::regex re(R"((zeta|xi|lam)\(\s*([A-Za-z]|[0-9]+)\s*\))");
    std::string out;
    auto it = std::sregex_iterator(text.begin(), text.end(), re);
    std::size_t last = 0;
    for (; it != std::sregex_iterator(); ++it) {
      auto &m = *it;
      out += text.substr(last, static_cast<std::size_t>(m.position()) - last);
      std::string name = m[1].str(), arg = m[2].str();
      int v = 1;
      if (std::isalpha(static_cast<unsigned char>(arg[0]))) {
        char c = arg[0];
        if (std::find(declared_.begin(), declared_.end(), c) == declared_.end())
          lx_.fail(pos, std::string("unbound index '") + c + "'");
        used_.insert(c);
        if (asg)
          v = asg->at(c);
      } else {
        v = std::stoi(arg);
      }
      out += name == "lam" ? "lam_" + std::to_string(v) : name + std::to_string(v);
      last = static_cast<std::size_t>(m.position() + m.length());
    }
    out += text.substr(last);
    return out;
  }

private:
  Term parseTerm(int sign) {
    Term t;
    t.sign = sign;
    for (;;) {
      if (!isScalarStart())
        break;
      t.coeff.push_back(parseScalar());
      if (!lx_.accept(Tok::Star)) {
        auto &k = lx_.peek();
        if (!isTerminator(k.t))
          lx_.fail(k.pos, "expected '*' or end of term, found " + tokDesc(k));
        return t; // pure scalar
      }
    }
    t.base = parseChain();
    return t;
  }

  static bool isTerminator(Tok t) {
    return t == Tok::End || t == Tok::Plus || t == Tok::Minus || t == Tok::EqEq || t == Tok::RParen ||
           t == Tok::Comma || t == Tok::Semi;
  }

  Elem parseElemAfterName(const Token &name) {
    Elem e;
    if (name.text == "omega") {
      if (lx_.peek().t != Tok::LParen) {
        e.kind = Elem::OmegaTotal;
        return e;
      }
      e.kind = Elem::Omega;
    } else if (name.text == "H") {
      e.kind = Elem::H;
    } else if (name.text == "J") {
      e.kind = Elem::J;
    } else if (name.text == "h") {
      e.kind = Elem::Heis;
    } else {
      e.kind = Elem::S;
    }
    lx_.expect(Tok::LParen, "'('");
    e.a = parseIndex();
    if (e.kind == Elem::S) {
      lx_.expect(Tok::Comma, "','");
      e.b = parseIndex();
      lx_.expect(Tok::Semi, "';'");
      e.r = static_cast<int>(parseSignedInt());
      lx_.expect(Tok::Comma, "','");
      e.s = static_cast<int>(parseSignedInt());
      if (e.r < 1 || e.s < 1)
        lx_.fail(name.pos, "S(i,j;r,s) needs r, s >= 1");
      if (e.a == e.b)
        lx_.fail(name.pos, "repeated index in S(" + indexStr(e.a) + "," + indexStr(e.b) + ";...)");
    }
    if (e.kind != Elem::Heis || lx_.peek().t != Tok::Comma)
      lx_.expect(Tok::RParen, "')'");
    return e;
  }

  static std::string indexStr(const Index &i) { return i.letter ? std::string(1, i.letter) : std::to_string(i.value); }

  ChainOp parseModeOp(const Elem &e) {
    ChainOp op;
    op.kind = ChainOp::Mode;
    op.e = e;
    lx_.expect(Tok::LBrack, "'['");
    op.n = parseEpsAwareIdx();
    lx_.expect(Tok::RBrack, "']'");
    op.power = parsePower();
    return op;
  }

  ModeIdx parseEpsAwareIdx() {
    ModeIdx m;
    if (lx_.peek().t == Tok::Ident && lx_.peek().text == "eps") {
      lx_.next();
      m.eps = true;
      if (lx_.peek().t == Tok::Plus || lx_.peek().t == Tok::Minus) {
        bool neg = lx_.next().t == Tok::Minus;
        long v = std::stol(lx_.expect(Tok::Int, "an integer").text);
        m.n = Rat(neg ? -v : v);
      }
      return m;
    }
    m.n = parseSignedRat();
    if (m.n.den() != 1 && m.n.den() != 2)
      lx_.fail(lx_.offset(), "mode index must be an integer or a half integer");
    return m;
  }

  Base parseChain() {
    Base b;
    for (;;) {
      auto k = lx_.peek();
      if (k.t == Tok::LBrack) {
        lx_.next();
        ChainOp op;
        op.kind = ChainOp::Commutator;
        auto n1 = lx_.expect(Tok::Ident, "an element");
        if (!kElemNames.count(n1.text))
          lx_.fail(n1.pos, "expected an element, found '" + n1.text + "'");
        op.e = parseElemAfterName(n1);
        lx_.expect(Tok::LBrack, "'['");
        op.n = parseEpsAwareIdx();
        lx_.expect(Tok::RBrack, "']'");
        lx_.expect(Tok::Comma, "','");
        auto n2 = lx_.expect(Tok::Ident, "an element");
        if (!kElemNames.count(n2.text))
          lx_.fail(n2.pos, "expected an element, found '" + n2.text + "'");
        op.e2 = parseElemAfterName(n2);
        lx_.expect(Tok::LBrack, "'['");
        op.n2 = parseEpsAwareIdx();
        lx_.expect(Tok::RBrack, "']'");
        lx_.expect(Tok::RBrack, "']'");
        if (op.n.eps || op.n2.eps || !op.n.n.isInteger() || !op.n2.n.isInteger())
          lx_.fail(k.pos, "commutator modes must be integers");
        b.ops.push_back(op);
        continue;
      }
      if (k.t != Tok::Ident)
        lx_.fail(k.pos, "expected a state, found " + tokDesc(k));
      if (k.text == "wmode" || k.text == "Hmode") {
        lx_.next();
        lx_.expect(Tok::LParen, "'('");
        ChainOp op;
        op.e.kind = k.text == "wmode" ? Elem::Omega : Elem::H;
        op.e.a = parseIndex();
        lx_.expect(Tok::Comma, "','");
        op.n.n = Rat(parseSignedInt());
        lx_.expect(Tok::RParen, "')'");
        lx_.expect(Tok::At, "'@'");
        b.ops.push_back(op);
        continue;
      }
      if (kElemNames.count(k.text)) {
        lx_.next();
        Elem e = parseElemAfterName(k);
        if (e.kind == Elem::Heis && lx_.peek().t == Tok::Comma) {
          lx_.next();
          long m = parseSignedInt();
          lx_.expect(Tok::RParen, "')'");
          if (m > -1)
            lx_.fail(k.pos, "h(i,-m) needs m >= 1");
          b.kind = Base::HState;
          b.hIdx = e.a;
          b.hMode = static_cast<int>(m);
          break;
        }
        if (lx_.peek().t == Tok::LBrack) {
          b.ops.push_back(parseModeOp(e));
          continue;
        }
        b.kind = Base::ElemState;
        b.elem = e;
        break;
      }
      if (!kAtomNames.count(k.text))
        lx_.fail(k.pos, "unknown name '" + k.text + "'");
      lx_.next();
      parseAtom(k, b);
      break;
    }
    auto &after = lx_.peek();
    if (!isTerminator(after.t))
      lx_.fail(after.pos, "unexpected " + tokDesc(after) + " after a state atom");
    return b;
  }

  void parseAtom(const Token &k, Base &b) {
    const std::string &n = k.text;
    if (n == "vac") {
      b.kind = Base::Vac;
    } else if (n == "vactw") {
      b.kind = Base::VacTw;
    } else if (n == "u") {
      b.kind = Base::U;
    } else if (n == "exp") {
      lx_.expect(Tok::LParen, "'('");
      auto l = lx_.expect(Tok::Ident, "'lam'");
      if (l.text != "lam")
        lx_.fail(l.pos, "expected 'lam'");
      lx_.expect(Tok::RParen, "')'");
      b.kind = Base::Exp;
    } else if (n == "star") {
      lx_.expect(Tok::LParen, "'('");
      b.kind = Base::Star;
      b.args.push_back(parseExpr());
      lx_.expect(Tok::Comma, "','");
      b.args.push_back(parseExpr());
      lx_.expect(Tok::RParen, "')'");
    } else if (n == "relation" || n == "eliminate") {
      lx_.expect(Tok::LParen, "'('");
      b.kind = n == "relation" ? Base::Relation : Base::Eliminate;
      b.elem.kind = Elem::S;
      b.elem.a = parseIndex();
      lx_.expect(Tok::Comma, "','");
      b.elem.b = parseIndex();
      if (b.elem.a == b.elem.b)
        lx_.fail(k.pos, "repeated index in " + n);
      lx_.expect(Tok::Semi, "';'");
      std::size_t want = n == "relation" ? 1 : 3;
      for (std::size_t q = 0; q < want; ++q) {
        if (q)
          lx_.expect(Tok::Comma, "','");
        auto id = lx_.expect(Tok::Ident, "a relation id");
        auto ids = relationIds();
        if (std::find(ids.begin(), ids.end(), id.text) == ids.end())
          lx_.fail(id.pos, "unknown relation '" + id.text + "'");
        b.names.push_back(id.text);
      }
      lx_.expect(Tok::RParen, "')'");
    } else if (n == "subst") {
      lx_.expect(Tok::LParen, "'('");
      b.kind = Base::Subst;
      b.args.push_back(parseExpr());
      lx_.expect(Tok::Semi, "';'");
      do {
        auto v = lx_.peek();
        if (v.t != Tok::Ident || !(v.text == "eps" || v.text == "zeta" || v.text == "xi" || v.text == "lam"))
          lx_.fail(v.pos, "expected eps, zeta(.), xi(.) or lam(.)");
        ScalarFactor f = parseScalar();
        if (f.power != 1)
          lx_.fail(v.pos, "substituted variable cannot carry a power");
        lx_.expect(Tok::Assign, "'='");
        b.assigns.emplace_back(f, parseExpr());
      } while (lx_.accept(Tok::Comma));
      lx_.expect(Tok::RParen, "')'");
    } else if (n == "gpoly") {
      lx_.expect(Tok::LParen, "'('");
      b.kind = Base::GPoly;
      b.args.push_back(parseExpr());
      lx_.expect(Tok::Comma, "','");
      b.args.push_back(parseExpr());
      lx_.expect(Tok::Semi, "';'");
      auto v = lx_.expect(Tok::Ident, "a variable");
      std::string name = v.text;
      if (lx_.accept(Tok::LParen)) {
        if (name != "zeta" && name != "xi" && name != "lam")
          lx_.fail(v.pos, "only zeta, xi and lam take an index");
        name += "(" + idxStr(parseIndex()) + ")";
        lx_.expect(Tok::RParen, "')'");
      }
      b.names.push_back(name);
      lx_.expect(Tok::RParen, "')'");
    }
  }

  VType typeOfBase(const Base &b, std::size_t pos) {
    switch (b.kind) {
    case Base::None: return VType::Poly;
    case Base::U: return VType::Bnd;
    case Base::Relation: return VType::Bnd;
    case Base::Eliminate: return VType::Poly;
    case Base::Subst:
    case Base::GPoly:
      for (auto &a : b.args)
        if (typeOf(a, pos) == VType::State || typeOf(a, pos) == VType::Bnd)
          lx_.fail(pos, std::string(b.kind == Base::Subst ? "subst" : "gpoly") + " needs polynomial arguments");
      for (auto &[v, e] : b.assigns)
        if (typeOf(e, pos) != VType::Poly && typeOf(e, pos) != VType::Zero)
          lx_.fail(pos, "substituted value must be a polynomial");
      return VType::Poly;
    case Base::Star:
      for (auto &a : b.args)
        if (typeOf(a, pos) != VType::State)
          lx_.fail(pos, "star needs state arguments");
      return VType::State;
    default: return VType::State;
    }
  }
};

// ---------------------------------------------------------------------------
// Rendering

std::string ratStr(const Rat &r) { return r.str(); }

std::string idxStr(const Index &i) { return i.letter ? std::string(1, i.letter) : std::to_string(i.value); }

std::string elemStr(const Elem &e) {
  switch (e.kind) {
  case Elem::S:
    return "S(" + idxStr(e.a) + "," + idxStr(e.b) + ";" + std::to_string(e.r) + "," + std::to_string(e.s) + ")";
  case Elem::Omega: return "omega(" + idxStr(e.a) + ")";
  case Elem::OmegaTotal: return "omega";
  case Elem::H: return "H(" + idxStr(e.a) + ")";
  case Elem::J: return "J(" + idxStr(e.a) + ")";
  case Elem::Heis: return "h(" + idxStr(e.a) + ")";
  }
  return "?";
}

std::string modeStr(const ModeIdx &m) {
  if (!m.eps)
    return ratStr(m.n);
  if (m.n.isZero())
    return "eps";
  return m.n.sign() > 0 ? "eps+" + ratStr(m.n) : "eps" + ratStr(m.n);
}

std::string scalarStr(const ScalarFactor &f) {
  std::string s;
  switch (f.kind) {
  case ScalarFactor::Num: s = ratStr(f.num); break;
  case ScalarFactor::Eps: s = "eps"; break;
  case ScalarFactor::Zeta: s = "zeta(" + idxStr(f.idx) + ")"; break;
  case ScalarFactor::Xi: s = "xi(" + idxStr(f.idx) + ")"; break;
  case ScalarFactor::Lam: s = "lam(" + idxStr(f.idx) + ")"; break;
  case ScalarFactor::Text: s = "(" + f.text + ")"; break;
  }
  if (f.power != 1)
    s += "^" + std::to_string(f.power);
  return s;
}

std::string baseStr(const Base &b) {
  std::string s;
  for (auto &op : b.ops) {
    if (op.kind == ChainOp::Commutator)
      s += "[" + elemStr(op.e) + "[" + modeStr(op.n) + "], " + elemStr(op.e2) + "[" + modeStr(op.n2) + "]] ";
    else
      s += elemStr(op.e) + "[" + modeStr(op.n) + "]" + (op.power != 1 ? "^" + std::to_string(op.power) : "") + " ";
  }
  switch (b.kind) {
  case Base::None: break;
  case Base::Vac: s += "vac"; break;
  case Base::VacTw: s += "vactw"; break;
  case Base::Exp: s += "exp(lam)"; break;
  case Base::U: s += "u"; break;
  case Base::HState: s += "h(" + idxStr(b.hIdx) + "," + std::to_string(b.hMode) + ")"; break;
  case Base::ElemState: s += elemStr(b.elem); break;
  case Base::Star: s += "star(" + render(b.args[0]) + ", " + render(b.args[1]) + ")"; break;
  case Base::Relation:
  case Base::Eliminate: {
    s += b.kind == Base::Relation ? "relation(" : "eliminate(";
    s += idxStr(b.elem.a) + "," + idxStr(b.elem.b) + "; ";
    for (std::size_t q = 0; q < b.names.size(); ++q)
      s += (q ? ", " : "") + b.names[q];
    s += ")";
    break;
  }
  case Base::Subst: {
    s += "subst(" + render(b.args[0]) + "; ";
    for (std::size_t q = 0; q < b.assigns.size(); ++q)
      s += (q ? ", " : "") + scalarStr(b.assigns[q].first) + "=" + render(b.assigns[q].second);
    s += ")";
    break;
  }
  case Base::GPoly: s += "gpoly(" + render(b.args[0]) + ", " + render(b.args[1]) + "; " + b.names[0] + ")"; break;
  }
  return s;
}

} // namespace

std::string render(const Expr &e) {
  if (e.terms.empty())
    return "0";
  std::string out;
  bool first = true;
  for (auto &t : e.terms) {
    if (first)
      out += t.sign < 0 ? "-" : "";
    else
      out += t.sign < 0 ? " - " : " + ";
    first = false;
    std::string c;
    for (std::size_t q = 0; q < t.coeff.size(); ++q)
      c += (q ? "*" : "") + scalarStr(t.coeff[q]);
    if (t.base.kind == Base::None) {
      out += c;
    } else {
      if (!c.empty())
        out += c + "*";
      out += baseStr(t.base);
    }
  }
  return out;
}

std::string render(const IdentityRecord &r) {
  std::string s = "check " + kindName(r.kind) + (r.assoc ? " assoc" : "") + ": " + render(r.lhs);
  if (r.kind != RecordKind::RelationZero && r.kind != RecordKind::ZhuMember)
    s += " == " + render(r.rhs);
  return s;
}

Expr parseExpr(const std::string &text, const std::vector<char> &declared) {
  Parser p(text, nullptr, declared);
  Expr e = p.parseExpr();
  auto &k = p.lexer().peek();
  if (k.t != Tok::End)
    p.lexer().fail(k.pos, "unexpected " + tokDesc(k));
  p.typeOf(e, 0);
  return e;
}

namespace {

// Compact names used for automatic appendix ids, e.g. Sij12, wj, Hj, w.
std::string compactElem(const Elem &e) {
  switch (e.kind) {
  case Elem::S: return "S" + idxStr(e.a) + idxStr(e.b) + std::to_string(e.r) + std::to_string(e.s);
  case Elem::Omega: return "w" + idxStr(e.a);
  case Elem::OmegaTotal: return "w";
  case Elem::H: return "H" + idxStr(e.a);
  case Elem::J: return "J" + idxStr(e.a);
  case Elem::Heis: return "h" + idxStr(e.a);
  }
  return "?";
}

/// For a single-term lhs "E[n] F" returns (E, n, F).
std::optional<std::tuple<Elem, int, Elem>> productShape(const Expr &e) {
  if (e.terms.size() != 1)
    return std::nullopt;
  auto &t = e.terms[0];
  if (!t.coeff.empty() || t.sign != 1 || t.base.kind != Base::ElemState || t.base.ops.size() != 1)
    return std::nullopt;
  auto &op = t.base.ops[0];
  if (op.kind != ChainOp::Mode || op.power != 1 || op.n.eps || !op.n.n.isInteger())
    return std::nullopt;
  return std::make_tuple(op.e, static_cast<int>(op.n.n.toLong()), t.base.elem);
}

std::string suitePrefix(const std::string &s) { return s == "appendix" ? "app" : s; }

bool parseKind(const std::string &s, RecordKind &k) {
  static const std::map<std::string, RecordKind> m = {
      {"product", RecordKind::Product},         {"commutator", RecordKind::Commutator},
      {"relationZero", RecordKind::RelationZero}, {"eigen", RecordKind::Eigen},
      {"zhuMember", RecordKind::ZhuMember},     {"boundaryPoly", RecordKind::BoundaryPoly},
      {"twisted", RecordKind::Twisted}};
  auto it = m.find(s);
  if (it == m.end())
    return false;
  k = it->second;
  return true;
}

} // namespace

std::vector<IdentityRecord> parseCatalog(const std::string &text) {
  struct Logical {
    std::string text;
    SourceMap map;
    int line;
  };
  std::vector<Logical> lines;
  std::istringstream in(text);
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    if (!raw.empty() && raw.back() == '\r')
      raw.pop_back();
    auto hash = raw.find('#');
    std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    auto first = body.find_first_not_of(" \t");
    if (first == std::string::npos)
      continue;
    bool cont = first > 0;
    if (cont) {
      if (lines.empty() || lines.back().text.rfind("check", 0) != 0)
        throw CatalogError(lineNo, static_cast<int>(first) + 1, "continuation line without a record");
      auto &L = lines.back();
      L.text += ' ';
      L.map.segs.push_back({L.text.size(), {lineNo, static_cast<int>(first) + 1}});
      L.text += body.substr(first);
    } else {
      Logical L;
      L.line = lineNo;
      L.text = body;
      L.map.segs.push_back({0, {lineNo, 1}});
      lines.push_back(std::move(L));
    }
  }

  std::vector<IdentityRecord> out;
  std::set<std::string> seen;
  std::vector<std::string> suites = {"misc"};
  std::string anchor;
  std::string pendingId;
  std::vector<char> declared = {'i', 'j', 'k', 'l'};

  for (auto &L : lines) {
    std::istringstream ws(L.text);
    std::string word;
    ws >> word;
    auto rest = [&]() {
      std::string r;
      std::getline(ws, r);
      auto b = r.find_first_not_of(" \t");
      return b == std::string::npos ? std::string() : r.substr(b, r.find_last_not_of(" \t") - b + 1);
    };
    if (word == "suite") {
      std::istringstream ss(rest());
      suites.clear();
      for (std::string s; ss >> s;)
        suites.push_back(s);
      if (suites.empty())
        throw CatalogError(L.line, 1, "suite directive needs a name");
      continue;
    }
    if (word == "anchor") {
      anchor = rest();
      continue;
    }
    if (word == "id") {
      pendingId = rest();
      if (pendingId.empty() || pendingId.find(' ') != std::string::npos)
        throw CatalogError(L.line, 4, "id must be one word");
      continue;
    }
    if (word == "indices") {
      std::istringstream ss(rest());
      declared.clear();
      for (std::string s; ss >> s;) {
        if (s.size() != 1 || !std::isalpha(static_cast<unsigned char>(s[0])))
          throw CatalogError(L.line, 9, "indices are single letters");
        if (std::find(declared.begin(), declared.end(), s[0]) != declared.end())
          throw CatalogError(L.line, 9, "index '" + s + "' declared twice");
        declared.push_back(s[0]);
      }
      continue;
    }
    if (word != "check" && word.rfind("check", 0) != 0)
      throw CatalogError(L.line, 1, "unknown directive '" + word + "'");

    Parser p(L.text, &L.map, declared);
    auto &lx = p.lexer();
    auto kw = lx.expect(Tok::Ident, "'check'");
    if (kw.text != "check")
      lx.fail(kw.pos, "expected 'check'");
    auto kt = lx.expect(Tok::Ident, "a record kind");
    IdentityRecord rec;
    if (!parseKind(kt.text, rec.kind))
      lx.fail(kt.pos, "unknown record kind '" + kt.text + "'");
    if (lx.peek().t == Tok::Ident && lx.peek().text == "assoc") {
      lx.next();
      rec.assoc = true;
    }
    lx.expect(Tok::Colon, "':'");
    std::size_t lpos = lx.offset();
    rec.lhs = p.parseExpr();
    bool single = rec.kind == RecordKind::RelationZero || rec.kind == RecordKind::ZhuMember;
    std::size_t rpos = lpos;
    if (!single) {
      lx.expect(Tok::EqEq, "'=='");
      rpos = lx.offset();
      rec.rhs = p.parseExpr();
    }
    if (lx.peek().t != Tok::End)
      lx.fail(lx.peek().pos, "unexpected " + tokDesc(lx.peek()));
    VType lt = p.typeOf(rec.lhs, lpos);
    VType rt = single ? lt : p.typeOf(rec.rhs, rpos);
    bool polyKind = rec.kind == RecordKind::BoundaryPoly;
    auto okType = [&](VType t) {
      return t == VType::Zero || (polyKind ? (t == VType::Poly || t == VType::Bnd) : t == VType::State);
    };
    if (!okType(lt))
      lx.fail(lpos, std::string("left side is a ") + vtypeName(lt) + ", not allowed in a " + kt.text + " record");
    if (!okType(rt))
      lx.fail(rpos, std::string("right side is a ") + vtypeName(rt) + ", not allowed in a " + kt.text + " record");
    if (lt != VType::Zero && rt != VType::Zero && lt != rt)
      lx.fail(rpos, std::string("sides differ in type: ") + vtypeName(lt) + " vs " + vtypeName(rt));

    rec.indexVars.assign(p.used().begin(), p.used().end());
    rec.suites = suites;
    rec.anchor = anchor;
    rec.line = L.line;
    if (!pendingId.empty()) {
      rec.id = pendingId;
      pendingId.clear();
    } else if (auto sh = productShape(rec.lhs)) {
      auto [a, n, b] = *sh;
      rec.id = suitePrefix(suites.front()) + "." + compactElem(a) + "_" + std::to_string(n) + "_" + compactElem(b);
    } else {
      throw CatalogError(L.line, 1, "record needs an id directive");
    }
    if (!seen.insert(rec.id).second)
      throw CatalogError(L.line, 1, "duplicate id '" + rec.id + "'");
    out.push_back(std::move(rec));
  }
  if (!pendingId.empty())
    throw CatalogError(lineNo, 1, "id directive without a record");
  return out;
}

std::string defaultCatalogPath() {
  if (const char *p = std::getenv("VOA_CATALOG"))
    return p;
  return VOA_CATALOG_DEFAULT;
}

std::string readCatalogFile(const std::string &path) {
  std::ifstream f(path);
  if (!f)
    throw std::runtime_error("cannot read catalog " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Value {
  VType t = VType::Zero;
  State st;
  PolyQ poly;
  BoundaryValue bnd;

  void add(const Value &o, const PolyQ &c) {
    if (o.t == VType::Zero)
      return;
    if (t == VType::Zero) {
      t = o.t;
      st = State(o.st.module());
    } else if (t != o.t) {
      throw std::logic_error(std::string("adding ") + vtypeName(o.t) + " to " + vtypeName(t));
    }
    switch (o.t) {
    case VType::State:
      if (!sameModule(st.module(), o.st.module()) && !st.isZero())
        throw std::logic_error("adding states of different modules");
      if (st.isZero() && !sameModule(st.module(), o.st.module()))
        st = State(o.st.module());
      st.addScaled(o.st, c);
      break;
    case VType::Poly: poly += o.poly * c; break;
    case VType::Bnd:
      for (std::size_t q = 0; q < 4; ++q)
        bnd[q] += o.bnd[q] * c;
      break;
    default: break;
    }
  }
  bool isZero() const {
    switch (t) {
    case VType::Zero: return true;
    case VType::State: return st.isZero();
    case VType::Poly: return poly.isZero();
    case VType::Bnd: return std::all_of(bnd.begin(), bnd.end(), [](const PolyQ &p) { return p.isZero(); });
    }
    return true;
  }
};

struct BoundaryCacheKey {
  int rank, i, j;
  bool operator<(const BoundaryCacheKey &o) const { return std::tie(rank, i, j) < std::tie(o.rank, o.i, o.j); }
};

class Evaluator {
public:
  Evaluator(int rank, std::map<char, int> asg, int weightBound)
      : rank_(rank), asg_(std::move(asg)), weightBound_(weightBound) {}

  int idx(const Index &i) const { return i.letter ? asg_.at(i.letter) : i.value; }

  VAElement elem(const Elem &e) {
    switch (e.kind) {
    case Elem::S: return S(rank_, idx(e.a), idx(e.b), e.r, e.s);
    case Elem::Omega: return omega(rank_, idx(e.a));
    case Elem::OmegaTotal: return omegaTotal(rank_);
    case Elem::H: return harH(rank_, idx(e.a));
    case Elem::J: return harJ(rank_, idx(e.a));
    case Elem::Heis: return heis(rank_, idx(e.a), 1);
    }
    throw std::logic_error("bad element");
  }

  PolyQ scalar(const ScalarFactor &f) {
    PolyQ v;
    switch (f.kind) {
    case ScalarFactor::Num: v = PolyQ(f.num); break;
    case ScalarFactor::Eps: v = PolyQ::variable("eps"); break;
    case ScalarFactor::Zeta: v = PolyQ::variable("zeta" + std::to_string(idx(f.idx))); break;
    case ScalarFactor::Xi: v = PolyQ::variable("xi" + std::to_string(idx(f.idx))); break;
    case ScalarFactor::Lam: v = PolyQ::variable("lam_" + std::to_string(idx(f.idx))); break;
    case ScalarFactor::Text: v = parsePoly(substitute(f.text)); break;
    }
    return v.pow(static_cast<unsigned>(f.power));
  }

  VarId scalarVar(const ScalarFactor &f) {
    switch (f.kind) {
    case ScalarFactor::Eps: return var("eps");
    case ScalarFactor::Zeta: return var("zeta" + std::to_string(idx(f.idx)));
    case ScalarFactor::Xi: return var("xi" + std::to_string(idx(f.idx)));
    case ScalarFactor::Lam: return var("lam_" + std::to_string(idx(f.idx)));
    default: throw std::logic_error("not a variable");
    }
  }

  Value eval(const Expr &e) {
    Value v;
    for (auto &t : e.terms) {
      PolyQ c(t.sign);
      for (auto &f : t.coeff)
        c *= scalar(f);
      Value b = evalBase(t.base);
      v.add(b, c);
    }
    return v;
  }

  /// lhs == rhs, exact or associate; detail describes a failure.
  bool compare(const Value &l, const Value &r, bool assoc, std::string &detail, const Expr *lhsExpr);

  int rank() const { return rank_; }

private:
  int rank_;
  std::map<char, int> asg_;
  int weightBound_;
  std::map<BoundaryCacheKey, std::unique_ptr<BoundaryEngine>> engines_;
  std::map<std::tuple<int, int, std::string>, Constraint> constraints_;

  std::string substitute(const std::string &text) {
    static const std::regex re(R"((zeta|xi|lam)\(\s*([A-Za-z]|[0-9]+)\s*\))");
    std::string out;
    std::size_t last = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
      auto &m = *it;
      out += text.substr(last, static_cast<std::size_t>(m.position()) - last);
      std::string name = m[1].str(), arg = m[2].str();
      int v = std::isalpha(static_cast<unsigned char>(arg[0])) ? asg_.at(arg[0]) : std::stoi(arg);
      out += name == "lam" ? "lam_" + std::to_string(v) : name + std::to_string(v);
      last = static_cast<std::size_t>(m.position() + m.length());
    }
    return out + text.substr(last);
  }

  BoundaryEngine &engine(int i, int j) {
    int r = std::max({rank_, i, j});
    auto &p = engines_[{r, i, j}];
    if (!p)
      p = std::make_unique<BoundaryEngine>(GenericVectorSpec::symbolic(r, i, j));
    return *p;
  }

  const Constraint &constraint(int i, int j, const std::string &id) {
    auto key = std::make_tuple(i, j, id);
    auto it = constraints_.find(key);
    if (it == constraints_.end())
      it = constraints_.emplace(key, deriveConstraint(id, engine(i, j))).first;
    return it->second;
  }

  State applyOps(const std::vector<ChainOp> &ops, State s) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      if (it->n.eps || it->n2.eps)
        throw std::invalid_argument("eps mode index outside a boundary expression");
      if (it->kind == ChainOp::Commutator) {
        s = evalCommutator(elem(it->e), static_cast<int>(it->n.n.toLong()), elem(it->e2),
                           static_cast<int>(it->n2.n.toLong()), s);
        continue;
      }
      VAElement a = elem(it->e);
      Rat two = it->n.n * Rat(2);
      int n2 = static_cast<int>(two.toLong());
      for (int p = 0; p < it->power; ++p)
        s = modeAction(a, n2, s);
    }
    return s;
  }

  Value stateValue(State s) {
    Value v;
    v.t = VType::State;
    v.st = std::move(s);
    return v;
  }

  Value evalBase(const Base &b) {
    Value v;
    switch (b.kind) {
    case Base::None:
      v.t = VType::Poly;
      v.poly = PolyQ(1);
      return v;
    case Base::Vac: return stateValue(applyOps(b.ops, vacuum(rank_)));
    case Base::VacTw: return stateValue(applyOps(b.ops, State::base(twistedModule(rank_))));
    case Base::Exp: return stateValue(applyOps(b.ops, State::base(expModule(rank_))));
    case Base::HState: return stateValue(applyOps(b.ops, heis(rank_, idx(b.hIdx), -b.hMode)));
    case Base::ElemState: return stateValue(applyOps(b.ops, elem(b.elem)));
    case Base::Star: {
      Value x = eval(b.args[0]), y = eval(b.args[1]);
      State xs = x.t == VType::State ? x.st : State(vacuumModule(rank_));
      State ys = y.t == VType::State ? y.st : State(vacuumModule(rank_));
      return stateValue(applyOps(b.ops, star(xs, ys)));
    }
    case Base::U: return boundaryChain(b);
    case Base::Relation: {
      auto &c = constraint(idx(b.elem.a), idx(b.elem.b), b.names[0]);
      v.t = VType::Bnd;
      v.bnd = {PolyQ(), c[0], c[1], c[2]};
      return v;
    }
    case Base::Eliminate: {
      int i = idx(b.elem.a), j = idx(b.elem.b);
      v.t = VType::Poly;
      v.poly = eliminate(constraint(i, j, b.names[0]), constraint(i, j, b.names[1]), constraint(i, j, b.names[2]));
      return v;
    }
    case Base::Subst: {
      Value p = eval(b.args[0]);
      std::map<VarId, PolyQ> m;
      for (auto &[f, e] : b.assigns) {
        Value x = eval(e);
        m[scalarVar(f)] = x.t == VType::Poly ? x.poly : PolyQ();
      }
      v.t = VType::Poly;
      v.poly = p.t == VType::Poly ? p.poly.subst(m) : PolyQ();
      return v;
    }
    case Base::GPoly: {
      Value p = eval(b.args[0]), q = eval(b.args[1]);
      VarId x = var(substitute(b.names[0]));
      v.t = VType::Poly;
      v.poly = gPoly(UniPoly::from(p.poly, x), UniPoly::from(q.poly, x)).toPoly();
      return v;
    }
    }
    return v;
  }

  /// S_ij(1,r)[eps+r-1] d_1 ... d_n u with diagonal modes omega(k)[1], H(k)[3].
  Value boundaryChain(const Base &b) {
    Value v;
    v.t = VType::Bnd;
    PolyQ c(1);
    int r = 0;
    for (std::size_t q = 0; q < b.ops.size(); ++q) {
      auto &op = b.ops[q];
      if (op.kind != ChainOp::Mode || op.power != 1)
        throw std::invalid_argument("unsupported operator on u");
      if (op.e.kind == Elem::S) {
        if (q != 0 || !op.n.eps || op.e.r != 1 || op.n.n != Rat(op.e.s - 1) || op.e.s > 3)
          throw std::invalid_argument("u words must start with S(i,j;1,r)[eps+r-1]");
        engine(idx(op.e.a), idx(op.e.b));
        r = op.e.s;
        continue;
      }
      int k = idx(op.e.a);
      if (op.e.kind == Elem::Omega && !op.n.eps && op.n.n == Rat(1))
        c *= PolyQ::variable("zeta" + std::to_string(k));
      else if (op.e.kind == Elem::H && !op.n.eps && op.n.n == Rat(3))
        c *= PolyQ::variable("xi" + std::to_string(k));
      else
        throw std::invalid_argument("only omega(k)[1] and H(k)[3] act on u directly");
    }
    v.bnd[static_cast<std::size_t>(r)] = c;
    return v;
  }
};

std::string polyDiff(const PolyQ &a, const PolyQ &b) { return "difference " + (a - b).str(); }

bool Evaluator::compare(const Value &l, const Value &r, bool assoc, std::string &detail, const Expr *) {
  VType t = l.t != VType::Zero ? l.t : r.t;
  if (t == VType::Zero)
    return true;
  if (t == VType::State) {
    State d = l.t == VType::Zero ? -r.st : r.t == VType::Zero ? l.st : l.st - r.st;
    if (l.t != VType::Zero && r.t != VType::Zero && !sameModule(l.st.module(), r.st.module()) &&
        !(l.st.isZero() || r.st.isZero())) {
      detail = "sides live in different modules";
      return false;
    }
    if (d.isZero())
      return true;
    detail = "lhs - rhs = " + d.str();
    return false;
  }
  if (t == VType::Poly) {
    PolyQ a = l.t == VType::Zero ? PolyQ() : l.poly, b = r.t == VType::Zero ? PolyQ() : r.poly;
    if (assoc ? (a.isZero() == b.isZero() && (a.isZero() || a.isAssociate(b))) : a == b)
      return true;
    detail = assoc ? "not associate: lhs = " + a.str() + "; rhs = " + b.str() : polyDiff(a, b);
    return false;
  }
  // boundary values
  BoundaryValue a{}, b{};
  if (l.t != VType::Zero)
    a = l.bnd;
  if (r.t != VType::Zero)
    b = r.bnd;
  if (!assoc) {
    if (a == b)
      return true;
    std::string s;
    for (std::size_t q = 0; q < 4; ++q)
      if (a[q] != b[q])
        s += " [r=" + std::to_string(q) + "] " + polyDiff(a[q], b[q]) + ";";
    detail = "boundary values differ:" + s;
    return false;
  }
  if (!a[0].isZero() || !b[0].isZero()) {
    detail = "associate comparison needs constraints without a bare u term";
    return false;
  }
  Constraint ca{a[1], a[2], a[3]}, cb{b[1], b[2], b[3]};
  if (associateConstraints(ca, cb))
    return true;
  // modulo the weight-5 constraint of the same pair
  std::set<std::pair<int, int>> pairs;
  for (auto &[key, c] : constraints_)
    pairs.insert({std::get<0>(key), std::get<1>(key)});
  for (auto [i, j] : pairs) {
    const Constraint &base = constraint(i, j, "pair.w5");
    if (auto m = associateModulo(ca, cb, base)) {
      detail = "associate modulo pair.w5: factor " + m->first.str() + ", multiple " + m->second.str();
      return true;
    }
  }
  detail = "constraints are not associate";
  return false;
}

// ---------------------------------------------------------------------------

std::map<char, int> assignmentFor(const std::vector<char> &letters, const SuiteOptions &opt) {
  static const std::string order = "ijkl";
  std::map<char, int> m;
  std::vector<char> sorted = letters;
  std::sort(sorted.begin(), sorted.end(), [](char a, char b) {
    auto pa = order.find(a), pb = order.find(b);
    return pa != pb ? pa < pb : a < b;
  });
  for (std::size_t q = 0; q < sorted.size(); ++q)
    m[sorted[q]] = q < opt.assignment.size() ? opt.assignment[q] : static_cast<int>(q) + 1;
  return m;
}

int maxConcreteIndex(const Expr &e);
int maxConcreteIndex(const Base &b) {
  int m = 0;
  auto ix = [&](const Index &i) { m = std::max(m, i.letter ? 0 : i.value); };
  auto el = [&](const Elem &e) { ix(e.a); if (e.kind == Elem::S) ix(e.b); };
  for (auto &op : b.ops) {
    el(op.e);
    if (op.kind == ChainOp::Commutator)
      el(op.e2);
  }
  if (b.kind == Base::ElemState || b.kind == Base::Relation || b.kind == Base::Eliminate)
    el(b.elem);
  if (b.kind == Base::HState)
    ix(b.hIdx);
  for (auto &a : b.args)
    m = std::max(m, maxConcreteIndex(a));
  return m;
}
int maxConcreteIndex(const Expr &e) {
  int m = 0;
  for (auto &t : e.terms) {
    for (auto &f : t.coeff)
      if (f.kind == ScalarFactor::Zeta || f.kind == ScalarFactor::Xi || f.kind == ScalarFactor::Lam)
        m = std::max(m, f.idx.letter ? 0 : f.idx.value);
    m = std::max(m, maxConcreteIndex(t.base));
  }
  return m;
}

int maxWeight(const State &s) {
  int w = 0;
  for (auto &[d2, part] : homogeneousParts(s))
    w = std::max(w, d2 / 2);
  return w;
}

void finish(Report &r, std::chrono::steady_clock::time_point t0) {
  std::sort(r.checks.begin(), r.checks.end(), [](const CheckResult &a, const CheckResult &b) { return a.id < b.id; });
  r.passed = r.failed = r.skipped = 0;
  for (auto &c : r.checks)
    (c.status == CheckResult::Pass ? r.passed : c.status == CheckResult::Fail ? r.failed : r.skipped)++;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SpanCache {
  std::map<std::pair<int, int>, std::unique_ptr<OSpanBasis>> spans;
  const OSpanBasis &get(int rank, int w) {
    auto &p = spans[{rank, w}];
    if (!p)
      p = std::make_unique<OSpanBasis>(oSpan(rank, w));
    return *p;
  }
};

CheckResult checkRecord(const IdentityRecord &rec, int rank, const SuiteOptions &opt, SpanCache &spans) {
  CheckResult cr;
  cr.id = rec.id;
  int need = std::max(static_cast<int>(rec.indexVars.size()), std::max(maxConcreteIndex(rec.lhs), maxConcreteIndex(rec.rhs)));
  auto asg = assignmentFor(rec.indexVars, opt);
  for (auto &[c, v] : asg)
    need = std::max(need, v);
  if (rank < need) {
    cr.status = CheckResult::Skip;
    cr.detail = "rank " + std::to_string(rank) + " too small: needs " + std::to_string(need);
    return cr;
  }
  try {
    Evaluator ev(rank, asg, opt.weightBound);
    if (rec.kind == RecordKind::ZhuMember) {
      Value v = ev.eval(rec.lhs);
      if (v.t != VType::State || v.st.isZero()) {
        cr.status = CheckResult::Pass;
        cr.detail = "zero element";
        return cr;
      }
      int w = maxWeight(v.st);
      if (w > opt.weightBound) {
        cr.status = CheckResult::Skip;
        cr.detail = "weight " + std::to_string(w) + " exceeds bound " + std::to_string(opt.weightBound);
        return cr;
      }
      auto res = memberO(v.st, spans.get(rank, opt.weightBound));
      cr.status = res.member ? CheckResult::Pass : CheckResult::Fail;
      cr.detail = (res.member ? "in O(V), certificate of " + std::to_string(res.certificate.size()) + " generators"
                              : "not found in O(V)") +
                  " at weight bound " + std::to_string(opt.weightBound) + ", span dimension " +
                  std::to_string(res.spanDimension);
      return cr;
    }
    Value l = ev.eval(rec.lhs);
    Value r = rec.kind == RecordKind::RelationZero ? Value{} : ev.eval(rec.rhs);
    std::string detail;
    bool ok = ev.compare(l, r, rec.assoc, detail, &rec.lhs);
    cr.status = ok ? CheckResult::Pass : CheckResult::Fail;
    cr.detail = detail;
  } catch (const std::exception &ex) {
    cr.status = CheckResult::Fail;
    cr.detail = std::string("evaluation error: ") + ex.what();
  }
  return cr;
}

/// Rows a_k b = 0 for every k in [0, wt a + wt b - 1] that the catalog does not display.
std::vector<IdentityRecord> implicitZeros(const std::vector<IdentityRecord> &recs) {
  std::map<std::string, std::pair<std::set<int>, std::pair<Elem, Elem>>> groups;
  std::map<std::string, const IdentityRecord *> firstRec;
  for (auto &rec : recs) {
    auto sh = productShape(rec.lhs);
    if (!sh || rec.kind != RecordKind::Product)
      continue;
    auto [a, n, b] = *sh;
    std::string key = compactElem(a) + "|" + compactElem(b);
    auto &g = groups[key];
    g.first.insert(n);
    g.second = {a, b};
    firstRec.emplace(key, &rec);
  }
  auto wt = [](const Elem &e) {
    switch (e.kind) {
    case Elem::S: return e.r + e.s;
    case Elem::Omega:
    case Elem::OmegaTotal: return 2;
    case Elem::H: return 4;
    case Elem::J: return 4;
    case Elem::Heis: return 1;
    }
    return 0;
  };
  std::vector<IdentityRecord> out;
  for (auto &[key, g] : groups) {
    auto [a, b] = g.second;
    const IdentityRecord &src = *firstRec.at(key);
    for (int k = 0; k <= wt(a) + wt(b) - 1; ++k) {
      if (g.first.count(k))
        continue;
      IdentityRecord z;
      z.kind = RecordKind::Product;
      z.id = suitePrefix(src.suites.front()) + "." + compactElem(a) + "_" + std::to_string(k) + "_" + compactElem(b) +
             ".implicit";
      Term t;
      t.base.kind = Base::ElemState;
      t.base.elem = b;
      ChainOp op;
      op.e = a;
      op.n.n = Rat(k);
      t.base.ops.push_back(op);
      z.lhs.terms.push_back(t);
      z.indexVars = src.indexVars;
      z.suites = src.suites;
      z.anchor = "implicit zero row of " + src.anchor;
      out.push_back(std::move(z));
    }
  }
  return out;
}

bool inSuite(const IdentityRecord &r, const std::string &s) {
  return std::find(r.suites.begin(), r.suites.end(), s) != r.suites.end();
}

} // namespace

Report runRecords(const std::string &suite, const std::vector<IdentityRecord> &recs, int rank, const SuiteOptions &opt,
                  bool withImplicit) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.suite = suite;
  rep.rank = rank;
  SpanCache spans;
  std::vector<IdentityRecord> all = recs;
  if (withImplicit) {
    auto z = implicitZeros(recs);
    all.insert(all.end(), z.begin(), z.end());
  }
  for (auto &rec : all)
    rep.checks.push_back(checkRecord(rec, rank, opt, spans));
  finish(rep, t0);
  return rep;
}

Evaluation evaluate(const std::string &exprText, int rank, const SuiteOptions &opt) {
  Expr e = parseExpr(exprText);
  Evaluator ev(rank, assignmentFor({'i', 'j', 'k', 'l'}, opt), opt.weightBound);
  Value v = ev.eval(e);
  Evaluation out;
  switch (v.t) {
  case VType::Zero: out.type = "Zero"; out.text = "0"; out.zero = true; break;
  case VType::State: out = {"State", v.st.str(), v.st.isZero(), v.st}; break;
  case VType::Poly: out.type = "Poly"; out.text = v.poly.str(); out.zero = v.poly.isZero(); break;
  case VType::Bnd: {
    static const char *words[] = {"u", "S(1,1)_{eps}u", "S(1,2)_{eps+1}u", "S(1,3)_{eps+2}u"};
    out.type = "Boundary";
    out.zero = true;
    for (std::size_t q = 0; q < 4; ++q)
      if (!v.bnd[q].isZero()) {
        out.text += (out.zero ? "" : "\n") + std::string(words[q]) + ": " + v.bnd[q].str();
        out.zero = false;
      }
    if (out.zero)
      out.text = "0";
    break;
  }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Programmatic suites

namespace {

/// Monomials of creation degree <= w over generators 1..rank on e^lambda.
std::vector<State> expBasis(int rank, int w) {
  std::vector<State> out;
  auto mod = expModule(rank);
  std::vector<CreationOp> ops;
  std::vector<std::pair<int, int>> slots; // (gen, deg) in sorted order
  for (int g = 1; g <= rank; ++g)
    for (int d = 1; d <= w; ++d)
      slots.push_back({g, d});
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
    out.emplace_back(mod, Monomial(ops), PolyQ(1));
    for (std::size_t q = from; q < slots.size(); ++q) {
      auto [g, d] = slots[q];
      if (d > left)
        continue;
      ops.push_back({static_cast<std::uint8_t>(g), static_cast<std::int16_t>(2 * d)});
      rec(q, left - d);
      ops.pop_back();
    }
  };
  rec(0, w);
  return out;
}

struct CommCase {
  std::string id;
  VAElement a, b;
  int l, m;
  std::function<State(const State &)> formula;
};

Report commutatorSuite(int rank, const SuiteOptions &opt) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.suite = "commutators";
  rep.rank = rank;
  auto asg = opt.assignment;
  int i = asg.size() > 0 ? asg[0] : 1, j = asg.size() > 1 ? asg[1] : 2, k = asg.size() > 2 ? asg[2] : 3;
  if (rank < 3 || std::max({i, j, k}) > rank) {
    rep.checks.push_back({"comm", CheckResult::Skip, "rank " + std::to_string(rank) + " too small: needs 3"});
    finish(rep, t0);
    return rep;
  }
  auto basis = expBasis(rank, opt.commutatorWeight);
  int R = opt.commutatorRange;
  std::vector<CommCase> cases;
  auto two = [](int n) { return 2 * n; };
  for (int l = -R; l <= R; ++l)
    for (int m = -R; m <= R; ++m) {
      std::string lm = ".l" + std::to_string(l) + ".m" + std::to_string(m);
      for (int r = 1; r <= 3; ++r)
        for (int s = 1; s <= 3; ++s) {
          Rat c = Rat(s) * binom(static_cast<long>(l), s) * binom(static_cast<long>(-l - m + r + s - 2), r - 1);
          int mode = l + m - r - s + 1;
          cases.push_back({"comm.h_Sij" + std::to_string(r) + std::to_string(s) + lm, heis(rank, j, 1),
                           S(rank, i, j, r, s), l, m, [=](const State &x) {
                             return c.isZero() ? State(x.module()) : heisMode(i, two(mode), x) * PolyQ(c);
                           }});
        }
      for (int r = 1; r <= 3; ++r) {
        VAElement s1 = S(rank, i, j, 1, r + 1), s0 = S(rank, i, j, 1, r);
        cases.push_back({"comm.wj_Sij1" + std::to_string(r) + lm, omega(rank, j), S(rank, i, j, 1, r), l, m,
                         [=](const State &x) {
                           State y = modeAction(s1, two(m + l), x) * PolyQ(r);
                           y.addScaled(modeAction(s0, two(m + l - 1), x), PolyQ(l * r));
                           return y;
                         }});
      }
      for (int r = 1; r <= 3; ++r) {
        cases.push_back({"comm.Skj11_Sij1" + std::to_string(r) + lm, S(rank, k, j, 1, 1), S(rank, i, j, 1, r), l, m,
                         [=](const State &x) {
                           State y(x.module());
                           for (int t = 1; t <= r + 1; ++t) {
                             Rat c = binom(static_cast<long>(l), t) * Rat(r);
                             if (!c.isZero())
                               y.addScaled(modeAction(S(rank, i, k, 1, t), two(l + m - r - 1 + t), x), PolyQ(c));
                           }
                           return y;
                         }});
      }
      // derived forms: X_t S(1,r) = r Y(1,r+1-t) for t = 0..r, so
      // [X_l, S(1,r)_m] = r sum_t binom(l,t) Y(1,r+1-t)_{l+m-t}
      for (int r = 1; r <= 3; ++r)
        for (int which = 0; which < 2; ++which) {
          std::string name = which ? "comm.Skj11_Sij1" : "comm.wj_Sij1";
          VAElement a = which ? S(rank, k, j, 1, 1) : omega(rank, j);
          int other = which ? k : j;
          cases.push_back({name + std::to_string(r) + ".derived" + lm, a, S(rank, i, j, 1, r), l, m,
                           [=](const State &x) {
                             State y(x.module());
                             for (int t = 0; t <= r; ++t) {
                               Rat c = binom(static_cast<long>(l), t) * Rat(r);
                               if (!c.isZero())
                                 y.addScaled(modeAction(S(rank, i, other, 1, r + 1 - t), two(l + m - t), x),
                                             PolyQ(c));
                             }
                             return y;
                           }});
        }
    }
  for (auto &cc : cases) {
    CheckResult cr;
    cr.id = cc.id;
    std::size_t bad = 0, badTable = 0;
    std::string first, tableFirst;
    for (auto &x : basis) {
      State direct = modeAction(cc.a, 2 * cc.l, modeAction(cc.b, 2 * cc.m, x)) -
                     modeAction(cc.b, 2 * cc.m, modeAction(cc.a, 2 * cc.l, x));
      State f = cc.formula(x);
      State viaTable = evalCommutator(cc.a, cc.l, cc.b, cc.m, x);
      if (direct != f && !bad++)
        first = "formula fails on " + x.str() + ": direct - formula = " + (direct - f).str();
      if (direct != viaTable && !badTable++)
        tableFirst = "table commutator differs on " + x.str() + "; ";
    }
    cr.status = bad || badTable ? CheckResult::Fail : CheckResult::Pass;
    cr.detail = bad || badTable ? tableFirst + first : std::to_string(basis.size()) + " basis states";
    rep.checks.push_back(cr);
  }
  finish(rep, t0);
  return rep;
}

Report vermaReport(int rank) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.suite = "verma";
  rep.rank = rank;
  if (rank < 3) {
    rep.checks.push_back({"verma", CheckResult::Skip, "rank " + std::to_string(rank) + " too small: needs 3"});
    finish(rep, t0);
    return rep;
  }
  auto checks = vermaSuite(rank);
  std::size_t n = 0;
  for (auto &c : checks) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "verma.%03zu", n++);
    rep.checks.push_back({buf, c.ok ? CheckResult::Pass : CheckResult::Fail, c.lhs + " == " + c.rhs});
  }
  finish(rep, t0);
  return rep;
}

int defaultRank(const std::string &s) {
  static const std::map<std::string, int> m = {{"appendix", 4}, {"relations", 2}, {"eigen", 2},   {"commutators", 3},
                                               {"zhu", 1},      {"twisted", 2},   {"boundary", 2}, {"verma", 3}};
  return m.at(s);
}

} // namespace

std::vector<std::string> suiteNames() {
  return {"appendix", "relations", "eigen", "commutators", "zhu", "twisted", "boundary", "verma"};
}

Report runSuite(const std::string &name, int rank, const SuiteOptions &opt) {
  auto names = suiteNames();
  if (name == "all") {
    auto t0 = std::chrono::steady_clock::now();
    Report all;
    all.suite = "all";
    all.rank = rank;
    for (auto &s : names) {
      Report r = runSuite(s, rank > 0 ? rank : defaultRank(s), opt);
      for (auto &c : r.checks)
        all.checks.push_back({s + ":" + c.id, c.status, c.detail});
    }
    finish(all, t0);
    return all;
  }
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("unknown suite '" + name + "'");
  if (rank <= 0)
    rank = defaultRank(name);
  if (name == "commutators")
    return commutatorSuite(rank, opt);
  if (name == "verma")
    return vermaReport(rank);
  auto recs = parseCatalog(readCatalogFile(opt.catalogPath.empty() ? defaultCatalogPath() : opt.catalogPath));
  std::vector<IdentityRecord> mine;
  for (auto &r : recs)
    if (inSuite(r, name))
      mine.push_back(r);
  return runRecords(name, mine, rank, opt, name == "appendix");
}

// ---------------------------------------------------------------------------

std::string reportJson(const Report &r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["rank"] = r.rank;
  j["checks"] = nlohmann::json::array();
  for (auto &c : r.checks)
    j["checks"].push_back({{"id", c.id},
                           {"status", c.status == CheckResult::Pass   ? "pass"
                                      : c.status == CheckResult::Fail ? "fail"
                                                                      : "skipped"},
                           {"detail", c.detail}});
  j["passed"] = r.passed;
  j["failed"] = r.failed;
  j["skipped"] = r.skipped;
  j["seconds"] = r.seconds;
  return j.dump(2);
}

std::string reportText(const Report &r) {
  std::ostringstream os;
  os << "suite " << r.suite << "  rank " << r.rank << "\n";
  std::size_t w = 2;
  for (auto &c : r.checks)
    w = std::max(w, c.id.size());
  for (auto &c : r.checks) {
    const char *st = c.status == CheckResult::Pass ? "pass" : c.status == CheckResult::Fail ? "FAIL" : "skip";
    os << "  " << c.id << std::string(w - c.id.size() + 2, ' ') << st;
    if (c.status != CheckResult::Pass && !c.detail.empty())
      os << "  " << c.detail;
    os << "\n";
  }
  os << r.passed << " passed, " << r.failed << " failed, " << r.skipped << " skipped in " << r.seconds << " s\n";
  return os.str();
}

void emitReport(const Report &r, const std::string &format, const std::string &path) {
  std::string body;
  if (format == "json")
    body = reportJson(r) + "\n";
  else if (format == "text")
    body = reportText(r);
  else
    throw std::invalid_argument("unknown report format '" + format + "'");
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream f(path);
  if (!f)
    throw std::runtime_error("cannot write " + path);
  f << body;
  if (!f)
    throw std::runtime_error("write failed for " + path);
}

} // namespace voa
