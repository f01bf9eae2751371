#include "oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

using voa::Rat;

namespace {

Rat gbinom(long x, int k) {
  Rat r(1);
  for (int t = 0; t < k; ++t)
    r = r * Rat(x - t) / Rat(t + 1);
  return r;
}

int weightOf(const Vec &v) {
  int w = 0;
  for (auto &[m, c] : v) {
    int s = 0;
    for (auto &op : m)
      s -= op.second;
    w = std::max(w, s);
  }
  return w;
}

} // namespace

Vec vac() { return {{Mono{}, Rat(1)}}; }

Vec add(const Vec &x, const Vec &y, const Rat &c) {
  Vec r = x;
  for (auto &[m, v] : y) {
    Rat &slot = r[m];
    slot += c * v;
    if (slot.isZero())
      r.erase(m);
  }
  return r;
}

Vec hMode(int gen, int m, const Vec &v) {
  Vec out;
  for (auto &[mono, c] : v) {
    if (m < 0) {
      Mono n = mono;
      n.insert(std::upper_bound(n.begin(), n.end(), Op{gen, m}), Op{gen, m});
      out = add(out, {{n, c}});
    } else if (m > 0) {
      auto cnt = std::count(mono.begin(), mono.end(), Op{gen, -m});
      if (!cnt)
        continue;
      Mono n = mono;
      n.erase(std::find(n.begin(), n.end(), Op{gen, -m}));
      out = add(out, {{n, c * Rat(m) * Rat(static_cast<long>(cnt))}});
    }
  }
  return out;
}

Vec quadMode(const Field &f, int k, const Vec &v) {
  Vec out;
  int w = weightOf(v);
  for (auto &q : f) {
    int total = k + 1 - q.r - q.s; // n + m
    for (int n = total - w - 2; n <= w + 2; ++n) {
      int m = total - n;
      Rat cf = q.c * gbinom(-n - 1, q.r - 1) * gbinom(-m - 1, q.s - 1);
      if (cf.isZero())
        continue;
      // normal order: creation modes to the left
      Vec t = n < 0 ? hMode(q.a, n, hMode(q.b, m, v)) : hMode(q.b, m, hMode(q.a, n, v));
      out = add(out, t, cf);
    }
  }
  return out;
}

Field fieldS(int a, int b, int r, int s) { return {{Rat(1), a, r, b, s}}; }
Field fieldOmega(int i) { return {{Rat(1, 2), i, 1, i, 1}}; }
Field fieldOmegaTotal(int rank) {
  Field f;
  for (int i = 1; i <= rank; ++i)
    f.push_back({Rat(1, 2), i, 1, i, 1});
  return f;
}
Field fieldH(int i) { return {{Rat(1, 3), i, 3, i, 1}, {Rat(-1, 3), i, 2, i, 2}}; }

Vec stateOf(const Field &f) {
  Vec out;
  for (auto &q : f)
    out = add(out, hMode(q.a, -q.r, hMode(q.b, -q.s, vac())), q.c);
  return out;
}

namespace {

Field fieldOf(const voa::Elem &e, const std::map<char, int> &asg, int rank) {
  auto ix = [&](const voa::Index &i) { return i.letter ? asg.at(i.letter) : i.value; };
  switch (e.kind) {
  case voa::Elem::S: return fieldS(ix(e.a), ix(e.b), e.r, e.s);
  case voa::Elem::Omega: return fieldOmega(ix(e.a));
  case voa::Elem::OmegaTotal: return fieldOmegaTotal(rank);
  case voa::Elem::H: return fieldH(ix(e.a));
  default: throw std::invalid_argument("oracle: element outside S, omega, H");
  }
}

} // namespace

Vec eval(const voa::Expr &e, const std::map<char, int> &asg, int rank) {
  Vec total;
  for (auto &t : e.terms) {
    Rat c(t.sign);
    for (auto &f : t.coeff) {
      if (f.kind != voa::ScalarFactor::Num)
        throw std::invalid_argument("oracle: symbolic scalar");
      for (int p = 0; p < f.power; ++p)
        c *= f.num;
    }
    Vec v;
    if (t.base.kind == voa::Base::Vac)
      v = vac();
    else if (t.base.kind == voa::Base::ElemState)
      v = stateOf(fieldOf(t.base.elem, asg, rank));
    else
      throw std::invalid_argument("oracle: unsupported base");
    for (auto it = t.base.ops.rbegin(); it != t.base.ops.rend(); ++it) {
      if (it->kind != voa::ChainOp::Mode || it->n.eps || !it->n.n.isInteger())
        throw std::invalid_argument("oracle: unsupported mode");
      Field f = fieldOf(it->e, asg, rank);
      for (int p = 0; p < it->power; ++p)
        v = quadMode(f, static_cast<int>(it->n.n.toLong()), v);
    }
    total = add(total, v, c);
  }
  return total;
}

Vec fromState(const voa::State &s) {
  Vec out;
  for (auto &[m, c] : s.terms()) {
    Mono mono;
    for (auto &op : m.ops)
      mono.push_back({op.gen, -op.deg2 / 2});
    std::sort(mono.begin(), mono.end());
    out = add(out, {{mono, c.constant()}});
  }
  return out;
}

} // namespace oracle
