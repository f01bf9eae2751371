#ifndef VOA_ZHU_HPP
#define VOA_ZHU_HPP

#include "voa/fock.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace voa {

/// a*b = sum_i binom(wt a, i) a_{i-1} b, extended linearly over homogeneous parts of a.
VAElement star(const VAElement &a, const VAElement &b);
/// a o b = sum_i binom(wt a, i) a_{i-2} b.
VAElement circ(const VAElement &a, const VAElement &b);

/// Monomial basis of M(1)^+ of rank d (even number of creation ops), weights 0..W.
std::vector<Monomial> plusBasis(int rank, int maxWeight);
/// Number of theta-even basis monomials of each weight 0..W.
std::vector<std::size_t> plusDimensions(int rank, int maxWeight);

struct CircGenerator {
  Monomial a, b;
  std::string str(int rank) const;
};

/// Row-reduced span of { a o b : wt a + wt b + 1 <= W } inside M(1)^+.
class OSpanBasis {
public:
  int rank = 1;
  int weightBound = 0;
  std::vector<CircGenerator> generators; // only the independent ones are kept

  /// Number of independent rows.
  std::size_t dimension() const { return rows_.size(); }
  /// Solves v against the span. Certificate: coefficient per kept generator.
  std::optional<std::map<std::size_t, Rat>> solve(const VAElement &v) const;
  /// Recombines a certificate into a state.
  VAElement evaluate(const std::map<std::size_t, Rat> &cert) const;

  void addGenerator(const CircGenerator &g, const VAElement &value);

private:
  struct Row {
    std::map<Monomial, Rat> vec;
    std::map<std::size_t, Rat> cert;
  };
  std::vector<Row> rows_;
  std::map<Monomial, std::size_t> pivot_; // leading monomial -> row
  static Monomial lead(const std::map<Monomial, Rat> &v);
  void reduce(std::map<Monomial, Rat> &v, std::map<std::size_t, Rat> &cert) const;
};

/// Default cap: 12 at rank 1, 8 at rank 2, 6 otherwise; VOA_MAX_WEIGHT overrides.
int maxOSpanWeight(int rank);
OSpanBasis oSpan(int rank, int weightBound);

struct MemberResult {
  bool member = false;
  int weightBound = 0;
  std::size_t spanDimension = 0;
  std::vector<std::pair<CircGenerator, Rat>> certificate;
};

/// Decides v in O(V) within the bound; a positive answer carries a certificate.
MemberResult memberO(const VAElement &v, int rank, int weightBound);
/// Same, reusing a span built once.
MemberResult memberO(const VAElement &v, const OSpanBasis &span);

/// o(a) = a_{wt a - 1} on a lowest weight vector.
State zhuActionOnTop(const VAElement &a, const State &top);

} // namespace voa

#endif
