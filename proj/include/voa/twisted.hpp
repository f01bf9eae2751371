#ifndef VOA_TWISTED_HPP
#define VOA_TWISTED_HPP

#include "voa/fock.hpp"

#include <map>
#include <utility>

namespace voa {

/// Taylor coefficients c_{mn} of -log(((1+x)^{1/2} + (1+y)^{1/2})/2), m+n <= maxTotal.
struct CmnTable {
  int maxTotal = 0;
  std::map<std::pair<int, int>, Rat> entries;

  Rat at(int m, int n) const;
};

CmnTable cCoeffs(int maxTotal);

/// e^{Delta_x} u as a map from t to the x^{-t} component.
using DeltaExpansion = std::map<int, VAElement>;
DeltaExpansion deltaApply(const VAElement &u, int rank);

/// Twisted mode u_n on M(1)(theta), with n = n2/2. Y(u,x) = Y_0(e^{Delta_x}u, x) and
/// u_n is the coefficient of x^{-n-1}.
State twistedNProduct(const VAElement &u, int n2, const State &s);

/// The normally ordered field Y_0 alone.
State y0Mode(const VAElement &u, int n2, const State &s);

} // namespace voa

#endif
