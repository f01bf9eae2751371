#ifndef VOA_VERTEX_HPP
#define VOA_VERTEX_HPP

#include "voa/fock.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace voa {

/// h^[i](k) acting on s, with k = k2/2. On untwisted modules k2 must be even, on
/// the twisted module odd.
State heisMode(int i, int k2, const State &s);
inline State heisModeInt(int i, int k, const State &s) { return heisMode(i, 2 * k, s); }

/// a_n b for b in M(1) or M(1,lambda).
State nProduct(const VAElement &a, int n, const State &b);

/// Nonzero a_k b for k >= 0.
std::vector<std::pair<int, VAElement>> commutatorTable(const VAElement &a, const VAElement &b);

/// [a_i, b_j] s through the table: sum_k binom(i,k) (a_k b)_{i+j-k} s.
State evalCommutator(const VAElement &a, int i, const VAElement &b, int j, const State &s);

/// Largest k with a_k u != 0, or nullopt for -infinity. On the twisted module the
/// returned mode may be a half integer.
std::optional<Rat> epsilonOf(const VAElement &a, const State &u);

/// Checks the generator annihilation conditions defining Omega for M(1)^+.
bool isOmegaVector(const State &u, int rank);

/// Mode of a homogeneous element on any module kind (dispatches to the twisted
/// product on M(1)(theta)). The index is doubled: n2 = 2n.
State modeAction(const VAElement &a, int n2, const State &s);

/// Drops cached n-th products (tests and long runs).
void clearProductCache();
std::size_t productCacheSize();

} // namespace voa

#endif
