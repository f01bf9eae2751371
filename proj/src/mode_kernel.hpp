#ifndef VOA_MODE_KERNEL_HPP
#define VOA_MODE_KERNEL_HPP

#include "voa/fock.hpp"

namespace voa::detail {

/// Y_0-mode of the monomial element a (vacuum-module creation ops) at doubled
/// index n2, applied to the monomial s of module mod. On untwisted modules this
/// is the ordinary n-th product; on M(1)(theta) it is the normally ordered field
/// without the Delta correction.
State monoProduct(const Monomial &a, int n2, const Monomial &s, const ModulePtr &mod);

/// Multiplies every monomial by h^[gen](-deg2/2).
State create(int gen, int deg2, const State &s);

} // namespace voa::detail

#endif
