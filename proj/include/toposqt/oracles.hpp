#pragma once

// Brute-force reference implementations, deliberately routed through the
// defining lattice/chain constructions rather than the production shortcuts.
// Exponential in block count / poset size; intended for desk-scale fixtures
// only. Kept in a separate library so the fast paths cannot call them.

#include <optional>

#include "toposqt/daseinise.hpp"
#include "toposqt/quantity.hpp"
#include "toposqt/universe.hpp"

namespace toposqt {

// Outer: meet of ALL 2^k subset projections dominating p; inner: join of all
// dominated, both computed with matrix-level meet/join (range intersection /
// range sum), never block masks.
Projection das_proj_lattice(const Projection& p, const Context& v, Direction dir,
                            const TolerancePolicy& policy = {});

// Spectral-family route: daseinise every cumulative of A's family through
// das_proj_lattice (outer operators need inner-approximated cumulatives and
// vice versa), reassemble, integrate.
HermitianOperator das_sa_lattice(const HermitianOperator& a, const Context& v, Direction dir,
                                 const TolerancePolicy& policy = {});

// Spectral-order extremum by exhaustive enumeration: all block-coefficient
// assignments drawn from sp(A) that dominate A in the spectral order (outer)
// or are dominated by it (inner); returns the assignment comparable-below
// (resp. above) every other candidate, or nullopt if no candidate is
// pairwise extreme.
std::optional<HermitianOperator> spectral_extreme_oracle(const HermitianOperator& a,
                                                         const Context& v, Direction dir,
                                                         const TolerancePolicy& policy = {});

// Total variation of f at `at` by enumerating every strictly descending
// chain from `at` through the universe and summing absolute increments.
double chain_variation(const std::map<std::string, double>& f, const std::string& at,
                       const ContextUniverse& universe);

}  // namespace toposqt
