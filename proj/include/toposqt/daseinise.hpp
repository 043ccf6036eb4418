#pragma once

// Daseinisation: best approximations of a projection / self-adjoint operator
// inside an abelian context. Outer approximates from above (smallest dominating
// element), inner from below (largest dominated element).
//
// Production path: block/eigenprojection overlap selection. For a context
// with blocks Q_j and an operator with eigenvalues lambda_k and
// eigenprojections P_k,
//   outer coefficient on Q_j = max { lambda_k : ||P_k Q_j||_F > tol },
//   inner coefficient on Q_j = min { lambda_k : ||P_k Q_j||_F > tol }.
// The lattice definition (meets/joins over the 2^k projections of the
// context, daseinised spectral families) lives in oracles.hpp as the
// independent test oracle.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toposqt/context.hpp"
#include "toposqt/spectral.hpp"
#include "toposqt/universe.hpp"

namespace toposqt {

enum class Direction { outer, inner };

// A context-local self-adjoint operator recorded against the context's
// canonical block order.
struct DaseinisedValue {
    std::string context_key;
    std::vector<double> coefficients;  // one per block, canonical order

    // Reconstruction sum(coefficients[j] * block_j); v.key() must match.
    HermitianOperator to_operator(const Context& v) const;
};

// Outer: sum of blocks with nonzero overlap against P. Inner: sum of blocks
// dominated by P.
Projection das_proj(const Projection& p, const Context& v, Direction dir,
                    const TolerancePolicy& policy = {});

// Same selection on a subset-of-blocks mask: the outer/inner presheaf
// restriction map in index form.
unsigned das_proj_mask(const Context& v, unsigned mask, const Context& sub, Direction dir,
                       const TolerancePolicy& policy = {});

DaseinisedValue das_sa(const HermitianOperator& a, const Context& v, Direction dir,
                       const TolerancePolicy& policy = {});

// Value of an observable's outer function on a principal filter:
// largest eigenvalue whose eigenprojection overlaps the generator.
double observable_fn(const HermitianOperator& a, const PrincipalFilter& f,
                     const TolerancePolicy& policy = {});
// Antonymous partner: smallest eigenvalue whose eigenprojection overlaps.
double antonymous_fn(const HermitianOperator& a, const PrincipalFilter& f,
                     const TolerancePolicy& policy = {});

// Eigenphase decomposition of a unitary: phases in [0, 2*pi), each with its
// joint eigenprojection, sorted ascending. Phases within the cluster
// tolerance of 2*pi are wrapped to 0.
struct PhaseDecomposition {
    std::vector<double> phases;
    std::vector<Projection> projections;
};
PhaseDecomposition eigenphases(const UnitaryOperator& u, const TolerancePolicy& policy = {});

// Daseinise a unitary through its phase family: per block, exp(i * extreme
// overlapping phase). Returns the resulting unitary element of V.
UnitaryOperator das_unitary(const UnitaryOperator& u, const Context& v, Direction dir,
                            const TolerancePolicy& policy = {});

// Sum of eigenprojections with eigenvalue in [lo, hi] (within
// policy.order_cmp_tol at the boundary); zero projection for an empty hit.
Projection spectral_projection(const HermitianOperator& a, double lo, double hi,
                               const TolerancePolicy& policy = {});

// Context representative of the proposition "A in [lo, hi]".
Projection proposition_rep(const HermitianOperator& a, double lo, double hi, const Context& v,
                           const TolerancePolicy& policy = {});

// Daseinisation tabulated over a whole universe (one value per context).
std::map<std::string, DaseinisedValue> groote_table(const HermitianOperator& a,
                                                    const ContextUniverse& universe,
                                                    Direction dir,
                                                    const TolerancePolicy& policy = {});

}  // namespace toposqt
