#pragma once

// Quantity-value side: functions on the down-set of a context, monotone
// against the coarsening order; arrows from the spectral presheaf built from
// daseinisation coefficients; and the Grothendieck-style group completion of
// the additive monoid of order-reversing functions, with bounded-variation
// canonical representatives.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toposqt/presheaf.hpp"

namespace toposqt {

enum class Monotonicity { order_reversing, order_preserving };

// Real-valued function on the down-set of root inside a fixed universe.
struct PoFunction {
    std::string root;
    Monotonicity direction = Monotonicity::order_reversing;
    std::map<std::string, double> values;  // keyed by context, domain = down_set(root)
};

// Domain completeness + claimed monotonicity against every comparable pair.
bool po_valid(const PoFunction& f, const ContextUniverse& universe);

// Restrict to the down-set of a smaller root (throws NotASubcontext if
// new_root is not below f.root in the universe).
PoFunction po_restrict(const PoFunction& f, const std::string& new_root,
                       const ContextUniverse& universe);

// Pointwise sum; operands must share root and direction.
PoFunction po_add(const PoFunction& a, const PoFunction& b);
// Pointwise product, direction claim copied from the operands. Monotone
// functions are NOT closed under products (po_valid can fail on the result);
// exposed precisely to witness that.
PoFunction po_mul(const PoFunction& a, const PoFunction& b);

// The two one-sided approximations bundled: inner is order-preserving,
// outer order-reversing, inner <= outer pointwise.
struct PairFunction {
    PoFunction inner;
    PoFunction outer;
};

// Group-completion class, stored as the canonical difference function
// (bounded variation) on the down-set of root.
struct KValue {
    std::string root;
    std::map<std::string, double> bv;
};

// Class of the formal difference lambda - kappa of two order-reversing
// functions over the same root.
KValue k_class(const PoFunction& lambda, const PoFunction& kappa);
// Monoid embedding theta: lambda -> class of (lambda, 0).
KValue k_theta(const PoFunction& lambda);
KValue k_zero(const std::string& root, const ContextUniverse& universe);
KValue k_add(const KValue& a, const KValue& b);
KValue k_neg(const KValue& a);
bool k_equal(const KValue& a, const KValue& b);  // bitwise on the bv maps

// Equivalence of formal pairs (mu, nu): mu1 + nu1 == mu2 + nu2 pointwise
// (cancellation makes the auxiliary summand in the defining relation
// redundant over the reals).
bool pair_equiv(const PairFunction& p, const PairFunction& q);

// The quotient isomorphism: class of [mu, nu] as a KValue (canonical
// difference nu - (-mu) = mu + nu).
KValue pair_quotient_iso(const PairFunction& p);

// Bounded-variation decomposition f = g - h with g, h order-reversing.
// total_variation is the DP table I_f(V) = max over chains below V of the
// summed absolute increments; g = f - I_f, h = -I_f.
struct BvDecomposition {
    PoFunction g;
    PoFunction h;
    std::map<std::string, double> total_variation;
};
BvDecomposition bv_decompose(const std::map<std::string, double>& f, const std::string& root,
                             const ContextUniverse& universe);

// Square of an embedded element [lambda, 0]: [lambda_+^2, -lambda_-^2],
// canonically lambda^2 pointwise. Throws NotEmbedded when the bv function is
// not order-reversing (i.e. the value is not in the monoid image).
KValue k_square_embedded(const KValue& v, const ContextUniverse& universe);

// --- Arrows from the spectral presheaf ----------------------------------

enum class ArrowMode { outer, inner, pair };

// Natural transformation from the spectral presheaf into a quantity-value
// presheaf, tabulated with full payloads. The codomain PresheafTable carries
// the reachable functions (components' images closed under restriction);
// element keys serialise the payload values exactly (hexfloat), so
// check_natural compares bitwise.
struct QuantityArrow {
    ArrowMode mode;
    ArrowTable table;
    // stage key -> element key -> payload
    std::map<std::string, std::map<std::string, PoFunction>> po_payloads;
    std::map<std::string, std::map<std::string, PairFunction>> pair_payloads;

    const PoFunction& po_at(const std::string& stage, int character) const;
    const PairFunction& pair_at(const std::string& stage, int character) const;
};

QuantityArrow quantity_arrow(const HermitianOperator& a,
                             std::shared_ptr<const ContextUniverse> universe, ArrowMode mode,
                             const TolerancePolicy& policy = {});

// Pointwise sum of two same-mode arrows over the same universe (the monoid
// structure of the quantity-value side; no product exists).
QuantityArrow arrow_add(const QuantityArrow& a, const QuantityArrow& b);

// Dispersion arrow: component at (V, character) is the KValue
//   outer(A^2) - outer(A)^2   (pointwise on the down-set of V).
// Nonnegative pointwise; identically zero on projections and scalars.
struct DispersionArrow {
    ArrowTable table;
    std::map<std::string, std::map<std::string, KValue>> payloads;
    const KValue& at(const std::string& stage, int character) const;
};

DispersionArrow dispersion(const HermitianOperator& a,
                           std::shared_ptr<const ContextUniverse> universe,
                           const TolerancePolicy& policy = {});

}  // namespace toposqt
