#pragma once

// State-dependent truth values and unitary covariance. Truth values are
// sieves on a stage: the contexts where the outer daseinisation of a
// proposition holds with certainty in the given state. Unitary twisting
// re-labels the whole universe by conjugation; the checks here verify that
// daseinisation, truth values and quantity arrows transform covariantly.

#include <optional>

#include "toposqt/quantity.hpp"

namespace toposqt {

class StateVector {
  public:
    explicit StateVector(Vector amplitudes, const TolerancePolicy& policy = {});

    int dim() const { return static_cast<int>(amp_.size()); }
    const Vector& amplitudes() const { return amp_; }
    Projection support() const;  // rank-1 projection onto the ray
    double expectation(const Matrix& a) const;

  private:
    Vector amp_;
};

// Per-context sets of block masks whose projection holds with certainty:
// <psi| P |psi> >= 1 - order_cmp_tol. A restriction-stable subobject of the
// outer presheaf.
struct TruthObjectTable {
    std::map<std::string, std::vector<unsigned>> masks;
};
TruthObjectTable truth_object(const StateVector& psi, const ContextUniverse& universe,
                              const TolerancePolicy& policy = {});

// Truth value of proposition P at stage `root` in state psi: the sieve of
// contexts below root where the outer daseinisation holds with certainty.
Sieve truth_value(const Projection& p, const StateVector& psi, const std::string& root,
                  const ContextUniverse& universe, const TolerancePolicy& policy = {});

// Antonymous/expectation/observable sandwich for the state's support filter.
struct SandwichResult {
    double antonymous;   // g_A at the support filter
    double expectation;  // <psi|A|psi>
    double observable;   // f_A at the support filter
};
SandwichResult sandwich(const HermitianOperator& a, const StateVector& psi,
                        const TolerancePolicy& policy = {});

// [inner, outer] daseinisation interval of A seen from the character at
// (stage, block) through subcontext sub.
std::pair<double, double> spread(const HermitianOperator& a, const ContextUniverse& universe,
                                 const std::string& stage, int character,
                                 const std::string& sub, const TolerancePolicy& policy = {});

// --- Unitary twisting ----------------------------------------------------

// Conjugated context {U Q U^-1 : Q block of V}.
Context twist_context(const UnitaryOperator& u, const Context& v,
                      const TolerancePolicy& policy = {});

// Image universe: every context conjugated; the coarsening order transports.
ContextUniverse twist_universe(const UnitaryOperator& u, const ContextUniverse& universe,
                               const TolerancePolicy& policy = {});

// Block-index permutation underlying the character isomorphism at V: entry i
// is the block index of U Q_i U^-1 inside the canonically sorted twist.
std::vector<int> twist_character_map(const UnitaryOperator& u, const Context& v,
                                     const TolerancePolicy& policy = {});

struct CovarianceReport {
    double max_deviation = 0.0;
    std::map<std::string, double> per_context;
    bool sieves_match = true;  // truth-sieve transport (projection overload)
    bool pass(double tol) const { return max_deviation <= tol && sieves_match; }
};

// Projection covariance: U das(P)_V U^-1 == das(U P U^-1)_{twist(V)} in both
// directions, plus transport of the truth sieve at every stage.
CovarianceReport covariance_check(const Projection& p, const UnitaryOperator& u,
                                  const StateVector& psi, const ContextUniverse& universe,
                                  const TolerancePolicy& policy = {});

// Operator covariance: U das(A)_V U^-1 == das(U A U^-1)_{twist(V)}, both
// directions.
CovarianceReport covariance_check(const HermitianOperator& a, const UnitaryOperator& u,
                                  const ContextUniverse& universe,
                                  const TolerancePolicy& policy = {});

struct TwistedIsoReport {
    bool character_bijections = true;   // iota is a stage-wise bijection
    bool character_naturality = true;   // iota commutes with restriction
    double square_deviation = 0.0;      // kappa . arrow(A) vs twisted arrow . iota
    bool pass(double tol) const {
        return character_bijections && character_naturality && square_deviation <= tol;
    }
};

// Verifies the twist isomorphisms on the spectral and quantity-value sides
// and the commuting square: transporting the pair arrow of A along
// (iota, kappa) lands on the pair arrow of U A U^-1 over the twisted
// universe, stage by stage and value by value.
TwistedIsoReport twisted_iso_check(const HermitianOperator& a, const UnitaryOperator& u,
                                   const ContextUniverse& universe,
                                   const TolerancePolicy& policy = {});

// Compose-transport law on context keys and character maps:
// twisting by u2 after u1 equals twisting by u2*u1.
bool twist_composition_check(const UnitaryOperator& u1, const UnitaryOperator& u2,
                             const ContextUniverse& universe,
                             const TolerancePolicy& policy = {});

// A two-block context at which the outer quantity arrows of A and B take
// different values; nullopt iff A == B within tolerance. Primary search:
// rank-1 projections onto eigenvectors of A, B, A-B. Completeness fallback:
// an explicit range-difference vector at the first joint spectral threshold
// where the two families disagree.
std::optional<Context> separating_context(const HermitianOperator& a,
                                          const HermitianOperator& b,
                                          const TolerancePolicy& policy = {});

}  // namespace toposqt
