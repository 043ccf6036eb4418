#pragma once

// Finite presheaf machinery over a context universe. Stages hold opaque
// string element keys; restriction maps are explicit key maps for every
// strict order pair (parent > child). Everything in this module is exact
// (string/integer comparisons) — numeric content is baked into the keys by
// the instantiating module.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "toposqt/daseinise.hpp"
#include "toposqt/universe.hpp"

namespace toposqt {

using RestrictionKey = std::pair<std::string, std::string>;  // (parent, child)

struct PresheafTable {
    std::shared_ptr<const ContextUniverse> universe;
    // context key -> sorted element keys
    std::map<std::string, std::vector<std::string>> stages;
    // (parent, child) -> element map, for every strict pair child < parent
    std::map<RestrictionKey, std::map<std::string, std::string>> restrictions;

    const std::map<std::string, std::string>& restriction(const std::string& parent,
                                                          const std::string& child) const;
    // Restriction along any reflexive pair (identity when parent == child).
    std::string restrict_element(const std::string& parent, const std::string& child,
                                 const std::string& element) const;

    // Throws InvalidSubObject-family errors when stages/maps are incomplete,
    // maps leave the target stage, or composition along chains fails.
    void validate() const;
};

struct ArrowTable {
    std::shared_ptr<const PresheafTable> domain;
    std::shared_ptr<const PresheafTable> codomain;
    // context key -> (domain element -> codomain element)
    std::map<std::string, std::map<std::string, std::string>> components;

    void validate() const;
};

struct NaturalityViolation {
    std::string parent;
    std::string child;
    std::string element;
};

struct NaturalityReport {
    std::vector<NaturalityViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks codomain-restriction(component(x)) == component(domain-restriction(x))
// for every strict pair and every parent-stage element. Exact.
NaturalityReport check_natural(const ArrowTable& arrow);

struct Sieve {
    std::string root;
    std::set<std::string> members;  // context keys <= root
};

// Valid iff all members lie below root and the member set is down-closed
// within the universe.
bool truth_sieve_check(const Sieve& s, const ContextUniverse& universe);

struct SubObjectTable {
    std::shared_ptr<const PresheafTable> presheaf;
    std::map<std::string, std::set<std::string>> stage_sets;

    // Throws InvalidSubObject unless every stage set restricts into the
    // child's stage set.
    void validate() const;
};

// Stage-wise preimage of a restriction-stable subobject of the codomain.
SubObjectTable pullback_subobject(const ArrowTable& arrow, const SubObjectTable& xi);

// All compatible families of stage elements, found by backtracking in sorted
// key order. Throws SizeLimit when visited nodes exceed node_budget.
std::vector<std::map<std::string, std::string>> global_elements(
    const PresheafTable& p, std::size_t node_budget = 1000000);

// --- Concrete instantiations -------------------------------------------

// Spectral presheaf: stage elements are the characters (block indices as
// decimal strings), restriction = character restriction.
PresheafTable spectral_presheaf(std::shared_ptr<const ContextUniverse> universe,
                                const TolerancePolicy& policy = {});

// Outer/inner projection presheaves: stage elements are the 2^k block-subset
// masks (decimal strings), restriction = projection daseinisation.
PresheafTable outer_presheaf(std::shared_ptr<const ContextUniverse> universe,
                             const TolerancePolicy& policy = {});
PresheafTable inner_presheaf(std::shared_ptr<const ContextUniverse> universe,
                             const TolerancePolicy& policy = {});

}  // namespace toposqt
