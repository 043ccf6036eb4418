#pragma once

// A finite, explicitly enumerated down-closed poset of contexts over one
// Hilbert space dimension. All presheaves in this library are tabulated over
// such a universe; iteration order is always the sorted canonical keys.

#include <map>
#include <string>
#include <vector>

#include "toposqt/context.hpp"

namespace toposqt {

class ContextUniverse {
  public:
    ContextUniverse(int dim, bool include_trivial, std::vector<Context> contexts,
                    const TolerancePolicy& policy = {});

    int dim() const { return dim_; }
    bool include_trivial() const { return include_trivial_; }
    std::size_t size() const { return contexts_.size(); }

    bool has(const std::string& key) const { return contexts_.count(key) > 0; }
    const Context& at(const std::string& key) const;
    // Sorted canonical keys: the deterministic iteration order.
    const std::vector<std::string>& keys() const { return keys_; }

    // child <= parent in the coarsening order (reflexive).
    bool leq(const std::string& child, const std::string& parent) const;
    // Strict covers (child, parent) of the order, sorted.
    std::vector<std::pair<std::string, std::string>> hasse_edges() const;
    // All keys <= root (root included), sorted.
    std::vector<std::string> down_set(const std::string& root) const;
    // All maximal contexts, sorted.
    std::vector<std::string> maximal_keys() const;

    // True when every coarsening of every member (per the trivial-context
    // flag) is again a member.
    bool is_down_closed(const TolerancePolicy& policy = {}) const;

  private:
    int dim_;
    bool include_trivial_;
    std::map<std::string, Context> contexts_;
    std::vector<std::string> keys_;
    std::map<std::string, std::map<std::string, bool>> leq_;
};

// Builds the universe generated by seed operator families: each family is
// joint-diagonalised into a context, then the set is closed under coarsening
// (subcontexts). Throws SizeLimit beyond max_contexts.
ContextUniverse build_universe(int dim, const std::vector<std::vector<HermitianOperator>>& seeds,
                               bool include_trivial, const TolerancePolicy& policy = {},
                               std::size_t max_contexts = 64);

// Same closure applied to explicit contexts (used when extending a universe
// by a separating context or a twisted image).
ContextUniverse universe_from_contexts(int dim, const std::vector<Context>& contexts,
                                       bool include_trivial, const TolerancePolicy& policy = {},
                                       std::size_t max_contexts = 64);

ContextUniverse extend_universe(const ContextUniverse& base, const std::vector<Context>& extra,
                                const TolerancePolicy& policy = {},
                                std::size_t max_contexts = 64);

}  // namespace toposqt
