#pragma once

// Abelian contexts as orthogonal block decompositions of the identity. A
// context is fully determined by its set of minimal projections (blocks);
// inclusion of contexts is coarsening of partitions, characters are "which
// block", and the projection lattice of a context is the 2^k sums of blocks.

#include <string>
#include <vector>

#include "toposqt/operators.hpp"
#include "toposqt/tolerance.hpp"

namespace toposqt {

class Context {
  public:
    // Validates: blocks pairwise orthogonal projections summing to the
    // identity. Blocks are stored canonically sorted (rank, then rounded
    // entry string) and the key is an FNV-1a digest of that canonical form,
    // so numerically equal contexts collapse to one key.
    explicit Context(std::vector<Projection> blocks, const TolerancePolicy& policy = {});

    const std::string& key() const { return key_; }
    int dim() const { return blocks_.front().dim(); }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<Projection>& blocks() const { return blocks_; }
    const Projection& block(int i) const { return blocks_.at(i); }
    bool is_trivial() const { return blocks_.size() == 1; }

    // Projection given by a subset of blocks (bit i of mask selects block i).
    Projection subset_projection(unsigned mask) const;

  private:
    std::vector<Projection> blocks_;
    std::string key_;
};

// The one-block context {1} on dim-dimensional space.
Context trivial_context(int dim);

// Joint eigenspace decomposition of a pairwise-commuting family; throws
// NotCommuting when a commutator exceeds policy.order_cmp_tol entrywise.
// Every input operator is a real-linear combination of the result's blocks.
Context context_from_operators(const std::vector<HermitianOperator>& ops,
                               const TolerancePolicy& policy = {});

// Context generated by a single projection: blocks {P, 1-P} (or {1} for the
// degenerate P in {0, 1}).
Context context_of_projection(const Projection& p, const TolerancePolicy& policy = {});

// All coarsenings of V (partitions of its block set), V itself included; the
// trivial context appears only when include_trivial is set.
std::vector<Context> subcontexts(const Context& v, bool include_trivial,
                                 const TolerancePolicy& policy = {});

// V' <= V iff every block of V' is a sum of blocks of V.
bool is_subcontext(const Context& sub, const Context& super, const TolerancePolicy& policy = {});

// A character of V named by the block it maps to 1.
struct Character {
    std::string context_key;
    int block_index = 0;
};

// Restriction of the character on block i of V to a coarser context V':
// the unique block of V' dominating block i. Throws NotASubcontext.
int restrict_character(const Context& v, int block_index, const Context& sub,
                       const TolerancePolicy& policy = {});

// The ultrafilter of V's projection lattice attached to a character: all
// 2^(k-1) block sums that contain the character's block, in mask order.
std::vector<Projection> character_ultrafilter(const Context& v, int block_index);

// Principal filter in the full projection lattice, named by its generator.
struct PrincipalFilter {
    Projection generator;

    bool contains(const Projection& q, const TolerancePolicy& policy = {}) const {
        return proj_leq(generator, q, policy);
    }
};

PrincipalFilter filter_of_projection(const Projection& p);

// Meet of a finite filter base; the principal filter it generates. Throws
// EmptyFilterBase on an empty base or when the meet collapses to zero.
PrincipalFilter cone(const std::vector<Projection>& filter_base,
                     const TolerancePolicy& policy = {});

}  // namespace toposqt
