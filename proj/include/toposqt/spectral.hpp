#pragma once

// Spectral families as finite jump lists, and the spectral order they induce.
// A family stands for the right-continuous map
//   lambda -> largest cumulative projection at a threshold <= lambda
// (zero below the first jump, identity at and above the last).

#include <vector>

#include "toposqt/operators.hpp"
#include "toposqt/tolerance.hpp"

namespace toposqt {

struct SpectralJump {
    double threshold;
    Projection cumulative;
};

class SpectralFamily {
  public:
    // Validates: thresholds strictly increasing, cumulative projections
    // monotone under proj_leq, final cumulative == identity.
    SpectralFamily(std::vector<SpectralJump> jumps, const TolerancePolicy& policy = {});

    const std::vector<SpectralJump>& jumps() const { return jumps_; }
    int dim() const { return jumps_.front().cumulative.dim(); }

    // Right-continuous evaluation at lambda.
    Projection value_at(double lambda) const;

    // Drops jumps whose cumulative equals the previous one (zero increment)
    // so families compare on their genuine thresholds.
    SpectralFamily compressed(const TolerancePolicy& policy = {}) const;

  private:
    std::vector<SpectralJump> jumps_;
};

// Eigendecompose A, cluster eigenvalues at relative gap policy.eig_cluster_tol
// (scaled by max(1, spectral radius)), and return the family of cumulative
// eigenprojections. Reconstructs A within policy.order_cmp_tol.
SpectralFamily spectral_family(const HermitianOperator& a, const TolerancePolicy& policy = {});

// Inverse direction: sum of threshold * increment over the jumps.
HermitianOperator operator_from_family(const SpectralFamily& f, const TolerancePolicy& policy = {});

// Spectral order A <=_s B: E^B_lambda <= E^A_lambda at every threshold of the
// merged jump grid. Implies the usual operator order; coincides with it on
// commuting pairs and on projections.
bool spectral_leq(const HermitianOperator& a, const HermitianOperator& b,
                  const TolerancePolicy& policy = {});
bool spectral_leq(const SpectralFamily& fa, const SpectralFamily& fb,
                  const TolerancePolicy& policy = {});

// Lattice operations in the spectral order. The join's family takes pointwise
// meets of the cumulative projections, the meet's family pointwise joins; in
// finite dimension these pointwise families are already right-continuous, so
// evaluation on the merged grid is exact.
HermitianOperator spectral_meet(const HermitianOperator& a, const HermitianOperator& b,
                                const TolerancePolicy& policy = {});
HermitianOperator spectral_join(const HermitianOperator& a, const HermitianOperator& b,
                                const TolerancePolicy& policy = {});

SpectralFamily spectral_meet_family(const SpectralFamily& fa, const SpectralFamily& fb,
                                    const TolerancePolicy& policy = {});
SpectralFamily spectral_join_family(const SpectralFamily& fa, const SpectralFamily& fb,
                                    const TolerancePolicy& policy = {});

// Smallest / largest points of the spectrum and containment helpers used by
// the daseinisation property checks.
std::vector<double> spectrum_of(const SpectralFamily& f);
bool spectrum_contained(const std::vector<double>& inner, const std::vector<double>& outer,
                        double tol);

}  // namespace toposqt
