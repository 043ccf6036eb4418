#pragma once

// Central tolerance knobs. Daseinisation is inherently discontinuous in its
// inputs (block selection flips when an overlap crosses zero), so every
// comparison that feeds a discrete decision goes through this policy rather
// than an ad-hoc epsilon.

namespace toposqt {

struct TolerancePolicy {
    // Relative gap (scaled by max(1, spectral radius)) under which adjacent
    // eigenvalues are merged into one spectral cluster.
    double eig_cluster_tol = 1e-9;
    // Entrywise bound for P*P == P when validating projections, and the
    // eigenvalue snap-to-{0,1} bound.
    double proj_tol = 1e-8;
    // Entrywise bound for A == A^dagger.
    double hermitian_tol = 1e-8;
    // Entrywise bound for U*U^dagger == 1.
    double unitary_tol = 1e-8;
    // Frobenius-norm threshold below which a product Q*P counts as zero
    // overlap (block selection in the fast daseinisation path).
    double zero_overlap_tol = 1e-10;
    // Tolerance for all order comparisons (projection order, spectral order,
    // operator equality, truth-sieve membership threshold 1 - order_cmp_tol).
    double order_cmp_tol = 1e-8;
};

}  // namespace toposqt
