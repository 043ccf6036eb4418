#include "toposqt/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

namespace toposqt {

SpectralFamily::SpectralFamily(std::vector<SpectralJump> jumps, const TolerancePolicy& policy)
    : jumps_(std::move(jumps)) {
    if (jumps_.empty()) {
        throw InvalidFamily("SpectralFamily: no jumps");
    }
    const int d = jumps_.front().cumulative.dim();
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
        if (jumps_[i].cumulative.dim() != d) {
            throw InvalidFamily("SpectralFamily: mixed dimensions");
        }
        if (i > 0) {
            if (!(jumps_[i - 1].threshold < jumps_[i].threshold)) {
                throw InvalidFamily("SpectralFamily: thresholds not strictly increasing");
            }
            if (!proj_leq(jumps_[i - 1].cumulative, jumps_[i].cumulative, policy)) {
                throw InvalidFamily("SpectralFamily: cumulative projections not monotone");
            }
        }
    }
    if (!jumps_.back().cumulative.is_identity()) {
        throw InvalidFamily("SpectralFamily: final cumulative projection is not the identity");
    }
}

Projection SpectralFamily::value_at(double lambda) const {
    const Projection* last = nullptr;
    for (const auto& j : jumps_) {
        if (j.threshold <= lambda) {
            last = &j.cumulative;
        } else {
            break;
        }
    }
    if (last == nullptr) {
        return Projection::zero(dim());
    }
    return *last;
}

SpectralFamily SpectralFamily::compressed(const TolerancePolicy& policy) const {
    std::vector<SpectralJump> out;
    for (const auto& j : jumps_) {
        const bool same_as_prev =
            !out.empty() &&
            approx_equal(out.back().cumulative.matrix(), j.cumulative.matrix(),
                         policy.order_cmp_tol);
        const bool zero_increment =
            out.empty() && j.cumulative.is_zero() && (&j != &jumps_.back());
        if (same_as_prev || zero_increment) {
            continue;
        }
        out.push_back(j);
    }
    return SpectralFamily(std::move(out), policy);
}

SpectralFamily spectral_family(const HermitianOperator& a, const TolerancePolicy& policy) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
    const int d = a.dim();
    const auto& evals = es.eigenvalues();
    const double scale = std::max(1.0, std::max(std::abs(evals(0)), std::abs(evals(d - 1))));

    // Cluster eigenvalues that are closer than the relative gap tolerance;
    // each cluster becomes one jump whose increment is the summed
    // eigenprojection and whose threshold is the cluster mean.
    std::vector<SpectralJump> jumps;
    Matrix cumulative = Matrix::Zero(d, d);
    int i = 0;
    while (i < d) {
        int j = i;
        double sum = 0.0;
        while (j < d &&
               (j == i || evals(j) - evals(j - 1) <= policy.eig_cluster_tol * scale)) {
            sum += evals(j);
            ++j;
        }
        for (int k = i; k < j; ++k) {
            cumulative += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
        }
        jumps.push_back({sum / (j - i), Projection(cumulative, policy)});
        i = j;
    }
    // The last cumulative is the full eigenbasis; snap it to the identity so
    // downstream identity tests are exact.
    jumps.back().cumulative = Projection::identity(d);
    return SpectralFamily(std::move(jumps), policy);
}

HermitianOperator operator_from_family(const SpectralFamily& f, const TolerancePolicy& policy) {
    const int d = f.dim();
    Matrix acc = Matrix::Zero(d, d);
    Matrix prev = Matrix::Zero(d, d);
    for (const auto& j : f.jumps()) {
        acc += j.threshold * (j.cumulative.matrix() - prev);
        prev = j.cumulative.matrix();
    }
    return HermitianOperator(acc, policy);
}

namespace {

// Union grid of jump thresholds, with near-coincident values (independent
// eigensolves of the "same" eigenvalue land a few ulp apart) collapsed to the
// cluster maximum, so evaluating either family there sees the completed jump.
std::vector<double> merged_thresholds(const SpectralFamily& fa, const SpectralFamily& fb,
                                      const TolerancePolicy& policy) {
    std::set<double> grid;
    for (const auto& j : fa.jumps()) grid.insert(j.threshold);
    for (const auto& j : fb.jumps()) grid.insert(j.threshold);
    std::vector<double> out;
    for (double t : grid) {
        const double tol = policy.eig_cluster_tol * std::max(1.0, std::abs(t));
        if (!out.empty() && t - out.back() <= tol) {
            out.back() = t;
        } else {
            out.push_back(t);
        }
    }
    return out;
}

}  // namespace

bool spectral_leq(const SpectralFamily& fa, const SpectralFamily& fb,
                  const TolerancePolicy& policy) {
    if (fa.dim() != fb.dim()) {
        throw DimensionMismatch("spectral_leq: dimension mismatch");
    }
    for (double t : merged_thresholds(fa, fb, policy)) {
        if (!proj_leq(fb.value_at(t), fa.value_at(t), policy)) {
            return false;
        }
    }
    return true;
}

bool spectral_leq(const HermitianOperator& a, const HermitianOperator& b,
                  const TolerancePolicy& policy) {
    return spectral_leq(spectral_family(a, policy), spectral_family(b, policy), policy);
}

SpectralFamily spectral_join_family(const SpectralFamily& fa, const SpectralFamily& fb,
                                    const TolerancePolicy& policy) {
    // Family of the join: pointwise meets of the cumulatives. Larger in the
    // spectral order means smaller spectral family.
    std::vector<SpectralJump> jumps;
    for (double t : merged_thresholds(fa, fb, policy)) {
        jumps.push_back({t, proj_meet(fa.value_at(t), fb.value_at(t), policy)});
    }
    return SpectralFamily(std::move(jumps), policy).compressed(policy);
}

SpectralFamily spectral_meet_family(const SpectralFamily& fa, const SpectralFamily& fb,
                                    const TolerancePolicy& policy) {
    // Family of the meet: pointwise joins of the cumulatives. In finite
    // dimension the pointwise family is right-continuous on the merged grid,
    // so the infimum over mu > lambda is attained at lambda itself.
    std::vector<SpectralJump> jumps;
    for (double t : merged_thresholds(fa, fb, policy)) {
        jumps.push_back({t, proj_join(fa.value_at(t), fb.value_at(t), policy)});
    }
    return SpectralFamily(std::move(jumps), policy).compressed(policy);
}

HermitianOperator spectral_meet(const HermitianOperator& a, const HermitianOperator& b,
                                const TolerancePolicy& policy) {
    return operator_from_family(
        spectral_meet_family(spectral_family(a, policy), spectral_family(b, policy), policy),
        policy);
}

HermitianOperator spectral_join(const HermitianOperator& a, const HermitianOperator& b,
                                const TolerancePolicy& policy) {
    return operator_from_family(
        spectral_join_family(spectral_family(a, policy), spectral_family(b, policy), policy),
        policy);
}

std::vector<double> spectrum_of(const SpectralFamily& f) {
    // Spectrum = thresholds where the cumulative rank actually grows.
    std::vector<double> out;
    int prev_rank = 0;
    for (const auto& j : f.jumps()) {
        if (j.cumulative.rank() > prev_rank) {
            out.push_back(j.threshold);
        }
        prev_rank = j.cumulative.rank();
    }
    return out;
}

bool spectrum_contained(const std::vector<double>& inner, const std::vector<double>& outer,
                        double tol) {
    for (double x : inner) {
        bool found = false;
        for (double y : outer) {
            if (std::abs(x - y) <= tol) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace toposqt
