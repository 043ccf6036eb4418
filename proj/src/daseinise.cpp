#include "toposqt/daseinise.hpp"

#include <algorithm>
#include <cmath>

namespace toposqt {

HermitianOperator DaseinisedValue::to_operator(const Context& v) const {
    if (v.key() != context_key) {
        throw DimensionMismatch("DaseinisedValue: context key mismatch");
    }
    if (static_cast<int>(coefficients.size()) != v.block_count()) {
        throw DimensionMismatch("DaseinisedValue: coefficient count mismatch");
    }
    Matrix acc = Matrix::Zero(v.dim(), v.dim());
    for (int j = 0; j < v.block_count(); ++j) {
        acc += coefficients[j] * v.block(j).matrix();
    }
    return HermitianOperator(acc);
}

Projection das_proj(const Projection& p, const Context& v, Direction dir,
                    const TolerancePolicy& policy) {
    if (p.dim() != v.dim()) {
        throw DimensionMismatch("das_proj: dimension mismatch");
    }
    Matrix acc = Matrix::Zero(v.dim(), v.dim());
    for (const auto& q : v.blocks()) {
        const bool take = dir == Direction::outer
                              ? overlap_norm(q.matrix(), p.matrix()) > policy.zero_overlap_tol
                              : proj_leq(q, p, policy);
        if (take) {
            acc += q.matrix();
        }
    }
    return Projection(acc, policy);
}

unsigned das_proj_mask(const Context& v, unsigned mask, const Context& sub, Direction dir,
                       const TolerancePolicy& policy) {
    unsigned out = 0;
    for (int i = 0; i < sub.block_count(); ++i) {
        const auto& r = sub.block(i);
        bool take;
        if (dir == Direction::outer) {
            // R_i overlaps the mask projection iff it overlaps some member.
            take = false;
            for (int j = 0; j < v.block_count(); ++j) {
                if ((mask & (1u << j)) &&
                    overlap_norm(r.matrix(), v.block(j).matrix()) > policy.zero_overlap_tol) {
                    take = true;
                    break;
                }
            }
        } else {
            take = proj_leq(r, v.subset_projection(mask), policy);
        }
        if (take) {
            out |= 1u << i;
        }
    }
    return out;
}

namespace {

// Eigenvalue / eigenprojection increments of the spectral family: the raw
// material of every overlap selection below.
struct EigenDecomp {
    std::vector<double> values;
    std::vector<Matrix> projections;
};

EigenDecomp decompose(const HermitianOperator& a, const TolerancePolicy& policy) {
    EigenDecomp out;
    const SpectralFamily f = spectral_family(a, policy);
    Matrix prev = Matrix::Zero(a.dim(), a.dim());
    for (const auto& j : f.jumps()) {
        out.values.push_back(j.threshold);
        out.projections.push_back(j.cumulative.matrix() - prev);
        prev = j.cumulative.matrix();
    }
    return out;
}

// Extreme eigenvalue whose eigenprojection overlaps r.
double extreme_overlap(const EigenDecomp& eig, const Matrix& r, Direction dir,
                       const TolerancePolicy& policy, const char* who) {
    bool found = false;
    double best = 0.0;
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        if (overlap_norm(eig.projections[k], r) > policy.zero_overlap_tol) {
            if (!found) {
                best = eig.values[k];
                found = true;
            } else {
                best = dir == Direction::outer ? std::max(best, eig.values[k])
                                               : std::min(best, eig.values[k]);
            }
        }
    }
    if (!found) {
        throw Error(std::string(who) + ": no eigenprojection overlaps the target");
    }
    return best;
}

}  // namespace

DaseinisedValue das_sa(const HermitianOperator& a, const Context& v, Direction dir,
                       const TolerancePolicy& policy) {
    if (a.dim() != v.dim()) {
        throw DimensionMismatch("das_sa: dimension mismatch");
    }
    const EigenDecomp eig = decompose(a, policy);
    DaseinisedValue out;
    out.context_key = v.key();
    out.coefficients.reserve(v.block_count());
    for (const auto& q : v.blocks()) {
        out.coefficients.push_back(extreme_overlap(eig, q.matrix(), dir, policy, "das_sa"));
    }
    return out;
}

double observable_fn(const HermitianOperator& a, const PrincipalFilter& f,
                     const TolerancePolicy& policy) {
    const EigenDecomp eig = decompose(a, policy);
    return extreme_overlap(eig, f.generator.matrix(), Direction::outer, policy, "observable_fn");
}

double antonymous_fn(const HermitianOperator& a, const PrincipalFilter& f,
                     const TolerancePolicy& policy) {
    const EigenDecomp eig = decompose(a, policy);
    return extreme_overlap(eig, f.generator.matrix(), Direction::inner, policy, "antonymous_fn");
}

PhaseDecomposition eigenphases(const UnitaryOperator& u, const TolerancePolicy& policy) {
    // A unitary is normal: its real and imaginary Hermitian parts commute, so
    // their joint eigenspaces are exactly the eigenspaces of U.
    const Matrix& m = u.matrix();
    const HermitianOperator x(0.5 * (m + m.adjoint().eval()), policy);
    const Matrix y_raw = (m - m.adjoint().eval()) / Complex(0.0, 2.0);
    const HermitianOperator y(y_raw, policy);
    const Context joint = context_from_operators({x, y}, policy);

    const double two_pi = 2.0 * M_PI;
    std::vector<std::pair<double, Matrix>> parts;
    for (const auto& q : joint.blocks()) {
        const Complex z = (m * q.matrix()).trace() / Complex(q.matrix().trace().real(), 0.0);
        if (std::abs(std::abs(z) - 1.0) > policy.unitary_tol * 10) {
            throw InvalidOperator("eigenphases: block eigenvalue off the unit circle");
        }
        double phase = std::atan2(z.imag(), z.real());
        if (phase < 0.0) phase += two_pi;
        // Wraparound: phases within the cluster tolerance of 2*pi live at 0.
        if (two_pi - phase <= policy.eig_cluster_tol * two_pi) phase = 0.0;
        parts.emplace_back(phase, q.matrix());
    }
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    PhaseDecomposition out;
    for (auto& [phase, proj] : parts) {
        if (!out.phases.empty() &&
            phase - out.phases.back() <= policy.eig_cluster_tol * two_pi) {
            out.projections.back() =
                Projection(out.projections.back().matrix() + proj, policy);
        } else {
            out.phases.push_back(phase);
            out.projections.emplace_back(proj, policy);
        }
    }
    return out;
}

UnitaryOperator das_unitary(const UnitaryOperator& u, const Context& v, Direction dir,
                            const TolerancePolicy& policy) {
    if (u.dim() != v.dim()) {
        throw DimensionMismatch("das_unitary: dimension mismatch");
    }
    const PhaseDecomposition dec = eigenphases(u, policy);
    Matrix acc = Matrix::Zero(v.dim(), v.dim());
    for (const auto& q : v.blocks()) {
        bool found = false;
        double best = 0.0;
        for (std::size_t k = 0; k < dec.phases.size(); ++k) {
            if (overlap_norm(dec.projections[k].matrix(), q.matrix()) >
                policy.zero_overlap_tol) {
                if (!found) {
                    best = dec.phases[k];
                    found = true;
                } else {
                    best = dir == Direction::outer ? std::max(best, dec.phases[k])
                                                   : std::min(best, dec.phases[k]);
                }
            }
        }
        if (!found) {
            throw Error("das_unitary: block overlaps no eigenphase projection");
        }
        acc += std::exp(Complex(0.0, best)) * q.matrix();
    }
    return UnitaryOperator(acc, policy);
}

Projection spectral_projection(const HermitianOperator& a, double lo, double hi,
                               const TolerancePolicy& policy) {
    const EigenDecomp eig = decompose(a, policy);
    Matrix acc = Matrix::Zero(a.dim(), a.dim());
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        if (eig.values[k] >= lo - policy.order_cmp_tol &&
            eig.values[k] <= hi + policy.order_cmp_tol) {
            acc += eig.projections[k];
        }
    }
    return Projection(acc, policy);
}

Projection proposition_rep(const HermitianOperator& a, double lo, double hi, const Context& v,
                           const TolerancePolicy& policy) {
    return das_proj(spectral_projection(a, lo, hi, policy), v, Direction::outer, policy);
}

std::map<std::string, DaseinisedValue> groote_table(const HermitianOperator& a,
                                                    const ContextUniverse& universe,
                                                    Direction dir,
                                                    const TolerancePolicy& policy) {
    std::map<std::string, DaseinisedValue> out;
    for (const auto& key : universe.keys()) {
        out.emplace(key, das_sa(a, universe.at(key), dir, policy));
    }
    return out;
}

}  // namespace toposqt
