#include "toposqt/truth.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace toposqt {

StateVector::StateVector(Vector amplitudes, const TolerancePolicy& policy)
    : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0) {
        throw InvalidOperator("StateVector: empty amplitude vector");
    }
    if (std::abs(amp_.norm() - 1.0) > policy.order_cmp_tol) {
        throw InvalidOperator("StateVector: not unit norm");
    }
}

Projection StateVector::support() const { return Projection::onto_line(amp_); }

double StateVector::expectation(const Matrix& a) const {
    return (amp_.adjoint() * a * amp_)(0, 0).real();
}

TruthObjectTable truth_object(const StateVector& psi, const ContextUniverse& universe,
                              const TolerancePolicy& policy) {
    TruthObjectTable out;
    for (const auto& key : universe.keys()) {
        const Context& v = universe.at(key);
        std::vector<unsigned> masks;
        for (unsigned mask = 0; mask < (1u << v.block_count()); ++mask) {
            if (psi.expectation(v.subset_projection(mask).matrix()) >=
                1.0 - policy.order_cmp_tol) {
                masks.push_back(mask);
            }
        }
        out.masks.emplace(key, std::move(masks));
    }
    return out;
}

Sieve truth_value(const Projection& p, const StateVector& psi, const std::string& root,
                  const ContextUniverse& universe, const TolerancePolicy& policy) {
    Sieve s;
    s.root = root;
    for (const auto& key : universe.down_set(root)) {
        const double ev =
            psi.expectation(das_proj(p, universe.at(key), Direction::outer, policy).matrix());
        if (ev >= 1.0 - policy.order_cmp_tol) {
            s.members.insert(key);
        }
    }
    return s;
}

SandwichResult sandwich(const HermitianOperator& a, const StateVector& psi,
                        const TolerancePolicy& policy) {
    const PrincipalFilter f = filter_of_projection(psi.support());
    return SandwichResult{antonymous_fn(a, f, policy), psi.expectation(a.matrix()),
                          observable_fn(a, f, policy)};
}

std::pair<double, double> spread(const HermitianOperator& a, const ContextUniverse& universe,
                                 const std::string& stage, int character,
                                 const std::string& sub, const TolerancePolicy& policy) {
    if (!universe.leq(sub, stage)) {
        throw NotASubcontext("spread: sub is not below stage");
    }
    const Context& v = universe.at(stage);
    const Context& w = universe.at(sub);
    const int j = restrict_character(v, character, w, policy);
    const double lo = das_sa(a, w, Direction::inner, policy).coefficients.at(j);
    const double hi = das_sa(a, w, Direction::outer, policy).coefficients.at(j);
    return {lo, hi};
}

// --- Twisting -------------------------------------------------------------

Context twist_context(const UnitaryOperator& u, const Context& v,
                      const TolerancePolicy& policy) {
    std::vector<Projection> blocks;
    blocks.reserve(v.block_count());
    for (const auto& q : v.blocks()) {
        blocks.emplace_back(u.matrix() * q.matrix() * u.matrix().adjoint(), policy);
    }
    return Context(std::move(blocks), policy);
}

ContextUniverse twist_universe(const UnitaryOperator& u, const ContextUniverse& universe,
                               const TolerancePolicy& policy) {
    std::vector<Context> contexts;
    contexts.reserve(universe.size());
    for (const auto& key : universe.keys()) {
        contexts.push_back(twist_context(u, universe.at(key), policy));
    }
    return ContextUniverse(universe.dim(), universe.include_trivial(), std::move(contexts),
                           policy);
}

std::vector<int> twist_character_map(const UnitaryOperator& u, const Context& v,
                                     const TolerancePolicy& policy) {
    const Context t = twist_context(u, v, policy);
    std::vector<int> out(v.block_count(), -1);
    for (int i = 0; i < v.block_count(); ++i) {
        const Matrix image = u.matrix() * v.block(i).matrix() * u.matrix().adjoint();
        for (int j = 0; j < t.block_count(); ++j) {
            if (approx_equal(image, t.block(j).matrix(), policy.order_cmp_tol)) {
                out[i] = j;
                break;
            }
        }
        if (out[i] < 0) {
            throw Error("twist_character_map: conjugated block not found in twist");
        }
    }
    return out;
}

namespace {

double das_covariance_deviation(const HermitianOperator& a, const UnitaryOperator& u,
                                const Context& v, const TolerancePolicy& policy) {
    const Context tv = twist_context(u, v, policy);
    const HermitianOperator conj(u.matrix() * a.matrix() * u.matrix().adjoint(), policy);
    double dev = 0.0;
    for (Direction dir : {Direction::outer, Direction::inner}) {
        const Matrix lhs =
            u.matrix() * das_sa(a, v, dir, policy).to_operator(v).matrix() *
            u.matrix().adjoint();
        const Matrix rhs = das_sa(conj, tv, dir, policy).to_operator(tv).matrix();
        dev = std::max(dev, max_abs_diff(lhs, rhs));
    }
    return dev;
}

}  // namespace

CovarianceReport covariance_check(const Projection& p, const UnitaryOperator& u,
                                  const StateVector& psi, const ContextUniverse& universe,
                                  const TolerancePolicy& policy) {
    CovarianceReport report;
    const Projection conj_p(u.matrix() * p.matrix() * u.matrix().adjoint(), policy);
    const StateVector conj_psi(u.matrix() * psi.amplitudes(), policy);
    const ContextUniverse twisted = twist_universe(u, universe, policy);

    for (const auto& key : universe.keys()) {
        const Context& v = universe.at(key);
        const Context tv = twist_context(u, v, policy);
        double dev = 0.0;
        for (Direction dir : {Direction::outer, Direction::inner}) {
            const Matrix lhs =
                u.matrix() * das_proj(p, v, dir, policy).matrix() * u.matrix().adjoint();
            const Matrix rhs = das_proj(conj_p, tv, dir, policy).matrix();
            dev = std::max(dev, max_abs_diff(lhs, rhs));
        }
        report.per_context.emplace(key, dev);
        report.max_deviation = std::max(report.max_deviation, dev);

        // Truth sieves transport along the context relabelling.
        const Sieve original = truth_value(p, psi, key, universe, policy);
        const Sieve twisted_sieve = truth_value(conj_p, conj_psi, tv.key(), twisted, policy);
        std::set<std::string> transported;
        for (const auto& m : original.members) {
            transported.insert(twist_context(u, universe.at(m), policy).key());
        }
        if (transported != twisted_sieve.members) {
            report.sieves_match = false;
        }
    }
    return report;
}

CovarianceReport covariance_check(const HermitianOperator& a, const UnitaryOperator& u,
                                  const ContextUniverse& universe,
                                  const TolerancePolicy& policy) {
    CovarianceReport report;
    for (const auto& key : universe.keys()) {
        const double dev = das_covariance_deviation(a, u, universe.at(key), policy);
        report.per_context.emplace(key, dev);
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    return report;
}

TwistedIsoReport twisted_iso_check(const HermitianOperator& a, const UnitaryOperator& u,
                                   const ContextUniverse& universe,
                                   const TolerancePolicy& policy) {
    TwistedIsoReport report;
    auto base = std::make_shared<const ContextUniverse>(universe);
    auto twisted =
        std::make_shared<const ContextUniverse>(twist_universe(u, universe, policy));

    // Character bijections and their naturality against restriction.
    std::map<std::string, std::vector<int>> iota;
    std::map<std::string, std::string> key_map;
    for (const auto& key : base->keys()) {
        const Context& v = base->at(key);
        key_map[key] = twist_context(u, v, policy).key();
        std::vector<int> m = twist_character_map(u, v, policy);
        std::vector<int> seen(m.size(), 0);
        for (int x : m) {
            if (x < 0 || x >= static_cast<int>(m.size()) || seen[x]++) {
                report.character_bijections = false;
            }
        }
        iota.emplace(key, std::move(m));
    }
    for (const auto& parent : base->keys()) {
        for (const auto& child : base->keys()) {
            if (parent == child || !base->leq(child, parent)) continue;
            const Context& v = base->at(parent);
            const Context& w = base->at(child);
            const Context tv = twisted->at(key_map.at(parent));
            const Context tw = twisted->at(key_map.at(child));
            for (int i = 0; i < v.block_count(); ++i) {
                const int down_then_twist =
                    iota.at(child).at(restrict_character(v, i, w, policy));
                const int twist_then_down =
                    restrict_character(tv, iota.at(parent).at(i), tw, policy);
                if (down_then_twist != twist_then_down) {
                    report.character_naturality = false;
                }
            }
        }
    }

    // Commuting square, pair mode: kappa transports a function on the
    // down-set of V to the down-set of twist(V) along the key relabelling;
    // the twisted arrow is the pair arrow of U A U^-1 over the twisted
    // universe, evaluated at iota(character).
    const HermitianOperator conj(u.matrix() * a.matrix() * u.matrix().adjoint(), policy);
    const QuantityArrow original = quantity_arrow(a, base, ArrowMode::pair, policy);
    const QuantityArrow transported = quantity_arrow(conj, twisted, ArrowMode::pair, policy);
    for (const auto& key : base->keys()) {
        const Context& v = base->at(key);
        for (int i = 0; i < v.block_count(); ++i) {
            const PairFunction& lhs = original.pair_at(key, i);
            const PairFunction& rhs = transported.pair_at(key_map.at(key), iota.at(key).at(i));
            for (const auto& [sub, value] : lhs.outer.values) {
                report.square_deviation =
                    std::max(report.square_deviation,
                             std::abs(value - rhs.outer.values.at(key_map.at(sub))));
            }
            for (const auto& [sub, value] : lhs.inner.values) {
                report.square_deviation =
                    std::max(report.square_deviation,
                             std::abs(value - rhs.inner.values.at(key_map.at(sub))));
            }
        }
    }
    return report;
}

bool twist_composition_check(const UnitaryOperator& u1, const UnitaryOperator& u2,
                             const ContextUniverse& universe, const TolerancePolicy& policy) {
    const UnitaryOperator u21(u2.matrix() * u1.matrix(), policy);
    for (const auto& key : universe.keys()) {
        const Context& v = universe.at(key);
        const Context step = twist_context(u2, twist_context(u1, v, policy), policy);
        const Context direct = twist_context(u21, v, policy);
        if (step.key() != direct.key()) {
            return false;
        }
        // Character maps must compose the same way.
        const std::vector<int> m1 = twist_character_map(u1, v, policy);
        const std::vector<int> m2 =
            twist_character_map(u2, twist_context(u1, v, policy), policy);
        const std::vector<int> m21 = twist_character_map(u21, v, policy);
        for (std::size_t i = 0; i < m1.size(); ++i) {
            if (m2.at(m1.at(i)) != m21.at(i)) {
                return false;
            }
        }
    }
    return true;
}

namespace {

// Deterministic single-vector witness from a range difference: v in range(p)
// with a component outside range(q), via the top right singular vector of
// (1-q) p. Requires (1-q) p != 0.
std::optional<Vector> range_gap_vector(const Projection& p, const Projection& q) {
    const int d = p.dim();
    const Matrix m = (Matrix::Identity(d, d) - q.matrix()) * p.matrix();
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    if (svd.singularValues()(0) < 1e-9) {
        return std::nullopt;
    }
    Vector x = svd.matrixV().col(0);
    Vector v = p.matrix() * x;
    const double n = v.norm();
    if (n < 1e-12) {
        return std::nullopt;
    }
    return Vector(v / n);
}

bool arrows_differ_at(const HermitianOperator& a, const HermitianOperator& b,
                      const Context& v, const TolerancePolicy& policy) {
    const auto da = das_sa(a, v, Direction::outer, policy).coefficients;
    const auto db = das_sa(b, v, Direction::outer, policy).coefficients;
    for (std::size_t i = 0; i < da.size(); ++i) {
        if (std::abs(da[i] - db[i]) > policy.order_cmp_tol) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<Context> separating_context(const HermitianOperator& a,
                                          const HermitianOperator& b,
                                          const TolerancePolicy& policy) {
    if (approx_equal(a.matrix(), b.matrix(), policy.order_cmp_tol)) {
        return std::nullopt;
    }

    // Primary scan: eigenvector witnesses of A, B and A - B.
    std::vector<Vector> witnesses;
    for (const Matrix& m :
         {a.matrix(), b.matrix(), Matrix(a.matrix() - b.matrix())}) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        for (int i = 0; i < m.rows(); ++i) {
            witnesses.push_back(es.eigenvectors().col(i));
        }
    }
    for (const auto& v : witnesses) {
        const Context candidate = context_of_projection(Projection::onto_line(v), policy);
        if (candidate.is_trivial()) continue;
        if (arrows_differ_at(a, b, candidate, policy)) {
            return candidate;
        }
    }

    // Completeness fallback: at the first joint threshold where the spectral
    // families disagree, a range-gap vector separates by construction
    // (f_A <= t < f_B at its rank-1 filter, or symmetrically).
    const SpectralFamily fa = spectral_family(a, policy);
    const SpectralFamily fb = spectral_family(b, policy);
    std::set<double> grid;
    for (const auto& j : fa.jumps()) grid.insert(j.threshold);
    for (const auto& j : fb.jumps()) grid.insert(j.threshold);
    for (double t : grid) {
        const Projection pa = fa.value_at(t);
        const Projection pb = fb.value_at(t);
        if (approx_equal(pa.matrix(), pb.matrix(), policy.order_cmp_tol)) {
            continue;
        }
        for (const auto& [p, q] : {std::pair{pa, pb}, std::pair{pb, pa}}) {
            if (auto v = range_gap_vector(p, q)) {
                const Context candidate =
                    context_of_projection(Projection::onto_line(*v), policy);
                if (!candidate.is_trivial() && arrows_differ_at(a, b, candidate, policy)) {
                    return candidate;
                }
            }
        }
    }
    // Families agree at every joint threshold, so the operators coincide.
    return std::nullopt;
}

}  // namespace toposqt
