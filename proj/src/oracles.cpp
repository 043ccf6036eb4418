#include "toposqt/oracles.hpp"

#include <cmath>
#include <functional>

namespace toposqt {

Projection das_proj_lattice(const Projection& p, const Context& v, Direction dir,
                            const TolerancePolicy& policy) {
    std::vector<Projection> candidates;
    for (unsigned mask = 0; mask < (1u << v.block_count()); ++mask) {
        Projection q = v.subset_projection(mask);
        const bool keep =
            dir == Direction::outer ? proj_leq(p, q, policy) : proj_leq(q, p, policy);
        if (keep) {
            candidates.push_back(std::move(q));
        }
    }
    // Outer candidates always include the identity (full mask), inner ones
    // the zero projection (empty mask), so the fold never starts empty.
    Projection acc = candidates.front();
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        acc = dir == Direction::outer ? proj_meet(acc, candidates[i], policy)
                                      : proj_join(acc, candidates[i], policy);
    }
    return acc;
}

HermitianOperator das_sa_lattice(const HermitianOperator& a, const Context& v, Direction dir,
                                 const TolerancePolicy& policy) {
    const SpectralFamily family = spectral_family(a, policy);
    // The outer operator integrates the inner-approximated family; the inner
    // operator's family inf_{mu > lambda} outer(E_mu) collapses pointwise on
    // a finite grid because E is a right-continuous step function.
    const Direction family_dir =
        dir == Direction::outer ? Direction::inner : Direction::outer;
    std::vector<SpectralJump> jumps;
    for (const auto& j : family.jumps()) {
        jumps.push_back({j.threshold, das_proj_lattice(j.cumulative, v, family_dir, policy)});
    }
    return operator_from_family(SpectralFamily(std::move(jumps), policy).compressed(),
                                policy);
}

std::optional<HermitianOperator> spectral_extreme_oracle(const HermitianOperator& a,
                                                         const Context& v, Direction dir,
                                                         const TolerancePolicy& policy) {
    const std::vector<double> spectrum = spectrum_of(spectral_family(a, policy));
    const int k = v.block_count();
    const int n = static_cast<int>(spectrum.size());

    long total = 1;
    for (int j = 0; j < k; ++j) {
        total *= n;
    }
    std::vector<HermitianOperator> candidates;
    for (long idx = 0; idx < total; ++idx) {
        long rest = idx;
        Matrix b = Matrix::Zero(v.dim(), v.dim());
        for (int j = 0; j < k; ++j) {
            b += spectrum[rest % n] * v.block(j).matrix();
            rest /= n;
        }
        HermitianOperator cand(b, policy);
        const bool keep = dir == Direction::outer ? spectral_leq(a, cand, policy)
                                                  : spectral_leq(cand, a, policy);
        if (keep) {
            candidates.push_back(std::move(cand));
        }
    }

    for (const auto& m : candidates) {
        bool extreme = true;
        for (const auto& b : candidates) {
            const bool ok = dir == Direction::outer ? spectral_leq(m, b, policy)
                                                    : spectral_leq(b, m, policy);
            if (!ok) {
                extreme = false;
                break;
            }
        }
        if (extreme) {
            return m;
        }
    }
    return std::nullopt;
}

double chain_variation(const std::map<std::string, double>& f, const std::string& at,
                       const ContextUniverse& universe) {
    double best = 0.0;
    std::function<void(const std::string&, double)> extend = [&](const std::string& bottom,
                                                                 double acc) {
        best = std::max(best, acc);
        for (const auto& w : universe.down_set(bottom)) {
            if (w == bottom) {
                continue;
            }
            extend(w, acc + std::abs(f.at(bottom) - f.at(w)));
        }
    };
    extend(at, 0.0);
    return best;
}

}  // namespace toposqt
