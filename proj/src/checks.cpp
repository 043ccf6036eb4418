#include "toposqt/checks.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "toposqt/fixtures.hpp"
#include "toposqt/oracles.hpp"

namespace toposqt::checks {

namespace {

using fixtures::Rng;

// Pinned acceptance tolerances.
constexpr double kTolLattice = 1e-8;    // fast path vs lattice oracle
constexpr double kTolSpectrum = 1e-8;   // coefficient membership in sp(A)
constexpr double kTolScaling = 1e-12;   // algebraic identities ("exact")
constexpr double kTolExchange = 1e-8;   // spectral-family exchange
constexpr double kTolFilter = 1e-10;    // filter-function equalities
constexpr double kTolSandwich = 1e-8;   // sandwich inequalities
constexpr double kTolCovariance = 1e-8; // covariance equations
constexpr double kTolUnitary = 1e-8;    // unitary daseinisation

struct Ctx {
    std::uint64_t seed;
    TolerancePolicy policy;
};

void fail(CheckResult& r, const std::string& where) {
    r.pass = false;
    if (r.details.size() < 500) {
        r.details += (r.details.empty() ? "" : "; ") + where;
    }
}

void require(CheckResult& r, bool ok, double deviation, const std::string& where) {
    r.max_deviation = std::max(r.max_deviation, deviation);
    if (!ok) {
        fail(r, where);
    }
}

std::string hex_map(const std::map<std::string, double>& values) {
    std::string out;
    char buf[40];
    for (const auto& [key, x] : values) {
        std::snprintf(buf, sizeof buf, "%a", x);
        out += key + "=" + buf + ";";
    }
    return out;
}

StateVector eigenvector_state(const Matrix& a, Rng& rng, const TolerancePolicy& policy) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const int col = rng.uniform_int(0, static_cast<int>(a.rows()) - 1);
    return StateVector(es.eigenvectors().col(col), policy);
}

// --- criterion: fast daseinisation vs lattice oracle ----------------------

CheckResult das_lattice_equivalence(const Ctx& c) {
    CheckResult r{"das-lattice-equivalence", true, 0.0, ""};
    Rng rng(c.seed);
    const std::map<int, int> rounds{{2, 67}, {3, 67}, {4, 66}};
    for (const auto& [dim, n] : rounds) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        for (int t = 0; t < n; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const Projection p = rng.projection(dim, c.policy);
            for (const auto& key : uni->keys()) {
                const Context& v = uni->at(key);
                for (Direction dir : {Direction::outer, Direction::inner}) {
                    const double dp =
                        max_abs_diff(das_proj(p, v, dir, c.policy).matrix(),
                                     das_proj_lattice(p, v, dir, c.policy).matrix());
                    require(r, dp <= kTolLattice, dp, "proj@" + key);
                    const double da =
                        max_abs_diff(das_sa(a, v, dir, c.policy).to_operator(v).matrix(),
                                     das_sa_lattice(a, v, dir, c.policy).matrix());
                    require(r, da <= kTolLattice, da, "sa@" + key);
                }
            }
        }
    }
    return r;
}

// --- criterion: order sandwich, spectrum containment, minimality ----------

CheckResult order_sandwich(const Ctx& c) {
    CheckResult r{"order-sandwich", true, 0.0, ""};
    Rng rng(c.seed + 1);
    const std::map<int, int> rounds{{2, 40}, {3, 40}, {4, 30}};
    for (const auto& [dim, n] : rounds) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        for (int t = 0; t < n; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const std::vector<double> spectrum = spectrum_of(spectral_family(a, c.policy));
            for (const auto& key : uni->keys()) {
                const Context& v = uni->at(key);
                const HermitianOperator lo =
                    das_sa(a, v, Direction::inner, c.policy).to_operator(v);
                const HermitianOperator hi =
                    das_sa(a, v, Direction::outer, c.policy).to_operator(v);
                require(r, spectral_leq(lo, a, c.policy), 0.0, "inner !<= A@" + key);
                require(r, spectral_leq(a, hi, c.policy), 0.0, "A !<= outer@" + key);
                for (Direction dir : {Direction::inner, Direction::outer}) {
                    for (double x : das_sa(a, v, dir, c.policy).coefficients) {
                        double best = 1e300;
                        for (double s : spectrum) {
                            best = std::min(best, std::abs(x - s));
                        }
                        require(r, best <= kTolSpectrum, best, "coeff !in sp(A)@" + key);
                    }
                }
            }
        }
    }
    // Exhaustive spectral-order minimality/maximality on the small fixtures.
    for (int dim : {2, 3}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        const int n = dim == 2 ? 8 : 4;
        for (int t = 0; t < n; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            for (const auto& key : uni->keys()) {
                const Context& v = uni->at(key);
                for (Direction dir : {Direction::outer, Direction::inner}) {
                    const auto extreme = spectral_extreme_oracle(a, v, dir, c.policy);
                    require(r, extreme.has_value(), 0.0, "no extreme@" + key);
                    if (extreme) {
                        const double d = max_abs_diff(
                            extreme->matrix(),
                            das_sa(a, v, dir, c.policy).to_operator(v).matrix());
                        require(r, d <= kTolLattice, d, "extreme!=das@" + key);
                    }
                }
            }
        }
    }
    return r;
}

// --- criterion: naturality of the quantity arrows --------------------------

CheckResult arrow_naturality(const Ctx& c) {
    CheckResult r{"arrow-naturality", true, 0.0, ""};
    Rng rng(c.seed + 2);
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        std::vector<double> ladder(dim);
        for (int i = 0; i < dim; ++i) {
            ladder[i] = i + 1.0;
        }
        const std::vector<HermitianOperator> as{
            HermitianOperator(fixtures::diag(ladder), c.policy),
            HermitianOperator(rng.hermitian(dim), c.policy)};
        for (const auto& a : as) {
            for (ArrowMode mode : {ArrowMode::outer, ArrowMode::inner, ArrowMode::pair}) {
                const QuantityArrow arrow = quantity_arrow(a, uni, mode, c.policy);
                try {
                    arrow.table.validate();
                } catch (const Error& e) {
                    fail(r, std::string("invalid arrow table: ") + e.what());
                    continue;
                }
                const NaturalityReport rep = check_natural(arrow.table);
                require(r, rep.ok(), static_cast<double>(rep.violations.size()),
                        "violations dim=" + std::to_string(dim));
            }
        }
    }

    // Negative control: mis-wire exactly one component of the qutrit outer
    // arrow at the two-block context {e3 | e1+e2}; its rank-1 block has a
    // single preimage character upstairs, so exactly one square must break.
    const auto uni3 = fixtures::qutrit_universe(c.policy);
    QuantityArrow arrow =
        quantity_arrow(HermitianOperator(fixtures::diag({1, 2, 3}), c.policy), uni3,
                       ArrowMode::outer, c.policy);
    const Matrix e3 = fixtures::diag({0, 0, 1});
    std::string w_key;
    int w_char = -1;
    for (const auto& key : uni3->keys()) {
        const Context& v = uni3->at(key);
        if (v.block_count() != 2) continue;
        for (int j = 0; j < v.block_count(); ++j) {
            if (approx_equal(v.block(j).matrix(), e3, 1e-9)) {
                w_key = key;
                w_char = j;
            }
        }
    }
    require(r, w_char >= 0, 0.0, "missing {e3|e12} context");
    if (w_char >= 0) {
        auto& comp = arrow.table.components.at(w_key);
        comp.at(std::to_string(w_char)) = comp.at(std::to_string(1 - w_char));
        const NaturalityReport rep = check_natural(arrow.table);
        require(r, rep.violations.size() == 1,
                static_cast<double>(rep.violations.size()), "negative control");
    }
    return r;
}

// --- criterion: scaling / complement / family exchange / non-linearity ----

CheckResult algebraic_identities(const Ctx& c) {
    CheckResult r{"algebraic-identities", true, 0.0, ""};
    Rng rng(c.seed + 3);
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        for (int t = 0; t < 5; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const Projection p = rng.projection(dim, c.policy);
            const Projection comp(Matrix::Identity(dim, dim) - p.matrix(), c.policy);
            const SpectralFamily family = spectral_family(a, c.policy);
            for (const auto& key : uni->keys()) {
                const Context& v = uni->at(key);
                for (double s : {-2.0, -1.0, 0.5, 3.0}) {
                    const HermitianOperator sa(s * a.matrix(), c.policy);
                    const Direction flip =
                        s > 0 ? Direction::outer : Direction::inner;
                    const double d1 = max_abs_diff(
                        das_sa(sa, v, Direction::outer, c.policy).to_operator(v).matrix(),
                        Matrix(s * das_sa(a, v, flip, c.policy).to_operator(v).matrix()));
                    require(r, d1 <= kTolScaling, d1, "scale outer@" + key);
                    const Direction flop =
                        s > 0 ? Direction::inner : Direction::outer;
                    const double d2 = max_abs_diff(
                        das_sa(sa, v, Direction::inner, c.policy).to_operator(v).matrix(),
                        Matrix(s * das_sa(a, v, flop, c.policy).to_operator(v).matrix()));
                    require(r, d2 <= kTolScaling, d2, "scale inner@" + key);
                }

                const double dc = max_abs_diff(
                    das_proj(comp, v, Direction::outer, c.policy).matrix(),
                    Matrix(Matrix::Identity(dim, dim) -
                           das_proj(p, v, Direction::inner, c.policy).matrix()));
                require(r, dc <= kTolScaling, dc, "complement@" + key);

                // Family exchange: the spectral family of the outer operator
                // is the inner daseinisation of A's family. Evaluated a hair
                // right of each threshold to stay clear of fp jump edges.
                const SpectralFamily das_family = spectral_family(
                    das_sa(a, v, Direction::outer, c.policy).to_operator(v), c.policy);
                for (const auto& jump : family.jumps()) {
                    const double de = max_abs_diff(
                        das_proj(jump.cumulative, v, Direction::inner, c.policy).matrix(),
                        das_family.value_at(jump.threshold + 1e-7).matrix());
                    require(r, de <= kTolExchange, de, "exchange@" + key);
                }
            }
        }
    }

    // Non-linearity witness: on the sigma_z eigencontext the outer
    // daseinisation of sigma_z + sigma_x is sqrt(2)*identity, far from
    // das(sigma_z) + das(sigma_x) = diag(2, 0).
    const Context vz = context_from_operators(
        {HermitianOperator(fixtures::sigma_z(), c.policy)}, c.policy);
    const HermitianOperator az(fixtures::sigma_z(), c.policy);
    const HermitianOperator ax(fixtures::sigma_x(), c.policy);
    const HermitianOperator sum(fixtures::sigma_z() + fixtures::sigma_x(), c.policy);
    const double gap = max_abs_diff(
        das_sa(sum, vz, Direction::outer, c.policy).to_operator(vz).matrix(),
        Matrix(das_sa(az, vz, Direction::outer, c.policy).to_operator(vz).matrix() +
               das_sa(ax, vz, Direction::outer, c.policy).to_operator(vz).matrix()));
    require(r, gap > 0.1, gap, "non-linearity witness missing");
    return r;
}

// --- criterion: observable/antonymous functions on character filters ------

CheckResult filter_functions(const Ctx& c) {
    CheckResult r{"filter-functions", true, 0.0, ""};
    Rng rng(c.seed + 4);
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        for (int t = 0; t < 5; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            for (const auto& key : uni->keys()) {
                const Context& v = uni->at(key);
                const auto outer = das_sa(a, v, Direction::outer, c.policy).coefficients;
                const auto inner = das_sa(a, v, Direction::inner, c.policy).coefficients;
                for (int i = 0; i < v.block_count(); ++i) {
                    const PrincipalFilter filt = cone(character_ultrafilter(v, i), c.policy);
                    const double dg =
                        max_abs_diff(filt.generator.matrix(), v.block(i).matrix());
                    require(r, dg <= kTolFilter, dg, "cone generator@" + key);
                    const double df =
                        std::abs(observable_fn(a, filt, c.policy) - outer.at(i));
                    const double dgf =
                        std::abs(antonymous_fn(a, filt, c.policy) - inner.at(i));
                    require(r, df <= kTolFilter, df, "observable@" + key);
                    require(r, dgf <= kTolFilter, dgf, "antonymous@" + key);
                }
            }
        }
    }
    return r;
}

// --- criterion: antonymous <= expectation <= observable --------------------

CheckResult state_sandwich(const Ctx& c) {
    CheckResult r{"state-sandwich", true, 0.0, ""};
    Rng rng(c.seed + 5);
    const std::map<int, int> rounds{{2, 334}, {3, 333}, {4, 333}};
    for (const auto& [dim, n] : rounds) {
        for (int t = 0; t < n; ++t) {
            const Matrix m = rng.hermitian(dim);
            const HermitianOperator a(m, c.policy);
            const double scale = std::max(1.0, m.norm());
            const bool force_eig = t % 10 < 3;
            const StateVector psi =
                force_eig ? eigenvector_state(m, rng, c.policy) : rng.state(dim, c.policy);
            const SandwichResult s = sandwich(a, psi, c.policy);
            require(r, s.antonymous <= s.expectation + kTolSandwich * scale,
                    s.antonymous - s.expectation, "g > <A>");
            require(r, s.expectation <= s.observable + kTolSandwich * scale,
                    s.expectation - s.observable, "<A> > f");
            const double width = s.observable - s.antonymous;
            if (force_eig) {
                require(r, width <= kTolSandwich * scale, width, "eigenstate not tight");
            } else if (width <= kTolSandwich * scale) {
                // Tightness forces the support onto a width-sized spectral
                // window, so the eigen-residual is bounded by the width.
                const double resid =
                    (m * psi.amplitudes() - s.expectation * psi.amplitudes()).norm();
                require(r, resid <= 1e-7 * scale, resid, "tight but not eigenstate");
            }
        }
    }
    return r;
}

// --- criterion: k-construction ---------------------------------------------

CheckResult k_completion(const Ctx& c) {
    CheckResult r{"k-completion", true, 0.0, ""};
    Rng rng(c.seed + 6);
    // Dyadic-valued fixtures make every +/-/abs/max exact, so the group laws
    // are compared bitwise via k_equal.
    for (const auto& uni : {fixtures::qutrit_universe(c.policy),
                            fixtures::dim4_universe(c.policy)}) {
        const std::string root = uni->maximal_keys().front();
        const KValue zero = k_zero(root, *uni);
        for (int t = 0; t < 30; ++t) {
            const KValue a = k_class(rng.order_reversing_on(*uni, root),
                                     rng.order_reversing_on(*uni, root));
            const KValue b = k_class(rng.order_reversing_on(*uni, root),
                                     rng.order_reversing_on(*uni, root));
            const KValue d = k_class(rng.order_reversing_on(*uni, root),
                                     rng.order_reversing_on(*uni, root));
            require(r, k_equal(k_add(a, k_add(b, d)), k_add(k_add(a, b), d)), 0.0,
                    "associativity");
            require(r, k_equal(k_add(a, b), k_add(b, a)), 0.0, "commutativity");
            require(r, k_equal(k_add(a, zero), a), 0.0, "identity");
            require(r, k_equal(k_add(a, k_neg(a)), zero), 0.0, "inverse");
        }
        for (int t = 0; t < 50; ++t) {
            const PoFunction lam = rng.order_reversing_on(*uni, root);
            const PoFunction mu = rng.order_reversing_on(*uni, root);
            require(r, k_equal(k_theta(lam), k_theta(mu)) == (lam.values == mu.values), 0.0,
                    "theta injectivity");
            require(r, k_equal(k_theta(po_add(lam, mu)), k_add(k_theta(lam), k_theta(mu))),
                    0.0, "theta morphism");
        }
        for (int t = 0; t < 250; ++t) {
            const auto f = rng.function_on(*uni, root);
            const BvDecomposition d = bv_decompose(f, root, *uni);
            require(r, po_valid(d.g, *uni), 0.0, "g not order-reversing");
            require(r, po_valid(d.h, *uni), 0.0, "h not order-reversing");
            for (const auto& [key, x] : f) {
                require(r, d.g.values.at(key) - d.h.values.at(key) == x, 0.0,
                        "g-h != f@" + key);
                require(r, d.total_variation.at(key) == chain_variation(f, key, *uni), 0.0,
                        "DP != chain@" + key);
            }
        }
        for (int t = 0; t < 100; ++t) {
            const PoFunction lam = rng.order_reversing_on(*uni, root);
            const KValue sq = k_square_embedded(k_theta(lam), *uni);
            for (const auto& [key, x] : lam.values) {
                require(r, sq.bv.at(key) == x * x, 0.0, "square@" + key);
            }
        }
    }
    return r;
}

// --- criterion: pair-presheaf quotient isomorphism -------------------------

CheckResult quotient_iso(const Ctx& c) {
    CheckResult r{"quotient-iso", true, 0.0, ""};
    // Exhaustive over every stage of the dim-2/3 fixtures on the value grid
    // {0, 1/2, 1}; the dim-4 grid is combinatorially out of desk range.
    const std::vector<double> grid{0.0, 0.5, 1.0};
    for (const auto& uni : {fixtures::qubit_universe(c.policy),
                            fixtures::qutrit_universe(c.policy)}) {
        for (const auto& stage : uni->keys()) {
            const std::vector<std::string> dom = uni->down_set(stage);

            const auto enumerate = [&](Monotonicity m) {
                std::vector<std::map<std::string, double>> out;
                std::map<std::string, double> acc;
                std::function<void(std::size_t)> go = [&](std::size_t i) {
                    if (i == dom.size()) {
                        out.push_back(acc);
                        return;
                    }
                    for (double x : grid) {
                        bool ok = true;
                        for (const auto& [other, y] : acc) {
                            const bool below = uni->leq(dom[i], other);
                            const bool above = uni->leq(other, dom[i]);
                            if (!below && !above) continue;
                            const double lo = below ? x : y;
                            const double hi = below ? y : x;
                            // below <= above for preserving, flipped otherwise
                            if (m == Monotonicity::order_preserving ? lo > hi : lo < hi) {
                                ok = false;
                                break;
                            }
                        }
                        if (!ok) continue;
                        acc[dom[i]] = x;
                        go(i + 1);
                        acc.erase(dom[i]);
                    }
                };
                go(0);
                return out;
            };

            const auto incs = enumerate(Monotonicity::order_preserving);
            const auto decs = enumerate(Monotonicity::order_reversing);

            std::vector<PairFunction> pairs;
            std::vector<KValue> images;
            std::map<std::string, std::vector<std::size_t>> buckets;
            for (const auto& mu : incs) {
                for (const auto& nu : decs) {
                    bool dominated = true;
                    for (const auto& [key, x] : mu) {
                        if (x > nu.at(key)) {
                            dominated = false;
                            break;
                        }
                    }
                    if (!dominated) continue;
                    PairFunction p;
                    p.inner = PoFunction{stage, Monotonicity::order_preserving, mu};
                    p.outer = PoFunction{stage, Monotonicity::order_reversing, nu};
                    images.push_back(pair_quotient_iso(p));
                    buckets[hex_map(images.back().bv)].push_back(pairs.size());
                    pairs.push_back(std::move(p));
                }
            }

            std::vector<std::size_t> reps;
            for (const auto& [sig, members] : buckets) {
                reps.push_back(members.front());
                for (std::size_t j = 1; j < members.size(); ++j) {
                    require(r, pair_equiv(pairs[members.front()], pairs[members[j]]), 0.0,
                            "same image, not equivalent@" + stage);
                }
            }
            for (std::size_t i = 0; i < reps.size(); ++i) {
                for (std::size_t j = i + 1; j < reps.size(); ++j) {
                    require(r, !pair_equiv(pairs[reps[i]], pairs[reps[j]]), 0.0,
                            "distinct images, equivalent@" + stage);
                    require(r, !k_equal(images[reps[i]], images[reps[j]]), 0.0,
                            "bucket collision@" + stage);
                }
            }
        }
    }
    return r;
}

// --- criterion: unitary covariance -----------------------------------------

CheckResult unitary_covariance(const Ctx& c) {
    CheckResult r{"unitary-covariance", true, 0.0, ""};
    Rng rng(c.seed + 7);
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        for (int t = 0; t < 50; ++t) {
            const UnitaryOperator u = rng.unitary(dim, c.policy);
            const Projection p = rng.projection(dim, c.policy);
            const StateVector psi = rng.state(dim, c.policy);
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const CovarianceReport rp = covariance_check(p, u, psi, *uni, c.policy);
            require(r, rp.pass(kTolCovariance), rp.max_deviation,
                    rp.sieves_match ? "projection covariance" : "sieve transport");
            const CovarianceReport ra = covariance_check(a, u, *uni, c.policy);
            require(r, ra.pass(kTolCovariance), ra.max_deviation, "operator covariance");
        }
        for (int t = 0; t < 15; ++t) {
            const UnitaryOperator u1 = rng.unitary(dim, c.policy);
            const UnitaryOperator u2 = rng.unitary(dim, c.policy);
            require(r, twist_composition_check(u1, u2, *uni, c.policy), 0.0,
                    "twist composition");
            const ContextUniverse there = twist_universe(u1, *uni, c.policy);
            const ContextUniverse back = twist_universe(u1.inverse(), there, c.policy);
            require(r, back.keys() == uni->keys(), 0.0, "twist inverse");
        }
        const int iso_rounds = dim == 4 ? 1 : (dim == 3 ? 3 : 5);
        for (int t = 0; t < iso_rounds; ++t) {
            const UnitaryOperator u = rng.unitary(dim, c.policy);
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const TwistedIsoReport rep = twisted_iso_check(a, u, *uni, c.policy);
            require(r, rep.pass(kTolCovariance), rep.square_deviation,
                    rep.character_bijections
                        ? (rep.character_naturality ? "twisted square" : "iota naturality")
                        : "iota bijection");
        }
    }
    return r;
}

// --- criterion: unitary daseinisation --------------------------------------

CheckResult unitary_daseinisation(const Ctx& c) {
    CheckResult r{"unitary-daseinisation", true, 0.0, ""};
    Rng rng(c.seed + 8);
    const std::complex<double> im{0.0, 1.0};
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        UnitaryOperator prev = UnitaryOperator(Matrix::Identity(dim, dim), c.policy);
        for (int t = 0; t < 20; ++t) {
            const Matrix m =
                rng.hermitian_with_spectrum(dim, 0.05, 2 * std::numbers::pi - 0.15);
            const HermitianOperator a(m, c.policy);
            Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
            Vector phases(dim);
            for (int i = 0; i < dim; ++i) {
                phases(i) = std::exp(im * es.eigenvalues()(i));
            }
            const UnitaryOperator u(
                Matrix(es.eigenvectors() * phases.asDiagonal() *
                       es.eigenvectors().adjoint()),
                c.policy);
            for (const auto& key : uni->keys()) {
                const Context& v = uni->at(key);
                for (Direction dir : {Direction::outer, Direction::inner}) {
                    const auto das = das_sa(a, v, dir, c.policy);
                    Matrix rhs = Matrix::Zero(dim, dim);
                    for (int j = 0; j < v.block_count(); ++j) {
                        rhs += std::exp(im * das.coefficients.at(j)) * v.block(j).matrix();
                    }
                    const double d =
                        max_abs_diff(das_unitary(u, v, dir, c.policy).matrix(), rhs);
                    require(r, d <= kTolUnitary, d, "exp exchange@" + key);
                }
                // Stage-wise commutation of daseinised unitaries.
                const Matrix d1 = das_unitary(u, v, Direction::outer, c.policy).matrix();
                const Matrix d2 = das_unitary(prev, v, Direction::outer, c.policy).matrix();
                const double dc = max_abs_diff(d1 * d2, d2 * d1);
                require(r, dc <= kTolUnitary, dc, "stage commutation@" + key);
            }
            prev = u;
        }
    }
    return r;
}

// --- criterion: global elements of the qubit antichain ---------------------

CheckResult global_elements_count(const Ctx& c) {
    CheckResult r{"global-elements", true, 0.0, ""};
    Rng rng(c.seed + 9);
    const auto uni = fixtures::qubit_universe(c.policy);

    const PresheafTable sigma = spectral_presheaf(uni, c.policy);
    const auto sigma_elems = global_elements(sigma);
    require(r, sigma_elems.size() == 4, static_cast<double>(sigma_elems.size()),
            "spectral-presheaf count");

    const PresheafTable outer = outer_presheaf(uni, c.policy);
    const auto outer_elems = global_elements(outer);
    require(r, outer_elems.size() == 16, static_cast<double>(outer_elems.size()),
            "outer-presheaf count");

    // The daseinisation image: global sections V -> mask of delta^o(P)_V,
    // over representatives of every projection class plus random rank-1s.
    std::vector<Projection> ps{Projection::zero(2), Projection::identity(2)};
    for (const auto& key : uni->keys()) {
        for (const auto& q : uni->at(key).blocks()) {
            ps.push_back(q);
        }
    }
    for (int t = 0; t < 20; ++t) {
        ps.push_back(rng.projection(2, c.policy));
    }
    std::set<std::map<std::string, std::string>> image;
    for (const auto& p : ps) {
        std::map<std::string, std::string> elem;
        for (const auto& key : uni->keys()) {
            const Context& v = uni->at(key);
            unsigned mask = 0;
            for (int j = 0; j < v.block_count(); ++j) {
                if (overlap_norm(v.block(j).matrix(), p.matrix()) >
                    c.policy.zero_overlap_tol) {
                    mask |= 1u << j;
                }
            }
            elem.emplace(key, std::to_string(mask));
        }
        image.insert(std::move(elem));
    }
    require(r, image.size() == 6, static_cast<double>(image.size()), "image count");

    const std::set<std::map<std::string, std::string>> all(outer_elems.begin(),
                                                           outer_elems.end());
    for (const auto& elem : image) {
        require(r, all.count(elem) > 0, 0.0, "image not a global element");
    }
    require(r, all.size() > image.size(), 0.0, "containment not strict");
    return r;
}

// --- criterion: separating contexts ----------------------------------------

CheckResult separating_context_search(const Ctx& c) {
    CheckResult r{"separating-context", true, 0.0, ""};
    Rng rng(c.seed + 10);
    for (int t = 0; t < 200; ++t) {
        const int dim = 2 + t % 3;
        const Matrix m = rng.hermitian(dim);
        const bool force_equal = t % 4 == 3;  // 50 of 200
        Matrix m2;
        if (force_equal) {
            // Half byte-equal, half below the comparison tolerance.
            m2 = t % 8 == 7 ? Matrix(m + 1e-12 * rng.hermitian(dim)) : m;
        } else {
            m2 = rng.hermitian(dim);
        }
        const HermitianOperator a(m, c.policy);
        const HermitianOperator b(m2, c.policy);
        const auto found = separating_context(a, b, c.policy);
        if (force_equal) {
            require(r, !found.has_value(), 0.0, "context for equal pair");
        } else {
            require(r, found.has_value(), 0.0, "no context for distinct pair");
            if (found) {
                const auto ca = das_sa(a, *found, Direction::outer, c.policy).coefficients;
                const auto cb = das_sa(b, *found, Direction::outer, c.policy).coefficients;
                double gap = 0.0;
                for (std::size_t i = 0; i < ca.size(); ++i) {
                    gap = std::max(gap, std::abs(ca[i] - cb[i]));
                }
                require(r, gap > 1e-10, gap, "context does not separate");
            }
        }
    }
    return r;
}

// --- module invariants ------------------------------------------------------

CheckResult spectral_roundtrip(const Ctx& c) {
    CheckResult r{"spectral-roundtrip", true, 0.0, ""};
    Rng rng(c.seed + 11);
    for (int dim : {2, 3, 4}) {
        for (int t = 0; t < 20; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const SpectralFamily fa = spectral_family(a, c.policy);
            const double d0 =
                max_abs_diff(operator_from_family(fa, c.policy).matrix(), a.matrix());
            require(r, d0 <= 1e-10, d0, "roundtrip");

            const auto& jumps = fa.jumps();
            for (std::size_t i = 0; i < jumps.size(); ++i) {
                const double at = max_abs_diff(fa.value_at(jumps[i].threshold).matrix(),
                                               jumps[i].cumulative.matrix());
                require(r, at <= 1e-12, at, "value at threshold");
                if (i > 0) {
                    const double mid = (jumps[i - 1].threshold + jumps[i].threshold) / 2;
                    const double dm = max_abs_diff(fa.value_at(mid).matrix(),
                                                   jumps[i - 1].cumulative.matrix());
                    require(r, dm <= 1e-12, dm, "step between thresholds");
                }
            }
            require(r, fa.value_at(jumps.front().threshold - 1.0).rank() == 0, 0.0,
                    "left tail not zero");

            const HermitianOperator b(rng.hermitian(dim), c.policy);
            const SpectralFamily fb = spectral_family(b, c.policy);
            const SpectralFamily meet = spectral_meet_family(fa, fb, c.policy);
            const SpectralFamily join = spectral_join_family(fa, fb, c.policy);
            require(r, spectral_leq(meet, fa, c.policy) && spectral_leq(meet, fb, c.policy),
                    0.0, "meet not below");
            require(r, spectral_leq(fa, join, c.policy) && spectral_leq(fb, join, c.policy),
                    0.0, "join not above");
        }
    }
    return r;
}

CheckResult context_partition_laws(const Ctx& c) {
    CheckResult r{"context-partition-laws", true, 0.0, ""};
    const Context v3 = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 2, 3}), c.policy)}, c.policy);
    require(r, subcontexts(v3, false, c.policy).size() == 4, 0.0, "dim3 coarsenings");
    require(r, subcontexts(v3, true, c.policy).size() == 5, 0.0, "dim3 with trivial");
    const Context v4 = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 2, 3, 4}), c.policy)}, c.policy);
    require(r, subcontexts(v4, false, c.policy).size() == 14, 0.0, "dim4 coarsenings");
    require(r, subcontexts(v4, true, c.policy).size() == 15, 0.0, "dim4 with trivial");

    // Joint refinement of two commuting coarse operators.
    const Context joint = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 1, 2}), c.policy),
         HermitianOperator(fixtures::diag({2, 1, 1}), c.policy)},
        c.policy);
    require(r, joint.block_count() == 3, static_cast<double>(joint.block_count()),
            "joint refinement");

    bool threw = false;
    try {
        context_from_operators({HermitianOperator(fixtures::sigma_z(), c.policy),
                                HermitianOperator(fixtures::sigma_x(), c.policy)},
                               c.policy);
    } catch (const NotCommuting&) {
        threw = true;
    }
    require(r, threw, 0.0, "non-commuting seeds accepted");

    // Canonical key is permutation-invariant.
    std::vector<Projection> reversed(v3.blocks().rbegin(), v3.blocks().rend());
    require(r, Context(reversed, c.policy).key() == v3.key(), 0.0, "key stability");

    // Order laws and two-step character restriction on the dim-4 poset.
    const auto uni = fixtures::dim4_universe(c.policy);
    const auto& keys = uni->keys();
    for (const auto& a : keys) {
        require(r, uni->leq(a, a), 0.0, "leq not reflexive");
        for (const auto& b : keys) {
            if (uni->leq(a, b) && uni->leq(b, a)) {
                require(r, a == b, 0.0, "leq not antisymmetric");
            }
            for (const auto& d : keys) {
                if (uni->leq(a, b) && uni->leq(b, d)) {
                    require(r, uni->leq(a, d), 0.0, "leq not transitive");
                }
            }
        }
    }
    for (const auto& pk : keys) {
        for (const auto& mk : keys) {
            if (mk == pk || !uni->leq(mk, pk)) continue;
            for (const auto& ck : keys) {
                if (ck == mk || !uni->leq(ck, mk)) continue;
                const Context& vp = uni->at(pk);
                const Context& vm = uni->at(mk);
                const Context& vc = uni->at(ck);
                for (int i = 0; i < vp.block_count(); ++i) {
                    const int direct = restrict_character(vp, i, vc, c.policy);
                    const int stepped = restrict_character(
                        vm, restrict_character(vp, i, vm, c.policy), vc, c.policy);
                    require(r, direct == stepped, 0.0, "restriction composition");
                }
            }
        }
    }
    return r;
}

CheckResult presheaf_functoriality(const Ctx& c) {
    CheckResult r{"presheaf-functoriality", true, 0.0, ""};
    const std::map<std::string, std::size_t> expected_sigma{
        {"qubit", 4}, {"qutrit", 3}, {"dim4", 4}};
    for (const auto& [label, count] : expected_sigma) {
        const auto uni = label == "qubit"   ? fixtures::qubit_universe(c.policy)
                         : label == "qutrit" ? fixtures::qutrit_universe(c.policy)
                                             : fixtures::dim4_universe(c.policy);
        require(r, uni->is_down_closed(c.policy), 0.0, label + " not down-closed");

        const PresheafTable sigma = spectral_presheaf(uni, c.policy);
        try {
            sigma.validate();
            outer_presheaf(uni, c.policy).validate();
            inner_presheaf(uni, c.policy).validate();
        } catch (const Error& e) {
            fail(r, label + ": " + e.what());
        }

        // Global elements re-verified against raw restrictions, and counted:
        // every element is fixed by its choice at the maximal context.
        const auto elems = global_elements(sigma);
        require(r, elems.size() == count, static_cast<double>(elems.size()),
                label + " global-element count");
        for (const auto& ge : elems) {
            for (const auto& parent : uni->keys()) {
                for (const auto& child : uni->keys()) {
                    if (child == parent || !uni->leq(child, parent)) continue;
                    require(r,
                            sigma.restrict_element(parent, child, ge.at(parent)) ==
                                ge.at(child),
                            0.0, label + " incompatible global element");
                }
            }
        }
    }

    // Pullback of a threshold subobject along the outer arrow: the preimage
    // at each stage must be exactly the characters whose outer coefficient
    // clears the threshold.
    const auto uni3 = fixtures::qutrit_universe(c.policy);
    const HermitianOperator a(fixtures::diag({1, 2, 3}), c.policy);
    const QuantityArrow arrow = quantity_arrow(a, uni3, ArrowMode::outer, c.policy);
    const double tau = 2.5;
    SubObjectTable xi;
    xi.presheaf = arrow.table.codomain;
    for (const auto& [stage, elems] : arrow.table.codomain->stages) {
        std::set<std::string> keep;
        for (const auto& elem : elems) {
            if (arrow.po_payloads.at(stage).at(elem).values.at(stage) >= tau) {
                keep.insert(elem);
            }
        }
        xi.stage_sets.emplace(stage, std::move(keep));
    }
    try {
        xi.validate();
        const SubObjectTable pulled = pullback_subobject(arrow.table, xi);
        pulled.validate();
        for (const auto& key : uni3->keys()) {
            const Context& v = uni3->at(key);
            const auto coeffs = das_sa(a, v, Direction::outer, c.policy).coefficients;
            std::set<std::string> direct;
            for (int i = 0; i < v.block_count(); ++i) {
                if (coeffs.at(i) >= tau) {
                    direct.insert(std::to_string(i));
                }
            }
            require(r, pulled.stage_sets.at(key) == direct, 0.0, "pullback mismatch@" + key);
        }
    } catch (const Error& e) {
        fail(r, std::string("pullback: ") + e.what());
    }
    return r;
}

CheckResult groote_monotonicity(const Ctx& c) {
    CheckResult r{"groote-monotonicity", true, 0.0, ""};
    Rng rng(c.seed + 12);
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        for (int t = 0; t < 8; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const auto touter = groote_table(a, *uni, Direction::outer, c.policy);
            const auto tinner = groote_table(a, *uni, Direction::inner, c.policy);
            for (const auto& key : uni->keys()) {
                require(r,
                        touter.at(key).coefficients ==
                            das_sa(a, uni->at(key), Direction::outer, c.policy).coefficients,
                        0.0, "table != das@" + key);
            }
            for (const auto& child : uni->keys()) {
                for (const auto& parent : uni->keys()) {
                    if (child == parent || !uni->leq(child, parent)) continue;
                    const HermitianOperator oc =
                        touter.at(child).to_operator(uni->at(child));
                    const HermitianOperator op =
                        touter.at(parent).to_operator(uni->at(parent));
                    require(r, spectral_leq(op, oc, c.policy), 0.0,
                            "outer not antitone@" + child);
                    const HermitianOperator ic =
                        tinner.at(child).to_operator(uni->at(child));
                    const HermitianOperator ip =
                        tinner.at(parent).to_operator(uni->at(parent));
                    require(r, spectral_leq(ic, ip, c.policy), 0.0,
                            "inner not monotone@" + child);
                }
            }
        }
    }
    return r;
}

CheckResult quantity_monoid(const Ctx& c) {
    CheckResult r{"quantity-monoid", true, 0.0, ""};
    Rng rng(c.seed + 13);
    for (const auto& uni : {fixtures::qutrit_universe(c.policy),
                            fixtures::dim4_universe(c.policy)}) {
        const std::string root = uni->maximal_keys().front();
        for (int t = 0; t < 40; ++t) {
            const PoFunction f = rng.order_reversing_on(*uni, root);
            const PoFunction g = rng.order_reversing_on(*uni, root);
            const PoFunction h = rng.order_reversing_on(*uni, root);
            const PoFunction s = po_add(f, g);
            require(r, po_valid(s, *uni), 0.0, "sum not order-reversing");
            require(r, po_add(f, g).values == po_add(g, f).values, 0.0, "sum commutes");
            require(r,
                    po_add(f, po_add(g, h)).values == po_add(po_add(f, g), h).values, 0.0,
                    "sum associates");
            // Restriction is a monoid morphism stage-wise.
            for (const auto& w : uni->down_set(root)) {
                if (w == root) continue;
                require(r,
                        po_restrict(s, w, *uni).values ==
                            po_add(po_restrict(f, w, *uni), po_restrict(g, w, *uni)).values,
                        0.0, "restriction not additive@" + w);
            }
        }
        // Products escape the order-reversing cone: (-2, -1, ...) squares to
        // (4, 1, ...), which increases upward.
        PoFunction neg;
        neg.root = root;
        neg.direction = Monotonicity::order_reversing;
        for (const auto& key : uni->down_set(root)) {
            neg.values.emplace(key, key == root ? -2.0 : -1.0);
        }
        require(r, po_valid(neg, *uni), 0.0, "witness input invalid");
        require(r, !po_valid(po_mul(neg, neg), *uni), 0.0, "product closure witness");
    }

    // Arrow sums stay natural but differ from the arrow of the sum.
    const auto uq = fixtures::qubit_universe(c.policy);
    const HermitianOperator az(fixtures::sigma_z(), c.policy);
    const HermitianOperator ax(fixtures::sigma_x(), c.policy);
    const HermitianOperator sum_op(fixtures::sigma_z() + fixtures::sigma_x(), c.policy);
    const QuantityArrow arrow_sum =
        arrow_add(quantity_arrow(az, uq, ArrowMode::outer, c.policy),
                  quantity_arrow(ax, uq, ArrowMode::outer, c.policy));
    require(r, check_natural(arrow_sum.table).ok(), 0.0, "sum arrow not natural");
    const QuantityArrow arrow_of_sum = quantity_arrow(sum_op, uq, ArrowMode::outer, c.policy);
    double witness = 0.0;
    for (const auto& key : uq->keys()) {
        for (int i = 0; i < uq->at(key).block_count(); ++i) {
            witness = std::max(witness,
                               std::abs(arrow_sum.po_at(key, i).values.at(key) -
                                        arrow_of_sum.po_at(key, i).values.at(key)));
        }
    }
    require(r, witness > 0.1, witness, "non-additivity witness missing");
    return r;
}

CheckResult truth_sieves(const Ctx& c) {
    CheckResult r{"truth-sieves", true, 0.0, ""};
    Rng rng(c.seed + 14);
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        const std::string root = uni->maximal_keys().front();
        for (int t = 0; t < 20; ++t) {
            const Projection p = rng.projection(dim, c.policy);
            const StateVector psi = rng.state(dim, c.policy);
            const Sieve s = truth_value(p, psi, root, *uni, c.policy);
            require(r, truth_sieve_check(s, *uni), 0.0, "invalid sieve");

            const Projection q = proj_join(p, rng.projection(dim, c.policy), c.policy);
            const Sieve sq = truth_value(q, psi, root, *uni, c.policy);
            require(r,
                    std::includes(sq.members.begin(), sq.members.end(), s.members.begin(),
                                  s.members.end()),
                    0.0, "not monotone in the proposition");

            // A state inside range(P) is certain everywhere below root.
            const Vector raw = p.matrix() * psi.amplitudes();
            if (raw.norm() > 0.1) {
                const StateVector inside(raw / raw.norm(), c.policy);
                const Sieve sf = truth_value(p, inside, root, *uni, c.policy);
                const auto down = uni->down_set(root);
                require(r,
                        sf.members == std::set<std::string>(down.begin(), down.end()), 0.0,
                        "supported state not certain");
            }
        }
        // The truth object is a restriction-stable subobject of the outer
        // projection presheaf.
        const StateVector psi = rng.state(dim, c.policy);
        const TruthObjectTable tot = truth_object(psi, *uni, c.policy);
        SubObjectTable sub;
        sub.presheaf = std::make_shared<const PresheafTable>(outer_presheaf(uni, c.policy));
        for (const auto& [key, masks] : tot.masks) {
            std::set<std::string> set;
            for (unsigned m : masks) {
                set.insert(std::to_string(m));
            }
            sub.stage_sets.emplace(key, std::move(set));
        }
        try {
            sub.validate();
        } catch (const Error& e) {
            fail(r, std::string("truth object unstable: ") + e.what());
        }
    }
    return r;
}

CheckResult dispersion_nonnegative(const Ctx& c) {
    CheckResult r{"dispersion-nonnegative", true, 0.0, ""};
    Rng rng(c.seed + 15);
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        for (int t = 0; t < 8; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const DispersionArrow disp = dispersion(a, uni, c.policy);
            for (const auto& [stage, by_char] : disp.payloads) {
                for (const auto& [ch, kv] : by_char) {
                    for (const auto& [key, x] : kv.bv) {
                        require(r, x >= -1e-12, -x, "negative dispersion@" + stage);
                    }
                }
            }
        }
        // Projections and scalars are dispersion-free.
        for (const Matrix& m :
             {Matrix(rng.projection(dim, c.policy).matrix()),
              Matrix(0.75 * Matrix::Identity(dim, dim))}) {
            const DispersionArrow disp =
                dispersion(HermitianOperator(m, c.policy), uni, c.policy);
            for (const auto& [stage, by_char] : disp.payloads) {
                for (const auto& [ch, kv] : by_char) {
                    for (const auto& [key, x] : kv.bv) {
                        require(r, std::abs(x) <= 1e-10, std::abs(x),
                                "dispersion on sharp operator@" + stage);
                    }
                }
            }
        }
    }
    return r;
}

CheckResult spread_nesting(const Ctx& c) {
    CheckResult r{"spread-nesting", true, 0.0, ""};
    Rng rng(c.seed + 16);
    for (int dim : {2, 3, 4}) {
        const auto uni = fixtures::universe_for_dim(dim, c.policy);
        const std::string top = uni->maximal_keys().front();
        const Context& v = uni->at(top);
        for (int t = 0; t < 3; ++t) {
            const HermitianOperator a(rng.hermitian(dim), c.policy);
            const auto inner = das_sa(a, v, Direction::inner, c.policy).coefficients;
            const auto outer = das_sa(a, v, Direction::outer, c.policy).coefficients;
            for (int i = 0; i < v.block_count(); ++i) {
                const auto self = spread(a, *uni, top, i, top, c.policy);
                require(r, self.first == inner.at(i) && self.second == outer.at(i), 0.0,
                        "self spread != coefficients");
                for (const auto& sub : uni->down_set(top)) {
                    const auto s1 = spread(a, *uni, top, i, sub, c.policy);
                    require(r, s1.first <= s1.second + 1e-12, s1.first - s1.second,
                            "inverted interval@" + sub);
                    for (const auto& sub2 : uni->down_set(sub)) {
                        if (sub2 == sub) continue;
                        const auto s2 = spread(a, *uni, top, i, sub2, c.policy);
                        require(r, s2.first <= s1.first + 1e-10 &&
                                       s1.second <= s2.second + 1e-10,
                                std::max(s2.first - s1.first, s1.second - s2.second),
                                "intervals not nested@" + sub2);
                    }
                }
            }
        }
    }
    return r;
}

CheckResult report_determinism(const Ctx& c) {
    CheckResult r{"report-determinism", true, 0.0, ""};
    const std::vector<std::string> sub{"spectral-roundtrip", "truth-sieves"};
    const auto once = report_to_json(c.seed, run_checks(sub, c.seed, c.policy)).dump(2);
    const auto twice = report_to_json(c.seed, run_checks(sub, c.seed, c.policy)).dump(2);
    require(r, once == twice, 0.0, "re-run differs");
    return r;
}

using CheckFn = CheckResult (*)(const Ctx&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
    static const std::vector<std::pair<std::string, CheckFn>> table{
        {"das-lattice-equivalence", das_lattice_equivalence},
        {"order-sandwich", order_sandwich},
        {"arrow-naturality", arrow_naturality},
        {"algebraic-identities", algebraic_identities},
        {"filter-functions", filter_functions},
        {"state-sandwich", state_sandwich},
        {"k-completion", k_completion},
        {"quotient-iso", quotient_iso},
        {"unitary-covariance", unitary_covariance},
        {"unitary-daseinisation", unitary_daseinisation},
        {"global-elements", global_elements_count},
        {"separating-context", separating_context_search},
        {"spectral-roundtrip", spectral_roundtrip},
        {"context-partition-laws", context_partition_laws},
        {"presheaf-functoriality", presheaf_functoriality},
        {"groote-monotonicity", groote_monotonicity},
        {"quantity-monoid", quantity_monoid},
        {"truth-sieves", truth_sieves},
        {"dispersion-nonnegative", dispersion_nonnegative},
        {"spread-nesting", spread_nesting},
        {"report-determinism", report_determinism},
    };
    return table;
}

}  // namespace

std::vector<std::string> all_check_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) {
        names.push_back(name);
    }
    return names;
}

CheckResult run_check(const std::string& name, std::uint64_t seed,
                      const TolerancePolicy& policy) {
    for (const auto& [n, fn] : registry()) {
        if (n == name) {
            return fn(Ctx{seed, policy});
        }
    }
    throw Error("unknown check: " + name);
}

std::vector<CheckResult> run_checks(const std::vector<std::string>& names,
                                    std::uint64_t seed, const TolerancePolicy& policy) {
    std::vector<CheckResult> out;
    out.reserve(names.size());
    for (const auto& name : names) {
        out.push_back(run_check(name, seed, policy));
    }
    return out;
}

std::vector<CheckResult> run_all(std::uint64_t seed, const TolerancePolicy& policy) {
    return run_checks(all_check_names(), seed, policy);
}

}  // namespace toposqt::checks
