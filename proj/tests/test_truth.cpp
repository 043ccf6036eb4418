#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "toposqt/fixtures.hpp"
#include "toposqt/io.hpp"
#include "toposqt/truth.hpp"

using namespace toposqt;

namespace {
const TolerancePolicy kPolicy{};
}

TEST_CASE("state vectors are validated and expose expectations") {
    const StateVector psi(fixtures::basis_state(3, 1), kPolicy);
    CHECK(psi.dim() == 3);
    CHECK(psi.expectation(fixtures::diag({5, 7, 9})) == doctest::Approx(7.0));
    CHECK_THROWS_AS(StateVector(Vector::Zero(3), kPolicy), InvalidOperator);
}

TEST_CASE("sandwich inequality is tight exactly on eigenvectors") {
    const HermitianOperator a(fixtures::diag({3, 1}), kPolicy);

    const SandwichResult at_eig = sandwich(a, StateVector(fixtures::basis_state(2, 0), kPolicy), kPolicy);
    CHECK(at_eig.antonymous == doctest::Approx(3.0));
    CHECK(at_eig.expectation == doctest::Approx(3.0));
    CHECK(at_eig.observable == doctest::Approx(3.0));

    Vector mixed(2);
    mixed << std::sqrt(0.5), std::sqrt(0.5);
    const SandwichResult mid = sandwich(a, StateVector(mixed, kPolicy), kPolicy);
    CHECK(mid.expectation == doctest::Approx(2.0));
    CHECK(mid.antonymous == doctest::Approx(1.0));
    CHECK(mid.observable == doctest::Approx(3.0));
    CHECK(mid.antonymous <= mid.expectation);
    CHECK(mid.expectation <= mid.observable);
}

TEST_CASE("the frozen qutrit truth sieve picks the one certain coarsening") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();

    // Proposition "first axis", state on the second axis: only the context
    // that lumps axes 1 and 2 together is certain about the outer rounding.
    const Projection p(fixtures::diag({1, 0, 0}), kPolicy);
    const StateVector psi(fixtures::basis_state(3, 1), kPolicy);
    const Sieve sieve = truth_value(p, psi, top, *uni, kPolicy);

    const Context lump12 = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 1, 2}), kPolicy)}, kPolicy);
    CHECK(sieve.members == std::set<std::string>{lump12.key()});
    CHECK(truth_sieve_check(sieve, *uni));

    // The state inside range(P) is certain everywhere.
    const Sieve certain =
        truth_value(p, StateVector(fixtures::basis_state(3, 0), kPolicy), top, *uni, kPolicy);
    const auto down = uni->down_set(top);
    CHECK(certain.members == std::set<std::string>(down.begin(), down.end()));
}

TEST_CASE("truth objects are restriction-stable mask families") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    fixtures::Rng rng(31);
    const StateVector psi = rng.state(3, kPolicy);
    const TruthObjectTable t = truth_object(psi, *uni, kPolicy);
    CHECK(t.masks.size() == uni->size());
    for (const auto& [key, masks] : t.masks) {
        const Context& v = uni->at(key);
        const unsigned full = (1u << v.block_count()) - 1;
        // The identity is always expected with certainty.
        CHECK(std::find(masks.begin(), masks.end(), full) != masks.end());
        for (unsigned m : masks) {
            CHECK(psi.expectation(v.subset_projection(m).matrix()) >=
                  1.0 - kPolicy.order_cmp_tol);
        }
    }
}

TEST_CASE("frozen spread intervals on the qutrit ladder") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();
    const Context& vt = uni->at(top);
    const HermitianOperator a(fixtures::diag({1, 2, 3}), kPolicy);

    int e1_char = -1;
    for (int i = 0; i < vt.block_count(); ++i) {
        if (std::abs(vt.block(i).matrix()(0, 0)) > 0.5) e1_char = i;
    }
    REQUIRE(e1_char >= 0);

    const auto self = spread(a, *uni, top, e1_char, top, kPolicy);
    CHECK(self.first == doctest::Approx(1.0));
    CHECK(self.second == doctest::Approx(1.0));

    const Context lump12 = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 1, 2}), kPolicy)}, kPolicy);
    const auto coarse = spread(a, *uni, top, e1_char, lump12.key(), kPolicy);
    CHECK(coarse.first == doctest::Approx(1.0));
    CHECK(coarse.second == doctest::Approx(2.0));

    CHECK_THROWS_AS(spread(a, *uni, lump12.key(), 0, top, kPolicy), NotASubcontext);
}

TEST_CASE("twisting a universe relabels contexts unitarily") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    fixtures::Rng rng(32);
    const UnitaryOperator u = rng.unitary(3, kPolicy);

    const ContextUniverse twisted = twist_universe(u, *uni, kPolicy);
    CHECK(twisted.size() == uni->size());
    CHECK(twisted.hasse_edges().size() == uni->hasse_edges().size());

    const ContextUniverse back = twist_universe(u.inverse(), twisted, kPolicy);
    CHECK(back.keys() == uni->keys());

    // Composition agrees with the product unitary.
    const UnitaryOperator u2 = rng.unitary(3, kPolicy);
    CHECK(twist_composition_check(u, u2, *uni, kPolicy));
}

TEST_CASE("covariance holds for projections, operators and sieves") {
    fixtures::Rng rng(33);
    const auto uni = fixtures::qutrit_universe(kPolicy);
    for (int t = 0; t < 5; ++t) {
        const UnitaryOperator u = rng.unitary(3, kPolicy);
        const Projection p = rng.projection(3, kPolicy);
        const StateVector psi = rng.state(3, kPolicy);
        const HermitianOperator a(rng.hermitian(3), kPolicy);

        const CovarianceReport rp = covariance_check(p, u, psi, *uni, kPolicy);
        CHECK(rp.pass(1e-8));
        CHECK(rp.sieves_match);

        const CovarianceReport ra = covariance_check(a, u, *uni, kPolicy);
        CHECK(ra.pass(1e-8));
    }
}

TEST_CASE("the twisted-square isomorphism commutes on the qubit fixture") {
    fixtures::Rng rng(34);
    const auto uni = fixtures::qubit_universe(kPolicy);
    const UnitaryOperator u = rng.unitary(2, kPolicy);
    const HermitianOperator a(rng.hermitian(2), kPolicy);
    const TwistedIsoReport report = twisted_iso_check(a, u, *uni, kPolicy);
    CHECK(report.character_bijections);
    CHECK(report.character_naturality);
    CHECK(report.pass(1e-8));
}

TEST_CASE("separating contexts witness operator inequality") {
    const HermitianOperator a(fixtures::diag({3, 1}), kPolicy);
    const HermitianOperator same(fixtures::diag({3, 1}), kPolicy);
    CHECK_FALSE(separating_context(a, same, kPolicy).has_value());

    const HermitianOperator b(fixtures::sigma_x(), kPolicy);
    const auto v = separating_context(a, b, kPolicy);
    REQUIRE(v.has_value());
    const auto ca = das_sa(a, *v, Direction::outer, kPolicy).coefficients;
    const auto cb = das_sa(b, *v, Direction::outer, kPolicy).coefficients;
    bool differs = false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (std::abs(ca[i] - cb[i]) > 1e-10) differs = true;
    }
    CHECK(differs);
}
