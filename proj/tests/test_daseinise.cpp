#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "toposqt/daseinise.hpp"
#include "toposqt/fixtures.hpp"
#include "toposqt/oracles.hpp"

using namespace toposqt;

namespace {
const TolerancePolicy kPolicy{};

Context x_context() {
    return context_from_operators({HermitianOperator(fixtures::sigma_x(), kPolicy)}, kPolicy);
}

Context z_context() {
    return context_from_operators({HermitianOperator(fixtures::sigma_z(), kPolicy)}, kPolicy);
}
}  // namespace

TEST_CASE("daseinising diag(3,1) into the incompatible x-context flattens it") {
    const HermitianOperator a(fixtures::diag({3, 1}), kPolicy);
    const Context vx = x_context();
    const auto outer = das_sa(a, vx, Direction::outer, kPolicy);
    const auto inner = das_sa(a, vx, Direction::inner, kPolicy);
    REQUIRE(outer.coefficients.size() == 2);
    CHECK(outer.coefficients[0] == doctest::Approx(3.0));
    CHECK(outer.coefficients[1] == doctest::Approx(3.0));
    CHECK(inner.coefficients[0] == doctest::Approx(1.0));
    CHECK(inner.coefficients[1] == doctest::Approx(1.0));
    CHECK(max_abs_diff(outer.to_operator(vx).matrix(), 3.0 * Matrix::Identity(2, 2)) <
          1e-10);
}

TEST_CASE("daseinisation in the operator's own context is the identity") {
    const HermitianOperator a(fixtures::diag({3, 1}), kPolicy);
    const Context vz = z_context();
    for (Direction dir : {Direction::outer, Direction::inner}) {
        CHECK(max_abs_diff(das_sa(a, vz, dir, kPolicy).to_operator(vz).matrix(),
                           a.matrix()) < 1e-10);
    }
}

TEST_CASE("projection daseinisation: outer rounds up, inner rounds down") {
    const Projection p(fixtures::diag({1, 0}), kPolicy);
    const Context vx = x_context();
    CHECK(das_proj(p, vx, Direction::outer, kPolicy).is_identity());
    CHECK(das_proj(p, vx, Direction::inner, kPolicy).rank() == 0);

    const Context vz = z_context();
    for (Direction dir : {Direction::outer, Direction::inner}) {
        CHECK(max_abs_diff(das_proj(p, vz, dir, kPolicy).matrix(), p.matrix()) < 1e-12);
    }
}

TEST_CASE("mask-level daseinisation matches the projection route") {
    const Context top = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 2, 3}), kPolicy)}, kPolicy);
    const Context w = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 1, 2}), kPolicy)}, kPolicy);
    for (unsigned mask = 0; mask < 8; ++mask) {
        for (Direction dir : {Direction::outer, Direction::inner}) {
            const unsigned got = das_proj_mask(top, mask, w, dir, kPolicy);
            const Projection direct =
                das_proj(top.subset_projection(mask), w, dir, kPolicy);
            CHECK(max_abs_diff(w.subset_projection(got).matrix(), direct.matrix()) < 1e-10);
        }
    }
}

TEST_CASE("daseinised projections agree with the exhaustive lattice oracle") {
    fixtures::Rng rng(21);
    const auto uni = fixtures::qutrit_universe(kPolicy);
    for (int t = 0; t < 10; ++t) {
        const Projection p = rng.projection(3, kPolicy);
        for (const auto& key : uni->keys()) {
            const Context& v = uni->at(key);
            for (Direction dir : {Direction::outer, Direction::inner}) {
                CHECK(max_abs_diff(das_proj(p, v, dir, kPolicy).matrix(),
                                   das_proj_lattice(p, v, dir, kPolicy).matrix()) < 1e-10);
            }
        }
    }
}

TEST_CASE("filter membership reproduces principal filters") {
    const PrincipalFilter f = filter_of_projection(Projection(fixtures::diag({1, 0}), kPolicy));
    CHECK(f.contains(Projection::identity(2), kPolicy));
    CHECK(f.contains(Projection(fixtures::diag({1, 0}), kPolicy), kPolicy));
    CHECK_FALSE(f.contains(Projection(fixtures::diag({0, 1}), kPolicy), kPolicy));
}

TEST_CASE("observable and antonymous functions recover the block coefficients") {
    fixtures::Rng rng(22);
    const HermitianOperator a(rng.hermitian(3), kPolicy);
    const Context v = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 1, 2}), kPolicy)}, kPolicy);
    const auto outer = das_sa(a, v, Direction::outer, kPolicy).coefficients;
    const auto inner = das_sa(a, v, Direction::inner, kPolicy).coefficients;
    for (int i = 0; i < v.block_count(); ++i) {
        const PrincipalFilter f = cone(character_ultrafilter(v, i), kPolicy);
        CHECK(std::abs(observable_fn(a, f, kPolicy) - outer[i]) <= 1e-10);
        CHECK(std::abs(antonymous_fn(a, f, kPolicy) - inner[i]) <= 1e-10);
    }
}

TEST_CASE("eigenphases sort into [0, 2pi) with clustered projections") {
    const std::complex<double> im{0, 1};
    Matrix u = Matrix::Zero(2, 2);
    u(0, 0) = std::exp(im * 2.0);
    u(1, 1) = 1.0;
    const PhaseDecomposition d = eigenphases(UnitaryOperator(u, kPolicy), kPolicy);
    REQUIRE(d.phases.size() == 2);
    CHECK(d.phases[0] == doctest::Approx(0.0));
    CHECK(d.phases[1] == doctest::Approx(2.0));
    CHECK(max_abs_diff(d.projections[0].matrix(), fixtures::diag({0, 1})) < 1e-10);
    CHECK(max_abs_diff(d.projections[1].matrix(), fixtures::diag({1, 0})) < 1e-10);
}

TEST_CASE("unitary daseinisation is exact in an eigencontext") {
    const std::complex<double> im{0, 1};
    Matrix u = Matrix::Zero(2, 2);
    u(0, 0) = std::exp(im * 0.3);
    u(1, 1) = std::exp(im * 1.7);
    const UnitaryOperator uo(u, kPolicy);
    const Context vz = z_context();
    for (Direction dir : {Direction::outer, Direction::inner}) {
        CHECK(max_abs_diff(das_unitary(uo, vz, dir, kPolicy).matrix(), u) < 1e-10);
    }
}

TEST_CASE("spectral windows select the expected eigenprojections") {
    const HermitianOperator a(fixtures::diag({1, 2, 3}), kPolicy);
    const Projection window = spectral_projection(a, 1.5, 3.2, kPolicy);
    CHECK(window.rank() == 2);
    CHECK(max_abs_diff(window.matrix(), fixtures::diag({0, 1, 1})) < 1e-10);
    CHECK(spectral_projection(a, 10.0, 11.0, kPolicy).rank() == 0);

    // The representative of "A in [1.5, 3.2]" inside {e12, e3}: outer
    // daseinisation rounds e2+e3 up to the identity.
    const Context w = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 1, 2}), kPolicy)}, kPolicy);
    CHECK(proposition_rep(a, 1.5, 3.2, w, kPolicy).is_identity());
    CHECK(max_abs_diff(proposition_rep(a, 2.5, 3.5, w, kPolicy).matrix(),
                       fixtures::diag({0, 0, 1})) < 1e-10);
}

TEST_CASE("the daseinisation table covers every context of the universe") {
    fixtures::Rng rng(23);
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const HermitianOperator a(rng.hermitian(3), kPolicy);
    const auto table = groote_table(a, *uni, Direction::outer, kPolicy);
    CHECK(table.size() == uni->size());
    for (const auto& [key, value] : table) {
        CHECK(value.context_key == key);
        CHECK(value.coefficients.size() ==
              static_cast<std::size_t>(uni->at(key).block_count()));
    }
}
