#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "toposqt/daseinise.hpp"
#include "toposqt/fixtures.hpp"
#include "toposqt/spectral.hpp"

using namespace toposqt;

namespace {
const TolerancePolicy kPolicy{};
}

TEST_CASE("spectral family of diag(3,1) has the two expected jumps") {
    const HermitianOperator a(fixtures::diag({3, 1}), kPolicy);
    const SpectralFamily f = spectral_family(a, kPolicy);
    REQUIRE(f.jumps().size() == 2);

    CHECK(f.jumps()[0].threshold == doctest::Approx(1.0));
    CHECK(f.jumps()[1].threshold == doctest::Approx(3.0));
    CHECK(max_abs_diff(f.jumps()[0].cumulative.matrix(), fixtures::diag({0, 1})) < 1e-12);
    CHECK(f.jumps()[1].cumulative.is_identity());
}

TEST_CASE("value_at is a right-continuous step function") {
    const HermitianOperator a(fixtures::diag({3, 1}), kPolicy);
    const SpectralFamily f = spectral_family(a, kPolicy);

    CHECK(f.value_at(0.99).rank() == 0);
    CHECK(max_abs_diff(f.value_at(1.0).matrix(), fixtures::diag({0, 1})) < 1e-12);
    CHECK(max_abs_diff(f.value_at(2.0).matrix(), fixtures::diag({0, 1})) < 1e-12);
    CHECK(f.value_at(3.0).is_identity());
    CHECK(f.value_at(100.0).is_identity());
}

TEST_CASE("operator_from_family inverts spectral_family") {
    fixtures::Rng rng(11);
    for (int dim : {2, 3, 4}) {
        for (int t = 0; t < 5; ++t) {
            const HermitianOperator a(rng.hermitian(dim), kPolicy);
            const SpectralFamily f = spectral_family(a, kPolicy);
            CHECK(max_abs_diff(operator_from_family(f, kPolicy).matrix(), a.matrix()) <
                  1e-10);
        }
    }
}

TEST_CASE("spectral order on commuting diagonals is the pointwise order") {
    const HermitianOperator a(fixtures::diag({1, 2}), kPolicy);
    const HermitianOperator b(fixtures::diag({2, 3}), kPolicy);
    CHECK(spectral_leq(a, b, kPolicy));
    CHECK_FALSE(spectral_leq(b, a, kPolicy));
    CHECK(spectral_leq(a, a, kPolicy));
}

TEST_CASE("meet and join of commuting families are the pointwise extremes") {
    const SpectralFamily fa =
        spectral_family(HermitianOperator(fixtures::diag({1, 4}), kPolicy), kPolicy);
    const SpectralFamily fb =
        spectral_family(HermitianOperator(fixtures::diag({3, 2}), kPolicy), kPolicy);
    const Matrix meet =
        operator_from_family(spectral_meet_family(fa, fb, kPolicy), kPolicy).matrix();
    const Matrix join =
        operator_from_family(spectral_join_family(fa, fb, kPolicy), kPolicy).matrix();
    CHECK(max_abs_diff(meet, fixtures::diag({1, 2})) < 1e-10);
    CHECK(max_abs_diff(join, fixtures::diag({3, 4})) < 1e-10);
}

TEST_CASE("meet is a lower bound and join an upper bound in general") {
    fixtures::Rng rng(12);
    for (int t = 0; t < 10; ++t) {
        const SpectralFamily fa =
            spectral_family(HermitianOperator(rng.hermitian(3), kPolicy), kPolicy);
        const SpectralFamily fb =
            spectral_family(HermitianOperator(rng.hermitian(3), kPolicy), kPolicy);
        const SpectralFamily meet = spectral_meet_family(fa, fb, kPolicy);
        const SpectralFamily join = spectral_join_family(fa, fb, kPolicy);
        CHECK(spectral_leq(meet, fa, kPolicy));
        CHECK(spectral_leq(meet, fb, kPolicy));
        CHECK(spectral_leq(fa, join, kPolicy));
        CHECK(spectral_leq(fb, join, kPolicy));
    }
}

TEST_CASE("the usual operator order does not imply the spectral order") {
    fixtures::Rng rng(13);
    bool witness = false;
    for (int t = 0; t < 200 && !witness; ++t) {
        const Matrix m = rng.hermitian(2);
        const Matrix d = rng.hermitian(2);
        const Matrix larger = m + d * d;  // m plus a positive perturbation
        witness = !spectral_leq(HermitianOperator(m, kPolicy),
                                HermitianOperator(larger, kPolicy), kPolicy);
    }
    CHECK(witness);
}

TEST_CASE("the spectral order implies the usual operator order") {
    fixtures::Rng rng(14);
    int comparable = 0;
    for (int t = 0; t < 400; ++t) {
        const Matrix ma = rng.hermitian(2);
        const Matrix mb = rng.hermitian(2);
        if (!spectral_leq(HermitianOperator(ma, kPolicy), HermitianOperator(mb, kPolicy),
                          kPolicy)) {
            continue;
        }
        ++comparable;
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(mb - ma));
        CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
    // Unrelated random pairs are rarely comparable; daseinised pairs always are.
    const auto uni = fixtures::qubit_universe(kPolicy);
    const Matrix m = rng.hermitian(2);
    const HermitianOperator a(m, kPolicy);
    for (const auto& key : uni->keys()) {
        const Context& v = uni->at(key);
        const HermitianOperator lo = das_sa(a, v, Direction::inner, kPolicy).to_operator(v);
        CHECK(spectral_leq(lo, a, kPolicy));
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(m - lo.matrix()));
        CHECK(es.eigenvalues().minCoeff() >= -1e-9);
        ++comparable;
    }
    CHECK(comparable > 0);
}

TEST_CASE("compressed families merge duplicate thresholds") {
    // Build a family with a repeated eigenvalue: diag(2, 2, 5).
    const HermitianOperator a(fixtures::diag({2, 2, 5}), kPolicy);
    const SpectralFamily f = spectral_family(a, kPolicy);
    REQUIRE(f.jumps().size() == 2);
    CHECK(f.jumps()[0].cumulative.rank() == 2);
    CHECK(spectrum_of(f) == std::vector<double>{f.jumps()[0].threshold,
                                                f.jumps()[1].threshold});
}
