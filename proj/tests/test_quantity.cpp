#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <string>

#include "doctest.h"
#include "toposqt/fixtures.hpp"
#include "toposqt/io.hpp"
#include "toposqt/oracles.hpp"
#include "toposqt/quantity.hpp"

using namespace toposqt;

namespace {
const TolerancePolicy kPolicy{};

// Constant-plus-bump order-reversing function on the qutrit down-set.
PoFunction hill(const ContextUniverse& uni, const std::string& root, double top_value,
                double child_value) {
    PoFunction f;
    f.root = root;
    f.direction = Monotonicity::order_reversing;
    for (const auto& key : uni.down_set(root)) {
        f.values.emplace(key, key == root ? top_value : child_value);
    }
    return f;
}
}  // namespace

TEST_CASE("po_valid enforces the claimed monotonicity") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();

    PoFunction ok = hill(*uni, top, 1.0, 2.0);
    CHECK(po_valid(ok, *uni));

    PoFunction bad = hill(*uni, top, 1.0, 0.0);
    CHECK_FALSE(po_valid(bad, *uni));

    bad.direction = Monotonicity::order_preserving;
    CHECK(po_valid(bad, *uni));

    PoFunction incomplete = ok;
    incomplete.values.erase(incomplete.values.begin());
    CHECK_FALSE(po_valid(incomplete, *uni));
}

TEST_CASE("restriction truncates the domain to the new down-set") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();
    const PoFunction f = hill(*uni, top, 1.0, 2.0);
    for (const auto& key : uni->keys()) {
        if (key == top) continue;
        const PoFunction g = po_restrict(f, key, *uni);
        CHECK(g.root == key);
        CHECK(g.values.size() == 1);
        CHECK(g.values.at(key) == 2.0);
        // Restriction only moves down the poset.
        CHECK_THROWS_AS(po_restrict(g, top, *uni), NotASubcontext);
    }
}

TEST_CASE("sums stay in the monoid; products can leave it") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();
    const PoFunction f = hill(*uni, top, 1.0, 2.0);
    const PoFunction g = hill(*uni, top, -3.0, 0.5);

    const PoFunction sum = po_add(f, g);
    CHECK(po_valid(sum, *uni));
    CHECK(sum.values.at(top) == -2.0);

    const PoFunction neg = hill(*uni, top, -2.0, -1.0);
    CHECK(po_valid(neg, *uni));
    CHECK_FALSE(po_valid(po_mul(neg, neg), *uni));
}

TEST_CASE("k-classes form a group with theta as monoid embedding") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();
    const PoFunction f = hill(*uni, top, 1.0, 2.0);
    const PoFunction g = hill(*uni, top, -3.0, 0.5);

    const KValue kf = k_theta(f);
    const KValue kg = k_theta(g);
    const KValue zero = k_zero(top, *uni);

    CHECK(k_equal(k_add(kf, kg), k_add(kg, kf)));
    CHECK(k_equal(k_add(kf, zero), kf));
    CHECK(k_equal(k_add(kf, k_neg(kf)), zero));
    CHECK(k_equal(k_theta(po_add(f, g)), k_add(kf, kg)));
    CHECK_FALSE(k_equal(kf, kg));

    // k_class(f, g) is the formal difference of the two embeddings.
    const KValue via_class = k_class(f, g);
    CHECK(k_equal(via_class, k_add(kf, k_neg(kg))));
}

TEST_CASE("bv decomposition of a hand-computed bump function") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();

    std::map<std::string, double> f;
    std::vector<std::string> kids;
    for (const auto& key : uni->down_set(top)) {
        if (key != top) kids.push_back(key);
    }
    REQUIRE(kids.size() == 3);
    f[top] = 0.0;
    f[kids[0]] = 5.0;
    f[kids[1]] = -3.0;
    f[kids[2]] = 0.0;

    const BvDecomposition d = bv_decompose(f, top, *uni);
    CHECK(d.total_variation.at(top) == 5.0);
    CHECK(d.total_variation.at(kids[0]) == 0.0);
    CHECK(d.total_variation.at(kids[1]) == 0.0);

    CHECK(d.g.values.at(top) == -5.0);
    CHECK(d.g.values.at(kids[0]) == 5.0);
    CHECK(d.g.values.at(kids[1]) == -3.0);
    CHECK(d.h.values.at(top) == -5.0);
    CHECK(d.h.values.at(kids[0]) == 0.0);

    CHECK(po_valid(d.g, *uni));
    CHECK(po_valid(d.h, *uni));
    for (const auto& [key, x] : f) {
        CHECK(d.g.values.at(key) - d.h.values.at(key) == x);
        CHECK(d.total_variation.at(key) == chain_variation(f, key, *uni));
    }
}

TEST_CASE("pair equivalence is cancellation of the represented differences") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();

    PairFunction p;
    p.inner.root = top;
    p.inner.direction = Monotonicity::order_preserving;
    for (const auto& key : uni->down_set(top)) {
        p.inner.values.emplace(key, key == top ? 1.0 : 0.0);
    }
    p.outer = hill(*uni, top, 2.0, 3.0);

    // Shift the components in opposite directions by the same order-reversing
    // offset: the represented difference, hence the class, is unchanged.
    PairFunction q = p;
    const PoFunction shift = hill(*uni, top, 1.0, 4.0);
    for (const auto& [key, x] : shift.values) {
        q.inner.values.at(key) -= x;
        q.outer.values.at(key) += x;
    }
    CHECK(pair_equiv(p, p));
    CHECK(pair_equiv(p, q));
    CHECK(k_equal(pair_quotient_iso(p), pair_quotient_iso(q)));

    // A genuinely different class.
    PairFunction rdiff = p;
    rdiff.outer.values.at(top) += 1.0;
    CHECK_FALSE(pair_equiv(p, rdiff));
    CHECK_FALSE(k_equal(pair_quotient_iso(p), pair_quotient_iso(rdiff)));
}

TEST_CASE("embedded squares apply pointwise squaring") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string top = uni->maximal_keys().front();
    const PoFunction lam = hill(*uni, top, -1.0, 1.0);
    const KValue sq = k_square_embedded(k_theta(lam), *uni);
    CHECK(sq.bv.at(top) == 1.0);
    for (const auto& [key, x] : lam.values) {
        CHECK(sq.bv.at(key) == x * x);
    }

    // Values outside the monoid image are rejected.
    KValue not_embedded = k_theta(hill(*uni, top, 1.0, 2.0));
    not_embedded.bv.at(top) = 10.0;  // breaks order-reversal
    CHECK_THROWS_AS(k_square_embedded(not_embedded, *uni), NotEmbedded);
}

TEST_CASE("dispersion vanishes on sharp stages and flags sign asymmetry") {
    const auto uni = fixtures::qubit_universe(kPolicy);
    const Context vz = context_from_operators(
        {HermitianOperator(fixtures::sigma_z(), kPolicy)}, kPolicy);
    const Context vx = context_from_operators(
        {HermitianOperator(fixtures::sigma_x(), kPolicy)}, kPolicy);

    // A = diag(-3, 1): in its eigencontext outer(A^2) = outer(A)^2 blockwise,
    // so dispersion is zero; in the incompatible context outer(A) = 1 while
    // outer(A^2) = 9, leaving a gap of 8.
    const HermitianOperator a(fixtures::diag({-3, 1}), kPolicy);
    const DispersionArrow disp = dispersion(a, uni, kPolicy);
    for (int i = 0; i < 2; ++i) {
        CHECK(disp.at(vz.key(), i).bv.at(vz.key()) == doctest::Approx(0.0));
        CHECK(disp.at(vx.key(), i).bv.at(vx.key()) == doctest::Approx(8.0));
    }

    // Dispersion is nonnegative pointwise and zero on projections.
    const DispersionArrow sharp =
        dispersion(HermitianOperator(fixtures::diag({1, 0}), kPolicy), uni, kPolicy);
    for (const auto& [stage, by_char] : sharp.payloads) {
        for (const auto& [elem, kv] : by_char) {
            for (const auto& [key, x] : kv.bv) {
                CHECK(x >= -1e-12);
                CHECK(x <= 1e-10);
            }
        }
    }
}

TEST_CASE("arrow payload values are the daseinisation coefficients") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const HermitianOperator a(fixtures::diag({1, 2, 3}), kPolicy);
    const QuantityArrow arrow = quantity_arrow(a, uni, ArrowMode::pair, kPolicy);
    for (const auto& key : uni->keys()) {
        const Context& v = uni->at(key);
        const auto outer = das_sa(a, v, Direction::outer, kPolicy).coefficients;
        const auto inner = das_sa(a, v, Direction::inner, kPolicy).coefficients;
        for (int i = 0; i < v.block_count(); ++i) {
            const PairFunction& p = arrow.pair_at(key, i);
            CHECK(p.outer.values.at(key) == outer[i]);
            CHECK(p.inner.values.at(key) == inner[i]);
        }
    }
}

TEST_CASE("arrow CSV export carries stage, character and payload columns") {
    const auto uni = fixtures::qubit_universe(kPolicy);
    const HermitianOperator a(fixtures::diag({3, 1}), kPolicy);
    const QuantityArrow arrow = quantity_arrow(a, uni, ArrowMode::pair, kPolicy);
    const std::string csv = arrow_to_csv(arrow);
    CHECK(csv.rfind("stage,character,subcontext,inner,outer", 0) == 0);
    CHECK(csv.find(",3") != std::string::npos);
    CHECK(csv.find(",1,") != std::string::npos);
}
