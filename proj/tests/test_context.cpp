#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "toposqt/context.hpp"
#include "toposqt/fixtures.hpp"
#include "toposqt/io.hpp"
#include "toposqt/universe.hpp"

using namespace toposqt;

namespace {
const TolerancePolicy kPolicy{};

Context ladder_context(const std::vector<double>& diag_entries) {
    return context_from_operators({HermitianOperator(fixtures::diag(diag_entries), kPolicy)},
                                  kPolicy);
}
}  // namespace

TEST_CASE("a non-degenerate operator generates the full eigencontext") {
    const Context v = ladder_context({3, 1});
    REQUIRE(v.block_count() == 2);
    CHECK(v.block(0).rank() == 1);
    CHECK(v.block(1).rank() == 1);
    CHECK_FALSE(v.is_trivial());
}

TEST_CASE("a scalar operator generates the trivial context") {
    const Context v = context_from_operators(
        {HermitianOperator(Matrix::Identity(3, 3), kPolicy)}, kPolicy);
    CHECK(v.block_count() == 1);
    CHECK(v.is_trivial());
}

TEST_CASE("joint refinement of two commuting coarse operators") {
    const Context v = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 1, 2}), kPolicy),
         HermitianOperator(fixtures::diag({2, 1, 1}), kPolicy)},
        kPolicy);
    CHECK(v.block_count() == 3);
}

TEST_CASE("non-commuting generators are rejected") {
    CHECK_THROWS_AS(context_from_operators(
                        {HermitianOperator(fixtures::sigma_z(), kPolicy),
                         HermitianOperator(fixtures::sigma_x(), kPolicy)},
                        kPolicy),
                    NotCommuting);
}

TEST_CASE("subset projections sum the selected blocks") {
    const Context v = ladder_context({1, 2, 3});
    CHECK(v.subset_projection(0b111).is_identity());
    CHECK(v.subset_projection(0b000).rank() == 0);
    const Projection two = v.subset_projection(0b011);
    CHECK(two.rank() == 2);
    CHECK(max_abs_diff(two.matrix() * two.matrix(), two.matrix()) < 1e-12);
}

TEST_CASE("canonical keys ignore block order and carry dim/count") {
    const Context v = ladder_context({1, 2, 3});
    std::vector<Projection> reversed(v.blocks().rbegin(), v.blocks().rend());
    CHECK(Context(reversed, kPolicy).key() == v.key());
    CHECK(v.key().rfind("d3k3-", 0) == 0);
}

TEST_CASE("coarsening counts match the partition lattice") {
    CHECK(subcontexts(ladder_context({1, 2, 3}), false, kPolicy).size() == 4);
    CHECK(subcontexts(ladder_context({1, 2, 3}), true, kPolicy).size() == 5);
    CHECK(subcontexts(ladder_context({1, 2, 3, 4}), false, kPolicy).size() == 14);
    CHECK(subcontexts(ladder_context({1, 2, 3, 4}), true, kPolicy).size() == 15);
}

TEST_CASE("character restriction picks the containing block") {
    const Context top = ladder_context({1, 2, 3});
    const Context w = ladder_context({1, 1, 2});  // blocks e12 and e3
    // Find the character of e1 upstairs: the block with a 1 in entry (0,0).
    int e1_char = -1;
    for (int i = 0; i < top.block_count(); ++i) {
        if (std::abs(top.block(i).matrix()(0, 0)) > 0.5) e1_char = i;
    }
    REQUIRE(e1_char >= 0);
    const int down = restrict_character(top, e1_char, w, kPolicy);
    CHECK(proj_leq(top.block(e1_char), w.block(down), kPolicy));
    CHECK(w.block(down).rank() == 2);
}

TEST_CASE("character ultrafilters generate principal filters at the block") {
    const Context v = ladder_context({1, 2, 3});
    for (int i = 0; i < v.block_count(); ++i) {
        const PrincipalFilter f = cone(character_ultrafilter(v, i), kPolicy);
        CHECK(max_abs_diff(f.generator.matrix(), v.block(i).matrix()) < 1e-10);
        CHECK(f.contains(Projection::identity(3), kPolicy));
        CHECK(f.contains(v.block(i), kPolicy));
    }
}

TEST_CASE("the qutrit universe is the four-context coarsening poset") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    CHECK(uni->size() == 4);
    CHECK(uni->maximal_keys().size() == 1);
    const std::string top = uni->maximal_keys().front();
    CHECK(uni->down_set(top).size() == 4);
    CHECK(uni->hasse_edges().size() == 3);
    CHECK(uni->is_down_closed(kPolicy));
    for (const auto& [child, parent] : uni->hasse_edges()) {
        CHECK(uni->leq(child, parent));
        CHECK_FALSE(uni->leq(parent, child));
    }
}

TEST_CASE("the dim-4 ladder universe has all fourteen proper coarsenings") {
    const auto uni = fixtures::dim4_universe(kPolicy);
    CHECK(uni->size() == 14);
    CHECK(uni->maximal_keys().size() == 1);
}

TEST_CASE("universe construction respects the context budget") {
    const std::vector<std::vector<HermitianOperator>> seeds{
        {HermitianOperator(fixtures::diag({1, 2, 3}), kPolicy)}};
    CHECK_THROWS_AS(build_universe(3, seeds, false, kPolicy, 2), SizeLimit);
}

TEST_CASE("universe JSON round-trips with integrity intact") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const nlohmann::json j = universe_to_json(*uni);
    const ContextUniverse back = universe_from_json(j, kPolicy);
    CHECK(back.keys() == uni->keys());
    CHECK(back.hasse_edges() == uni->hasse_edges());

    // Tampering with a stored key is detected.
    nlohmann::json bad = j;
    bad["contexts"][0]["key"] = "d3k3-0000000000000000";
    CHECK_THROWS_AS(universe_from_json(bad, kPolicy), ParseError);
}

TEST_CASE("DOT export names contexts in key order") {
    const auto uni = fixtures::qutrit_universe(kPolicy);
    const std::string dot = universe_to_dot(*uni);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("V0") != std::string::npos);
    CHECK(dot.find("V3") != std::string::npos);
    CHECK(std::count(dot.begin(), dot.end(), '\n') > 5);
}
