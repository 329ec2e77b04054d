#include <doctest.h>

#include <random>

#include "lexis/centrality.hpp"
#include "lexis/repeats.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace lexis;
using namespace lexis::testing;

namespace {

LexisDag abbbbbba_with_bbb(const CharAlphabet& alpha) {
    LexisDag dag = flat_of(alpha, {"abbbbbba"});
    NodeId t = dag.target_ids().at(0);
    NodeId b = *dag.source_of(alpha.table.find("b"));
    auto outcome = dag.add_intermediate({b, b, b}, {{t, 1}, {t, 4}});
    REQUIRE(outcome.created);
    return dag;
}

LexisDag random_hierarchy(std::mt19937_64& rng, std::size_t max_nodes) {
    for (;;) {
        std::vector<Sequence> targets = random_targets(rng, 3, 3, 14);
        LexisDag dag = LexisDag::flat(tokens_of(targets), targets);
        g_lexis(dag);
        if (dag.node_count() <= max_nodes) return dag;
    }
}

}  // namespace

TEST_CASE("path centrality of the 'bbb' node") {
    CharAlphabet alpha;
    LexisDag dag = abbbbbba_with_bbb(alpha);
    NodeId bbb = dag.intermediate_ids().at(0);

    auto centrality = path_centrality(dag);
    REQUIRE(centrality.size() == 1);
    CHECK(centrality[0].first == bbb);
    CHECK(centrality[0].second == 6);  // P_S = 3, P_T = 2

    CHECK(total_paths(dag) == 8);  // 1 + 3 + 3 + 1

    // Exhaustive enumeration agrees.
    PathEnumeration walked = enumerate_paths(dag);
    CHECK(walked.total == 8);
    CHECK(walked.through.at(bbb) == 6);
}

TEST_CASE("flat DAGs have no intermediate centralities") {
    CharAlphabet alpha;
    LexisDag dag = flat_of(alpha, {"abcde"});
    CHECK(path_centrality(dag).empty());
    CHECK(total_paths(dag) == 5);
}

TEST_CASE("an intermediate reused by two targets") {
    CharAlphabet alpha;
    TokenId ta = alpha.table.find("a"), tb = alpha.table.find("b");
    LexisDag dag;
    NodeId a = dag.add_source(ta);
    NodeId b = dag.add_source(tb);
    NodeId t1 = dag.add_target(alpha.seq("aab"), {a, a, b});
    NodeId t2 = dag.add_target(alpha.seq("aab"), {a, a, b});
    auto x = dag.add_intermediate({a, a}, {{t1, 0}, {t2, 0}});
    REQUIRE(x.created);
    REQUIRE(dag.validate().empty());

    auto centrality = path_centrality(dag);
    REQUIRE(centrality.size() == 1);
    CHECK(centrality[0].second == 4);  // P_S = 2, P_T = 2
}

TEST_CASE("total paths add across disjoint targets") {
    CharAlphabet alpha;
    LexisDag dag = flat_of(alpha, {"abc", "adcb"});
    CHECK(total_paths(dag) == 7);
}

TEST_CASE("path counts match exhaustive enumeration on random DAGs") {
    std::mt19937_64 rng(271828);
    for (int round = 0; round < 120; ++round) {
        LexisDag dag = random_hierarchy(rng, 12);
        PathEnumeration walked = enumerate_paths(dag);
        CHECK(total_paths(dag) == walked.total);
        // In an intact DAG every path pins one token of one target, so the
        // count equals the total target token length.
        CHECK(walked.total == dag.total_target_length());
        for (const auto& [id, value] : path_centrality(dag)) {
            PathCount expected = 0;
            if (auto it = walked.through.find(id); it != walked.through.end())
                expected = it->second;
            CHECK(value == expected);
        }
    }
}

TEST_CASE("removing one intermediate drops exactly P(v) paths") {
    std::mt19937_64 rng(161803);
    int checked = 0;
    for (int round = 0; round < 80; ++round) {
        LexisDag dag = random_hierarchy(rng, 12);
        auto centrality = path_centrality(dag);
        if (centrality.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, centrality.size() - 1);
        auto [victim, paths] = centrality[pick(rng)];
        PathEnumeration before = enumerate_paths(dag);
        PathEnumeration after = enumerate_paths(dag, {victim});
        CHECK(before.total - after.total == paths);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("g_core with tau = 1 removes nothing") {
    CharAlphabet alpha;
    LexisDag dag = abbbbbba_with_bbb(alpha);
    CoreResult core = g_core(dag, 1.0, NodeClass::Intermediates);
    CHECK(core.members.empty());
    CHECK(core.feasible);
    CHECK(core.remaining_fraction == doctest::Approx(1.0));
}

TEST_CASE("g_core with tau = 0 on flat 'ab' picks the target") {
    CharAlphabet alpha;
    LexisDag dag = flat_of(alpha, {"ab"});
    CoreResult core = g_core(dag, 0.0, NodeClass::SourcesAndTargets);
    REQUIRE(core.members.size() == 1);
    CHECK(dag.node(core.members[0]).kind == NodeKind::Target);
    CHECK(core.remaining_fraction == doctest::Approx(0.0));
}

TEST_CASE("g_core rejects tau outside [0,1]") {
    CharAlphabet alpha;
    LexisDag dag = flat_of(alpha, {"ab"});
    CHECK_THROWS_AS(g_core(dag, -0.1, NodeClass::Intermediates), InputError);
    CHECK_THROWS_AS(g_core(dag, 1.5, NodeClass::Intermediates), InputError);
}

TEST_CASE("g_core feasibility and the removal invariant") {
    std::mt19937_64 rng(55);
    for (int round = 0; round < 60; ++round) {
        LexisDag dag = random_hierarchy(rng, 20);
        for (double tau : {0.0, 0.25, 0.5, 0.85}) {
            CoreResult core = g_core(dag, tau, NodeClass::Intermediates);
            PathCount total = total_paths(dag);
            std::set<NodeId> removed(core.members.begin(), core.members.end());
            PathCount remaining = enumerate_paths(dag, removed).total;
            if (core.feasible) {
                CHECK(within_tau(remaining, total, tau));
            } else {
                // Even removing every intermediate leaves too many paths.
                std::set<NodeId> all;
                for (NodeId id : dag.intermediate_ids()) all.insert(id);
                PathCount floor = enumerate_paths(dag, all).total;
                CHECK_FALSE(within_tau(floor, total, tau));
            }
        }
    }
}

TEST_CASE("h_score is 0 on a flat DAG and bounded in general") {
    CharAlphabet alpha;
    LexisDag flat = flat_of(alpha, {"abc", "abd", "cd"});
    HScoreReport flat_report = h_score_report(flat, 0.5);
    CHECK(flat_report.value == doctest::Approx(0.0));

    std::mt19937_64 rng(99);
    for (int round = 0; round < 25; ++round) {
        LexisDag dag = random_hierarchy(rng, 30);
        for (double tau : {0.0, 0.5, 0.85, 1.0}) {
            HScoreReport report = h_score_report(dag, tau);
            CHECK(report.value >= 0.0);
            CHECK(report.value <= 1.0);
            if (tau == 1.0) {
                CHECK(report.degenerate);  // both cores empty
                CHECK(report.value == doctest::Approx(0.0));
            }
        }
    }
}

TEST_CASE("hourglass example: shared intermediate beats the flat companion") {
    CharAlphabet alpha;
    // Many targets all funneling through one reused 'ab' node.
    LexisDag dag = flat_of(alpha, {"abc", "abd", "abe", "abcd", "abde"});
    g_lexis(dag);
    REQUIRE(dag.intermediate_count() > 0);
    HScoreReport report = h_score_report(dag, 0.5);
    CHECK(report.core.feasible);
    CHECK(report.value > 0.0);
    CHECK(report.core.members.size() < report.flat_core.members.size());
}
