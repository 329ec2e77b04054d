#include <doctest.h>

#include <sstream>

#include "lexis/corpus.hpp"
#include "lexis/snapshot.hpp"
#include "test_support.hpp"

using namespace lexis;
using namespace lexis::testing;

TEST_CASE("corpus lines parse into records") {
    std::istringstream in(
        "# composite parts\n"
        "BBa_I13507\t2004\tBBa_B0034 BBa_E1010 BBa_B0010 BBa_B0012\n"
        "\n"
        "BBa_X\t2005\tBBa_A BBa_B\n");
    LoadResult result = parse_corpus(in);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].part_id == "BBa_I13507");
    CHECK(result.records[0].year == 2004);
    CHECK(result.records[0].parts.size() == 4);
    CHECK(result.records[0].parts[0] == "BBa_B0034");
    CHECK(result.ignored_lines == 2);  // comment + blank
    CHECK(result.malformed.empty());
}

TEST_CASE("malformed lines are reported, not dropped silently") {
    std::string good_lines;
    for (int i = 0; i < 300; ++i)
        good_lines += "p" + std::to_string(i) + "\t2005\ta b\n";

    SUBCASE("a bad year lands in the report") {
        std::istringstream in(good_lines + "broken\ttwenty\ta b\n");
        LoadResult result = parse_corpus(in);
        CHECK(result.records.size() == 300);
        REQUIRE(result.malformed.size() == 1);
        CHECK(result.malformed[0].reason.find("year") != std::string::npos);
    }
    SUBCASE("missing fields land in the report") {
        std::istringstream in(good_lines + "broken 2005 a b\n");  // spaces, not tabs
        LoadResult result = parse_corpus(in);
        REQUIRE(result.malformed.size() == 1);
    }
    SUBCASE("over 1% malformed aborts") {
        std::istringstream in("only\t2005\ta b\nbroken\tbad\ta\n");
        CHECK_THROWS_AS(parse_corpus(in), InputError);
    }
}

TEST_CASE("years outside the range are filtered, not malformed") {
    std::istringstream in(
        "old\t1999\ta b\n"
        "ok\t2005\ta b\n"
        "future\t2030\ta b\n");
    LoadResult result = parse_corpus(in);
    CHECK(result.records.size() == 1);
    CHECK(result.dropped_out_of_range == 2);
    CHECK(result.malformed.empty());
}

TEST_CASE("corpus round-trips through write_corpus") {
    std::istringstream in(
        "BBa_1\t2004\ta b c\n"
        "BBa_2\t2005\td e\n");
    LoadResult first = parse_corpus(in);
    std::ostringstream out;
    write_corpus(out, first.records);
    std::istringstream again(out.str());
    LoadResult second = parse_corpus(again);
    CHECK(first.records == second.records);
}

TEST_CASE("make_batches groups by year and tracks new sources") {
    std::istringstream in(
        "t1\t2005\ta b\n"
        "t2\t2004\ta c\n"
        "t3\t2004\tc d c\n"
        "short\t2005\tz\n"
        "t4\t2006\ta b\n");
    LoadResult loaded = parse_corpus(in);
    TokenTable tokens;
    BatchingResult result = make_batches(loaded.records, tokens);

    REQUIRE(result.batches.size() == 3);
    CHECK(result.batches[0].label == "2004");
    CHECK(result.batches[0].targets.size() == 2);
    CHECK(result.batches[1].label == "2005");
    CHECK(result.batches[1].targets.size() == 1);  // the length-1 target drops
    CHECK(result.dropped_short == 1);
    CHECK(result.targets_kept == 4);
    CHECK(result.total_length == 9);
    CHECK(result.min_target_length == 2);
    CHECK(result.max_target_length == 3);
    CHECK(result.distinct_sources == 4);  // a c d from 2004, b from 2005

    // a token introduced in 2004 is not new again in 2005/2006
    CHECK(result.batches[0].new_sources.size() == 3);  // a c d
    CHECK(result.batches[1].new_sources.size() == 1);  // b
    CHECK(result.batches[2].new_sources.empty());

    std::size_t batched = 0;
    for (const Batch& b : result.batches) batched += b.targets.size();
    CHECK(batched == loaded.records.size() - result.dropped_short);
}

TEST_CASE("snapshots round-trip") {
    CharAlphabet alpha;
    LexisDag dag = flat_of(alpha, {"abbbbbba", "abc"});
    NodeId t = dag.target_ids().at(0);
    NodeId b = *dag.source_of(alpha.table.find("b"));
    REQUIRE(dag.add_intermediate({b, b, b}, {{t, 1}, {t, 4}}).created);

    std::ostringstream out;
    save_snapshot(out, dag, alpha.table);

    TokenTable fresh;
    std::istringstream in(out.str());
    LexisDag loaded = load_snapshot(in, fresh);
    CHECK(loaded.validate().empty());
    CHECK(loaded.edge_cost() == dag.edge_cost());
    CHECK(loaded.node_count() == dag.node_count());

    std::ostringstream again;
    save_snapshot(again, loaded, fresh);
    CHECK(again.str() == out.str());
}

TEST_CASE("snapshot loader rejects cycles and dangling parts") {
    TokenTable tokens;
    SUBCASE("cycle") {
        std::istringstream in(
            "n 0 I 1 1\n"
            "n 1 I 0 0\n");
        CHECK_THROWS_AS(load_snapshot(in, tokens), InputError);
    }
    SUBCASE("dangling part reference") {
        std::istringstream in("n 0 T 5 5\n");
        CHECK_THROWS_AS(load_snapshot(in, tokens), InputError);
    }
    SUBCASE("duplicate id") {
        std::istringstream in(
            "n 0 S a\n"
            "n 0 S b\n");
        CHECK_THROWS_AS(load_snapshot(in, tokens), InputError);
    }
}

TEST_CASE("a loaded snapshot with violations is reported by validate") {
    TokenTable tokens;
    // An intermediate used once.
    std::istringstream in(
        "n 0 S a\n"
        "n 1 S b\n"
        "n 2 I 0 1\n"
        "n 3 T 2 0\n");
    LexisDag dag = load_snapshot(in, tokens);
    auto violations = dag.validate();
    REQUIRE_FALSE(violations.empty());
    CHECK(violations[0].constraint == "out-degree>=2");
}
