// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "oracle_helpers.hpp"
#include "spp/tree.hpp"
#include "spp/tree_search.hpp"

using namespace spp;

namespace {

Dataset parse(const std::string& text, StructureKind kind) {
    std::istringstream in(text);
    return load_dataset(in, kind);
}

}  // namespace

TEST_CASE("pattern text round-trips for both kinds") {
    Pattern items{StructureKind::itemset, {1, 3, 5}};
    CHECK(format_pattern(items) == "{1,3,5}");
    CHECK(parse_pattern("{1,3,5}", StructureKind::itemset) == items);

    Pattern seq{StructureKind::sequence, {2, 2, 7}};
    CHECK(format_pattern(seq) == "2->2->7");
    CHECK(parse_pattern("2->2->7", StructureKind::sequence) == seq);

    CHECK(format_pattern(Pattern{StructureKind::itemset, {}}) == "{}");
    CHECK_THROWS_AS(parse_pattern("{3,1}", StructureKind::itemset), DatasetError);
    CHECK_THROWS_AS(parse_pattern("{1,1}", StructureKind::itemset), DatasetError);
    CHECK_THROWS_AS(parse_pattern("1->x", StructureKind::sequence), DatasetError);
}

TEST_CASE("occurrence semantics: subset for itemsets, gapped subsequence for sequences") {
    Instance bag{0.0, {1, 4, 6}};
    CHECK(occurs(Pattern{StructureKind::itemset, {1, 6}}, bag));
    CHECK(occurs(Pattern{StructureKind::itemset, {}}, bag));
    CHECK_FALSE(occurs(Pattern{StructureKind::itemset, {1, 5}}, bag));

    Instance s{0.0, {2, 7, 2}};
    CHECK(occurs(Pattern{StructureKind::sequence, {2, 2}}, s));
    CHECK(occurs(Pattern{StructureKind::sequence, {7, 2}}, s));
    CHECK(occurs(Pattern{StructureKind::sequence, {2, 7, 2}}, s));
    CHECK_FALSE(occurs(Pattern{StructureKind::sequence, {2, 2, 2}}, s));
    CHECK_FALSE(occurs(Pattern{StructureKind::sequence, {7, 7}}, s));
}

TEST_CASE("occurrence agrees with the brute-force matcher on random data") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
        for (StructureKind kind : {StructureKind::itemset, StructureKind::sequence}) {
            Dataset data = kind == StructureKind::itemset
                               ? testutil::random_itemset_data(rng, 12, 5, LossKind::squared)
                               : testutil::random_sequence_data(rng, 12, 5, LossKind::squared);
            for (const Pattern& p : testutil::naive_enumerate(data, 3)) {
                CHECK(support_of(p, data) == testutil::naive_support(p, data));
            }
        }
    }
}

TEST_CASE("a three-instance itemset fixture enumerates exactly its seven patterns in preorder") {
    Dataset data = parse("1 1 2\n-1 2 3\n0 1 2 3\n", StructureKind::itemset);
    PatternTree tree(data, 3);
    std::vector<TreeNode> nodes = tree.enumerate_all();
    REQUIRE(nodes.size() == 7);
    const std::vector<std::string> expected = {"{1}",   "{1,2}", "{1,2,3}", "{1,3}",
                                               "{2}",   "{2,3}", "{3}"};
    const std::vector<std::vector<int32_t>> supports = {
        {0, 2}, {0, 2}, {2}, {2}, {0, 1, 2}, {1, 2}, {1, 2}};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        CHECK(format_pattern(nodes[i].pattern) == expected[i]);
        CHECK(nodes[i].rows == supports[i]);
    }
}

TEST_CASE("sequence enumeration covers repeated tokens via continuation positions") {
    Dataset data = parse("1 2 7 2\n", StructureKind::sequence);
    PatternTree tree(data, 3);
    std::vector<TreeNode> nodes = tree.enumerate_all();
    std::vector<std::string> got;
    for (const TreeNode& n : nodes) got.push_back(format_pattern(n.pattern));
    CHECK(got == std::vector<std::string>{"2", "2->2", "2->7", "2->7->2", "7", "7->2"});
    for (const TreeNode& n : nodes) CHECK(n.rows == std::vector<int32_t>{0});
}

TEST_CASE("lazy enumeration matches generate-and-test on random datasets") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 15; ++round) {
        for (StructureKind kind : {StructureKind::itemset, StructureKind::sequence}) {
            Dataset data = kind == StructureKind::itemset
                               ? testutil::random_itemset_data(rng, 15, 6, LossKind::squared)
                               : testutil::random_sequence_data(rng, 15, 6, LossKind::squared);
            PatternTree tree(data, 3);
            std::vector<TreeNode> nodes = tree.enumerate_all();
            std::vector<Pattern> expected = testutil::naive_enumerate(data, 3);
            REQUIRE(nodes.size() == expected.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                CHECK(nodes[i].pattern == expected[i]);
                CHECK(nodes[i].rows == testutil::naive_support(expected[i], data));
                CHECK_FALSE(nodes[i].rows.empty());
            }
            // Preorder is canonical: strictly increasing in pattern order,
            // each pattern exactly once.
            for (std::size_t i = 1; i < nodes.size(); ++i)
                CHECK(nodes[i - 1].pattern < nodes[i].pattern);
        }
    }
}

TEST_CASE("traversal visits each node once and prune cuts whole subtrees") {
    Dataset data = parse("1 1 2 3\n-1 1 2 4\n0 2 3 4\n", StructureKind::itemset);
    PatternTree tree(data, 3);
    std::size_t all = tree.enumerate_all().size();

    std::size_t seen = 0;
    std::size_t visited = tree.traverse([&](const TreeNode&) {
        ++seen;
        return VisitAction::expand;
    });
    CHECK(visited == all);
    CHECK(seen == all);

    // Pruning every node at depth 1 leaves only the depth-1 nodes.
    std::size_t depth1 = 0;
    visited = tree.traverse([&](const TreeNode& node) {
        CHECK(node.depth() == 1);
        ++depth1;
        return VisitAction::prune;
    });
    CHECK(visited == depth1);
    CHECK(depth1 == 4);  // items 1..4
}

TEST_CASE("max length and the enumeration cap are honored") {
    Dataset data = parse("1 1 2 3\n", StructureKind::itemset);
    PatternTree shallow(data, 1);
    CHECK(shallow.enumerate_all().size() == 3);
    CHECK_THROWS_AS(PatternTree(data, 0), std::invalid_argument);

    PatternTree deep(data, 3);
    CHECK_THROWS_AS(deep.enumerate_all(3), std::runtime_error);
}

TEST_CASE("exact max inner product search agrees with dense enumeration") {
    std::mt19937_64 rng(37);
    for (int round = 0; round < 25; ++round) {
        StructureKind kind = round % 2 ? StructureKind::sequence : StructureKind::itemset;
        Dataset data = kind == StructureKind::itemset
                           ? testutil::random_itemset_data(rng, 14, 6, LossKind::squared)
                           : testutil::random_sequence_data(rng, 14, 6, LossKind::squared);
        PatternTree tree(data, 3);
        std::vector<double> alpha = testutil::random_centered(rng, data.size(), 1.0);

        double naive_best = 0.0;
        Pattern naive_arg;
        for (const Pattern& p : testutil::naive_enumerate(data, 3)) {
            double inner = 0.0;
            for (int32_t i : testutil::naive_support(p, data)) inner += alpha[i];
            if (std::abs(inner) > naive_best) {
                naive_best = std::abs(inner);
                naive_arg = p;
            }
        }

        MaxAbsInner found = max_abs_inner(tree, alpha);
        CHECK(found.value == doctest::Approx(naive_best).epsilon(1e-12));
        CHECK(found.nodes <= tree.enumerate_all().size());

        // Seeding with a valid lower bound must not change the result.
        MaxAbsInner seeded = max_abs_inner(tree, alpha, 0.5 * naive_best);
        CHECK(seeded.value == found.value);
    }
}

TEST_CASE("inner products above a threshold are collected exactly") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 15; ++round) {
        Dataset data = testutil::random_itemset_data(rng, 12, 5, LossKind::squared);
        PatternTree tree(data, 3);
        std::vector<double> alpha = testutil::random_centered(rng, data.size(), 1.0);

        std::vector<double> expected;
        double expected_max = 0.0;
        const double threshold = 0.4;
        for (const Pattern& p : testutil::naive_enumerate(data, 3)) {
            double inner = 0.0;
            for (int32_t i : testutil::naive_support(p, data)) inner += alpha[i];
            expected_max = std::max(expected_max, std::abs(inner));
            if (std::abs(inner) > threshold) expected.push_back(std::abs(inner));
        }
        std::sort(expected.begin(), expected.end());

        AbsInnerTail tail = collect_abs_inner_above(tree, alpha, threshold);
        std::vector<double> got = tail.values;
        std::sort(got.begin(), got.end());
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        if (!tail.values.empty())
            CHECK(tail.max_abs == doctest::Approx(expected_max).epsilon(1e-12));
    }
}
