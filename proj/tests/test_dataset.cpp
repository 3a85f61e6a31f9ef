// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spp/dataset.hpp"

using namespace spp;

TEST_CASE("itemset files parse labels, elements and the alphabet") {
    std::istringstream in(
        "# regression toy\n"
        "1.5 0 2 5\n"
        "\n"
        "-0.25 1 3   # trailing comment\n"
        "0 4\n");
    Dataset data = load_dataset(in, StructureKind::itemset);
    REQUIRE(data.size() == 3);
    CHECK(data.kind == StructureKind::itemset);
    CHECK(data.instances[0].label == 1.5);
    CHECK(data.instances[0].elements == std::vector<int32_t>{0, 2, 5});
    CHECK(data.instances[1].label == -0.25);
    CHECK(data.instances[1].elements == std::vector<int32_t>{1, 3});
    CHECK(data.instances[2].elements == std::vector<int32_t>{4});
    CHECK(data.alphabet == 6);
    CHECK(data.labels() == std::vector<double>{1.5, -0.25, 0.0});
}

TEST_CASE("sequence files keep order and repeats") {
    std::istringstream in("1 2 7 2\n-1 7 7\n");
    Dataset data = load_dataset(in, StructureKind::sequence);
    REQUIRE(data.size() == 2);
    CHECK(data.instances[0].elements == std::vector<int32_t>{2, 7, 2});
    CHECK(data.instances[1].elements == std::vector<int32_t>{7, 7});
    CHECK(data.alphabet == 8);
}

TEST_CASE("itemset element order is validated with line numbers") {
    std::istringstream misordered("1 0 1\n-1 3 2\n");
    CHECK_THROWS_WITH_AS(load_dataset(misordered, StructureKind::itemset),
                         doctest::Contains("line 2"), DatasetError);
    try {
        std::istringstream again("1 0 1\n-1 3 2\n");
        load_dataset(again, StructureKind::itemset);
    } catch (const DatasetError& e) {
        CHECK(e.line() == 2);
    }

    std::istringstream duplicated("1 0 0\n");
    CHECK_THROWS_WITH_AS(load_dataset(duplicated, StructureKind::itemset),
                         doctest::Contains("duplicate item"), DatasetError);

    // Sequences may repeat and need no ordering.
    std::istringstream seq("1 3 2\n-1 0 0\n");
    CHECK_NOTHROW(load_dataset(seq, StructureKind::sequence));
}

TEST_CASE("malformed tokens and degenerate files are rejected") {
    std::istringstream bad_label("abc 1 2\n");
    CHECK_THROWS_WITH_AS(load_dataset(bad_label, StructureKind::itemset),
                         doctest::Contains("malformed label"), DatasetError);

    std::istringstream bad_id("1 2x\n");
    CHECK_THROWS_WITH_AS(load_dataset(bad_id, StructureKind::itemset),
                         doctest::Contains("malformed element id"), DatasetError);

    std::istringstream negative_id("1 -3\n");
    CHECK_THROWS_AS(load_dataset(negative_id, StructureKind::itemset), DatasetError);

    std::istringstream empty("# nothing here\n\n");
    CHECK_THROWS_WITH_AS(load_dataset(empty, StructureKind::itemset),
                         doctest::Contains("empty"), DatasetError);

    std::istringstream nonfinite("inf 1\n");
    CHECK_THROWS_WITH_AS(load_dataset(nonfinite, StructureKind::itemset),
                         doctest::Contains("non-finite"), DatasetError);
}

TEST_CASE("save and load round-trip exactly") {
    std::istringstream in("0.1 0 2\n-1.7976931348623157 1\n3 0 1 2\n");
    Dataset data = load_dataset(in, StructureKind::itemset);
    std::ostringstream out;
    save_dataset(data, out);
    std::istringstream back(out.str());
    Dataset again = load_dataset(back, StructureKind::itemset);
    REQUIRE(again.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(again.instances[i].label == data.instances[i].label);
        CHECK(again.instances[i].elements == data.instances[i].elements);
    }
    CHECK(again.alphabet == data.alphabet);
}

TEST_CASE("binary label validation names the offending instance") {
    std::istringstream ok("1 0\n-1 1\n");
    Dataset good = load_dataset(ok, StructureKind::itemset);
    CHECK_NOTHROW(require_binary_labels(good));

    std::istringstream bad("1 0\n0.5 1\n");
    Dataset mixed = load_dataset(bad, StructureKind::itemset);
    CHECK_THROWS_WITH_AS(require_binary_labels(mixed), doctest::Contains("instance 2"),
                         DatasetError);
}

TEST_CASE("structure kind names round-trip and reject junk") {
    CHECK(structure_from_string("itemset") == StructureKind::itemset);
    CHECK(structure_from_string("sequence") == StructureKind::sequence);
    CHECK(to_string(StructureKind::sequence) == "sequence");
    CHECK_THROWS_AS(structure_from_string("graph"), DatasetError);
}

TEST_CASE("missing files raise a dataset error naming the path") {
    CHECK_THROWS_WITH_AS(load_dataset_file("/nonexistent/path.data", StructureKind::itemset),
                         doctest::Contains("/nonexistent/path.data"), DatasetError);
}
