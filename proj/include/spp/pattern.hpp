// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "spp/dataset.hpp"

namespace spp {

/// A candidate feature: a non-empty sub-pattern of the input structures.
/// Itemset elements are strictly increasing; sequence elements are an ordered
/// token string. The empty pattern is not a feature (its column is all-ones
/// and is absorbed by the unpenalized intercept).
struct Pattern {
    StructureKind kind = StructureKind::itemset;
    std::vector<int32_t> elements;

    std::size_t length() const { return elements.size(); }
    bool empty() const { return elements.empty(); }

    friend bool operator==(const Pattern&, const Pattern&) = default;
    friend auto operator<=>(const Pattern& a, const Pattern& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        return a.elements <=> b.elements;
    }
};

/// Render a pattern: itemsets as "{1,3,5}", sequences as "2->2->7".
std::string format_pattern(const Pattern& pattern);

/// Inverse of format_pattern. Throws DatasetError on malformed text.
Pattern parse_pattern(const std::string& text, StructureKind kind);

/// Containment test used for prediction and report verification: subset for
/// itemsets (both sides strictly increasing), subsequence (order-preserving,
/// gaps allowed) for sequences. The empty pattern occurs in every instance.
bool occurs(const Pattern& pattern, const Instance& instance);

/// 0/1 column of a pattern restricted to its support: the ascending list of
/// instance indices containing the pattern.
std::vector<int32_t> support_of(const Pattern& pattern, const Dataset& data);

}  // namespace spp
