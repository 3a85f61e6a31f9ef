// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spp/pattern.hpp"

namespace spp {

/// A node of the pattern-enumeration tree together with its projected
/// database. `rows` is the ascending support (instance indices). For
/// sequences, `positions[i]` is the continuation offset into instance
/// `rows[i]`: the index just past the first occurrence of the pattern,
/// so children are generated by scanning suffixes only. For itemsets the
/// projection state is simply the last (largest) item id.
struct TreeNode {
    Pattern pattern;
    std::vector<int32_t> rows;
    std::vector<int32_t> positions;  // sequences only, parallel to rows

    std::size_t depth() const { return pattern.length(); }
    std::size_t support_size() const { return rows.size(); }
};

/// What a traversal visitor wants done with the subtree under a node.
enum class VisitAction { expand, prune };

/// Prefix-tree over all sub-patterns of a dataset up to max_length, expanded
/// lazily PrefixSpan-style: each child's projected database is derived from
/// the parent's projection alone, never by re-scanning the whole dataset.
/// Children are generated in ascending element order, so a full traversal
/// enumerates patterns in canonical depth-first preorder; every reachable
/// pattern appears exactly once.
class PatternTree {
public:
    PatternTree(const Dataset& data, int max_length);

    const Dataset& data() const { return *data_; }
    int max_length() const { return max_length_; }

    /// Root node: empty pattern supported by every instance.
    TreeNode root() const;

    /// Children of `node` (ascending element order). Their supports are
    /// sub-lists of node.rows; expansion stops at max_length.
    std::vector<TreeNode> expand(const TreeNode& node) const;

    /// Depth-first preorder over all non-root nodes. The visitor decides per
    /// node whether its subtree is expanded or pruned. Returns the number of
    /// nodes visited.
    std::size_t traverse(const std::function<VisitAction(const TreeNode&)>& visit) const;

    /// Materialize every non-root node in canonical preorder. Throws
    /// std::runtime_error if more than `cap` nodes would be produced.
    std::vector<TreeNode> enumerate_all(std::size_t cap = 1000000) const;

private:
    const Dataset* data_;
    int max_length_;
};

}  // namespace spp
