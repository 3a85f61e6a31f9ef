// SPDX-License-Identifier: Apache-2.0
#include "spp/tree.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace spp {

PatternTree::PatternTree(const Dataset& data, int max_length) : data_(&data), max_length_(max_length) {
    if (max_length < 1) throw std::invalid_argument("pattern tree max_length must be >= 1");
}

TreeNode PatternTree::root() const {
    TreeNode node;
    node.pattern.kind = data_->kind;
    const auto n = static_cast<int32_t>(data_->size());
    node.rows.reserve(n);
    for (int32_t i = 0; i < n; ++i) node.rows.push_back(i);
    if (data_->kind == StructureKind::sequence) node.positions.assign(n, 0);
    return node;
}

std::vector<TreeNode> PatternTree::expand(const TreeNode& node) const {
    std::vector<TreeNode> children;
    if (static_cast<int>(node.depth()) >= max_length_) return children;

    // Bucket the parent's projected rows by the extending element. std::map
    // keeps children in ascending element order for canonical enumeration.
    if (data_->kind == StructureKind::itemset) {
        const int32_t last = node.pattern.elements.empty() ? -1 : node.pattern.elements.back();
        std::map<int32_t, std::vector<int32_t>> buckets;
        for (int32_t row : node.rows) {
            const auto& items = data_->instances[row].elements;
            // items are strictly increasing; extensions must exceed the last id
            for (auto it = std::upper_bound(items.begin(), items.end(), last); it != items.end();
                 ++it)
                buckets[*it].push_back(row);
        }
        children.reserve(buckets.size());
        for (auto& [item, rows] : buckets) {
            TreeNode child;
            child.pattern = node.pattern;
            child.pattern.elements.push_back(item);
            child.rows = std::move(rows);
            children.push_back(std::move(child));
        }
    } else {
        // PrefixSpan pseudo-projection: scan each suffix once; the child for
        // token e continues just past the first occurrence of e.
        std::map<int32_t, std::pair<std::vector<int32_t>, std::vector<int32_t>>> buckets;
        for (std::size_t k = 0; k < node.rows.size(); ++k) {
            const int32_t row = node.rows[k];
            const auto& toks = data_->instances[row].elements;
            for (std::size_t j = node.positions[k]; j < toks.size(); ++j) {
                auto& [rows, positions] = buckets[toks[j]];
                if (!rows.empty() && rows.back() == row) continue;  // first occurrence only
                rows.push_back(row);
                positions.push_back(static_cast<int32_t>(j + 1));
            }
        }
        children.reserve(buckets.size());
        for (auto& [tok, rp] : buckets) {
            TreeNode child;
            child.pattern = node.pattern;
            child.pattern.elements.push_back(tok);
            child.rows = std::move(rp.first);
            child.positions = std::move(rp.second);
            children.push_back(std::move(child));
        }
    }
    return children;
}

std::size_t PatternTree::traverse(const std::function<VisitAction(const TreeNode&)>& visit) const {
    std::size_t visited = 0;
    std::vector<TreeNode> stack;
    {
        auto top = expand(root());
        for (auto it = top.rbegin(); it != top.rend(); ++it) stack.push_back(std::move(*it));
    }
    while (!stack.empty()) {
        TreeNode node = std::move(stack.back());
        stack.pop_back();
        ++visited;
        if (visit(node) == VisitAction::prune) continue;
        auto children = expand(node);
        for (auto it = children.rbegin(); it != children.rend(); ++it)
            stack.push_back(std::move(*it));
    }
    return visited;
}

std::vector<TreeNode> PatternTree::enumerate_all(std::size_t cap) const {
    std::vector<TreeNode> out;
    traverse([&](const TreeNode& node) {
        if (out.size() >= cap)
            throw std::runtime_error("pattern enumeration exceeded cap of " + std::to_string(cap));
        out.push_back(node);
        return VisitAction::expand;
    });
    return out;
}

}  // namespace spp
