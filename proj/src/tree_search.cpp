// SPDX-License-Identifier: Apache-2.0
#include "spp/tree_search.hpp"

#include <algorithm>

namespace spp {

namespace {

struct Mass {
    double pos = 0.0;
    double neg = 0.0;
};

Mass mass_of(const std::vector<int32_t>& rows, const std::vector<double>& alpha) {
    Mass m;
    for (int32_t i : rows) {
        double a = alpha[i];
        if (a > 0.0)
            m.pos += a;
        else
            m.neg -= a;
    }
    return m;
}

}  // namespace

MaxAbsInner max_abs_inner(const PatternTree& tree, const std::vector<double>& alpha,
                          double incumbent) {
    MaxAbsInner best;
    best.value = incumbent;

    // Explicit best-first-within-siblings DFS: score all children of a node,
    // recurse into them in descending bound order so the incumbent tightens
    // as early as possible.
    struct Frame {
        TreeNode node;
        double bound;
    };
    std::vector<Frame> stack;

    auto push_children = [&](const TreeNode& parent) {
        auto children = tree.expand(parent);
        std::vector<Frame> scored;
        scored.reserve(children.size());
        for (auto& child : children) {
            ++best.nodes;
            Mass m = mass_of(child.rows, alpha);
            double inner = m.pos - m.neg;
            if (std::abs(inner) > best.value) {
                best.value = std::abs(inner);
                best.argmax = child.pattern;
            }
            double bound = std::max(m.pos, m.neg);
            scored.push_back(Frame{std::move(child), bound});
        }
        // ascending here; the stack pops from the back, so descending overall
        std::sort(scored.begin(), scored.end(),
                  [](const Frame& a, const Frame& b) { return a.bound < b.bound; });
        for (auto& f : scored) stack.push_back(std::move(f));
    };

    push_children(tree.root());
    while (!stack.empty()) {
        Frame top = std::move(stack.back());
        stack.pop_back();
        if (top.bound <= best.value) continue;  // no descendant can beat the incumbent
        push_children(top.node);
    }
    return best;
}

AbsInnerTail collect_abs_inner_above(const PatternTree& tree, const std::vector<double>& alpha,
                                     double threshold) {
    AbsInnerTail tail;
    tail.nodes = tree.traverse([&](const TreeNode& node) {
        Mass m = mass_of(node.rows, alpha);
        double abs_inner = std::abs(m.pos - m.neg);
        if (abs_inner > threshold) tail.values.push_back(abs_inner);
        if (abs_inner > tail.max_abs) tail.max_abs = abs_inner;
        // descendants are bounded by max(pos, neg); below the threshold none
        // can contribute
        return std::max(m.pos, m.neg) > threshold ? VisitAction::expand : VisitAction::prune;
    });
    return tail;
}

}  // namespace spp
