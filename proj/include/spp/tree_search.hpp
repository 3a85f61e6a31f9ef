// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "spp/tree.hpp"

namespace spp {

/// Result of the exact branch-and-bound search for the pattern column with
/// the largest absolute inner product against a dual vector.
struct MaxAbsInner {
    double value = 0.0;     // max_j |x_{:j}^T alpha| over all patterns
    Pattern argmax;         // a pattern attaining it (first found wins ties)
    std::size_t nodes = 0;  // tree nodes evaluated
};

/// Exact maximum of |x_{:j}^T alpha| over every pattern in the tree.
/// Subtrees are cut with the one-sided bound
///   max(sum_{i in rows, alpha_i>0} alpha_i, -sum_{i in rows, alpha_i<0} alpha_i),
/// which dominates |x^T alpha| for every descendant because descendant
/// supports are subsets. Children are explored in descending bound order so
/// the incumbent tightens early. `incumbent` seeds the search with any known
/// lower bound (e.g. the max over the current active set).
MaxAbsInner max_abs_inner(const PatternTree& tree, const std::vector<double>& alpha,
                          double incumbent = 0.0);

/// All pattern inner products whose magnitude strictly exceeds `threshold`,
/// found by the same bound (subtree skipped when its bound <= threshold).
/// Used to evaluate the conjugate penalty term of the dual objective without
/// materializing the feature space. `max_abs` is the exact global maximum
/// whenever the tail is non-empty; if every pattern is at or below the
/// threshold it is merely a lower bound (callers only need "<= threshold").
struct AbsInnerTail {
    std::vector<double> values;  // |x^T alpha| for every pattern above threshold
    double max_abs = 0.0;
    std::size_t nodes = 0;
};

AbsInnerTail collect_abs_inner_above(const PatternTree& tree, const std::vector<double>& alpha,
                                     double threshold);

}  // namespace spp
