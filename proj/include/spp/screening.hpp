// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spp/objective.hpp"

namespace spp {

/// Signed mass of a 0/1 column against a dual vector, split by sign:
///   pos = sum_{i in rows, alpha_i > 0} alpha_i
///   neg = -sum_{i in rows, alpha_i < 0} alpha_i
/// so inner = pos - neg and max(pos, neg) bounds |inner| over all sub-supports.
struct ColumnMass {
    double pos = 0.0;
    double neg = 0.0;
    double inner() const { return pos - neg; }
    double bound() const { return pos > neg ? pos : neg; }
};
ColumnMass column_mass(const std::vector<int32_t>& rows, const std::vector<double>& alpha);

/// ||x - proj_1(x)|| for a 0/1 column with support size c over n instances:
/// sqrt(c - c^2/n). This is the screening width of the column (zero when the
/// column is proportional to the all-ones vector).
double centered_norm(std::size_t support, std::size_t n);

/// One screening ball B(alpha~, r) on the dual hyperplane sum(alpha) = 0.
struct Ball {
    const std::vector<double>* center = nullptr;
    double radius = 0.0;
};
inline Ball ball_of(const ReferenceSolution& ref, const Loss& loss) {
    return Ball{&ref.alpha, ref.radius(loss)};
}

/// Per-pattern screening score u_j = |x^T alpha~| + r ||x - proj_1(x)||.
/// u_j < lambda certifies beta*_j = 0 (pattern can be discarded).
double screening_score(const std::vector<int32_t>& rows, std::size_t n, const Ball& ball);

/// Subtree pruning score v_j = max(pos, neg) + r sqrt(|rows|). It dominates
/// the screening score of every descendant pattern, so v_j < lambda discards
/// the whole subtree. Never smaller than screening_score of the same node.
double pruning_score(const std::vector<int32_t>& rows, const Ball& ball);

/// Geometry of the intersection of two screening balls. When the centers and
/// radii admit a proper lens, the boundary circle lies on the reduced sphere
/// S(center', r') inside the plane orthogonal to delta = c1 - c2 through
/// center'; `threshold1/2` are the cone constants deciding whether a column's
/// constrained maximizer sits on ball 1 alone, ball 2 alone, or the lens rim.
/// Degenerate inputs (coincident centers, one ball inside the other, or a
/// numerically empty intersection) select a single-ball fallback instead.
struct BallIntersection {
    enum class Mode { lens, use_ball1, use_ball2 };
    Mode mode = Mode::lens;
    bool warned_disjoint = false;  // fallback caused by round-off only

    std::vector<double> delta;  // c1 - c2
    double delta_sq = 0.0;
    double t = 0.0;              // reduced center = t c1 + (1-t) c2
    std::vector<double> center;  // the reduced center itself
    double rprime = 0.0;         // reduced radius sqrt(r2^2 - t^2 ||delta||^2)
    double threshold1 = 0.0;     // (r2^2 - r1^2 - ||delta||^2) / (2 r1)
    double threshold2 = 0.0;     // (r2^2 - r1^2 + ||delta||^2) / (2 r2)
};

BallIntersection ball_intersection(const std::vector<double>& c1, double r1,
                                   const std::vector<double>& c2, double r2);

/// Two-reference screening score: the exact maximum of |x^T alpha| over
/// B1 ∩ B2 ∩ {sum(alpha)=0}, evaluated per side (x and -x) through the
/// three-case analysis keyed by the cone thresholds. Falls back to
/// min(u1, u2) in degenerate geometry. Columns proportional to the all-ones
/// vector take the lens branch with both projection terms zero.
/// Always <= min(u1, u2) + 1e-9.
double multi_screening_score(const std::vector<int32_t>& rows, std::size_t n, const Ball& b1,
                             const Ball& b2, const BallIntersection& lens);

/// Two-reference pruning score: min of the single-reference pruning scores.
double multi_pruning_score(const std::vector<int32_t>& rows, const Ball& b1, const Ball& b2);

/// One surviving feature column of a traversal.
struct ActiveColumn {
    Pattern pattern;
    std::vector<int32_t> rows;
};

struct TraverseStats {
    std::size_t nodes_visited = 0;   // children scored
    std::size_t nodes_pruned = 0;    // subtrees cut by the pruning score
    std::size_t screened_out = 0;    // visited nodes rejected by the screening score
    std::size_t kept = 0;            // patterns admitted to the active set
};

/// Safe-pattern-pruning traversal: walk the tree depth-first; cut a subtree
/// when its pruning score (min over references) is below lambda; admit a
/// surviving pattern when its screening score (two-ball score when two
/// references are given) is at least lambda. Ties at lambda keep the pattern.
/// Columns are returned in canonical preorder.
std::vector<ActiveColumn> spp_traverse(const PatternTree& tree, double lambda,
                                       const std::vector<Ball>& refs, TraverseStats& stats);

}  // namespace spp
