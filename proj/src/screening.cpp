// SPDX-License-Identifier: Apache-2.0
#include "spp/screening.hpp"

#include <cmath>
#include <stdexcept>

#include "spp/log.hpp"

namespace spp {

ColumnMass column_mass(const std::vector<int32_t>& rows, const std::vector<double>& alpha) {
    ColumnMass m;
    for (int32_t i : rows) {
        double a = alpha[i];
        if (a > 0.0)
            m.pos += a;
        else
            m.neg -= a;
    }
    return m;
}

double centered_norm(std::size_t support, std::size_t n) {
    double c = static_cast<double>(support);
    double v = c - c * c / static_cast<double>(n);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

double screening_score(const std::vector<int32_t>& rows, std::size_t n, const Ball& ball) {
    ColumnMass m = column_mass(rows, *ball.center);
    return std::abs(m.inner()) + ball.radius * centered_norm(rows.size(), n);
}

double pruning_score(const std::vector<int32_t>& rows, const Ball& ball) {
    ColumnMass m = column_mass(rows, *ball.center);
    return m.bound() + ball.radius * std::sqrt(static_cast<double>(rows.size()));
}

BallIntersection ball_intersection(const std::vector<double>& c1, double r1,
                                   const std::vector<double>& c2, double r2) {
    if (c1.size() != c2.size()) throw std::invalid_argument("ball centers of different dimension");
    BallIntersection out;
    out.delta.resize(c1.size());
    double dsq = 0.0;
    for (std::size_t i = 0; i < c1.size(); ++i) {
        out.delta[i] = c1[i] - c2[i];
        dsq += out.delta[i] * out.delta[i];
    }
    out.delta_sq = dsq;
    double dist = std::sqrt(dsq);

    // Degenerate geometry keeps a single ball instead of the lens.
    if (dist <= 1e-12) {
        out.mode = r1 <= r2 ? BallIntersection::Mode::use_ball1 : BallIntersection::Mode::use_ball2;
        return out;
    }
    if (r2 >= r1 + dist) {  // ball 1 inside ball 2
        out.mode = BallIntersection::Mode::use_ball1;
        return out;
    }
    if (r1 >= r2 + dist) {  // ball 2 inside ball 1
        out.mode = BallIntersection::Mode::use_ball2;
        return out;
    }
    if (dist > r1 + r2) {
        // Both balls provably contain the dual optimum, so a truly empty
        // intersection cannot happen; this is round-off. Keep the smaller ball.
        out.mode = r1 <= r2 ? BallIntersection::Mode::use_ball1 : BallIntersection::Mode::use_ball2;
        out.warned_disjoint = true;
        log_line(LogLevel::warn, "screening balls numerically disjoint (|c1-c2| " +
                                     std::to_string(dist) + " > r1+r2 " + std::to_string(r1 + r2) +
                                     "); falling back to the smaller ball");
        return out;
    }

    out.mode = BallIntersection::Mode::lens;
    double a = r2 * r2 - r1 * r1;
    out.t = 0.5 * (1.0 + a / dsq);
    out.center.resize(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i)
        out.center[i] = out.t * c1[i] + (1.0 - out.t) * c2[i];
    double rp_sq = r2 * r2 - out.t * out.t * dsq;
    out.rprime = rp_sq > 0.0 ? std::sqrt(rp_sq) : 0.0;
    out.threshold1 = (a - dsq) / (2.0 * r1);
    out.threshold2 = (a + dsq) / (2.0 * r2);
    return out;
}

namespace {

// One-sided lens maximum of x^T alpha for the signed inner products
// (sign = +1 evaluates x, sign = -1 evaluates -x).
double lens_side_max(double sign, double inner1, double inner2, double inner_delta,
                     double inner_reduced, double width, double residual, const Ball& b1,
                     const Ball& b2, const BallIntersection& lens) {
    double q = sign * inner_delta / width;
    if (q <= lens.threshold1) return sign * inner1 + b1.radius * width;
    if (q >= lens.threshold2) return sign * inner2 + b2.radius * width;
    return sign * inner_reduced + lens.rprime * residual;
}

}  // namespace

double multi_screening_score(const std::vector<int32_t>& rows, std::size_t n, const Ball& b1,
                             const Ball& b2, const BallIntersection& lens) {
    if (lens.mode != BallIntersection::Mode::lens) {
        // Degenerate geometry: each ball alone bounds the intersection, so
        // the smaller single-reference score is the tightest safe value; for
        // a contained ball it coincides with that ball's exact maximum.
        double u1 = screening_score(rows, n, b1);
        double u2 = screening_score(rows, n, b2);
        return u1 < u2 ? u1 : u2;
    }

    double inner1 = column_mass(rows, *b1.center).inner();
    double inner2 = column_mass(rows, *b2.center).inner();
    double inner_delta = inner1 - inner2;                                // x^T (c1 - c2)
    double inner_reduced = lens.t * inner1 + (1.0 - lens.t) * inner2;    // x^T reduced center
    double width = centered_norm(rows.size(), n);

    if (width <= 0.0) {
        // Column proportional to the all-ones vector: zero screening width,
        // both projection terms vanish; the lens value is just the center term.
        return std::abs(inner_reduced);
    }

    double c = static_cast<double>(rows.size());
    double resid_sq =
        c - c * c / static_cast<double>(n) - inner_delta * inner_delta / lens.delta_sq;
    double residual = resid_sq > 0.0 ? std::sqrt(resid_sq) : 0.0;

    double plus = lens_side_max(+1.0, inner1, inner2, inner_delta, inner_reduced, width, residual,
                                b1, b2, lens);
    double minus = lens_side_max(-1.0, inner1, inner2, inner_delta, inner_reduced, width, residual,
                                 b1, b2, lens);
    return plus > minus ? plus : minus;
}

double multi_pruning_score(const std::vector<int32_t>& rows, const Ball& b1, const Ball& b2) {
    double v1 = pruning_score(rows, b1);
    double v2 = pruning_score(rows, b2);
    return v1 < v2 ? v1 : v2;
}

std::vector<ActiveColumn> spp_traverse(const PatternTree& tree, double lambda,
                                       const std::vector<Ball>& refs, TraverseStats& stats) {
    if (refs.empty() || refs.size() > 2)
        throw std::invalid_argument("spp_traverse expects one or two references");
    const std::size_t n = tree.data().size();
    std::vector<ActiveColumn> active;

    BallIntersection lens;
    if (refs.size() == 2) lens = ball_intersection(*refs[0].center, refs[0].radius,
                                                   *refs[1].center, refs[1].radius);

    stats.nodes_visited = tree.traverse([&](const TreeNode& node) {
        double prune_score = refs.size() == 1 ? pruning_score(node.rows, refs[0])
                                              : multi_pruning_score(node.rows, refs[0], refs[1]);
        if (prune_score < lambda) {
            ++stats.nodes_pruned;
            return VisitAction::prune;
        }
        double screen_score = refs.size() == 1
                                  ? screening_score(node.rows, n, refs[0])
                                  : multi_screening_score(node.rows, n, refs[0], refs[1], lens);
        if (screen_score >= lambda) {
            active.push_back(ActiveColumn{node.pattern, node.rows});
            ++stats.kept;
        } else {
            ++stats.screened_out;
        }
        return VisitAction::expand;
    });
    return active;
}

}  // namespace spp
