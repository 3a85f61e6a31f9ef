// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <map>

#include "spp/loss.hpp"
#include "spp/tree.hpp"
#include "spp/tree_search.hpp"

namespace spp {

/// Elastic-Net penalty lambda * (||beta||_1 + kappa/2 ||beta||_2^2) over the
/// nonzero coefficients. lambda > 0, kappa >= 0.
double penalty_value(const std::map<Pattern, double>& beta, double lambda, double kappa);

/// Primal objective P(beta, beta0) = L_y(z) + penalty, for precomputed margins.
/// Throws std::runtime_error on non-finite values (objective overflow).
double primal_value(const Loss& loss, const std::vector<double>& y,
                    const std::vector<double>& margins, const std::map<Pattern, double>& beta,
                    double lambda, double kappa);

/// A feasible dual point and its exact dual objective value.
/// `omega` is the conjugate-penalty term Omega*(X^T alpha) =
/// sum_j ([|x_j^T alpha| - lambda]_+)^2 / (2 lambda kappa); it is identically
/// 0 for the shrunk candidate and for kappa = 0. value = dual_loss_part - omega.
struct DualPoint {
    std::vector<double> alpha;
    double value = -std::numeric_limits<double>::infinity();
    double scale = 1.0;  // shrink factor s applied to the centered gradient
    double omega = 0.0;
    std::size_t search_nodes = 0;  // tree nodes visited certifying the point
};

/// Map a primal iterate to a feasible dual point:
///   c = -grad L(margins); center c onto the hyperplane sum(alpha) = 0;
///   shrink by s = min(1, lambda / max_j |x_j^T c~|) so every pattern inner
///   product is within lambda (conjugate penalty exactly 0).
/// For kappa > 0 the conjugate penalty is finite everywhere, so the unshrunk
/// centered point with its Omega* tail (collected by a pruned tree traversal)
/// is also admissible; the candidate with the larger dual value is returned.
/// This keeps the shrunk certificate whenever it is the better point and lets
/// the gap close to 0 when kappa > 0 (where the optimal dual exceeds lambda
/// on active patterns). `incumbent` seeds the max-inner search.
DualPoint dual_scale(const Loss& loss, const std::vector<double>& y,
                     const std::vector<double>& margins, double lambda, double kappa,
                     const PatternTree& tree, double incumbent = 0.0);

/// Duality gap with a tolerance assert: values below -1e-12 * scale indicate
/// a broken dual certificate and throw.
double duality_gap(double primal, double dual);

/// A converged (or in-progress) primal-dual pair used as a screening
/// reference: sparse coefficients, intercept, feasible dual point, and the
/// certified objective values. alpha always sums to ~0 (|sum| <= 1e-9 n).
struct ReferenceSolution {
    std::map<Pattern, double> beta;
    double beta0 = 0.0;
    std::vector<double> alpha;
    double primal = std::numeric_limits<double>::infinity();
    double dual = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();

    /// Screening-ball radius sqrt(2 * gamma * gap) for the loss in use.
    double radius(const Loss& loss) const;
};

/// Margins z = beta0 + sum_j beta_j x_j, accumulated over pattern supports.
std::vector<double> margins_of(const Dataset& data, const std::map<Pattern, double>& beta,
                               double beta0);

/// Recompute P and D of a solution from scratch (fresh margins, fresh dual
/// certificate against the tree). Used by verification suites.
struct Certificate {
    double primal;
    double dual;
    double gap;
    double max_abs_inner;  // certified max pattern inner product of alpha
};
Certificate certify(const Loss& loss, const Dataset& data, const PatternTree& tree,
                    const ReferenceSolution& sol, double lambda, double kappa);

}  // namespace spp
