// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "spp/objective.hpp"

namespace spp {
namespace oracle {

/// The feature space materialized: every pattern column up to the tree's
/// length cap, in canonical preorder. Intended for small verification
/// problems only (throws beyond `cap` columns).
struct DenseProblem {
    const Dataset* data = nullptr;
    std::vector<Pattern> patterns;
    std::vector<std::vector<int32_t>> columns;  // supports, parallel to patterns

    std::size_t dimension() const { return patterns.size(); }
};
DenseProblem build_dense(const Dataset& data, int max_length, std::size_t cap = 1000000);

struct DenseSolution {
    std::vector<double> beta;  // dense, parallel to problem.patterns
    double beta0 = 0.0;
    std::vector<double> alpha;
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    long sweeps = 0;
};

/// Reference solver: cyclic coordinate descent over *all* columns with an
/// intercept step each sweep, cold-started, no screening of any kind, run
/// until the duality gap (computed densely) is at most eps. Shares only the
/// Loss value/gradient/conjugate code with the production solver. Throws if
/// the sweep cap is exhausted before reaching eps.
DenseSolution dense_fit(const DenseProblem& problem, const Loss& loss, double lambda,
                        double kappa, double eps = 1e-8, long max_sweeps = 2000000);

/// Maximum of x^T alpha over B(c1,r1) ∩ B(c2,r2) ∩ {sum=0}, computed by
/// restricting both balls to the hyperplane and minimizing the two-multiplier
/// Lagrangian dual, which reduces to a one-dimensional problem solved by a
/// dense scan plus ternary refinement (`restarts` scales the scan density;
/// `rng` is kept for call-site compatibility). Accurate to well below 1e-8 at
/// the problem scales used in tests. Feasibility is certified separately with
/// Dykstra projections; throws std::runtime_error when the intersection is
/// (numerically) empty.
double constrained_max(const std::vector<double>& x, const std::vector<double>& c1, double r1,
                       const std::vector<double>& c2, double r2, std::mt19937_64& rng,
                       int restarts = 100);

}  // namespace oracle
}  // namespace spp
