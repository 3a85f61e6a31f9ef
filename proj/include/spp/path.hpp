// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "spp/solver.hpp"

namespace spp {

/// Largest lambda with an all-zero optimal coefficient vector: the maximum
/// absolute pattern inner product of the centered negative loss gradient at
/// the null model (intercept-only fit). Independent of kappa. Degenerate
/// inputs (constant regression labels, single-class logistic labels) yield 0
/// with a warning.
double lambda_max(const Dataset& data, const PatternTree& tree, const Loss& loss);

/// The 2-D regularization grid: lambdas log-spaced from lambda_max down to
/// ratio * lambda_max (K points, strictly decreasing), kappas as given
/// (ascending, non-negative; the default list starts at 0).
struct PathGrid {
    std::vector<double> lambdas;
    std::vector<double> kappas;
};
PathGrid make_grid(double lmax, int lambda_count, double lambda_ratio,
                   std::vector<double> kappas);

/// One solved cell of a 2-D path (or one fold/lambda cell of a CV run).
struct PathCell {
    int lambda_index = 0;  // 1-based
    int kappa_index = 0;   // 1-based
    double lambda = 0.0;
    double kappa = 0.0;
    std::size_t reference_count = 0;
    ReferenceSolution solution;
    FitStats stats;
};

/// Sweep the grid visiting (l1,k1),(l1,k2),...,(l1,kK'),(l2,k1),... At cell
/// (k,k') the warm-start references are the solutions at (k-1,k') and
/// (k,k'-1) when those exist (two in the interior, one on the edges, none at
/// the corner, which starts from the null model). Cells are returned in visit
/// order, K * K' of them.
std::vector<PathCell> path_2d(const Dataset& data, const PatternTree& tree, const Loss& loss,
                              const PathGrid& grid, const Hyperparams& hp);

/// Single-reference variant used for traversal-effectiveness comparisons:
/// identical visit order but each cell is warmed only by the previous lambda
/// at the same kappa.
std::vector<PathCell> path_2d_single_reference(const Dataset& data, const PatternTree& tree,
                                               const Loss& loss, const PathGrid& grid,
                                               const Hyperparams& hp);

/// Cross-validation plan. train[0] is always the full index set [0, n);
/// train[k] for k >= 1 are the per-fold training subsets (ascending indices).
/// Held-out instances of fold k are the complement of train[k].
struct FoldPlan {
    std::vector<std::vector<int32_t>> train;
};
FoldPlan make_loocv_plan(std::size_t n);
FoldPlan make_kfold_plan(std::size_t n, int folds);  // round-robin assignment

struct CvCell {
    int fold = 0;          // 1-based; fold 1 is the full dataset
    int lambda_index = 0;  // 1-based
    double lambda = 0.0;
    std::size_t reference_count = 0;
    ReferenceSolution solution;
    double validation = std::numeric_limits<double>::quiet_NaN();  // NaN for fold 1
};

/// Warm-started cross-validation over the lambda grid at a fixed kappa
/// (Algorithm: solve fold 1 — the full data — across all lambdas first; fold
/// k at lambda_j then warms from {fold-1 solution at lambda_j, fold-k
/// solution at lambda_{j-1}}; the fold-1 reference is re-dual-scaled against
/// the reduced dataset). Validation is mean squared error for regression and
/// misclassification rate for classification, on each fold's held-out
/// instances. `threads` > 1 runs folds 2..K concurrently after the fold-1
/// barrier. Cells are ordered fold-major, fold 1 first.
std::vector<CvCell> cv_path(const Dataset& data, const Loss& loss, const FoldPlan& plan,
                            const std::vector<double>& lambdas, double kappa,
                            const Hyperparams& hp, int max_length, int threads = 1);

/// Fold-averaged validation error per lambda; returns the index (1-based) and
/// value of the minimizer, ties resolved toward the larger lambda (smaller
/// index).
struct Selection {
    int lambda_index = 1;
    double lambda = 0.0;
    double mean_validation = 0.0;
};
Selection select_hyperparams(const std::vector<CvCell>& cells,
                             const std::vector<double>& lambdas);

}  // namespace spp
