// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "spp/screening.hpp"

namespace spp {

/// Knobs shared across fits. `dense_every` / `dense_cycles` encode the
/// dynamic-screening cadence: every other epoch for the first `dense_cycles`
/// screens, then every tenth epoch. `multi_budget` is the number of epochs
/// both warm-start references stay live before only the smaller-gap one
/// survives.
struct Hyperparams {
    double epsilon = 1e-4;
    int dense_cycles = 5;      // T
    int multi_budget = 1;      // M
    long max_epochs = 400000;  // hard cap; exceeding it is an error
};

/// True when dynamic screening runs after epoch `epoch` (1-based): epochs
/// 2,4,...,2T then every 10th epoch.
bool screening_scheduled(long epoch, int dense_cycles);

struct TraceRecord {
    long epoch;
    double primal;
    double dual;
    double gap;
    std::size_t active;
};

struct FitStats {
    long epochs = 0;
    long coordinate_changes = 0;  // coefficient updates that changed a value
    std::size_t dynamic_removed = 0;
    TraverseStats traverse;
    std::vector<TraceRecord> trace;  // per epoch, for the surviving reference
    std::size_t reference_count = 0;  // warm-start references supplied (0 = cold)
    std::vector<Pattern> active_patterns;  // safe active set at termination
    double wall_ms = 0.0;
};

struct FitResult {
    ReferenceSolution solution;
    FitStats stats;
};

/// Error carrying the best iterate when the epoch cap is exhausted.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::string message, FitResult best)
        : std::runtime_error(std::move(message)), best_(std::move(best)) {}
    const FitResult& best() const { return best_; }

private:
    FitResult best_;
};

/// Solve one Elastic-Net cell (lambda, kappa) over the pattern feature space.
///
/// Flow: dual-scale each warm-start reference against this cell; run the
/// pruning traversal to get the safe active set; then cyclic coordinate
/// descent (soft-thresholded exact step for squared loss; for logistic a
/// proximal Newton candidate with the exact support curvature, guarded by
/// the always-descending 1/4-bound candidate) plus a guarded intercept
/// update per epoch, with each
/// reference keeping its best dual point so the reported gap never increases.
/// Dynamic screening filters the active set on the schedule using the current
/// reference(s); with two references both are swept and multi-screened until
/// the multi budget is spent. Terminates when the smallest reference gap
/// drops below epsilon; that reference is returned.
///
/// refs may hold zero (cold start from the null model), one, or two warm
/// solutions. Determinism: no randomness anywhere; fixed input yields a
/// bit-identical iterate sequence.
FitResult fit(const Dataset& data, const PatternTree& tree, const Loss& loss, double lambda,
              double kappa, const std::vector<const ReferenceSolution*>& refs,
              const Hyperparams& hp);

}  // namespace spp
