// SPDX-License-Identifier: Apache-2.0
#include "spp/path.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "spp/log.hpp"

namespace spp {

double lambda_max(const Dataset& data, const PatternTree& tree, const Loss& loss) {
    const std::vector<double> y = data.labels();
    double beta0;
    try {
        beta0 = loss.null_intercept(y);
    } catch (const std::exception& e) {
        log_line(LogLevel::warn,
                 std::string("labels admit no finite intercept-only model (") + e.what() +
                     "); the largest useful penalty is 0");
        return 0.0;
    }
    const std::size_t n = data.size();
    std::vector<double> margins(n, beta0);
    std::vector<double> grad;
    loss.gradient(y, margins, grad);
    double mean = 0.0;
    for (double g : grad) mean += g;
    mean /= static_cast<double>(n);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = -(grad[i] - mean);
    MaxAbsInner best = max_abs_inner(tree, centered);
    if (best.value == 0.0)
        log_line(LogLevel::warn,
                 "every pattern is uncorrelated with the labels at the null model; the "
                 "regularization path is degenerate");
    return best.value;
}

PathGrid make_grid(double lmax, int lambda_count, double lambda_ratio,
                   std::vector<double> kappas) {
    if (!(lmax > 0.0) || !std::isfinite(lmax))
        throw std::invalid_argument("grid needs a positive finite largest penalty");
    if (lambda_count < 1) throw std::invalid_argument("lambda_count must be >= 1");
    if (!(lambda_ratio > 0.0) || lambda_ratio > 1.0)
        throw std::invalid_argument("lambda_ratio must lie in (0, 1]");
    if (lambda_count > 1 && lambda_ratio == 1.0)
        throw std::invalid_argument("lambda_ratio must be < 1 for a multi-point grid");
    if (kappas.empty()) throw std::invalid_argument("at least one kappa is required");
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        if (!(kappas[i] >= 0.0) || !std::isfinite(kappas[i]))
            throw std::invalid_argument("kappa values must be finite and >= 0");
        if (i > 0 && kappas[i] <= kappas[i - 1])
            throw std::invalid_argument("kappa values must be strictly ascending");
    }
    PathGrid grid;
    grid.kappas = std::move(kappas);
    grid.lambdas.reserve(static_cast<std::size_t>(lambda_count));
    for (int i = 0; i < lambda_count; ++i) {
        double frac = lambda_count == 1
                          ? 0.0
                          : static_cast<double>(i) / static_cast<double>(lambda_count - 1);
        grid.lambdas.push_back(lmax * std::pow(lambda_ratio, frac));
    }
    return grid;
}

namespace {

std::vector<PathCell> sweep_grid(const Dataset& data, const PatternTree& tree, const Loss& loss,
                                 const PathGrid& grid, const Hyperparams& hp,
                                 bool multi_reference) {
    const std::size_t nl = grid.lambdas.size();
    const std::size_t nk = grid.kappas.size();
    std::vector<PathCell> cells;
    cells.reserve(nl * nk);  // no reallocation: warm-start pointers stay valid
    for (std::size_t li = 0; li < nl; ++li) {
        for (std::size_t ki = 0; ki < nk; ++ki) {
            std::vector<const ReferenceSolution*> refs;
            if (li > 0) refs.push_back(&cells[(li - 1) * nk + ki].solution);
            if (multi_reference && ki > 0) refs.push_back(&cells[li * nk + ki - 1].solution);
            FitResult r =
                fit(data, tree, loss, grid.lambdas[li], grid.kappas[ki], refs, hp);
            PathCell cell;
            cell.lambda_index = static_cast<int>(li) + 1;
            cell.kappa_index = static_cast<int>(ki) + 1;
            cell.lambda = grid.lambdas[li];
            cell.kappa = grid.kappas[ki];
            cell.reference_count = r.stats.reference_count;
            cell.solution = std::move(r.solution);
            cell.stats = std::move(r.stats);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

Dataset subset_of(const Dataset& data, const std::vector<int32_t>& idx) {
    Dataset out;
    out.kind = data.kind;
    out.instances.reserve(idx.size());
    int32_t max_id = -1;
    for (int32_t i : idx) {
        out.instances.push_back(data.instances[static_cast<std::size_t>(i)]);
        for (int32_t e : out.instances.back().elements) max_id = std::max(max_id, e);
    }
    out.alphabet = max_id + 1;
    return out;
}

std::vector<int32_t> complement_of(const std::vector<int32_t>& train, std::size_t n) {
    std::vector<int32_t> out;
    out.reserve(n - train.size());
    std::size_t t = 0;
    for (int32_t i = 0; i < static_cast<int32_t>(n); ++i) {
        if (t < train.size() && train[t] == i)
            ++t;
        else
            out.push_back(i);
    }
    return out;
}

double validation_error(const Loss& loss, const Dataset& heldout, const ReferenceSolution& sol) {
    const std::vector<double> z = margins_of(heldout, sol.beta, sol.beta0);
    const std::vector<double> yv = heldout.labels();
    double acc = 0.0;
    if (loss.kind() == LossKind::squared) {
        for (std::size_t i = 0; i < yv.size(); ++i) {
            double d = yv[i] - z[i];
            acc += d * d;
        }
    } else {
        for (std::size_t i = 0; i < yv.size(); ++i)
            if (yv[i] * z[i] <= 0.0) acc += 1.0;
    }
    return acc / static_cast<double>(yv.size());
}

}  // namespace

std::vector<PathCell> path_2d(const Dataset& data, const PatternTree& tree, const Loss& loss,
                              const PathGrid& grid, const Hyperparams& hp) {
    return sweep_grid(data, tree, loss, grid, hp, true);
}

std::vector<PathCell> path_2d_single_reference(const Dataset& data, const PatternTree& tree,
                                               const Loss& loss, const PathGrid& grid,
                                               const Hyperparams& hp) {
    return sweep_grid(data, tree, loss, grid, hp, false);
}

FoldPlan make_loocv_plan(std::size_t n) {
    if (n < 2) throw std::invalid_argument("leave-one-out needs at least two instances");
    FoldPlan plan;
    plan.train.reserve(n + 1);
    std::vector<int32_t> full(n);
    for (std::size_t i = 0; i < n; ++i) full[i] = static_cast<int32_t>(i);
    plan.train.push_back(full);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<int32_t> train;
        train.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            if (i != k) train.push_back(static_cast<int32_t>(i));
        plan.train.push_back(std::move(train));
    }
    return plan;
}

FoldPlan make_kfold_plan(std::size_t n, int folds) {
    if (folds < 2) throw std::invalid_argument("k-fold needs at least two folds");
    if (static_cast<std::size_t>(folds) > n)
        throw std::invalid_argument("more folds than instances");
    FoldPlan plan;
    plan.train.reserve(static_cast<std::size_t>(folds) + 1);
    std::vector<int32_t> full(n);
    for (std::size_t i = 0; i < n; ++i) full[i] = static_cast<int32_t>(i);
    plan.train.push_back(full);
    for (int k = 0; k < folds; ++k) {
        std::vector<int32_t> train;
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<int>(i % static_cast<std::size_t>(folds)) != k)
                train.push_back(static_cast<int32_t>(i));
        plan.train.push_back(std::move(train));
    }
    return plan;
}

std::vector<CvCell> cv_path(const Dataset& data, const Loss& loss, const FoldPlan& plan,
                            const std::vector<double>& lambdas, double kappa,
                            const Hyperparams& hp, int max_length, int threads) {
    const std::size_t n = data.size();
    if (plan.train.size() < 2) throw std::invalid_argument("fold plan has no validation folds");
    if (plan.train[0].size() != n)
        throw std::invalid_argument("fold plan was built for a different dataset size");
    if (lambdas.empty()) throw std::invalid_argument("empty lambda grid");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("kappa must be finite and >= 0");

    // Fold 1: the full dataset, warmed along the lambda grid.
    PatternTree tree_full(data, max_length);
    std::vector<CvCell> fold1;
    fold1.reserve(lambdas.size());
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        std::vector<const ReferenceSolution*> refs;
        if (j > 0) refs.push_back(&fold1[j - 1].solution);
        FitResult r = fit(data, tree_full, loss, lambdas[j], kappa, refs, hp);
        CvCell cell;
        cell.fold = 1;
        cell.lambda_index = static_cast<int>(j) + 1;
        cell.lambda = lambdas[j];
        cell.reference_count = r.stats.reference_count;
        cell.solution = std::move(r.solution);
        fold1.push_back(std::move(cell));
    }

    // Folds 2..K: each warms from the full-data solution at the same lambda
    // (its dual certificate is rebuilt against the reduced dataset inside
    // fit) plus the same fold's solution at the previous lambda.
    const std::size_t validation_folds = plan.train.size() - 1;
    auto run_fold = [&](std::size_t f) {  // f in [1, validation_folds], fold id f+1
        const std::vector<int32_t>& train = plan.train[f];
        Dataset sub = subset_of(data, train);
        Dataset held = subset_of(data, complement_of(train, n));
        PatternTree tree_f(sub, max_length);
        std::vector<CvCell> out;
        out.reserve(lambdas.size());
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            std::vector<const ReferenceSolution*> refs;
            refs.push_back(&fold1[j].solution);
            if (j > 0) refs.push_back(&out[j - 1].solution);
            FitResult r = fit(sub, tree_f, loss, lambdas[j], kappa, refs, hp);
            CvCell cell;
            cell.fold = static_cast<int>(f) + 1;
            cell.lambda_index = static_cast<int>(j) + 1;
            cell.lambda = lambdas[j];
            cell.reference_count = r.stats.reference_count;
            cell.validation = validation_error(loss, held, r.solution);
            cell.solution = std::move(r.solution);
            out.push_back(std::move(cell));
        }
        return out;
    };

    std::vector<std::vector<CvCell>> per_fold(validation_folds);
    int workers = std::max(1, std::min<int>(threads, static_cast<int>(validation_folds)));
    if (workers == 1) {
        for (std::size_t f = 1; f <= validation_folds; ++f) per_fold[f - 1] = run_fold(f);
    } else {
        std::atomic<std::size_t> next{1};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&]() {
            for (;;) {
                std::size_t f = next.fetch_add(1);
                if (f > validation_folds) return;
                try {
                    per_fold[f - 1] = run_fold(f);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    std::vector<CvCell> cells = std::move(fold1);
    cells.reserve(plan.train.size() * lambdas.size());
    for (std::vector<CvCell>& fc : per_fold)
        for (CvCell& c : fc) cells.push_back(std::move(c));
    return cells;
}

Selection select_hyperparams(const std::vector<CvCell>& cells,
                             const std::vector<double>& lambdas) {
    std::vector<double> sum(lambdas.size(), 0.0);
    std::vector<std::size_t> count(lambdas.size(), 0);
    for (const CvCell& c : cells) {
        if (c.fold == 1) continue;
        std::size_t j = static_cast<std::size_t>(c.lambda_index) - 1;
        if (j >= lambdas.size()) throw std::invalid_argument("cell outside the lambda grid");
        sum[j] += c.validation;
        ++count[j];
    }
    Selection best;
    bool found = false;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        if (count[j] == 0) continue;
        double mean = sum[j] / static_cast<double>(count[j]);
        if (!found || mean < best.mean_validation) {
            found = true;
            best.lambda_index = static_cast<int>(j) + 1;
            best.lambda = lambdas[j];
            best.mean_validation = mean;
        }
    }
    if (!found) throw std::invalid_argument("no validation cells to select from");
    return best;
}

}  // namespace spp
