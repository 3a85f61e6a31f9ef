// SPDX-License-Identifier: Apache-2.0
#include "spp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "spp/log.hpp"

namespace spp {

bool screening_scheduled(long epoch, int dense_cycles) {
    if (epoch < 2) return false;
    if (epoch <= 2L * dense_cycles) return epoch % 2 == 0;
    return epoch % 10 == 0;
}

namespace {

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

double sigmoid(double u) {
    if (u >= 0.0) {
        double e = std::exp(-u);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(u);
    return e / (1.0 + e);
}

// log(1 + exp(u)), overflow-safe for large |u|.
double log1p_exp(double u) {
    return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

struct Column {
    Pattern pattern;
    std::vector<int32_t> rows;
    double norm_sq = 0.0;  // 0/1 column, so ||x||^2 = |rows|
};

// One warm-start lineage: its own primal iterate plus the best dual
// certificate seen for it so far.
struct Track {
    std::vector<double> coef;  // parallel to the active columns
    double beta0 = 0.0;
    std::vector<double> margins;
    std::vector<double> best_alpha;
    double best_dual = -std::numeric_limits<double>::infinity();
    double primal = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
};

double penalty_of(const std::vector<double>& coef, double lambda, double kappa) {
    double l1 = 0.0, l2 = 0.0;
    for (double c : coef) {
        l1 += std::abs(c);
        l2 += c * c;
    }
    return lambda * (l1 + 0.5 * kappa * l2);
}

double primal_of(const Loss& loss, const std::vector<double>& y, const Track& track,
                 double lambda, double kappa) {
    double p = loss.value(y, track.margins) + penalty_of(track.coef, lambda, kappa);
    if (!std::isfinite(p)) throw std::runtime_error("primal objective overflowed");
    return p;
}

void rebuild_margins(Track& track, const std::vector<Column>& columns, std::size_t n) {
    track.margins.assign(n, track.beta0);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        double c = track.coef[j];
        if (c == 0.0) continue;
        for (int32_t i : columns[j].rows) track.margins[i] += c;
    }
}

void update_intercept(const Loss& loss, const std::vector<double>& y, Track& track) {
    const std::size_t n = y.size();
    if (loss.kind() == LossKind::squared) {
        double mean_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean_res += y[i] - track.margins[i];
        mean_res /= static_cast<double>(n);
        if (mean_res == 0.0) return;
        track.beta0 += mean_res;
        for (double& z : track.margins) z += mean_res;
        return;
    }
    // Logistic: one guarded Newton step on the intercept alone.
    double g = 0.0, h = 0.0, val0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = sigmoid(-y[i] * track.margins[i]);
        g += -y[i] * s;
        h += s * (1.0 - s);
        val0 += log1p_exp(-y[i] * track.margins[i]);
    }
    if (h <= 0.0) return;
    double delta = -g / h;
    if (delta == 0.0) return;
    auto value_at = [&](double d) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += log1p_exp(-y[i] * (track.margins[i] + d));
        return v;
    };
    for (int halvings = 0; halvings < 60; ++halvings) {
        if (value_at(delta) <= val0) break;
        delta *= 0.5;
    }
    if (value_at(delta) > val0) return;  // keep the current intercept
    track.beta0 += delta;
    for (double& z : track.margins) z += delta;
}

// One full cyclic sweep over the active columns. Returns the number of
// coefficients whose value changed.
long sweep(const Loss& loss, const std::vector<double>& y, const std::vector<Column>& columns,
           double lambda, double kappa, Track& track) {
    long changes = 0;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const Column& col = columns[j];
        double old = track.coef[j];
        double next;
        if (loss.kind() == LossKind::squared) {
            double inner_res = 0.0;
            for (int32_t i : col.rows) inner_res += y[i] - track.margins[i];
            next = soft_threshold(old * col.norm_sq + inner_res, lambda) /
                   (col.norm_sq + lambda * kappa);
        } else {
            double grad = 0.0, curv = 0.0;
            for (int32_t i : col.rows) {
                double s = sigmoid(-y[i] * track.margins[i]);
                grad += -y[i] * s;
                curv += s * (1.0 - s);
            }
            // The 1/4 curvature bound majorizes the loss, so its candidate
            // never increases the objective — but when the support rows are
            // confidently classified the true curvature is far smaller and
            // the bounded step crawls. Also try a Newton candidate with the
            // exact support curvature and keep whichever candidate lowers
            // the (cheaply restricted-to-the-support) objective more.
            const double bound = 0.25 * col.norm_sq;
            next = soft_threshold(bound * old - grad, lambda) / (bound + lambda * kappa);
            if (curv + lambda * kappa > 0.0) {
                double newton =
                    soft_threshold(curv * old - grad, lambda) / (curv + lambda * kappa);
                if (newton != next) {
                    auto local_change = [&](double cand) {
                        double dl = 0.0;
                        for (int32_t i : col.rows)
                            dl += log1p_exp(-y[i] * (track.margins[i] + (cand - old))) -
                                  log1p_exp(-y[i] * track.margins[i]);
                        return dl + lambda * (std::abs(cand) - std::abs(old) +
                                              0.5 * kappa * (cand * cand - old * old));
                    };
                    if (local_change(newton) < local_change(next)) next = newton;
                }
            }
        }
        if (next == old) continue;
        double step = next - old;
        for (int32_t i : col.rows) track.margins[i] += step;
        track.coef[j] = next;
        ++changes;
    }
    return changes;
}

FitResult make_result(const std::vector<Column>& columns, const Track& track, FitStats stats) {
    FitResult out;
    stats.active_patterns.reserve(columns.size());
    for (const Column& col : columns) stats.active_patterns.push_back(col.pattern);
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (track.coef[j] != 0.0) out.solution.beta[columns[j].pattern] = track.coef[j];
    out.solution.beta0 = track.beta0;
    out.solution.alpha = track.best_alpha;
    out.solution.primal = track.primal;
    out.solution.dual = track.best_dual;
    out.solution.gap = track.gap;
    out.stats = std::move(stats);
    return out;
}

}  // namespace

FitResult fit(const Dataset& data, const PatternTree& tree, const Loss& loss, double lambda,
              double kappa, const std::vector<const ReferenceSolution*>& refs,
              const Hyperparams& hp) {
    const auto t0 = std::chrono::steady_clock::now();
    if (&tree.data() != &data) throw std::invalid_argument("tree was built over a different dataset");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be >= 0");
    if (!(hp.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (refs.size() > 2) throw std::invalid_argument("at most two warm-start references");

    const std::size_t n = data.size();
    const std::vector<double> y = data.labels();
    const double gamma = loss.gradient_lipschitz();

    // --- Stage 1: dual-scale every starting point against this cell. ---
    struct Start {
        std::map<Pattern, double> beta;
        double beta0;
        std::vector<double> alpha;
        double dual;
        double gap;
    };
    std::vector<Start> starts;
    if (refs.empty()) {
        Start s;
        s.beta0 = loss.null_intercept(y);
        std::vector<double> margins(n, s.beta0);
        double primal = loss.value(y, margins);
        DualPoint dp = dual_scale(loss, y, margins, lambda, kappa, tree);
        s.alpha = std::move(dp.alpha);
        s.dual = dp.value;
        s.gap = duality_gap(primal, s.dual);
        starts.push_back(std::move(s));
    } else {
        for (const ReferenceSolution* ref : refs) {
            Start s;
            s.beta = ref->beta;
            s.beta0 = ref->beta0;
            std::vector<double> margins = margins_of(data, ref->beta, ref->beta0);
            double primal = primal_value(loss, y, margins, ref->beta, lambda, kappa);
            DualPoint dp = dual_scale(loss, y, margins, lambda, kappa, tree);
            s.alpha = std::move(dp.alpha);
            s.dual = dp.value;
            s.gap = duality_gap(primal, s.dual);
            starts.push_back(std::move(s));
        }
    }

    // --- Stage 2: safe pruning traversal with all reference balls. ---
    FitStats stats;
    stats.reference_count = refs.size();
    std::vector<Ball> balls;
    balls.reserve(starts.size());
    for (const Start& s : starts)
        balls.push_back(Ball{&s.alpha, std::sqrt(2.0 * gamma * std::max(s.gap, 0.0))});
    std::vector<ActiveColumn> admitted = spp_traverse(tree, lambda, balls, stats.traverse);

    std::vector<Column> columns;
    columns.reserve(admitted.size());
    for (ActiveColumn& ac : admitted) {
        Column col;
        col.pattern = std::move(ac.pattern);
        col.norm_sq = static_cast<double>(ac.rows.size());
        col.rows = std::move(ac.rows);
        columns.push_back(std::move(col));
    }

    // --- Stage 3: restrict each start to the safe active set. ---
    std::vector<Track> tracks(starts.size());
    for (std::size_t k = 0; k < starts.size(); ++k) {
        Track& tr = tracks[k];
        tr.beta0 = starts[k].beta0;
        tr.coef.assign(columns.size(), 0.0);
        for (std::size_t j = 0; j < columns.size(); ++j) {
            auto it = starts[k].beta.find(columns[j].pattern);
            if (it != starts[k].beta.end()) tr.coef[j] = it->second;
        }
        rebuild_margins(tr, columns, n);
        tr.best_alpha = std::move(starts[k].alpha);
        tr.best_dual = starts[k].dual;
        tr.primal = primal_of(loss, y, tr, lambda, kappa);
        tr.gap = duality_gap(tr.primal, tr.best_dual);
    }

    auto best_track = [&]() -> std::size_t {
        std::size_t best = 0;
        for (std::size_t k = 1; k < tracks.size(); ++k)
            if (tracks[k].gap < tracks[best].gap) best = k;
        return best;
    };

    auto elapsed_ms = [&]() {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    // A start may already certify within tolerance (a warm reference from an
    // adjacent cell, or lambda at or above the null-model threshold). Return
    // it untouched rather than risking round-off-sized coefficient moves.
    {
        std::size_t w = best_track();
        if (tracks[w].gap < hp.epsilon) {
            stats.wall_ms = elapsed_ms();
            return make_result(columns, tracks[w], std::move(stats));
        }
    }

    // --- Stage 4: coordinate-descent epochs. ---
    for (long epoch = 1;; ++epoch) {
        if (epoch > hp.max_epochs) {
            std::size_t w = best_track();
            stats.epochs = hp.max_epochs;
            stats.wall_ms = elapsed_ms();
            FitResult best = make_result(columns, tracks[w], std::move(stats));
            throw ConvergenceError("epoch budget exhausted before reaching the gap tolerance (gap " +
                                       std::to_string(tracks[w].gap) + ", tolerance " +
                                       std::to_string(hp.epsilon) + ")",
                                   std::move(best));
        }

        // Spend the multi-reference budget, then keep only the best lineage.
        if (tracks.size() > 1 && epoch > static_cast<long>(hp.multi_budget)) {
            std::size_t w = best_track();
            if (w != 0) std::swap(tracks[0], tracks[w]);
            tracks.resize(1);
        }

        for (Track& tr : tracks) {
            update_intercept(loss, y, tr);
            stats.coordinate_changes += sweep(loss, y, columns, lambda, kappa, tr);
            tr.primal = primal_of(loss, y, tr, lambda, kappa);
            DualPoint dp = dual_scale(loss, y, tr.margins, lambda, kappa, tree);
            if (dp.value > tr.best_dual) {
                tr.best_dual = dp.value;
                tr.best_alpha = std::move(dp.alpha);
            }
            tr.gap = duality_gap(tr.primal, tr.best_dual);
        }

        std::size_t w = best_track();
        stats.epochs = epoch;
        stats.trace.push_back(TraceRecord{epoch, tracks[w].primal, tracks[w].best_dual,
                                          tracks[w].gap, columns.size()});
        if (tracks[w].gap < hp.epsilon) {
            stats.wall_ms = elapsed_ms();
            return make_result(columns, tracks[w], std::move(stats));
        }

        // Dynamic screening on the schedule: re-test every active column with
        // the current certificate(s); drop columns certified zero whose
        // coefficient is already zero in every live lineage (so the primal
        // value never jumps).
        if (screening_scheduled(epoch, hp.dense_cycles) && !columns.empty()) {
            std::vector<Ball> dyn;
            dyn.reserve(tracks.size());
            for (Track& tr : tracks)
                dyn.push_back(
                    Ball{&tr.best_alpha, std::sqrt(2.0 * gamma * std::max(tr.gap, 0.0))});
            BallIntersection lens;
            if (dyn.size() == 2)
                lens = ball_intersection(*dyn[0].center, dyn[0].radius, *dyn[1].center,
                                         dyn[1].radius);
            std::vector<std::size_t> keep;
            keep.reserve(columns.size());
            for (std::size_t j = 0; j < columns.size(); ++j) {
                double u = dyn.size() == 1
                               ? screening_score(columns[j].rows, n, dyn[0])
                               : multi_screening_score(columns[j].rows, n, dyn[0], dyn[1], lens);
                bool zero_everywhere = true;
                for (const Track& tr : tracks)
                    if (tr.coef[j] != 0.0) zero_everywhere = false;
                if (u < lambda && zero_everywhere)
                    ++stats.dynamic_removed;
                else
                    keep.push_back(j);
            }
            if (keep.size() != columns.size()) {
                std::vector<Column> kept_cols;
                kept_cols.reserve(keep.size());
                for (std::size_t j : keep) kept_cols.push_back(std::move(columns[j]));
                columns = std::move(kept_cols);
                for (Track& tr : tracks) {
                    std::vector<double> kept_coef;
                    kept_coef.reserve(keep.size());
                    for (std::size_t j : keep) kept_coef.push_back(tr.coef[j]);
                    tr.coef = std::move(kept_coef);
                }
            }
        }
    }
}

}  // namespace spp
