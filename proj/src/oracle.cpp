// SPDX-License-Identifier: Apache-2.0
#include "spp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spp {
namespace oracle {

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

double log1p_exp(double u) {
    return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

double dense_penalty(const std::vector<double>& beta, double lambda, double kappa) {
    double l1 = 0.0, l2 = 0.0;
    for (double b : beta) {
        l1 += std::abs(b);
        l2 += b * b;
    }
    return lambda * (l1 + 0.5 * kappa * l2);
}

// Negated gradient shifted onto the sum-zero hyperplane. For the logistic
// loss the conjugate is finite only on y_i * alpha_i in [0, 1]; when the
// plain mean shift leaves that box, shift-and-clip instead, bisecting the
// shift so the clipped vector still sums to zero (the clipped sum is
// continuous and non-increasing in the shift).
void center_neg_gradient(const Loss& loss, const std::vector<double>& y,
                         const std::vector<double>& grad, std::vector<double>& out) {
    const std::size_t n = y.size();
    double mean = 0.0;
    for (double g : grad) mean += g;
    mean /= static_cast<double>(n);
    bool mean_ok = true;
    if (loss.kind() == LossKind::logistic)
        for (std::size_t i = 0; i < n && mean_ok; ++i) {
            double m = y[i] * -(grad[i] - mean);
            mean_ok = m >= 0.0 && m <= 1.0;
        }
    if (mean_ok) {
        for (std::size_t i = 0; i < n; ++i) out[i] = -(grad[i] - mean);
        return;
    }
    auto clipped = [&](double shift, bool fill) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double m = y[i] * (-grad[i] - shift);
            m = std::min(1.0, std::max(0.0, m));
            if (fill) out[i] = y[i] * m;
            sum += y[i] * m;
        }
        return sum;
    };
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (clipped(mid, false) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    clipped(0.5 * (lo + hi), true);
}

void dense_intercept(const Loss& loss, const std::vector<double>& y, std::vector<double>& margins,
                     double& beta0) {
    const std::size_t n = y.size();
    if (loss.kind() == LossKind::squared) {
        double mean_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean_res += y[i] - margins[i];
        mean_res /= static_cast<double>(n);
        beta0 += mean_res;
        for (double& z : margins) z += mean_res;
        return;
    }
    double g = 0.0, h = 0.0, val0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = sigmoid(-y[i] * margins[i]);
        g += -y[i] * s;
        h += s * (1.0 - s);
        val0 += log1p_exp(-y[i] * margins[i]);
    }
    if (h <= 0.0) return;
    double delta = -g / h;
    auto value_at = [&](double d) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += log1p_exp(-y[i] * (margins[i] + d));
        return v;
    };
    for (int halvings = 0; halvings < 60 && value_at(delta) > val0; ++halvings) delta *= 0.5;
    if (value_at(delta) > val0) return;
    beta0 += delta;
    for (double& z : margins) z += delta;
}

}  // namespace

DenseProblem build_dense(const Dataset& data, int max_length, std::size_t cap) {
    DenseProblem p;
    p.data = &data;
    PatternTree tree(data, max_length);
    std::vector<TreeNode> nodes = tree.enumerate_all(cap);
    p.patterns.reserve(nodes.size());
    p.columns.reserve(nodes.size());
    for (TreeNode& node : nodes) {
        p.patterns.push_back(std::move(node.pattern));
        p.columns.push_back(std::move(node.rows));
    }
    return p;
}

DenseSolution dense_fit(const DenseProblem& problem, const Loss& loss, double lambda, double kappa,
                        double eps, long max_sweeps) {
    if (problem.data == nullptr) throw std::invalid_argument("dense problem without data");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
    const Dataset& data = *problem.data;
    const std::size_t n = data.size();
    const std::size_t d = problem.dimension();
    const std::vector<double> y = data.labels();

    DenseSolution sol;
    sol.beta.assign(d, 0.0);
    std::vector<double> margins(n, 0.0);
    double best_dual = -std::numeric_limits<double>::infinity();
    std::vector<double> best_alpha;

    std::vector<double> grad, centered(n);
    for (long sweep = 1; sweep <= max_sweeps; ++sweep) {
        dense_intercept(loss, y, margins, sol.beta0);
        for (std::size_t j = 0; j < d; ++j) {
            const std::vector<int32_t>& rows = problem.columns[j];
            double norm_sq = static_cast<double>(rows.size());
            double old = sol.beta[j];
            double next;
            if (loss.kind() == LossKind::squared) {
                double inner_res = 0.0;
                for (int32_t i : rows) inner_res += y[i] - margins[i];
                next = soft_threshold(old * norm_sq + inner_res, lambda) /
                       (norm_sq + lambda * kappa);
            } else {
                double g = 0.0;
                for (int32_t i : rows) g += -y[i] * sigmoid(-y[i] * margins[i]);
                double curv = 0.25 * norm_sq;
                next = soft_threshold(curv * old - g, lambda) / (curv + lambda * kappa);
            }
            if (next == old) continue;
            double step = next - old;
            for (int32_t i : rows) margins[i] += step;
            sol.beta[j] = next;
        }

        sol.primal = loss.value(y, margins) + dense_penalty(sol.beta, lambda, kappa);
        if (!std::isfinite(sol.primal)) throw std::runtime_error("dense primal overflowed");

        loss.gradient(y, margins, grad);
        center_neg_gradient(loss, y, grad, centered);

        double max_abs = 0.0;
        std::vector<double> inners(d);
        for (std::size_t j = 0; j < d; ++j) {
            double inner = 0.0;
            for (int32_t i : problem.columns[j]) inner += centered[i];
            inners[j] = inner;
            max_abs = std::max(max_abs, std::abs(inner));
        }

        double scale = max_abs > lambda ? lambda / max_abs : 1.0;
        std::vector<double> shrunk(n);
        for (std::size_t i = 0; i < n; ++i) shrunk[i] = scale * centered[i];
        double dual = loss.dual_loss_part(y, shrunk);
        const std::vector<double>* cand = &shrunk;
        if (kappa > 0.0 && max_abs > lambda) {
            double omega = 0.0;
            for (double inner : inners) {
                double over = std::abs(inner) - lambda;
                if (over > 0.0) omega += over * over;
            }
            omega /= 2.0 * lambda * kappa;
            double unshrunk_dual = loss.dual_loss_part(y, centered) - omega;
            if (unshrunk_dual > dual) {
                dual = unshrunk_dual;
                cand = &centered;
            }
        }
        if (dual > best_dual) {
            best_dual = dual;
            best_alpha = *cand;
        }

        double gap = sol.primal - best_dual;
        if (gap < -1e-12 * std::max(1.0, std::abs(sol.primal)))
            throw std::runtime_error("dense dual exceeded the primal value");
        gap = std::max(gap, 0.0);
        sol.dual = best_dual;
        sol.gap = gap;
        sol.sweeps = sweep;
        if (gap <= eps) {
            sol.alpha = std::move(best_alpha);
            return sol;
        }
    }
    throw std::runtime_error("dense reference solver exhausted its sweep budget (gap " +
                             std::to_string(sol.gap) + ")");
}

namespace {

struct Projector {
    const std::vector<double>& c1;
    double r1;
    const std::vector<double>& c2;
    double r2;
    double tol;

    static void onto_ball(std::vector<double>& w, const std::vector<double>& c, double r) {
        double dist_sq = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            double d = w[i] - c[i];
            dist_sq += d * d;
        }
        double dist = std::sqrt(dist_sq);
        if (dist <= r) return;
        double shrink = r / dist;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = c[i] + shrink * (w[i] - c[i]);
    }

    static void onto_hyperplane(std::vector<double>& w) {
        double mean = 0.0;
        for (double v : w) mean += v;
        mean /= static_cast<double>(w.size());
        for (double& v : w) v -= mean;
    }

    double violation(const std::vector<double>& p) const {
        double d1 = 0.0, d2 = 0.0, s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double a = p[i] - c1[i];
            double b = p[i] - c2[i];
            d1 += a * a;
            d2 += b * b;
            s += p[i];
        }
        double v = std::max(std::sqrt(d1) - r1, std::sqrt(d2) - r2);
        return std::max(v, std::abs(s) / std::sqrt(static_cast<double>(p.size())));
    }

    // Dykstra's alternating projections onto B1, B2 and the zero-sum
    // hyperplane. Returns the projected point; feasibility is the caller's
    // check via `violation`.
    std::vector<double> operator()(std::vector<double> p) const {
        const std::size_t n = p.size();
        std::vector<double> q1(n, 0.0), q2(n, 0.0), q3(n, 0.0), w(n);
        for (int iter = 0; iter < 4000; ++iter) {
            double change = 0.0;
            for (std::size_t i = 0; i < n; ++i) w[i] = p[i] + q1[i];
            std::vector<double> next = w;
            onto_ball(next, c1, r1);
            for (std::size_t i = 0; i < n; ++i) {
                q1[i] = w[i] - next[i];
                change = std::max(change, std::abs(next[i] - p[i]));
            }
            p = next;

            for (std::size_t i = 0; i < n; ++i) w[i] = p[i] + q2[i];
            next = w;
            onto_ball(next, c2, r2);
            for (std::size_t i = 0; i < n; ++i) {
                q2[i] = w[i] - next[i];
                change = std::max(change, std::abs(next[i] - p[i]));
            }
            p = next;

            for (std::size_t i = 0; i < n; ++i) w[i] = p[i] + q3[i];
            next = w;
            onto_hyperplane(next);
            for (std::size_t i = 0; i < n; ++i) {
                q3[i] = w[i] - next[i];
                change = std::max(change, std::abs(next[i] - p[i]));
            }
            p = next;

            if (change <= tol) break;
        }
        return p;
    }
};

}  // namespace

double constrained_max(const std::vector<double>& x, const std::vector<double>& c1, double r1,
                       const std::vector<double>& c2, double r2, std::mt19937_64& rng,
                       int restarts) {
    const std::size_t n = x.size();
    if (c1.size() != n || c2.size() != n)
        throw std::invalid_argument("dimension mismatch in constrained_max");
    if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw std::invalid_argument("negative ball radius");
    (void)rng;

    double dist_sq = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = c1[i] - c2[i];
        dist_sq += d * d;
        scale = std::max({scale, std::abs(c1[i]), std::abs(c2[i])});
    }
    double diam = r1 + r2 + std::sqrt(dist_sq);
    scale += diam;

    // Certify the feasible region is non-empty: Dykstra from the midpoint of
    // the centers (a nearby, well-conditioned query) must land inside all
    // three sets.
    Projector project{c1, r1, c2, r2, 1e-14 * scale};
    std::vector<double> seed(n);
    for (std::size_t i = 0; i < n; ++i) seed[i] = 0.5 * (c1[i] + c2[i]);
    std::vector<double> base = project(seed);
    if (project.violation(base) > 1e-7 * scale)
        throw std::runtime_error("intersection of the screening balls is numerically empty");

    // Restrict everything to the zero-sum hyperplane H: for alpha in H,
    // ||alpha - c||^2 = ||alpha - Pc||^2 + n mean(c)^2 with Pc the centered
    // center, so each ball becomes a ball around Pc with a reduced squared
    // radius, and x^T alpha equals the centered column against alpha.
    double mean_x = 0.0, mean_1 = 0.0, mean_2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_1 += c1[i];
        mean_2 += c2[i];
    }
    double nn = static_cast<double>(n);
    mean_x /= nn;
    mean_1 /= nn;
    mean_2 /= nn;
    double C = 0.0, A = 0.0, B = 0.0, xb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double xt = x[i] - mean_x;
        double a = c1[i] - mean_1;
        double b = c2[i] - mean_2;
        C += xt * xt;
        A += (a - b) * (a - b);
        B += xt * (a - b);
        xb += xt * b;
    }
    if (C <= 0.0) return 0.0;  // the column is constant, so x^T alpha = 0 on H
    double s1 = r1 * r1 - nn * mean_1 * mean_1;
    double s2 = r2 * r2 - nn * mean_2 * mean_2;

    // Lagrangian dual of max x~^T alpha over the two reduced balls: with
    // multipliers mu_i >= 0, m = mu_1 + mu_2 > 0 and theta = mu_1 / m, the
    // maximizing alpha is theta a + (1 - theta) b + x~ / m and the dual
    // objective collapses to
    //   g(theta, m) = x~^T b + theta B + C / (2m) + m Q(theta) / 2,
    //   Q(theta) = A theta^2 + (s1 - s2 - A) theta + s2,
    // whose inner minimum over m is x~^T b + theta B + sqrt(C Q(theta)) when
    // Q(theta) >= 0 and unbounded below otherwise. Strong duality (the
    // feasibility certificate above supplies a Slater point for
    // non-tangential inputs) makes the outer minimum over theta in [0, 1]
    // equal to the constrained maximum.
    const double inf = std::numeric_limits<double>::infinity();
    auto q_of = [&](double th) { return (A * th + (s1 - s2 - A)) * th + s2; };
    auto dual_at = [&](double th) {
        double q = q_of(th);
        if (q < 0.0) return inf;
        return xb + th * B + std::sqrt(C * q);
    };

    int grid = 1200 + 200 * std::max(0, restarts);
    double best = inf, best_theta = 0.0;
    for (int k = 0; k <= grid; ++k) {
        double th = static_cast<double>(k) / static_cast<double>(grid);
        double v = dual_at(th);
        if (v < best) {
            best = v;
            best_theta = th;
        }
    }
    // The square root kinks where Q crosses zero; evaluate those points too.
    double disc = (s1 - s2 - A) * (s1 - s2 - A) - 4.0 * A * s2;
    if (A > 0.0 && disc >= 0.0) {
        double root = std::sqrt(disc);
        for (double th : {(-(s1 - s2 - A) - root) / (2.0 * A), (-(s1 - s2 - A) + root) / (2.0 * A)}) {
            if (th >= 0.0 && th <= 1.0) {
                double v = dual_at(th);
                if (v < best) {
                    best = v;
                    best_theta = th;
                }
            }
        }
    }
    if (!std::isfinite(best))
        throw std::runtime_error("intersection of the screening balls is numerically empty");

    double lo = std::max(0.0, best_theta - 1.0 / grid);
    double hi = std::min(1.0, best_theta + 1.0 / grid);
    for (int iter = 0; iter < 200; ++iter) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (dual_at(m1) <= dual_at(m2))
            hi = m2;
        else
            lo = m1;
    }
    best = std::min({best, dual_at(lo), dual_at(0.5 * (lo + hi)), dual_at(hi)});
    return best;
}

}  // namespace oracle
}  // namespace spp
