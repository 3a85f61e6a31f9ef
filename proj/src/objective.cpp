// SPDX-License-Identifier: Apache-2.0
#include "spp/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace spp {

double penalty_value(const std::map<Pattern, double>& beta, double lambda, double kappa) {
    double l1 = 0.0, l2 = 0.0;
    for (const auto& [pattern, b] : beta) {
        l1 += std::abs(b);
        l2 += b * b;
    }
    return lambda * (l1 + 0.5 * kappa * l2);
}

double primal_value(const Loss& loss, const std::vector<double>& y,
                    const std::vector<double>& margins, const std::map<Pattern, double>& beta,
                    double lambda, double kappa) {
    double p = loss.value(y, margins) + penalty_value(beta, lambda, kappa);
    if (!std::isfinite(p)) throw std::runtime_error("objective overflow: primal is not finite");
    return p;
}

namespace {

std::vector<double> centered_neg_gradient(const Loss& loss, const std::vector<double>& y,
                                          const std::vector<double>& margins) {
    std::vector<double> c;
    loss.gradient(y, margins, c);
    double mean = 0.0;
    for (double& v : c) {
        v = -v;
        mean += v;
    }
    mean /= static_cast<double>(c.size());

    if (loss.kind() == LossKind::squared) {
        for (double& v : c) v -= mean;
        return c;
    }

    // Logistic: the conjugate is finite only for y_i * alpha_i in [0, 1], so
    // the shift onto the sum-zero hyperplane must respect that box. The plain
    // mean shift stays inside it whenever no component is pushed past an
    // endpoint; otherwise shift-and-clip, choosing the shift by bisection so
    // the clipped vector still sums to zero (the clipped sum is continuous
    // and non-increasing in the shift, from +#pos at -1 to -#neg at +1).
    bool mean_ok = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double m = y[i] * (c[i] - mean);
        if (m < 0.0 || m > 1.0) {
            mean_ok = false;
            break;
        }
    }
    if (mean_ok) {
        for (double& v : c) v -= mean;
        return c;
    }

    auto clipped = [&](double shift, std::vector<double>* out) {
        double sum = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            double m = y[i] * (c[i] - shift);
            m = std::min(1.0, std::max(0.0, m));
            if (out) (*out)[i] = y[i] * m;
            sum += y[i] * m;
        }
        return sum;
    };
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (clipped(mid, nullptr) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    std::vector<double> out(c.size());
    clipped(0.5 * (lo + hi), &out);
    return out;
}

double omega_tail_value(const std::vector<double>& tail, double lambda, double kappa) {
    double omega = 0.0;
    for (double v : tail) {
        double excess = v - lambda;
        if (excess > 0.0) omega += excess * excess;
    }
    return omega / (2.0 * lambda * kappa);
}

}  // namespace

DualPoint dual_scale(const Loss& loss, const std::vector<double>& y,
                     const std::vector<double>& margins, double lambda, double kappa,
                     const PatternTree& tree, double incumbent) {
    if (lambda <= 0.0) throw std::invalid_argument("dual_scale requires lambda > 0");
    DualPoint point;
    point.alpha = centered_neg_gradient(loss, y, margins);

    if (kappa == 0.0) {
        // the conjugate penalty is an indicator: shrink into its domain
        MaxAbsInner res = max_abs_inner(tree, point.alpha, incumbent);
        point.search_nodes = res.nodes;
        point.scale = res.value > lambda ? lambda / res.value : 1.0;
        if (point.scale < 1.0)
            for (double& v : point.alpha) v *= point.scale;
        point.omega = 0.0;
        point.value = loss.dual_loss_part(y, point.alpha);
        return point;
    }

    // kappa > 0: the conjugate penalty is finite everywhere. Compare the
    // unshrunk point paying its Omega* tail with the shrunk zero-tail point
    // and keep the better dual value.
    AbsInnerTail tail = collect_abs_inner_above(tree, point.alpha, lambda);
    point.search_nodes = tail.nodes;
    if (tail.values.empty()) {
        point.scale = 1.0;
        point.omega = 0.0;
        point.value = loss.dual_loss_part(y, point.alpha);
        return point;
    }

    double omega = omega_tail_value(tail.values, lambda, kappa);
    double value_unshrunk = loss.dual_loss_part(y, point.alpha) - omega;

    double s = lambda / tail.max_abs;  // max_abs exact: the tail is non-empty
    std::vector<double> shrunk(point.alpha);
    for (double& v : shrunk) v *= s;
    double value_shrunk = loss.dual_loss_part(y, shrunk);

    if (value_shrunk >= value_unshrunk) {
        point.alpha = std::move(shrunk);
        point.scale = s;
        point.omega = 0.0;
        point.value = value_shrunk;
    } else {
        point.scale = 1.0;
        point.omega = omega;
        point.value = value_unshrunk;
    }
    return point;
}

double duality_gap(double primal, double dual) {
    double gap = primal - dual;
    double tol = 1e-12 * std::max(1.0, std::abs(primal));
    if (gap < -tol)
        throw std::runtime_error("broken dual certificate: gap " + std::to_string(gap) +
                                 " below feasibility tolerance");
    return gap < 0.0 ? 0.0 : gap;
}

double ReferenceSolution::radius(const Loss& loss) const {
    return std::sqrt(2.0 * loss.gradient_lipschitz() * std::max(gap, 0.0));
}

std::vector<double> margins_of(const Dataset& data, const std::map<Pattern, double>& beta,
                               double beta0) {
    std::vector<double> z(data.size(), beta0);
    for (const auto& [pattern, b] : beta) {
        if (b == 0.0) continue;
        for (int32_t row : support_of(pattern, data)) z[row] += b;
    }
    return z;
}

Certificate certify(const Loss& loss, const Dataset& data, const PatternTree& tree,
                    const ReferenceSolution& sol, double lambda, double kappa) {
    const std::vector<double> y = data.labels();
    const std::vector<double> margins = margins_of(data, sol.beta, sol.beta0);
    Certificate cert{};
    cert.primal = primal_value(loss, y, margins, sol.beta, lambda, kappa);

    std::vector<double> alpha = sol.alpha;
    if (alpha.empty()) alpha.assign(data.size(), 0.0);
    double sum = 0.0;
    for (double a : alpha) sum += a;
    if (std::abs(sum) > 1e-9 * static_cast<double>(data.size()))
        throw std::runtime_error("dual point is off the sum-zero hyperplane");
    if (loss.kind() == LossKind::logistic)
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            double m = y[i] * alpha[i];
            if (m < -1e-9 || m > 1.0 + 1e-9)
                throw std::runtime_error("dual point leaves the conjugate domain");
        }

    AbsInnerTail tail = collect_abs_inner_above(tree, alpha, lambda);
    cert.max_abs_inner = tail.max_abs;
    double dual = loss.dual_loss_part(y, alpha);
    if (kappa == 0.0) {
        if (tail.max_abs > lambda * (1.0 + 1e-9))
            throw std::runtime_error("dual certificate violated: pattern inner product " +
                                     std::to_string(tail.max_abs) + " exceeds lambda " +
                                     std::to_string(lambda));
    } else {
        dual -= omega_tail_value(tail.values, lambda, kappa);
    }
    cert.dual = dual;
    cert.gap = duality_gap(cert.primal, cert.dual);
    return cert;
}

}  // namespace spp
