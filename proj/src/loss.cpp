// SPDX-License-Identifier: Apache-2.0
#include "spp/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace spp {

std::string to_string(LossKind kind) { return kind == LossKind::squared ? "squared" : "logistic"; }

LossKind loss_from_string(const std::string& name) {
    if (name == "squared") return LossKind::squared;
    if (name == "logistic") return LossKind::logistic;
    throw std::runtime_error("unknown loss '" + name + "' (expected squared or logistic)");
}

namespace {

// log(1 + exp(-t)) without overflow for large |t|
double log1p_exp_neg(double t) {
    if (t > 0.0) return std::log1p(std::exp(-t));
    return -t + std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t))
double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    double e = std::exp(t);
    return e / (1.0 + e);
}

// m log m + (1-m) log(1-m) on [0, 1], with the exact limit value 0 at the
// endpoints (and for the rounding-level excursions beyond them); anything
// materially outside the domain is the caller's bug, not a value to clamp.
double entropy_term(double m) {
    if (m <= 0.0 || m >= 1.0) return 0.0;
    return m * std::log(m) + (1.0 - m) * std::log(1.0 - m);
}

}  // namespace

double Loss::value(const std::vector<double>& y, const std::vector<double>& z) const {
    double total = 0.0;
    if (kind_ == LossKind::squared) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            double r = y[i] - z[i];
            total += 0.5 * r * r;
        }
    } else {
        for (std::size_t i = 0; i < y.size(); ++i) total += log1p_exp_neg(y[i] * z[i]);
    }
    return total;
}

void Loss::gradient(const std::vector<double>& y, const std::vector<double>& z,
                    std::vector<double>& out) const {
    out.resize(y.size());
    if (kind_ == LossKind::squared) {
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = z[i] - y[i];
    } else {
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = -y[i] * sigmoid(-y[i] * z[i]);
    }
}

double Loss::dual_loss_part(const std::vector<double>& y, const std::vector<double>& alpha) const {
    double total = 0.0;
    if (kind_ == LossKind::squared) {
        for (std::size_t i = 0; i < y.size(); ++i)
            total += y[i] * alpha[i] - 0.5 * alpha[i] * alpha[i];
    } else {
        for (std::size_t i = 0; i < y.size(); ++i) total -= entropy_term(y[i] * alpha[i]);
    }
    return total;
}

double Loss::null_intercept(const std::vector<double>& y) const {
    if (kind_ == LossKind::squared) {
        double sum = 0.0;
        for (double v : y) sum += v;
        return sum / static_cast<double>(y.size());
    }
    std::size_t pos = 0;
    for (double v : y)
        if (v > 0.0) ++pos;
    std::size_t neg = y.size() - pos;
    if (pos == 0 || neg == 0)
        throw std::runtime_error("logistic null intercept diverges: labels are single-class");
    return std::log(static_cast<double>(pos) / static_cast<double>(neg));
}

}  // namespace spp
