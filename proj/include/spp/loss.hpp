// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace spp {

enum class LossKind { squared, logistic };

std::string to_string(LossKind kind);
LossKind loss_from_string(const std::string& name);

/// Unnormalized convex loss over the margin vector z = X beta + beta0 1.
///   squared:  L(z) = 1/2 ||y - z||^2
///   logistic: L(z) = sum_i log(1 + exp(-y_i z_i)),  y_i in {-1,+1}
/// Both losses have Lipschitz-continuous gradients; `gradient_lipschitz`
/// returns the constant (1 and 1/4), which drives the screening-ball radius
/// r = sqrt(2 * gamma * gap).
class Loss {
public:
    explicit Loss(LossKind kind) : kind_(kind) {}

    LossKind kind() const { return kind_; }
    double gradient_lipschitz() const { return kind_ == LossKind::squared ? 1.0 : 0.25; }

    double value(const std::vector<double>& y, const std::vector<double>& z) const;

    /// grad[i] = dL/dz_i. Size of out is resized to n.
    void gradient(const std::vector<double>& y, const std::vector<double>& z,
                  std::vector<double>& out) const;

    /// -L*(-alpha), the loss part of the dual objective:
    ///   squared:  y^T alpha - 1/2 ||alpha||^2
    ///   logistic: -sum_i [m log m + (1-m) log(1-m)],  m = y_i alpha_i,
    /// with m clamped to [1e-12, 1-1e-12] inside the entropy terms so
    /// boundary duals do not produce log(0).
    double dual_loss_part(const std::vector<double>& y, const std::vector<double>& alpha) const;

    /// Optimal intercept of the empty model: mean(y) for squared loss,
    /// log(n+/n-) for logistic. Throws DatasetError-style std::runtime_error
    /// when logistic labels are single-class (the value diverges).
    double null_intercept(const std::vector<double>& y) const;

private:
    LossKind kind_;
};

}  // namespace spp
