// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracle_helpers.hpp"
#include "spp/objective.hpp"

using namespace spp;

namespace {

Dataset parse(const std::string& text, StructureKind kind = StructureKind::itemset) {
    std::istringstream in(text);
    return load_dataset(in, kind);
}

}  // namespace

TEST_CASE("loss values match their defining sums") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int round = 0; round < 10; ++round) {
        std::size_t n = 1 + static_cast<std::size_t>(round);
        std::vector<double> y(n), z(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = round % 2 ? (i % 2 ? 1.0 : -1.0) : noise(rng);
            z[i] = noise(rng);
        }
        for (LossKind kind : {LossKind::squared, LossKind::logistic}) {
            Loss loss(kind);
            double expected = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                expected += testutil::pointwise_loss(kind, y[i], z[i]);
            CHECK(loss.value(y, z) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("gradients pass central finite-difference probes") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 1.5);
    for (LossKind kind : {LossKind::squared, LossKind::logistic}) {
        Loss loss(kind);
        std::vector<double> y = {1.0, -1.0, 1.0, -1.0};
        std::vector<double> z(4), grad;
        for (double& v : z) v = noise(rng);
        loss.gradient(y, z, grad);
        REQUIRE(grad.size() == 4);
        const double h = 1e-6;
        for (std::size_t i = 0; i < z.size(); ++i) {
            std::vector<double> zp = z, zm = z;
            zp[i] += h;
            zm[i] -= h;
            double fd = (loss.value(y, zp) - loss.value(y, zm)) / (2 * h);
            CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("gradient Lipschitz constants are 1 and 1/4 and numerically honored") {
    CHECK(Loss(LossKind::squared).gradient_lipschitz() == 1.0);
    CHECK(Loss(LossKind::logistic).gradient_lipschitz() == 0.25);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0.0, 3.0);
    for (LossKind kind : {LossKind::squared, LossKind::logistic}) {
        Loss loss(kind);
        double gamma = loss.gradient_lipschitz();
        std::vector<double> y = {1.0, -1.0, 1.0};
        for (int round = 0; round < 50; ++round) {
            std::vector<double> z1(3), z2(3), g1, g2;
            for (std::size_t i = 0; i < 3; ++i) {
                z1[i] = noise(rng);
                z2[i] = noise(rng);
            }
            loss.gradient(y, z1, g1);
            loss.gradient(y, z2, g2);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < 3; ++i) {
                num += (g1[i] - g2[i]) * (g1[i] - g2[i]);
                den += (z1[i] - z2[i]) * (z1[i] - z2[i]);
            }
            CHECK(std::sqrt(num) <= gamma * std::sqrt(den) * (1.0 + 1e-9));
        }
    }

    // The logistic bound is tight at the decision boundary.
    Loss logistic(LossKind::logistic);
    std::vector<double> y = {1.0}, za = {-1e-7}, zb = {1e-7}, ga, gb;
    logistic.gradient(y, za, ga);
    logistic.gradient(y, zb, gb);
    CHECK(std::abs(ga[0] - gb[0]) / 2e-7 == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("dual loss part equals the numeric conjugate on small vectors") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    std::normal_distribution<double> noise(0.0, 1.2);
    for (int round = 0; round < 30; ++round) {
        std::size_t n = 2 + static_cast<std::size_t>(round % 3);

        {
            Loss loss(LossKind::squared);
            std::vector<double> y(n), alpha(n);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = noise(rng);
                alpha[i] = noise(rng);
            }
            double got = loss.dual_loss_part(y, alpha);
            double expected = testutil::numeric_dual_loss_part(LossKind::squared, y, alpha);
            CHECK(got == doctest::Approx(expected).epsilon(1e-6));
        }
        {
            Loss loss(LossKind::logistic);
            std::vector<double> y(n), alpha(n);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = i % 2 ? 1.0 : -1.0;
                alpha[i] = y[i] * unit(rng);  // interior of the dual domain
            }
            double got = loss.dual_loss_part(y, alpha);
            double expected = testutil::numeric_dual_loss_part(LossKind::logistic, y, alpha);
            CHECK(got == doctest::Approx(expected).epsilon(1e-6));
        }
    }
}

TEST_CASE("half-label dual point of the logistic loss scores n log 2") {
    std::vector<double> y = {1.0, -1.0, 1.0, 1.0, -1.0};
    std::vector<double> alpha(5);
    for (std::size_t i = 0; i < 5; ++i) alpha[i] = 0.5 * y[i];
    Loss loss(LossKind::logistic);
    CHECK(loss.dual_loss_part(y, alpha) ==
          doctest::Approx(5.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("null intercepts: label mean and class log-odds") {
    Loss sq(LossKind::squared);
    CHECK(sq.null_intercept({1.0, 2.0, 6.0}) == doctest::Approx(3.0));

    Loss lg(LossKind::logistic);
    CHECK(lg.null_intercept({1.0, 1.0, 1.0, -1.0}) == doctest::Approx(std::log(3.0)));
    CHECK_THROWS_AS(lg.null_intercept({1.0, 1.0}), std::runtime_error);
}

TEST_CASE("penalty and primal values on hand-computed cases") {
    std::map<Pattern, double> beta;
    beta[Pattern{StructureKind::itemset, {1}}] = 2.0;
    beta[Pattern{StructureKind::itemset, {2}}] = -1.0;
    CHECK(penalty_value(beta, 0.5, 1.0) == doctest::Approx(0.5 * (3.0 + 0.5 * 5.0)));
    CHECK(penalty_value(beta, 0.5, 0.0) == doctest::Approx(1.5));

    Dataset data = parse("2 1\n-2 2\n");
    Loss loss(LossKind::squared);
    std::vector<double> y = data.labels();
    std::map<Pattern, double> model;
    model[Pattern{StructureKind::itemset, {1}}] = 0.5;
    model[Pattern{StructureKind::itemset, {2}}] = -0.5;
    std::vector<double> z = margins_of(data, model, 0.0);
    CHECK(z == std::vector<double>{0.5, -0.5});
    CHECK(primal_value(loss, y, z, model, 1.0, 1.0) == doctest::Approx(3.5).epsilon(1e-15));

    std::vector<double> overflow = {1e200, -1e200};
    CHECK_THROWS_AS(primal_value(loss, y, overflow, model, 1.0, 1.0), std::runtime_error);
}

TEST_CASE("dual scaling shrinks onto the feasible box when kappa is zero") {
    Dataset data = parse("1 1\n-1 2\n0 1 2\n");
    PatternTree tree(data, 2);
    Loss loss(LossKind::squared);
    std::vector<double> y = data.labels();
    std::vector<double> margins(3, 0.0);

    // Gradient at the null margins: -(z - y) = y; centered already.
    // Pattern inner products: {1}->{0,2}: 1; {2}->{1,2}: -1; {1,2}->{2}: 0.
    DualPoint tight = dual_scale(loss, y, margins, 0.5, 0.0, tree);
    CHECK(tight.scale == doctest::Approx(0.5));
    CHECK(tight.omega == 0.0);
    CHECK(tight.alpha == std::vector<double>{0.5, -0.5, 0.0});
    CHECK(tight.value ==
          doctest::Approx(loss.dual_loss_part(y, tight.alpha)).epsilon(1e-15));

    DualPoint loose = dual_scale(loss, y, margins, 2.0, 0.0, tree);
    CHECK(loose.scale == 1.0);
    CHECK(loose.alpha == std::vector<double>{1.0, -1.0, 0.0});

    // Feasibility certificate: every pattern inner product within lambda.
    MaxAbsInner certified = max_abs_inner(tree, tight.alpha);
    CHECK(certified.value <= 0.5 * (1.0 + 1e-9));
}

TEST_CASE("dual scaling keeps the unshrunk point when the conjugate tail wins") {
    // Optimum of this cell sits at beta = (0.5, -0.5) with pattern inner
    // products 1.5 = lambda (1 + kappa |beta_j|) > lambda, so the shrunk
    // candidate alone cannot close the gap: its best value is 3.0 while the
    // primal optimum is 3.5. The conjugate-tail candidate reaches 3.5.
    Dataset data = parse("2 1\n-2 2\n");
    PatternTree tree(data, 1);
    Loss loss(LossKind::squared);
    std::vector<double> y = data.labels();
    std::vector<double> margins = {0.5, -0.5};

    DualPoint dp = dual_scale(loss, y, margins, 1.0, 1.0, tree);
    CHECK(dp.scale == 1.0);
    CHECK(dp.omega == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(dp.value == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(dp.alpha == std::vector<double>{1.5, -1.5});

    // With kappa = 0 at the same lambda only the shrunk candidate exists.
    DualPoint shrunk = dual_scale(loss, y, margins, 1.0, 0.0, tree);
    CHECK(shrunk.scale == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(shrunk.value == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("duality gap clamps round-off and rejects broken certificates") {
    CHECK(duality_gap(1.0, 1.0) == 0.0);
    CHECK(duality_gap(1.0, 1.0 + 1e-15) == 0.0);
    CHECK(duality_gap(2.0, 1.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(duality_gap(1.0, 2.0), std::runtime_error);
}

TEST_CASE("screening radius follows sqrt(2 gamma gap)") {
    ReferenceSolution sol;
    sol.gap = 0.02;
    CHECK(sol.radius(Loss(LossKind::squared)) == doctest::Approx(std::sqrt(0.04)));
    CHECK(sol.radius(Loss(LossKind::logistic)) == doctest::Approx(0.1));
}

TEST_CASE("certification recomputes the gap from scratch and validates the dual point") {
    Dataset data = parse("2 1\n-2 2\n");
    PatternTree tree(data, 1);
    Loss loss(LossKind::squared);

    ReferenceSolution sol;
    sol.beta[Pattern{StructureKind::itemset, {1}}] = 0.5;
    sol.beta[Pattern{StructureKind::itemset, {2}}] = -0.5;
    sol.beta0 = 0.0;
    sol.alpha = {1.5, -1.5};
    Certificate cert = certify(loss, data, tree, sol, 1.0, 1.0);
    CHECK(cert.primal == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(cert.dual == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(cert.gap <= 1e-12);
    CHECK(cert.max_abs_inner == doctest::Approx(1.5).epsilon(1e-15));

    // A dual point off the zero-sum hyperplane must be rejected.
    ReferenceSolution off = sol;
    off.alpha = {1.5, -1.0};
    CHECK_THROWS_AS(certify(loss, data, tree, off, 1.0, 1.0), std::runtime_error);

    // At kappa = 0 the same alpha violates the feasible box (1.5 > lambda).
    CHECK_THROWS_AS(certify(loss, data, tree, sol, 1.0, 0.0), std::runtime_error);
}
