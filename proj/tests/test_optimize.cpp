#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "qkgp/optimize.hpp"

using namespace qkgp;

namespace {

double rosenbrock(const opt::Vector& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
}

}  // namespace

TEST(NelderMead, FindsRosenbrockMinimum) {
    const auto r = opt::nelder_mead(rosenbrock, {-1.2, 1.0}, {-3, -3}, {3, 3});
    EXPECT_NEAR(r.x[0], 1.0, 1e-4);
    EXPECT_NEAR(r.x[1], 1.0, 1e-4);
    EXPECT_LT(r.f, 1e-8);
    EXPECT_TRUE(r.converged);
}

TEST(NelderMead, StaysInsideTheBox) {
    // Unconstrained minimum at (5, -5); the box optimum is the corner (2, -1).
    int outside = 0;
    const opt::Objective f = [&](const opt::Vector& x) {
        if (x[0] < 0 || x[0] > 2 || x[1] < -1 || x[1] > 1) ++outside;
        return std::pow(x[0] - 5, 2) + std::pow(x[1] + 5, 2);
    };
    const auto r = opt::nelder_mead(f, {10, 10}, {0, -1}, {2, 1});
    EXPECT_EQ(outside, 0);
    EXPECT_NEAR(r.x[0], 2.0, 1e-6);
    EXPECT_NEAR(r.x[1], -1.0, 1e-6);
}

TEST(NelderMead, RespectsEvaluationBudget) {
    opt::NelderMeadOptions o;
    o.max_evaluations = 25;
    const auto r = opt::nelder_mead(rosenbrock, {-1.2, 1.0}, {-3, -3}, {3, 3}, o);
    EXPECT_LE(r.evaluations, 25);
}

TEST(MultiStart, DeterministicAndPrefixStable) {
    // Two wells; the deeper one is away from the centre.
    const opt::Objective f = [](const opt::Vector& x) {
        return -std::exp(-std::pow(x[0] - 0.2, 2) * 50) - 2 * std::exp(-std::pow(x[0] - 0.85, 2) * 50);
    };
    const auto a = opt::multistart_minimize(f, {0}, {1}, 6, 42);
    const auto b = opt::multistart_minimize(f, {0}, {1}, 6, 42);
    EXPECT_EQ(a.best.x, b.best.x);
    EXPECT_EQ(a.starts, 7);
    EXPECT_NEAR(a.best.x[0], 0.85, 1e-4);
    const auto c = opt::multistart_minimize(f, {0}, {1}, 8, 42);
    EXPECT_LE(c.best.f, a.best.f);
}

TEST(MultiStart, WarmStartsAndInfeasibleStarts) {
    const opt::Objective f = [](const opt::Vector& x) {
        return x[0] < 0.5 ? std::numeric_limits<double>::infinity() : (x[0] - 0.7) * (x[0] - 0.7);
    };
    const auto r = opt::multistart_minimize(f, {0}, {1}, 0, 1, {{0.9}}, {}, false);
    EXPECT_EQ(r.starts, 1);
    EXPECT_EQ(r.best_start, 0);
    EXPECT_NEAR(r.best.x[0], 0.7, 1e-5);
    const opt::Objective never = [](const opt::Vector&) { return std::numeric_limits<double>::infinity(); };
    const auto n = opt::multistart_minimize(never, {0}, {1}, 2, 1);
    EXPECT_EQ(n.best_start, -1);
    EXPECT_EQ(n.failed_starts, 3);
}
