#include <cmath>

#include <gtest/gtest.h>

#include <json.hpp>

#include "qkgp/error.hpp"
#include "qkgp/tasks.hpp"
#include "temp_dir.hpp"

using namespace qkgp;

TEST(Tasks, TargetFunctions) {
    EXPECT_DOUBLE_EQ(tasks::evaluate(tasks::TargetFunction::XSinX, 2.0), 2.0 * std::sin(2.0));
    EXPECT_DOUBLE_EQ(tasks::evaluate(tasks::TargetFunction::F2, 10.0), 3.25);
    EXPECT_EQ(tasks::parse_target("f1"), tasks::TargetFunction::F1);
    EXPECT_EQ(tasks::to_string(tasks::parse_target("xsinx")), "xsinx");
    EXPECT_THROW(tasks::parse_target("sinc"), InvalidArgument);
}

TEST(Tasks, OneDimensionalSplit) {
    const auto a = tasks::gen_1d(tasks::TargetFunction::XSinX, 40, 0);
    const auto b = tasks::gen_1d(tasks::TargetFunction::XSinX, 40, 0);
    const auto c = tasks::gen_1d(tasks::TargetFunction::XSinX, 40, 1);
    EXPECT_EQ(a.train.y, b.train.y);
    EXPECT_NE(a.train.y, c.train.y);
    EXPECT_EQ(a.train.size(), 40);
    EXPECT_EQ(a.test.size(), 100);
    EXPECT_DOUBLE_EQ(a.train.x(0, 0), 0.1);
    EXPECT_DOUBLE_EQ(a.train.x(39, 0), 19.9);
    EXPECT_DOUBLE_EQ(a.test.x(99, 0), 20.0);
    EXPECT_GE(a.train.sigma2.minCoeff(), 0.0);
    EXPECT_LE(a.train.sigma2.maxCoeff(), 1.0);
    EXPECT_EQ(a.test.sigma2.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_DOUBLE_EQ(a.test.y(50), tasks::evaluate(tasks::TargetFunction::XSinX, a.test.x(50, 0)));
}

TEST(Tasks, HillStepAndValley) {
    const tasks::HillConfig cfg;
    const auto s = tasks::hill_step(cfg, {0.1, 0.02}, 0.001);
    const double v = 0.02 + 0.001 - 0.0025 * std::cos(0.3);
    EXPECT_DOUBLE_EQ(s.v, v);
    EXPECT_DOUBLE_EQ(s.x, 0.1 + v);
    // Resting at the valley bottom is an equilibrium.
    const auto rest = tasks::hill_step(cfg, {cfg.valley(), 0.0}, 0.0);
    EXPECT_NEAR(rest.v, 0.0, 1e-15);
    tasks::HillConfig bad;
    bad.discount = 1.0;
    EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Tasks, DynamicsDataIsScaled) {
    const tasks::HillConfig cfg;
    const auto d = tasks::gen_dynamics(cfg, 64, 3);
    ASSERT_EQ(d.next_x.x.cols(), 3);
    EXPECT_LE(d.next_x.x.cwiseAbs().maxCoeff(), 1.0);
    EXPECT_EQ(d.next_x.x, d.next_v.x);
    for (int i = 0; i < 64; ++i) {
        const auto s = tasks::hill_step(cfg, {d.next_x.x(i, 0) * cfg.d, d.next_x.x(i, 1) * cfg.v_max},
                                        d.next_x.x(i, 2) * cfg.a_max());
        EXPECT_NEAR(d.next_x.y(i), s.x / cfg.d, 1e-12);
        EXPECT_NEAR(d.next_v.y(i), s.v / cfg.v_max, 1e-12);
    }
}

TEST(Tasks, RegressionPipelineWritesFiles) {
    TempDir dir;
    const auto split = tasks::gen_1d(tasks::TargetFunction::F2, 20, 0, 30);
    gp::OptimizeOptions o;
    o.restarts = 1;
    const auto r = tasks::run_regression(kernels::KernelSpec::analytic(1), split, o);
    EXPECT_GT(r.r2, 0.9);
    EXPECT_EQ(r.n_train, 20);
    EXPECT_EQ(r.posterior.mean.size(), 30);
    EXPECT_GE(r.band_coverage(), 0.0);
    const auto again = tasks::evaluate_regression(kernels::KernelSpec::analytic(1), r.hp, split);
    EXPECT_NEAR(again.r2, r.r2, 1e-12);

    tasks::write_prediction_csv(r, dir / "p.csv");
    const auto text = slurp(dir / "p.csv");
    EXPECT_EQ(text.substr(0, text.find('\n')), "x1,mean,lower,upper,truth");
    const auto j = nlohmann::json::parse(tasks::results_json(r));
    EXPECT_EQ(j["kernel"], "coherent");
    EXPECT_DOUBLE_EQ(j["r2"].get<double>(), r.r2);
}

TEST(Tasks, HardwarePipeline) {
    // The emulated Gram is indefinite; smaller splits can give negative
    // posterior variances, which posterior() reports instead of hiding.
    const auto split = tasks::gen_1d(tasks::TargetFunction::XSinX, 40, 0);
    tasks::HardwareOptions o;
    o.restarts = 1;
    o.bounds.sigma_d = {1e-3, 1e3};
    const auto r = tasks::run_hardware_regression(split, o, 0);
    EXPECT_EQ(r.simulated.size(), 140);
    EXPECT_EQ(r.emulated.provenance, kernels::Provenance::ShotEmulated);
    EXPECT_TRUE(r.regression.discrepancy);
    EXPECT_EQ(r.regression.xstar, split.test.x);
    const auto r2 = tasks::run_hardware_regression(split, o, 0);
    EXPECT_EQ(r.emulated.values, r2.emulated.values);
}
