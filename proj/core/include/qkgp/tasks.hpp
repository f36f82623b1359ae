#pragma once

// Experiment harnesses: 1-D function regression, car-on-hill dynamics
// regression and the hardware-emulated Gram pipeline.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkgp/gp.hpp"
#include "qkgp/kernels.hpp"

namespace qkgp::tasks {

using gp::Dataset;
using kernels::Hyperparams;
using kernels::KernelSpec;
using kernels::Points;

// 1-D regression ---------------------------------------------------------------

enum class TargetFunction { XSinX, F1, F2 };

TargetFunction parse_target(std::string_view id);
std::string to_string(TargetFunction f);
double evaluate(TargetFunction f, double x);

/// Training set plus noiseless test set (test sigma2 is zero).
struct Split {
    Dataset train;
    Dataset test;
};

/// Training inputs evenly spaced on [0.1, 19.9]; sigma2_i ~ U[0, 1] and
/// y_i = f(x_i) + N(0, sigma2_i), both from the dataset stream of `seed`.
/// Test inputs evenly spaced on [0, 20].
Split gen_1d(TargetFunction f, int n_train, std::uint64_t seed, int n_test = 100);

// Car on a hill ------------------------------------------------------------------

/// Car-on-hill constants. Physical units; the GP models see scaled
/// coordinates x / d, v / v_max and a / a_max with a_max = v_max^2 / d.
struct HillConfig {
    double d = 1.2;            ///< position half-range of the sampling box
    double v_max = 0.07;       ///< velocity half-range
    double force = 1.0;        ///< F in v' = v + dt (F a - G cos(w x))
    double gravity = 0.0025;   ///< G
    double frequency = 3.0;    ///< w
    double dt = 1.0;
    double goal = 0.5;         ///< reward region x >= goal
    std::vector<double> actions{-1.0, -0.5, 0.0, 0.5, 1.0};  ///< in units of a_max
    double discount = 0.95;
    double noise_var = 1e-6;   ///< sigma2 of every dynamics observation
    double clamp = 1.5;        ///< rollouts clamp |x| <= clamp d, |v| <= clamp v_max

    double a_max() const noexcept { return v_max * v_max / d; }
    /// Bottom of the valley.
    double valley() const noexcept;
    void validate() const;
};

struct CarState {
    double x = 0.0;
    double v = 0.0;
};

/// One step of the dynamics for a physical acceleration `a`, unclamped.
CarState hill_step(const HillConfig& cfg, CarState s, double a);

/// Next-x and next-v regression sets over the same n samples drawn uniformly
/// in the (x, v, a) box. Features and targets are scaled.
struct DynamicsData {
    Dataset next_x;
    Dataset next_v;
};

DynamicsData gen_dynamics(const HillConfig& cfg, int n, std::uint64_t seed);

// Regression pipelines -------------------------------------------------------

struct RegressionResult {
    std::string kernel;
    Hyperparams hp;
    gp::Bounds bounds;
    bool discrepancy = false;
    double lml = 0.0;
    double r2 = 0.0;
    std::uint64_t seed = 0;
    Eigen::Index n_train = 0;
    Eigen::Index n_test = 0;
    Points xstar;
    Eigen::VectorXd truth;
    gp::Posterior posterior;

    /// Fraction of test targets inside mean +- 1.96 sd.
    double band_coverage() const;
};

/// Optimises the hyperparameters on split.train, then predicts split.test.
RegressionResult run_regression(const KernelSpec& spec, const Split& split, const gp::OptimizeOptions& options);

/// Same with a prepared kernel evaluator.
RegressionResult run_regression(std::shared_ptr<const kernels::Kernel> kernel, const Split& split,
                                const gp::OptimizeOptions& options);

/// Predicts with fixed hyperparameters, no optimisation.
RegressionResult evaluate_regression(const KernelSpec& spec, const Hyperparams& hp, const Split& split,
                                     bool discrepancy = false);

struct DynamicsFit {
    Hyperparams hp;
    double lml = 0.0;
    double r2 = 0.0;
};

struct DynamicsSetResult {
    int set = 0;
    DynamicsFit x;
    DynamicsFit v;
    /// Squeezed runs first fit the coherent kernel on the same data and start
    /// the squeezed search from its optimum with d = 0.
    std::optional<DynamicsFit> coherent_x;
    std::optional<DynamicsFit> coherent_v;
};

struct DynamicsOptions {
    HillConfig hill;
    int n_train = 128;
    int n_test = 100;
    int sets = 10;
    gp::OptimizeOptions optimize;
    /// Used for the coherent baseline fit of squeezed runs.
    gp::OptimizeOptions baseline_optimize;
};

/// Set k uses derive_seed(seed, dataset, k) for training data and
/// derive_seed(seed, test_set, k) for test data.
std::vector<DynamicsSetResult> run_dynamics(const KernelSpec& spec, const DynamicsOptions& options,
                                            std::uint64_t seed);

/// Training/test data of dynamics set k, as used by run_dynamics.
std::pair<DynamicsData, DynamicsData> dynamics_set(const DynamicsOptions& options, std::uint64_t seed, int set);

// Hardware-emulated pipeline -------------------------------------------------

struct HardwareOptions {
    /// Kernel evaluated for the simulated Gram, with s = 1 and fixed c.
    int levels = 4;
    int steps = 3;
    double c = 2.225;
    kernels::HardwareNoise noise;
    gp::Bounds bounds;  ///< s and sigma_d are optimised
    int restarts = 4;
};

struct HardwareResult {
    kernels::GramMatrix simulated;  ///< unit prefactor, train + test
    kernels::GramMatrix emulated;
    RegressionResult regression;
};

/// Builds the simulated Gram over train and test inputs, emulates its
/// hardware estimate, ingests that as an ExternalGram and regresses with a
/// discrepancy term.
HardwareResult run_hardware_regression(const Split& split, const HardwareOptions& options, std::uint64_t seed);

// Files ---------------------------------------------------------------------------

/// Header x1..xD,y,sigma2; numbers with 17 significant digits.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Columns x1..xD,mean,lower,upper (+ truth when available).
void write_prediction_csv(const RegressionResult& result, const std::filesystem::path& path);

/// {kernel, hyperparams, bounds, lml, r2, seed, n_train, n_test}.
std::string results_json(const RegressionResult& result);

}  // namespace qkgp::tasks
