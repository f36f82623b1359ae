#pragma once

// Model-based reinforcement learning on the car-on-hill task. Two GPs learn
// the dynamics, a third represents the value function over a grid of
// support states, and value iteration runs on the GP posterior means.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qkgp/gp.hpp"
#include "qkgp/tasks.hpp"

namespace qkgp::rl {

using tasks::CarState;
using tasks::HillConfig;

/// Dynamics fits: scaled-unit bounds s in [1e-3, 1e3], c in [1e-3, 20],
/// centre start plus one random start.
inline gp::OptimizeOptions default_dynamics_optimize() {
    gp::OptimizeOptions o;
    o.bounds.s = {1e-3, 1e3};
    o.bounds.c = {1e-3, 20.0};
    o.restarts = 1;
    return o;
}

struct RlOptions {
    HillConfig hill;
    int n_train = 128;
    int grid = 20;  ///< support states per axis
    int iters = 500;
    double tolerance = 1e-6;
    double value_noise = 1e-6;
    /// Refit value-GP s, c to the converged values and iterate again.
    /// Off by default: the first sweep's values are close to the reward step
    /// and the fit drifts to short length scales.
    bool optimize_value = false;
    gp::OptimizeOptions dynamics_optimize = default_dynamics_optimize();
    /// Initial value-GP hyperparameters (scaled state units).
    kernels::Hyperparams value_hp{1.0, {0.2, 0.2}, {}, 0.0};
};

class Policy {
public:
    Policy(HillConfig cfg, std::shared_ptr<const gp::GPModel> next_x, std::shared_ptr<const gp::GPModel> next_v,
           std::shared_ptr<const gp::GPModel> value);

    const HillConfig& config() const noexcept { return cfg_; }
    const gp::GPModel& value_model() const noexcept { return *value_; }

    /// Index into config().actions maximising r(s') + discount V(s');
    /// ties go to the lowest index.
    int act(CarState s) const;
    double value(CarState s) const;
    /// Model prediction of the next state under action index k.
    CarState predict(CarState s, int action) const;

private:
    HillConfig cfg_;
    std::shared_ptr<const gp::GPModel> next_x_, next_v_, value_;
};

struct TrainReport {
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;  ///< final max-norm change
    std::vector<double> residuals;
    double contraction = 0.0;  ///< discount * max_a ||W_a||_inf of the final value model
    double value_noise = 0.0;  ///< support noise after contraction raises
};

/// Trains the dynamics GPs with `spec` (3-D) and the value GP with the same
/// family in 2-D; Squeezed falls back to the coherent kernel for the value GP.
/// The support noise starts at options.value_noise and is raised tenfold
/// until the propagation is a max-norm contraction.
/// Throws InstabilityError if |V| exceeds 1e6.
Policy rl_train(const kernels::KernelSpec& spec, const RlOptions& options, std::uint64_t seed,
                TrainReport* report = nullptr);

/// Value iteration on a fixed support set. rewards(i, a) and the value
/// propagation matrices w[a] = K(s'_a, S) Q^-1 are supplied by the caller.
/// Returns V over the support states.
Eigen::VectorXd value_iteration(const Eigen::MatrixXd& rewards, const std::vector<Eigen::MatrixXd>& w,
                                double discount, int iters, double tolerance, TrainReport* report = nullptr);

struct Step {
    double x = 0.0;
    double v = 0.0;
    double action = 0.0;  ///< physical acceleration
    double reward = 0.0;
};

struct Episode {
    std::vector<Step> trajectory;
    bool reached_goal = false;
    int steps_to_goal = -1;
    int goal_steps = 0;  ///< steps spent in the goal region
};

struct RolloutOptions {
    /// Starting state; defaults to rest at the valley bottom.
    std::optional<CarState> start;
    /// Uniform perturbation of the start position, in units of d, drawn from
    /// the rollout stream of the seed.
    double start_jitter = 0.0;
};

/// Simulates the true dynamics under the greedy policy with positions and
/// velocities clamped to the configured ranges.
Episode rl_rollout(const Policy& policy, const HillConfig& cfg, int steps, std::uint64_t seed,
                   const RolloutOptions& options = {});

/// Same with a fixed action (physical acceleration) every step.
Episode constant_rollout(double a, const HillConfig& cfg, int steps, CarState start);

/// One JSON object per line: {"t", "x", "v", "action", "reward"}.
std::string episode_json_lines(const Episode& episode);

}  // namespace qkgp::rl
