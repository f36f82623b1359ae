#include "qkgp/rl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "qkgp/error.hpp"
#include "qkgp/seed.hpp"

namespace qkgp::rl {

namespace {

using kernels::Points;

constexpr double kDivergence = 1e6;

double reward(const HillConfig& cfg, double x_physical) { return x_physical >= cfg.goal ? 1.0 : 0.0; }

// Scaled next state predicted by the dynamics models, clamped to the
// simulation range.
Points predict_next(const gp::GPModel& next_x, const gp::GPModel& next_v, const Points& features, double clamp) {
    const Eigen::VectorXd nx = next_x.predict_mean(features);
    const Eigen::VectorXd nv = next_v.predict_mean(features);
    Points out(features.rows(), 2);
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        out(i, 0) = std::clamp(nx(i), -clamp, clamp);
        out(i, 1) = std::clamp(nv(i), -clamp, clamp);
    }
    return out;
}

kernels::KernelSpec value_spec(const kernels::KernelSpec& spec) {
    kernels::KernelSpec v = spec;
    if (spec.family == kernels::Family::Squeezed || spec.family == kernels::Family::ExternalGram) {
        return kernels::KernelSpec::analytic(2);
    }
    v.dims = 2;
    return v;
}

}  // namespace

Policy::Policy(HillConfig cfg, std::shared_ptr<const gp::GPModel> next_x, std::shared_ptr<const gp::GPModel> next_v,
               std::shared_ptr<const gp::GPModel> value)
    : cfg_(std::move(cfg)), next_x_(std::move(next_x)), next_v_(std::move(next_v)), value_(std::move(value)) {
    cfg_.validate();
    if (!next_x_ || !next_v_ || !value_) throw InvalidArgument("policy needs dynamics and value models");
}

CarState Policy::predict(CarState s, int action) const {
    Points f(1, 3);
    f << s.x / cfg_.d, s.v / cfg_.v_max, cfg_.actions.at(static_cast<std::size_t>(action));
    const Points next = predict_next(*next_x_, *next_v_, f, cfg_.clamp);
    return {next(0, 0) * cfg_.d, next(0, 1) * cfg_.v_max};
}

double Policy::value(CarState s) const {
    Points p(1, 2);
    p << s.x / cfg_.d, s.v / cfg_.v_max;
    return value_->predict_mean(p)(0);
}

int Policy::act(CarState s) const {
    const auto n = static_cast<Eigen::Index>(cfg_.actions.size());
    Points f(n, 3);
    for (Eigen::Index k = 0; k < n; ++k) f.row(k) << s.x / cfg_.d, s.v / cfg_.v_max, cfg_.actions[k];
    const Points next = predict_next(*next_x_, *next_v_, f, cfg_.clamp);
    const Eigen::VectorXd v = value_->predict_mean(next);
    int best = 0;
    double best_q = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double q = reward(cfg_, next(k, 0) * cfg_.d) + cfg_.discount * v(k);
        if (q > best_q) {
            best_q = q;
            best = static_cast<int>(k);
        }
    }
    return best;
}

Eigen::VectorXd value_iteration(const Eigen::MatrixXd& rewards, const std::vector<Eigen::MatrixXd>& w,
                                double discount, int iters, double tolerance, TrainReport* report) {
    const Eigen::Index n = rewards.rows();
    if (static_cast<Eigen::Index>(w.size()) != rewards.cols()) throw DimensionMismatch("one propagation matrix per action");
    for (const auto& m : w) {
        if (m.rows() != n || m.cols() != n) throw DimensionMismatch("propagation matrix has the wrong shape");
    }
    if (iters < 1) throw InvalidArgument("value iteration needs at least one iteration");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    TrainReport local;
    if (report) {
        local.contraction = report->contraction;
        local.value_noise = report->value_noise;
    }
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd next = rewards.col(0) + discount * (w[0] * v);
        for (std::size_t a = 1; a < w.size(); ++a) {
            next = next.cwiseMax(rewards.col(static_cast<Eigen::Index>(a)) + discount * (w[a] * v));
        }
        if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kDivergence) {
            throw InstabilityError("value iteration diverged after " + std::to_string(it + 1) + " iterations");
        }
        const double change = (next - v).cwiseAbs().maxCoeff();
        v = std::move(next);
        local.iterations = it + 1;
        local.residual = change;
        local.residuals.push_back(change);
        if (change <= tolerance) {
            local.converged = true;
            break;
        }
    }
    if (report) *report = std::move(local);
    return v;
}

namespace {

std::vector<Eigen::MatrixXd> propagation(const std::shared_ptr<const kernels::Kernel>& kernel,
                                         const kernels::Hyperparams& hp, const gp::Dataset& support,
                                         const std::vector<Points>& next_states) {
    const gp::GPModel model(kernel, hp, support);
    std::vector<Eigen::MatrixXd> w;
    for (const auto& s : next_states) {
        const Eigen::MatrixXd k = kernels::cross_gram(*kernel, hp, s, support.x);
        w.push_back(model.solve(k.transpose()).transpose());
    }
    return w;
}

double contraction(const std::vector<Eigen::MatrixXd>& w, double discount) {
    double norm = 0.0;
    for (const auto& m : w) norm = std::max(norm, m.cwiseAbs().rowwise().sum().maxCoeff());
    return discount * norm;
}

// An interpolating mean can amplify values, so the max-norm bound of the
// Bellman map may exceed one. Raise the support noise until it contracts.
std::vector<Eigen::MatrixXd> contracting_propagation(const std::shared_ptr<const kernels::Kernel>& kernel,
                                                     const kernels::Hyperparams& hp, gp::Dataset& support,
                                                     const std::vector<Points>& next_states, double discount,
                                                     TrainReport& rep) {
    constexpr int kMaxRaises = 12;
    for (int raise = 0;; ++raise) {
        auto w = propagation(kernel, hp, support, next_states);
        rep.contraction = contraction(w, discount);
        rep.value_noise = support.sigma2(0);
        if (rep.contraction < 1.0) return w;
        if (raise == kMaxRaises) {
            throw InstabilityError("value propagation does not contract (factor " + std::to_string(rep.contraction) +
                                   ")");
        }
        support.sigma2 *= 10.0;
    }
}

}  // namespace

Policy rl_train(const kernels::KernelSpec& spec, const RlOptions& options, std::uint64_t seed, TrainReport* report) {
    const HillConfig& cfg = options.hill;
    cfg.validate();
    if (spec.dims != 3) throw InvalidArgument("dynamics models need a 3-D kernel");
    if (options.grid < 2) throw InvalidArgument("support grid needs at least 2 states per axis");

    const auto data = tasks::gen_dynamics(cfg, options.n_train, derive_seed(seed, streams::dataset));
    const auto dyn_kernel = std::make_shared<const kernels::Kernel>(spec);
    gp::OptimizeOptions dyn_opts = options.dynamics_optimize;
    dyn_opts.seed = derive_seed(seed, streams::optimizer);
    const auto hx = gp::optimize(dyn_kernel, data.next_x, dyn_opts);
    const auto hv = gp::optimize(dyn_kernel, data.next_v, dyn_opts);
    auto next_x = std::make_shared<const gp::GPModel>(dyn_kernel, hx.hp, data.next_x);
    auto next_v = std::make_shared<const gp::GPModel>(dyn_kernel, hv.hp, data.next_v);

    // Support states on a regular grid over the scaled box.
    const int g = options.grid;
    const Eigen::Index n = static_cast<Eigen::Index>(g) * g;
    gp::Dataset support;
    support.x.resize(n, 2);
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            support.x(i * g + j, 0) = -1.0 + 2.0 * i / (g - 1);
            support.x(i * g + j, 1) = -1.0 + 2.0 * j / (g - 1);
        }
    }
    support.y = Eigen::VectorXd::Zero(n);
    support.sigma2 = Eigen::VectorXd::Constant(n, options.value_noise);

    const auto actions = static_cast<Eigen::Index>(cfg.actions.size());
    std::vector<Points> next_states;
    Eigen::MatrixXd rewards(n, actions);
    for (Eigen::Index a = 0; a < actions; ++a) {
        Points f(n, 3);
        f.leftCols(2) = support.x;
        f.col(2).setConstant(cfg.actions[static_cast<std::size_t>(a)]);
        next_states.push_back(predict_next(*next_x, *next_v, f, cfg.clamp));
        for (Eigen::Index i = 0; i < n; ++i) rewards(i, a) = reward(cfg, next_states.back()(i, 0) * cfg.d);
    }

    const auto value_kernel = std::make_shared<const kernels::Kernel>(value_spec(spec));
    kernels::Hyperparams vhp = options.value_hp;
    TrainReport rep;
    auto w = contracting_propagation(value_kernel, vhp, support, next_states, cfg.discount, rep);
    support.y = value_iteration(rewards, w, cfg.discount, options.iters, options.tolerance, &rep);

    if (options.optimize_value && support.y.cwiseAbs().maxCoeff() > 0.0) {
        gp::OptimizeOptions vopts;
        vopts.bounds.s = {1e-3, 1e2};
        vopts.bounds.c = {0.05, 10.0};
        vopts.restarts = 2;
        vopts.seed = derive_seed(seed, streams::optimizer, 1);
        vopts.warm_starts = {vhp};
        // Fit the shape of V at the nominal noise, then raise it again.
        support.sigma2.setConstant(options.value_noise);
        vhp = gp::optimize(value_kernel, support, vopts).hp;
        w = contracting_propagation(value_kernel, vhp, support, next_states, cfg.discount, rep);
        support.y = value_iteration(rewards, w, cfg.discount, options.iters, options.tolerance, &rep);
    }
    if (report) *report = rep;

    auto value = std::make_shared<const gp::GPModel>(value_kernel, vhp, support);
    return Policy(cfg, std::move(next_x), std::move(next_v), std::move(value));
}

namespace {

CarState clamp_state(const HillConfig& cfg, CarState s) {
    return {std::clamp(s.x, -cfg.clamp * cfg.d, cfg.clamp * cfg.d),
            std::clamp(s.v, -cfg.clamp * cfg.v_max, cfg.clamp * cfg.v_max)};
}

template <class Choose>
Episode simulate(const HillConfig& cfg, int steps, CarState s, Choose choose) {
    if (steps < 1) throw InvalidArgument("rollout needs at least one step");
    Episode ep;
    for (int t = 0; t < steps; ++t) {
        const double a = choose(s);
        const CarState next = clamp_state(cfg, tasks::hill_step(cfg, s, a));
        const double r = reward(cfg, next.x);
        ep.trajectory.push_back({s.x, s.v, a, r});
        if (r > 0.0) {
            ++ep.goal_steps;
            if (!ep.reached_goal) {
                ep.reached_goal = true;
                ep.steps_to_goal = t + 1;
            }
        }
        s = next;
    }
    return ep;
}

}  // namespace

Episode rl_rollout(const Policy& policy, const HillConfig& cfg, int steps, std::uint64_t seed,
                   const RolloutOptions& options) {
    cfg.validate();
    CarState start = options.start.value_or(CarState{cfg.valley(), 0.0});
    if (options.start_jitter > 0.0) {
        std::mt19937_64 rng(derive_seed(seed, streams::rollout));
        start.x += cfg.d * std::uniform_real_distribution<double>(-options.start_jitter, options.start_jitter)(rng);
    }
    start = clamp_state(cfg, start);
    return simulate(cfg, steps, start, [&](CarState s) {
        return cfg.actions[static_cast<std::size_t>(policy.act(s))] * cfg.a_max();
    });
}

Episode constant_rollout(double a, const HillConfig& cfg, int steps, CarState start) {
    cfg.validate();
    return simulate(cfg, steps, clamp_state(cfg, start), [a](CarState) { return a; });
}

std::string episode_json_lines(const Episode& episode) {
    std::string out;
    for (std::size_t t = 0; t < episode.trajectory.size(); ++t) {
        const auto& s = episode.trajectory[t];
        const nlohmann::json j = {{"t", t}, {"x", s.x}, {"v", s.v}, {"action", s.action}, {"reward", s.reward}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace qkgp::rl
