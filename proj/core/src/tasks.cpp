#include "qkgp/tasks.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qkgp/error.hpp"
#include "qkgp/seed.hpp"

namespace qkgp::tasks {

namespace {

Eigen::VectorXd linspace(double lo, double hi, int n) {
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out(i) = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out(n - 1) = hi;
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

TargetFunction parse_target(std::string_view id) {
    if (id == "xsinx") return TargetFunction::XSinX;
    if (id == "f1") return TargetFunction::F1;
    if (id == "f2") return TargetFunction::F2;
    throw InvalidArgument("unknown target function '" + std::string(id) + "'");
}

std::string to_string(TargetFunction f) {
    switch (f) {
        case TargetFunction::XSinX: return "xsinx";
        case TargetFunction::F1: return "f1";
        case TargetFunction::F2: return "f2";
    }
    return "unknown";
}

double evaluate(TargetFunction f, double x) {
    switch (f) {
        case TargetFunction::XSinX: return x * std::sin(x);
        case TargetFunction::F1: return x * std::sin(0.65 * x / (1.0 + 0.1 * x)) * std::cos(std::sin(x));
        case TargetFunction::F2: return 0.65 * x / (1.0 + 0.1 * x);
    }
    return 0.0;
}

Split gen_1d(TargetFunction f, int n_train, std::uint64_t seed, int n_test) {
    if (n_train < 2) throw InvalidArgument("1-D regression needs at least 2 training points");
    if (n_test < 2) throw InvalidArgument("1-D regression needs at least 2 test points");
    Split split;
    const Eigen::VectorXd xs = linspace(0.1, 19.9, n_train);
    split.train.x = xs;
    split.train.y.resize(n_train);
    split.train.sigma2.resize(n_train);
    std::mt19937_64 rng(derive_seed(seed, streams::dataset));
    std::uniform_real_distribution<double> variance(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < n_train; ++i) {
        const double s2 = variance(rng);
        split.train.sigma2(i) = s2;
        split.train.y(i) = evaluate(f, xs(i)) + std::sqrt(s2) * normal(rng);
    }
    const Eigen::VectorXd xt = linspace(0.0, 20.0, n_test);
    split.test.x = xt;
    split.test.y = xt.unaryExpr([f](double x) { return evaluate(f, x); });
    split.test.sigma2 = Eigen::VectorXd::Zero(n_test);
    return split;
}

// Hill -------------------------------------------------------------------------

double HillConfig::valley() const noexcept {
    // Potential (G/w) sin(w x) has its minimum where w x = -pi/2.
    return -std::numbers::pi / (2.0 * frequency);
}

void HillConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
    };
    positive(d, "d");
    positive(v_max, "v_max");
    positive(dt, "dt");
    positive(clamp, "clamp");
    if (!std::isfinite(force) || !std::isfinite(gravity) || !std::isfinite(frequency) || !std::isfinite(goal)) {
        throw InvalidArgument("hill constants must be finite");
    }
    if (actions.empty()) throw InvalidArgument("action set is empty");
    for (double a : actions) {
        if (!(std::abs(a) <= 1.0)) throw InvalidArgument("actions are fractions of a_max and must lie in [-1, 1]");
    }
    if (!(discount >= 0.0 && discount < 1.0)) throw InvalidArgument("discount must lie in [0, 1)");
    if (!(noise_var >= 0.0)) throw InvalidArgument("noise variance must be >= 0");
}

CarState hill_step(const HillConfig& cfg, CarState s, double a) {
    CarState next;
    next.v = s.v + cfg.dt * (cfg.force * a - cfg.gravity * std::cos(cfg.frequency * s.x));
    next.x = s.x + cfg.dt * next.v;
    return next;
}

DynamicsData gen_dynamics(const HillConfig& cfg, int n, std::uint64_t seed) {
    cfg.validate();
    if (n < 1) throw InvalidArgument("dynamics set needs at least one sample");
    std::mt19937_64 rng(derive_seed(seed, streams::dataset));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    DynamicsData out;
    Points features(n, 3);
    Eigen::VectorXd nx(n), nv(n);
    for (int i = 0; i < n; ++i) {
        const double xs = unit(rng);
        const double vs = unit(rng);
        const double as = unit(rng);
        features(i, 0) = xs;
        features(i, 1) = vs;
        features(i, 2) = as;
        const CarState next = hill_step(cfg, {xs * cfg.d, vs * cfg.v_max}, as * cfg.a_max());
        nx(i) = next.x / cfg.d;
        nv(i) = next.v / cfg.v_max;
    }
    const Eigen::VectorXd noise = Eigen::VectorXd::Constant(n, cfg.noise_var);
    out.next_x = {features, nx, noise};
    out.next_v = {features, nv, noise};
    return out;
}

// Regression -------------------------------------------------------------------

double RegressionResult::band_coverage() const {
    const Eigen::Index n = truth.size();
    if (n == 0 || posterior.mean.size() != n) return 0.0;
    Eigen::Index inside = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double half = 1.96 * std::sqrt(std::max(0.0, posterior.cov(i, i)));
        if (std::abs(truth(i) - posterior.mean(i)) <= half) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(n);
}

namespace {

RegressionResult predict(std::shared_ptr<const kernels::Kernel> kernel, const Hyperparams& hp, const Split& split,
                         bool discrepancy) {
    RegressionResult r;
    r.kernel = kernels::label(kernel->spec());
    r.hp = hp;
    r.discrepancy = discrepancy;
    const gp::GPModel model(std::move(kernel), hp, split.train, discrepancy);
    r.lml = model.log_marginal_likelihood();
    r.posterior = model.posterior(split.test.x);
    r.xstar = split.test.x;
    r.truth = split.test.y;
    r.r2 = gp::r2_score(r.posterior.mean, r.truth);
    r.n_train = split.train.size();
    r.n_test = split.test.size();
    return r;
}

}  // namespace

RegressionResult run_regression(std::shared_ptr<const kernels::Kernel> kernel, const Split& split,
                                const gp::OptimizeOptions& options) {
    const auto best = gp::optimize(kernel, split.train, options);
    RegressionResult r = predict(std::move(kernel), best.hp, split, options.discrepancy);
    r.bounds = options.bounds;
    r.seed = options.seed;
    return r;
}

RegressionResult run_regression(const KernelSpec& spec, const Split& split, const gp::OptimizeOptions& options) {
    return run_regression(std::make_shared<const kernels::Kernel>(spec), split, options);
}

RegressionResult evaluate_regression(const KernelSpec& spec, const Hyperparams& hp, const Split& split,
                                     bool discrepancy) {
    return predict(std::make_shared<const kernels::Kernel>(spec), hp, split, discrepancy);
}

std::pair<DynamicsData, DynamicsData> dynamics_set(const DynamicsOptions& options, std::uint64_t seed, int set) {
    const auto k = static_cast<std::uint64_t>(set);
    return {gen_dynamics(options.hill, options.n_train, derive_seed(seed, streams::dataset, k)),
            gen_dynamics(options.hill, options.n_test, derive_seed(seed, streams::test_set, k))};
}

namespace {

DynamicsFit fit(const std::shared_ptr<const kernels::Kernel>& kernel, const Dataset& train, const Dataset& test,
                const gp::OptimizeOptions& options) {
    const auto best = gp::optimize(kernel, train, options);
    const gp::GPModel model(kernel, best.hp, train, options.discrepancy);
    DynamicsFit out;
    out.hp = best.hp;
    out.lml = model.log_marginal_likelihood();
    out.r2 = gp::r2_score(model.predict_mean(test.x), test.y);
    return out;
}

}  // namespace

std::vector<DynamicsSetResult> run_dynamics(const KernelSpec& spec, const DynamicsOptions& options,
                                            std::uint64_t seed) {
    if (spec.dims != 3) throw InvalidArgument("dynamics regression needs a 3-D kernel");
    if (options.sets < 1) throw InvalidArgument("dynamics sweep needs at least one set");
    const auto kernel = std::make_shared<const kernels::Kernel>(spec);
    const bool squeezed = spec.family == kernels::Family::Squeezed;
    const auto coherent = std::make_shared<const kernels::Kernel>(KernelSpec::analytic(3));

    std::vector<DynamicsSetResult> results;
    for (int k = 0; k < options.sets; ++k) {
        const auto [train, test] = dynamics_set(options, seed, k);
        gp::OptimizeOptions opts = options.optimize;
        opts.seed = derive_seed(options.optimize.seed, streams::optimizer, static_cast<std::uint64_t>(k));
        DynamicsSetResult r;
        r.set = k;
        if (squeezed) {
            gp::OptimizeOptions base = options.baseline_optimize;
            base.seed = derive_seed(options.baseline_optimize.seed, streams::optimizer, static_cast<std::uint64_t>(k));
            r.coherent_x = fit(coherent, train.next_x, test.next_x, base);
            r.coherent_v = fit(coherent, train.next_v, test.next_v, base);
            auto nested = [](const DynamicsFit& f) {
                Hyperparams hp = f.hp;
                hp.d = {0.0, 0.0, 0.0};
                return hp;
            };
            gp::OptimizeOptions ox = opts, ov = opts;
            ox.warm_starts.insert(ox.warm_starts.begin(), nested(*r.coherent_x));
            ov.warm_starts.insert(ov.warm_starts.begin(), nested(*r.coherent_v));
            r.x = fit(kernel, train.next_x, test.next_x, ox);
            r.v = fit(kernel, train.next_v, test.next_v, ov);
        } else {
            r.x = fit(kernel, train.next_x, test.next_x, opts);
            r.v = fit(kernel, train.next_v, test.next_v, opts);
        }
        results.push_back(std::move(r));
    }
    return results;
}

// Hardware pipeline ------------------------------------------------------------

HardwareResult run_hardware_regression(const Split& split, const HardwareOptions& options, std::uint64_t seed) {
    if (split.train.dims() != 1 || split.test.dims() != 1) throw InvalidArgument("hardware pipeline is 1-D");
    const Eigen::Index n_train = split.train.size();
    const Eigen::Index n_test = split.test.size();
    const Eigen::Index n = n_train + n_test;
    Points all(n, 1);
    all.topRows(n_train) = split.train.x;
    all.bottomRows(n_test) = split.test.x;

    HardwareResult out;
    const kernels::Kernel circuit(KernelSpec::qubit(1, options.levels, options.steps));
    out.simulated = kernels::gram(circuit, Hyperparams{1.0, {options.c}, {}, 0.0}, all);
    out.emulated = kernels::emulate_hardware_gram(out.simulated, 1.0, options.noise, seed);

    Split indexed;
    indexed.train = split.train;
    indexed.test = split.test;
    for (Eigen::Index i = 0; i < n_train; ++i) indexed.train.x(i, 0) = static_cast<double>(i);
    for (Eigen::Index i = 0; i < n_test; ++i) indexed.test.x(i, 0) = static_cast<double>(n_train + i);

    gp::OptimizeOptions opts;
    opts.bounds = options.bounds;
    opts.restarts = options.restarts;
    opts.seed = seed;
    opts.discrepancy = true;
    out.regression = run_regression(KernelSpec::external_gram(out.emulated), indexed, opts);
    out.regression.xstar = split.test.x;
    return out;
}

// Files ------------------------------------------------------------------------------

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
    data.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (int j = 0; j < data.dims(); ++j) out << 'x' << (j + 1) << ',';
    out << "y,sigma2\n";
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        for (int j = 0; j < data.dims(); ++j) out << fmt(data.x(i, j)) << ',';
        out << fmt(data.y(i)) << ',' << fmt(data.sigma2(i)) << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    const auto cols = header.size();
    if (cols < 3 || header[cols - 2] != "y" || header[cols - 1] != "sigma2") {
        throw IoError(path.string() + ": header must be x1,...,xD,y,sigma2");
    }
    for (std::size_t j = 0; j + 2 < cols; ++j) {
        if (header[j] != "x" + std::to_string(j + 1)) throw IoError(path.string() + ": bad header column " + header[j]);
    }
    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const char* end = cell.data() + cell.size();
            auto [ptr, ec] = std::from_chars(cell.data(), end, v);
            if (ec != std::errc{} || ptr != end) {
                throw IoError(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
            }
            row.push_back(v);
        }
        if (row.size() != cols) throw IoError(path.string() + ":" + std::to_string(line_no) + ": wrong column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path.string() + ": no data rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto dims = static_cast<Eigen::Index>(cols - 2);
    Dataset d;
    d.x.resize(n, dims);
    d.y.resize(n);
    d.sigma2.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < dims; ++j) d.x(i, j) = rows[i][j];
        d.y(i) = rows[i][cols - 2];
        d.sigma2(i) = rows[i][cols - 1];
    }
    try {
        d.validate();
    } catch (const InvalidArgument& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return d;
}

void write_prediction_csv(const RegressionResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const auto dims = result.xstar.cols();
    for (Eigen::Index j = 0; j < dims; ++j) out << 'x' << (j + 1) << ',';
    out << "mean,lower,upper";
    const bool truth = result.truth.size() == result.posterior.mean.size();
    if (truth) out << ",truth";
    out << '\n';
    for (Eigen::Index i = 0; i < result.posterior.mean.size(); ++i) {
        for (Eigen::Index j = 0; j < dims; ++j) out << fmt(result.xstar(i, j)) << ',';
        const double m = result.posterior.mean(i);
        const double half = 1.96 * std::sqrt(std::max(0.0, result.posterior.cov(i, i)));
        out << fmt(m) << ',' << fmt(m - half) << ',' << fmt(m + half);
        if (truth) out << ',' << fmt(result.truth(i));
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

std::string results_json(const RegressionResult& r) {
    using nlohmann::json;
    auto bound = [](const gp::Bound& b) { return json::array({b.lo, b.hi}); };
    json bounds = {{"s", bound(r.bounds.s)}};
    if (!r.hp.c.empty()) bounds["c"] = bound(r.bounds.c);
    if (!r.hp.d.empty()) bounds["d"] = bound(r.bounds.d);
    if (r.discrepancy) bounds["sigma_d"] = bound(r.bounds.sigma_d);
    json hp = {{"s", r.hp.s}, {"c", r.hp.c}};
    if (!r.hp.d.empty()) hp["d"] = r.hp.d;
    if (r.discrepancy) hp["sigma_d"] = r.hp.sigma_d;
    const json j = {{"kernel", r.kernel},       {"hyperparams", hp}, {"bounds", bounds},
                    {"lml", r.lml},             {"r2", r.r2},        {"seed", r.seed},
                    {"n_train", r.n_train},     {"n_test", r.n_test}};
    return j.dump(2) + "\n";
}

}  // namespace qkgp::tasks
