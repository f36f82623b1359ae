// Acceptance suite. Run without arguments for every criterion, or pass
// criterion numbers. Prints one PASS/FAIL line per criterion; exit status is
// the number of failures (capped at 100).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "qkgp/error.hpp"
#include "qkgp/fock.hpp"
#include "qkgp/gp.hpp"
#include "qkgp/kernels.hpp"
#include "qkgp/pauli.hpp"
#include "qkgp/rl.hpp"
#include "qkgp/tasks.hpp"

using namespace qkgp;
using kernels::Hyperparams;
using kernels::KernelSpec;

namespace {

// Tolerances and budgets.
constexpr double kPauliTol = 1e-12;
constexpr double kSeTol = 1e-12;
constexpr double kTruncTol = 1e-6;
constexpr double kTruncRoundoff = 1e-14;  // once converged, successive N differ by roundoff only
constexpr double kSlopeLo = 0.8, kSlopeHi = 1.2;
constexpr double kSqueezeTol = 1e-6;
constexpr double kSqueezeCoherentTol = 1e-8;
constexpr double kInterpTol = 1e-8;
constexpr double kR2Good = 0.95;
constexpr double kR2Gap = 0.2;
constexpr double kLmlSlack = 1e-6;
constexpr double kNestingRoundoff = 1e-9;
constexpr double kR2vSlack = 0.005;
constexpr double kDiagTarget = 0.98, kDiagTol = 0.01;
constexpr double kFarSim = 1.7e-4;
constexpr double kFloorTarget = 0.02, kFloorTol = 0.005;
constexpr double kCoverage = 0.9;
constexpr int kRolloutSteps = 500;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1 ----------------------------------------------------------------------------------

Outcome pauli_reconstruction() {
    double worst = 0.0;
    for (int n : {2, 4, 8, 16}) {
        const auto s = pauli::decompose(n);
        oracle::Matrix sum = oracle::Matrix::Zero(n, n);
        for (const auto& t : s.terms) sum += t.coefficient * oracle::pauli_string(t.symbols);
        worst = std::max(worst, (sum - oracle::generator(n)).cwiseAbs().maxCoeff());
    }
    std::map<std::string, double> c;
    for (const auto& t : pauli::decompose(4).terms) c[t.symbols] = t.coefficient;
    const double r3 = std::sqrt(3.0), r2 = std::sqrt(2.0);
    const double coeff_err = std::max({std::abs(c["YI"] - (1 + r3) / 2), std::abs(c["YZ"] - (1 - r3) / 2),
                                       std::abs(c["XY"] - r2 / 2), std::abs(c["YX"] + r2 / 2)});
    const bool ok = worst <= kPauliTol && coeff_err <= kPauliTol && c.size() == 4;
    return {ok, fmt("max reconstruction error %.2e, N=4 coefficient error %.2e", worst, coeff_err)};
}

// 2 ----------------------------------------------------------------------------------

Outcome squared_exponential() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ux(-10, 10), uc(0.1, 5);
    const kernels::Kernel k(KernelSpec::analytic(3));
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> x(3), xp(3), c(3);
        double q = 0.0;
        for (int i = 0; i < 3; ++i) {
            x[i] = ux(rng);
            xp[i] = ux(rng);
            c[i] = uc(rng);
            q += (x[i] - xp[i]) * (x[i] - xp[i]) / (2 * c[i] * c[i]);
        }
        worst = std::max(worst, std::abs(k(Hyperparams{1.0, c, {}, 0.0}, x, xp) - std::exp(-q)));
    }
    return {worst <= kSeTol, fmt("max error %.2e over 1000 pairs", worst)};
}

// 3 ----------------------------------------------------------------------------------

Outcome truncation_convergence() {
    std::vector<double> errs;
    for (int n : {4, 8, 16, 32}) {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double r = 2.0 * i / 99.0;
            worst = std::max(worst, std::abs(kernels::dim_kernel_finite(r, 0.0, 1.0, n) - std::exp(-0.5 * r * r)));
        }
        errs.push_back(worst);
    }
    bool monotone = true;
    for (std::size_t k = 1; k < errs.size(); ++k) monotone = monotone && errs[k] <= errs[k - 1] + kTruncRoundoff;
    return {monotone && errs.back() <= kTruncTol,
            fmt("errors N=4,8,16,32: %.2e %.2e %.2e %.2e", errs[0], errs[1], errs[2], errs[3])};
}

// 4 ----------------------------------------------------------------------------------

Outcome trotter_convergence() {
    const auto sum = pauli::decompose(4);
    const std::vector<int> steps{1, 2, 3, 8, 50};
    std::vector<double> worst(steps.size(), 0.0);
    for (int i = 0; i < 40; ++i) {
        const double theta = 0.1 + 1.9 * i / 39.0;
        const oracle::Matrix u = (oracle::Complex(0, -theta) * oracle::generator(4)).exp();
        const double exact = std::norm(u(0, 0));
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const double p = std::norm(pauli::trotter_evolve(sum, theta, steps[k])(0));
            worst[k] = std::max(worst[k], std::abs(p - exact));
        }
    }
    const bool decreasing = std::is_sorted(worst.rbegin(), worst.rend()) &&
                            std::adjacent_find(worst.begin(), worst.end()) == worst.end();
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        mx += std::log(steps[k]) / steps.size();
        my += std::log(worst[k]) / steps.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        sxy += (std::log(steps[k]) - mx) * (std::log(worst[k]) - my);
        sxx += (std::log(steps[k]) - mx) * (std::log(steps[k]) - mx);
    }
    const double slope = -sxy / sxx;
    return {decreasing && slope >= kSlopeLo && slope <= kSlopeHi,
            fmt("max error over theta for steps 1,2,3,8,50: %.2e %.2e %.2e %.2e %.2e; slope %.3f",
                worst[0], worst[1], worst[2], worst[3], worst[4], slope)};
}

// 5 ----------------------------------------------------------------------------------

double squeezed_series_error(int cap) {
    // Random pair points with c = 1/sqrt2 so alpha equals the coordinate.
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> ua(-2, 2), ug(-0.5, 0.5);
    const double c = 1.0 / std::sqrt(2.0);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const kernels::SqueezedPairPoint p{ua(rng), ua(rng), ua(rng), ua(rng)};
        const double scale = std::max({std::abs(p.xi * p.xj), std::abs(p.xpi * p.xpj), 1e-12});
        const double d = ug(rng) / std::max(scale, 1.0);
        const auto a = fock::pair_state(p.xi, p.xj, p.xi * p.xj * d);
        const auto b = fock::pair_state(p.xpi, p.xpj, p.xpi * p.xpj * d);
        const double ref = std::abs(fock::overlap(b, a));
        worst = std::max(worst, std::abs(kernels::squeezed_pair_kernel(p, c, c, d, cap) - ref));
    }
    return worst;
}

Outcome squeezed_oracle() {
    const double series = squeezed_series_error(8);
    const double wide = squeezed_series_error(14);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-1.5, 1.5), uc(0.3, 3);
    const kernels::Kernel sq(KernelSpec::squeezed());
    const kernels::Kernel co(KernelSpec::analytic(3));
    double coherent = 0.0;
    for (int t = 0; t < 200; ++t) {
        std::vector<double> x{ux(rng), ux(rng), ux(rng)}, xp{ux(rng), ux(rng), ux(rng)};
        std::vector<double> c{uc(rng), uc(rng), uc(rng)};
        coherent = std::max(coherent, std::abs(sq(Hyperparams{1, c, {0, 0, 0}, 0}, x, xp) -
                                                co(Hyperparams{1, c, {}, 0}, x, xp)));
    }
    return {series <= kSqueezeTol && coherent <= kSqueezeCoherentTol,
            fmt("cap 8 series vs dense oracle max error %.2e (cap 14 for reference: %.2e); d=0 vs coherent %.2e",
                series, wide, coherent)};
}

// 6 ----------------------------------------------------------------------------------

Outcome gp_identities() {
    const auto split = tasks::gen_1d(tasks::TargetFunction::XSinX, 25, 6);
    gp::Dataset noiseless = split.train;
    noiseless.sigma2.setZero();
    const Hyperparams hp{10.0, {1.3}, {}, 0.0};
    const gp::GPModel exact(KernelSpec::analytic(1), hp, noiseless);
    const double interp = (exact.predict_mean(noiseless.x) - noiseless.y).cwiseAbs().maxCoeff();

    const gp::GPModel plain(KernelSpec::analytic(1), hp, split.train, false);
    const gp::GPModel disc(KernelSpec::analytic(1), hp, split.train, true);
    const auto pa = plain.posterior(split.test.x), pd = disc.posterior(split.test.x);
    const bool bitwise = plain.log_marginal_likelihood() == disc.log_marginal_likelihood() && pa.mean == pd.mean &&
                         pa.cov == pd.cov;

    double excess = -1e300;
    for (const char* k : {"coherent", "C-8", "C-16"}) {
        const gp::GPModel m(kernels::parse_kernel(k, 1), hp, split.train);
        const auto v = m.posterior(split.test.x).variance();
        excess = std::max(excess, (v.array() - hp.s).maxCoeff());
    }
    return {interp <= kInterpTol && bitwise && excess <= 0.0,
            fmt("interpolation error %.2e, sigma_d=0 bitwise %s, max(var - prior) %.2e", interp,
                bitwise ? "yes" : "no", excess)};
}

// 7 ----------------------------------------------------------------------------------

Outcome regression_1d() {
    gp::OptimizeOptions o;
    o.restarts = 4;
    o.seed = 0;
    const auto xs = tasks::gen_1d(tasks::TargetFunction::XSinX, 40, 0);
    std::map<std::string, double> r2;
    for (const char* k : {"C-2", "C-4", "C-8", "C-16", "CQ-4-t1", "CQ-4-t3"}) {
        r2[k] = tasks::run_regression(kernels::parse_kernel(k, 1), xs, o).r2;
    }
    const double f2 = tasks::run_regression(kernels::parse_kernel("C-2", 1),
                                            tasks::gen_1d(tasks::TargetFunction::F2, 40, 0), o)
                          .r2;
    bool ok = f2 >= kR2Good;
    for (const char* k : {"C-4", "C-8", "C-16", "CQ-4-t3"}) ok = ok && r2[k] >= kR2Good;
    for (const char* k : {"C-2", "CQ-4-t1"}) ok = ok && r2[k] <= r2["C-4"] - kR2Gap;
    return {ok, fmt("xsinx R2 C-2 %.4f C-4 %.4f C-8 %.4f C-16 %.4f CQ-4-t1 %.4f CQ-4-t3 %.4f; f2 C-2 %.4f",
                    r2["C-2"], r2["C-4"], r2["C-8"], r2["C-16"], r2["CQ-4-t1"], r2["CQ-4-t3"], f2)};
}

// 8 ----------------------------------------------------------------------------------

struct TableRow {
    const char* func;
    const char* kernel;
    double s;
    double c;
};

constexpr TableRow kTable[] = {
    {"xsinx", "coherent", 100, 1.764},  {"xsinx", "C-2", 59.43, 1.379},     {"xsinx", "C-4", 100, 1.085},
    {"xsinx", "C-8", 100, 2.921},       {"xsinx", "C-16", 100, 2.040},      {"xsinx", "CQ-4-t1", 58.73, 1.379},
    {"xsinx", "CQ-4-t2", 18.85, 3.700}, {"xsinx", "CQ-4-t3", 95.70, 2.225}, {"xsinx", "CQ-4-t4", 69.82, 2.029},
    {"f1", "coherent", 30.74, 1.384},   {"f1", "C-8", 100, 10.76},          {"f1", "C-16", 100, 1.926},
    {"f1", "C-32", 31.15, 1.382},       {"f1", "CQ-16-t4", 100, 10.73},     {"f1", "CQ-16-t5", 100, 10.74},
    {"f1", "CQ-16-t6", 92.89, 1.772},   {"f2", "coherent", 11.89, 17.87},   {"f2", "C-2", 10.28, 16.21},
    {"f2", "CQ-2-t1", 10.94, 16.42},
};

Outcome table_baselines() {
    gp::OptimizeOptions o;
    o.restarts = 8;
    o.seed = 0;
    int checked = 0, vacuous = 0, failed = 0;
    std::string worst_row;
    double worst_margin = 1e300;
    for (const auto& row : kTable) {
        const auto split = tasks::gen_1d(tasks::parse_target(row.func), 40, 0);
        const auto spec = kernels::parse_kernel(row.kernel, 1);
        const auto kernel = std::make_shared<const kernels::Kernel>(spec);
        double baseline = 0.0;
        try {
            baseline = gp::GPModel(kernel, Hyperparams{row.s, {row.c}, {}, 0.0}, split.train).log_marginal_likelihood();
        } catch (const NotPositiveDefinite&) {
            ++vacuous;
            continue;
        }
        ++checked;
        const double lml = gp::optimize(kernel, split.train, o).lml;
        const double margin = lml - baseline;
        if (margin < -kLmlSlack) ++failed;
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_row = std::string(row.func) + " " + row.kernel;
        }
    }
    return {failed == 0, fmt("%d rows checked, %d without a factorisable Gram, %d below baseline; smallest margin "
                             "%.3e (%s)",
                             checked, vacuous, failed, worst_margin, worst_row.c_str())};
}

// 9 ----------------------------------------------------------------------------------

Outcome nesting() {
    tasks::DynamicsOptions o;
    o.sets = 10;
    o.optimize.bounds.s = {1e-3, 1e3};
    o.optimize.bounds.c = {1e-3, 20.0};
    o.optimize.bounds.d = {0.0, 2.0};
    o.optimize.restarts = 2;
    o.optimize.seed = 0;
    o.baseline_optimize = o.optimize;
    // The squeezed search starts from the coherent optimum of the same set.
    o.optimize.restarts = 0;
    o.optimize.centre_start = false;
    o.optimize.local.max_evaluations = 600;
    const auto res = tasks::run_dynamics(KernelSpec::squeezed(), o, 0);
    int violations = 0;
    double worst = 1e300, r2v_sq = 0.0, r2v_co = 0.0;
    for (const auto& r : res) {
        for (double gap : {r.x.lml - r.coherent_x->lml, r.v.lml - r.coherent_v->lml}) {
            worst = std::min(worst, gap);
            if (gap < -kNestingRoundoff) ++violations;
        }
        r2v_sq += r.v.r2 / res.size();
        r2v_co += r.coherent_v->r2 / res.size();
    }
    return {violations == 0 && r2v_sq >= r2v_co - kR2vSlack,
            fmt("%zu sets, min LML gain %.3e, %d violations; mean v R2 squeezed %.5f coherent %.5f", res.size(),
                worst, violations, r2v_sq, r2v_co)};
}

// 10 ---------------------------------------------------------------------------------

Outcome hardware() {
    const auto split = tasks::gen_1d(tasks::TargetFunction::XSinX, 40, 0);
    tasks::HardwareOptions ho;
    ho.bounds.s = {1e-2, 1e2};
    ho.bounds.sigma_d = {1e-3, 1e3};
    const auto r = tasks::run_hardware_regression(split, ho, 0);
    const double diag = r.emulated.values.diagonal().mean();
    double far = 0.0;
    int far_count = 0;
    for (Eigen::Index i = 0; i < r.simulated.size(); ++i) {
        for (Eigen::Index j = 0; j < r.simulated.size(); ++j) {
            if (i != j && r.simulated.values(i, j) <= kFarSim) {
                far += r.emulated.values(i, j);
                ++far_count;
            }
        }
    }
    far = far_count ? far / far_count : 0.0;
    const double coverage = r.regression.band_coverage();
    const bool ok = std::abs(diag - kDiagTarget) <= kDiagTol && far_count > 0 &&
                    std::abs(far - kFloorTarget) <= kFloorTol && coverage >= kCoverage;
    return {ok, fmt("diagonal mean %.4f; %d far pairs (simulated <= %.1e) average %.4f; band coverage %.2f, R2 %.3f",
                    diag, far_count, kFarSim, far, coverage, r.regression.r2)};
}

// 11 ---------------------------------------------------------------------------------

Outcome rl_suite() {
    std::string detail;
    bool ok = true;
    for (const char* k : {"coherent", "C-16"}) {
        const rl::RlOptions o;
        rl::TrainReport rep;
        const auto policy = rl::rl_train(kernels::parse_kernel(k, 3), o, 0, &rep);
        const auto ep = rl::rl_rollout(policy, o.hill, kRolloutSteps, 0);
        ok = ok && ep.reached_goal;
        detail += fmt("%s%s goal at step %d, %d steps in goal", detail.empty() ? "" : "; ", k, ep.steps_to_goal,
                      ep.goal_steps);
    }
    return {ok, detail};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<Criterion> all{
        {1, "Pauli reconstruction", 1, pauli_reconstruction},
        {2, "squared-exponential identity", 1, squared_exponential},
        {3, "truncation convergence", 5, truncation_convergence},
        {4, "Trotter convergence", 10, trotter_convergence},
        {5, "squeezed series oracle", 30, squeezed_oracle},
        {6, "GP identities", 5, gp_identities},
        {7, "1-D regression", 300, regression_1d},
        {8, "table hyperparameter baselines", 600, table_baselines},
        {9, "squeezed nesting", 1800, nesting},
        {10, "hardware emulation", 120, hardware},
        {11, "RL goal reaching", 900, rl_suite},
    };
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = out.pass && secs <= c.budget_s;
        if (!pass) ++failures;
        std::printf("[%s] %2d %s: %s (%.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), secs, c.budget_s);
    }
    return std::min(failures, 100);
}
