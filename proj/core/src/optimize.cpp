#include "qkgp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qkgp/error.hpp"
#include "qkgp/seed.hpp"

namespace qkgp::opt {

namespace {

void check_box(const Vector& lo, const Vector& hi) {
    if (lo.size() != hi.size() || lo.empty()) throw InvalidArgument("box bounds must be nonempty and equal in size");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i])) {
            throw InvalidArgument("box bounds must be finite with lo < hi");
        }
    }
}

void clip(Vector& x, const Vector& lo, const Vector& hi) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

double eval(const Objective& f, const Vector& x, int& counter) {
    ++counter;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

}  // namespace

MinimizeResult nelder_mead(const Objective& f, Vector x0, const Vector& lo, const Vector& hi,
                           const NelderMeadOptions& options) {
    check_box(lo, hi);
    if (x0.size() != lo.size()) throw InvalidArgument("start point does not match the box dimension");
    const std::size_t n = x0.size();
    clip(x0, lo, hi);

    MinimizeResult result;
    std::vector<Vector> simplex(n + 1, x0);
    std::vector<double> values(n + 1);
    values[0] = eval(f, x0, result.evaluations);
    for (std::size_t i = 0; i < n; ++i) {
        const double step = options.initial_step * (hi[i] - lo[i]);
        Vector& v = simplex[i + 1];
        v[i] = x0[i] + step <= hi[i] ? x0[i] + step : x0[i] - step;
        clip(v, lo, hi);
        values[i + 1] = eval(f, v, result.evaluations);
    }

    std::vector<std::size_t> order(n + 1);
    Vector centroid(n), trial(n), trial2(n);
    auto point = [&](double t, Vector& out) {
        const Vector& worst = simplex[order[n]];
        for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (worst[i] - centroid[i]);
        clip(out, lo, hi);
    };

    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const double best = values[order[0]];
        const double worst = values[order[n]];

        if (std::isfinite(worst)) {
            bool small = true;
            for (std::size_t k = 1; k <= n && small; ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (std::abs(simplex[order[k]][i] - simplex[order[0]][i]) > options.x_tolerance * (hi[i] - lo[i])) {
                        small = false;
                        break;
                    }
                }
            }
            if (small && worst - best <= options.f_tolerance * (1.0 + std::abs(best))) {
                result.converged = true;
                break;
            }
        }
        if (result.evaluations >= options.max_evaluations) break;
        if (!std::isfinite(best) && result.evaluations > static_cast<int>(2 * n + 2)) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        const double second_worst = values[order[n - (n > 0 ? 1 : 0)]];
        point(-1.0, trial);
        const double fr = eval(f, trial, result.evaluations);
        if (fr < best) {
            point(-2.0, trial2);
            const double fe = eval(f, trial2, result.evaluations);
            if (fe < fr) {
                simplex[order[n]] = trial2;
                values[order[n]] = fe;
            } else {
                simplex[order[n]] = trial;
                values[order[n]] = fr;
            }
            continue;
        }
        if (fr < second_worst) {
            simplex[order[n]] = trial;
            values[order[n]] = fr;
            continue;
        }
        // Contraction, outside if the reflected point beat the worst vertex.
        const bool outside = fr < worst;
        point(outside ? -0.5 : 0.5, trial2);
        const double fc = eval(f, trial2, result.evaluations);
        if (fc < (outside ? fr : worst)) {
            simplex[order[n]] = trial2;
            values[order[n]] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        const Vector anchor = simplex[order[0]];
        for (std::size_t k = 1; k <= n; ++k) {
            Vector& v = simplex[order[k]];
            for (std::size_t i = 0; i < n; ++i) v[i] = anchor[i] + 0.5 * (v[i] - anchor[i]);
            values[order[k]] = eval(f, v, result.evaluations);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    result.f = *best_it;
    result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
    return result;
}

MultiStartResult multistart_minimize(const Objective& f, const Vector& lo, const Vector& hi, int restarts,
                                     std::uint64_t seed, const std::vector<Vector>& warm_starts,
                                     const NelderMeadOptions& options, bool centre_start) {
    check_box(lo, hi);
    if (restarts < 0) throw InvalidArgument("restart count must be >= 0");
    const std::size_t n = lo.size();

    std::vector<Vector> starts;
    Vector centre(n);
    for (std::size_t i = 0; i < n; ++i) centre[i] = 0.5 * (lo[i] + hi[i]);
    if (centre_start) starts.push_back(centre);
    for (const auto& w : warm_starts) {
        if (w.size() != n) throw InvalidArgument("warm start does not match the box dimension");
        starts.push_back(w);
    }
    for (int k = 0; k < restarts; ++k) {
        std::mt19937_64 rng(derive_seed(seed, streams::optimizer, static_cast<std::uint64_t>(k)));
        Vector x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
        starts.push_back(std::move(x));
    }

    MultiStartResult out;
    out.best.f = std::numeric_limits<double>::infinity();
    out.starts = static_cast<int>(starts.size());
    for (std::size_t k = 0; k < starts.size(); ++k) {
        MinimizeResult r = nelder_mead(f, starts[k], lo, hi, options);
        if (!std::isfinite(r.f)) {
            ++out.failed_starts;
            continue;
        }
        if (r.f < out.best.f) {
            out.best = std::move(r);
            out.best_start = static_cast<int>(k);
        }
    }
    return out;
}

}  // namespace qkgp::opt
