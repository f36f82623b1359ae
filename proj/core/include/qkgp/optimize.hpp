#pragma once

// Box-constrained derivative-free minimisation: Nelder-Mead with trial points
// projected onto the box, and a seeded multi-start driver around it.

#include <cstdint>
#include <functional>
#include <vector>

namespace qkgp::opt {

using Vector = std::vector<double>;
/// Objective to minimise. May return +inf for infeasible points.
using Objective = std::function<double(const Vector&)>;

struct NelderMeadOptions {
    int max_evaluations = 4000;
    /// Stop when the simplex spread in f is below f_tolerance * (1 + |f_best|)
    double f_tolerance = 1e-11;
    /// and every vertex lies within x_tolerance * (hi - lo) of the best one.
    double x_tolerance = 1e-7;
    /// Initial simplex edge as a fraction of the box width.
    double initial_step = 0.1;
};

struct MinimizeResult {
    Vector x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Minimises f from x0 inside [lo, hi]. x0 is clipped into the box first.
MinimizeResult nelder_mead(const Objective& f, Vector x0, const Vector& lo, const Vector& hi,
                           const NelderMeadOptions& options = {});

struct MultiStartResult {
    MinimizeResult best;
    int best_start = -1;  ///< index into the start order
    int starts = 0;
    int failed_starts = 0;  ///< starts whose best value stayed non-finite
};

/// Start order: the box centre (unless `centre_start` is false), then
/// `warm_starts`, then `restarts` points
/// drawn uniformly in the box, point k from derive_seed(seed, optimizer, k).
/// The random starts therefore form a prefix-stable sequence in `restarts`.
/// Returns the lowest f; ties go to the earliest start. If every start is
/// infeasible the result has f = +inf and best_start = -1.
MultiStartResult multistart_minimize(const Objective& f, const Vector& lo, const Vector& hi, int restarts,
                                     std::uint64_t seed, const std::vector<Vector>& warm_starts = {},
                                     const NelderMeadOptions& options = {}, bool centre_start = true);

}  // namespace qkgp::opt
