#pragma once

// Gaussian-process regression with known per-point noise variances and an
// optional homoscedastic discrepancy term, Q = K + diag(sigma2) + sigma_d^2 I.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "qkgp/kernels.hpp"
#include "qkgp/optimize.hpp"

namespace qkgp::gp {

using kernels::Hyperparams;
using kernels::KernelSpec;
using kernels::Points;

struct Dataset {
    Points x;
    Eigen::VectorXd y;
    Eigen::VectorXd sigma2;

    Eigen::Index size() const noexcept { return x.rows(); }
    int dims() const noexcept { return static_cast<int>(x.cols()); }
    /// Throws InvalidArgument on inconsistent lengths, n = 0 or negative variances.
    void validate() const;
};

struct Posterior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    Eigen::VectorXd variance() const { return cov.diagonal(); }
};

class GPModel {
public:
    /// Factorises Q immediately. Throws NotPositiveDefinite if Q cannot be
    /// factorised after 6 jitter escalations.
    GPModel(std::shared_ptr<const kernels::Kernel> kernel, Hyperparams hp, Dataset data, bool discrepancy = false);
    GPModel(const KernelSpec& spec, Hyperparams hp, Dataset data, bool discrepancy = false);

    const kernels::Kernel& kernel() const noexcept { return *kernel_; }
    const Hyperparams& hyperparams() const noexcept { return hp_; }
    const Dataset& data() const noexcept { return data_; }
    bool discrepancy() const noexcept { return discrepancy_; }
    /// Diagonal jitter that was needed for the factorisation (0 if none).
    double jitter() const noexcept { return jitter_; }

    /// -1/2 y^T Q^-1 y - 1/2 log det Q - n/2 log 2 pi.
    double log_marginal_likelihood() const;

    /// Mean and covariance at xstar. With the discrepancy term on, sigma_d^2
    /// is added to the prior variance of every test point as well. Variances
    /// below zero by less than 1e-10 * max(1, prior variance) are clamped to
    /// zero; larger violations (indefinite kernels) throw NumericError.
    Posterior posterior(const Points& xstar) const;
    Eigen::VectorXd predict_mean(const Points& xstar) const;

    /// Q^-1 y.
    const Eigen::VectorXd& weights() const noexcept { return alpha_; }
    /// Q^-1 b.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

private:
    void factorize();

    std::shared_ptr<const kernels::Kernel> kernel_;
    Hyperparams hp_;
    Dataset data_;
    bool discrepancy_;
    double jitter_ = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;
};

/// Cholesky factorisation of a symmetric matrix, retrying with diagonal
/// jitter 1e-10 * tr(Q)/n, multiplied by 10 for each of up to 6 escalations.
/// Returns the jitter used. Throws NotPositiveDefinite with the minimum
/// eigenvalue of q.
double factorize_with_jitter(const Eigen::MatrixXd& q, Eigen::LLT<Eigen::MatrixXd>& llt);

/// Box for one hyperparameter group. s and c are searched in log space.
struct Bound {
    double lo = 0.0;
    double hi = 1.0;
};

struct Bounds {
    Bound s{1e-2, 1e2};
    Bound c{1e-3, 1e3};        ///< shared by every length scale c_i
    Bound d{0.0, 19.999};      ///< Squeezed couplings
    Bound sigma_d{0.0, 1.0};   ///< discrepancy models only
};

struct OptimizeOptions {
    Bounds bounds;
    int restarts = 4;
    std::uint64_t seed = 0;
    bool discrepancy = false;
    /// Extra starting points, e.g. a coherent optimum for the squeezed kernel.
    std::vector<Hyperparams> warm_starts;
    /// Start from the centre of the box as well.
    bool centre_start = true;
    opt::NelderMeadOptions local;
};

struct OptimizeResult {
    Hyperparams hp;
    double lml = 0.0;
    int starts = 0;
    int failed_starts = 0;
};

/// Maximises the log marginal likelihood over the hyperparameters the kernel
/// family uses: s and c (log space), d for Squeezed, sigma_d when
/// discrepancy is on (linear space). ExternalGram has no c.
/// Throws OptimizationError if every start fails to factorise.
OptimizeResult optimize(const KernelSpec& spec, const Dataset& data, const OptimizeOptions& options);

/// Same, reusing a prepared kernel evaluator.
OptimizeResult optimize(std::shared_ptr<const kernels::Kernel> kernel, const Dataset& data,
                        const OptimizeOptions& options);

/// 1 - sum (pred - truth)^2 / sum (truth - mean)^2. Throws InvalidArgument
/// for mismatched lengths, fewer than 2 points or constant truth.
double r2_score(std::span<const double> pred, std::span<const double> truth);
double r2_score(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

}  // namespace qkgp::gp
