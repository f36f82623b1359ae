#include "qkgp/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qkgp/error.hpp"

namespace qkgp::gp {

void Dataset::validate() const {
    const Eigen::Index n = x.rows();
    if (n < 1) throw InvalidArgument("dataset is empty");
    if (x.cols() < 1) throw InvalidArgument("dataset has no input dimensions");
    if (y.size() != n || sigma2.size() != n) {
        throw DimensionMismatch("dataset has " + std::to_string(n) + " inputs, " + std::to_string(y.size()) +
                                " targets and " + std::to_string(sigma2.size()) + " variances");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(sigma2(i) >= 0.0) || !std::isfinite(sigma2(i))) throw InvalidArgument("noise variances must be >= 0");
        if (!std::isfinite(y(i))) throw InvalidArgument("targets must be finite");
    }
}

namespace {

// LLT only rejects non-positive pivots, so an indefinite matrix can slip
// through on roundoff with pivots near zero. Pivots below this fraction of
// the mean diagonal count as a failed factorisation.
constexpr double kPivotFloor = 1e-13;

bool factorized(const Eigen::LLT<Eigen::MatrixXd>& llt, double mean_diag) {
    if (llt.info() != Eigen::Success) return false;
    const auto pivots = llt.matrixLLT().diagonal().array().square();
    return pivots.allFinite() && pivots.minCoeff() > kPivotFloor * mean_diag;
}

}  // namespace

double factorize_with_jitter(const Eigen::MatrixXd& q, Eigen::LLT<Eigen::MatrixXd>& llt) {
    const double mean_diag = q.trace() / static_cast<double>(q.rows());
    llt.compute(q);
    if (factorized(llt, mean_diag)) return 0.0;
    double jitter = 1e-10 * mean_diag;
    for (int attempt = 0; attempt < 6; ++attempt, jitter *= 10.0) {
        if (!(jitter > 0.0) || !std::isfinite(jitter)) break;
        Eigen::MatrixXd shifted = q;
        shifted.diagonal().array() += jitter;
        llt.compute(shifted);
        if (factorized(llt, mean_diag)) return jitter;
    }
    double min_eig = std::numeric_limits<double>::quiet_NaN();
    if (q.allFinite()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q, Eigen::EigenvaluesOnly);
        if (solver.info() == Eigen::Success) min_eig = solver.eigenvalues().minCoeff();
    }
    throw NotPositiveDefinite("covariance matrix is not positive definite (minimum eigenvalue " +
                                  std::to_string(min_eig) + ")",
                              min_eig);
}

GPModel::GPModel(std::shared_ptr<const kernels::Kernel> kernel, Hyperparams hp, Dataset data, bool discrepancy)
    : kernel_(std::move(kernel)), hp_(std::move(hp)), data_(std::move(data)), discrepancy_(discrepancy) {
    if (!kernel_) throw InvalidArgument("GP model needs a kernel");
    data_.validate();
    if (discrepancy_ && (!(hp_.sigma_d >= 0.0) || !std::isfinite(hp_.sigma_d))) {
        throw InvalidArgument("discrepancy sigma_d must be >= 0");
    }
    factorize();
}

GPModel::GPModel(const KernelSpec& spec, Hyperparams hp, Dataset data, bool discrepancy)
    : GPModel(std::make_shared<const kernels::Kernel>(spec), std::move(hp), std::move(data), discrepancy) {}

void GPModel::factorize() {
    Eigen::MatrixXd q = kernels::gram(*kernel_, hp_, data_.x).values;
    q.diagonal() += data_.sigma2;
    if (discrepancy_) q.diagonal().array() += hp_.sigma_d * hp_.sigma_d;
    if (!q.allFinite()) throw NumericError("non-finite kernel values");
    jitter_ = factorize_with_jitter(q, llt_);
    alpha_ = llt_.solve(data_.y);
}

double GPModel::log_marginal_likelihood() const {
    const double n = static_cast<double>(data_.size());
    const double log_det = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
    return -0.5 * data_.y.dot(alpha_) - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

Eigen::MatrixXd GPModel::solve(const Eigen::MatrixXd& b) const {
    if (b.rows() != data_.size()) throw DimensionMismatch("right-hand side does not match the training size");
    return llt_.solve(b);
}

Eigen::VectorXd GPModel::predict_mean(const Points& xstar) const {
    return kernels::cross_gram(*kernel_, hp_, xstar, data_.x) * alpha_;
}

Posterior GPModel::posterior(const Points& xstar) const {
    const Eigen::MatrixXd kxs = kernels::cross_gram(*kernel_, hp_, xstar, data_.x);
    Eigen::MatrixXd kss = kernels::gram(*kernel_, hp_, xstar).values;
    // The discrepancy is part of the predicted response, as on the training diagonal.
    if (discrepancy_) kss.diagonal().array() += hp_.sigma_d * hp_.sigma_d;
    Posterior post;
    post.mean = kxs * alpha_;
    const Eigen::MatrixXd v = llt_.matrixL().solve(kxs.transpose());
    Eigen::MatrixXd cov = kss - v.transpose() * v;
    post.cov = 0.5 * (cov + cov.transpose());
    for (Eigen::Index i = 0; i < post.cov.rows(); ++i) {
        double& var = post.cov(i, i);
        if (var >= 0.0) continue;
        const double tolerance = 1e-10 * std::max(1.0, kss(i, i));
        if (var < -tolerance) {
            throw NumericError("negative posterior variance " + std::to_string(var) + " at test point " +
                               std::to_string(i));
        }
        var = 0.0;
    }
    return post;
}

// Optimisation --------------------------------------------------------------

namespace {

struct Layout {
    bool has_c = true;
    int dims = 0;
    bool squeezed = false;
    bool discrepancy = false;

    int size() const { return 1 + (has_c ? dims : 0) + (squeezed ? 3 : 0) + (discrepancy ? 1 : 0); }

    Hyperparams decode(const opt::Vector& p) const {
        Hyperparams hp;
        std::size_t k = 0;
        hp.s = std::exp(p[k++]);
        if (has_c) {
            for (int i = 0; i < dims; ++i) hp.c.push_back(std::exp(p[k++]));
        }
        if (squeezed) {
            for (int i = 0; i < 3; ++i) hp.d.push_back(p[k++]);
        }
        if (discrepancy) hp.sigma_d = p[k++];
        return hp;
    }

    opt::Vector encode(const Hyperparams& hp) const {
        opt::Vector p;
        auto safe_log = [](double v) { return std::log(std::max(v, std::numeric_limits<double>::min())); };
        p.push_back(safe_log(hp.s));
        if (has_c) {
            if (static_cast<int>(hp.c.size()) != dims) throw DimensionMismatch("warm start has the wrong number of c");
            for (double c : hp.c) p.push_back(safe_log(c));
        }
        if (squeezed) {
            if (hp.d.size() != 3) throw DimensionMismatch("warm start needs 3 couplings d");
            for (double d : hp.d) p.push_back(d);
        }
        if (discrepancy) p.push_back(hp.sigma_d);
        return p;
    }
};

void check_bound(const Bound& b, const char* name, bool positive) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi) || (positive && !(b.lo > 0.0))) {
        throw InvalidArgument(std::string("invalid bounds for ") + name);
    }
}

}  // namespace

OptimizeResult optimize(std::shared_ptr<const kernels::Kernel> kernel, const Dataset& data,
                        const OptimizeOptions& options) {
    if (!kernel) throw InvalidArgument("optimize needs a kernel");
    data.validate();
    const auto& spec = kernel->spec();
    Layout layout;
    layout.has_c = spec.family != kernels::Family::ExternalGram;
    layout.dims = spec.dims;
    layout.squeezed = spec.family == kernels::Family::Squeezed;
    layout.discrepancy = options.discrepancy;

    const Bounds& b = options.bounds;
    check_bound(b.s, "s", true);
    opt::Vector lo{std::log(b.s.lo)}, hi{std::log(b.s.hi)};
    if (layout.has_c) {
        check_bound(b.c, "c", true);
        for (int i = 0; i < layout.dims; ++i) {
            lo.push_back(std::log(b.c.lo));
            hi.push_back(std::log(b.c.hi));
        }
    }
    if (layout.squeezed) {
        check_bound(b.d, "d", false);
        for (int i = 0; i < 3; ++i) {
            lo.push_back(b.d.lo);
            hi.push_back(b.d.hi);
        }
    }
    if (layout.discrepancy) {
        check_bound(b.sigma_d, "sigma_d", false);
        if (b.sigma_d.lo < 0.0) throw InvalidArgument("sigma_d bounds must be non-negative");
        lo.push_back(b.sigma_d.lo);
        hi.push_back(b.sigma_d.hi);
    }

    const opt::Objective objective = [&](const opt::Vector& p) {
        try {
            const GPModel model(kernel, layout.decode(p), data, layout.discrepancy);
            const double lml = model.log_marginal_likelihood();
            return std::isfinite(lml) ? -lml : std::numeric_limits<double>::infinity();
        } catch (const NumericError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    std::vector<opt::Vector> warm;
    for (const auto& hp : options.warm_starts) warm.push_back(layout.encode(hp));

    const auto result = opt::multistart_minimize(objective, lo, hi, options.restarts, options.seed, warm, options.local,
                                                   options.centre_start);
    if (result.best_start < 0) {
        throw OptimizationError("hyperparameter optimisation failed: no start produced a factorisable covariance");
    }
    OptimizeResult out;
    out.hp = layout.decode(result.best.x);
    out.lml = -result.best.f;
    out.starts = result.starts;
    out.failed_starts = result.failed_starts;
    return out;
}

OptimizeResult optimize(const KernelSpec& spec, const Dataset& data, const OptimizeOptions& options) {
    return optimize(std::make_shared<const kernels::Kernel>(spec), data, options);
}

double r2_score(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw DimensionMismatch("prediction and truth lengths differ");
    if (truth.size() < 2) throw InvalidArgument("R^2 needs at least two points");
    double mean = 0.0;
    for (double t : truth) mean += t;
    mean /= static_cast<double>(truth.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ss_res += (pred[i] - truth[i]) * (pred[i] - truth[i]);
        ss_tot += (truth[i] - mean) * (truth[i] - mean);
    }
    if (ss_tot == 0.0) throw InvalidArgument("R^2 is undefined for constant truth");
    return 1.0 - ss_res / ss_tot;
}

double r2_score(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
    return r2_score(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())),
                    std::span<const double>(truth.data(), static_cast<std::size_t>(truth.size())));
}

}  // namespace qkgp::gp
