#include "qkgp/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "qkgp/error.hpp"

namespace qkgp::fock {

namespace {

void require_levels(int levels) {
    if (levels < 2) {
        throw InvalidTruncation("truncation must have at least 2 levels, got " + std::to_string(levels));
    }
}

using SparseMatrix = Eigen::SparseMatrix<Complex>;

// kron(A, B) for small dense factors, skipping structural zeros.
SparseMatrix sparse_kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (Eigen::Index ar = 0; ar < a.rows(); ++ar) {
        for (Eigen::Index ac = 0; ac < a.cols(); ++ac) {
            if (a(ar, ac) == Complex{}) continue;
            for (Eigen::Index br = 0; br < b.rows(); ++br) {
                for (Eigen::Index bc = 0; bc < b.cols(); ++bc) {
                    if (b(br, bc) == Complex{}) continue;
                    triplets.emplace_back(ar * b.rows() + br, ac * b.cols() + bc, a(ar, ac) * b(br, bc));
                }
            }
        }
    }
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

// exp(G) v for a sparse anti-Hermitian G: Taylor series on substeps small
// enough that each series converges to roundoff.
StateVector expm_apply(const SparseMatrix& g, StateVector v) {
    double norm1 = 0.0;
    for (int k = 0; k < g.outerSize(); ++k) {
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(g, k); it; ++it) col += std::abs(it.value());
        norm1 = std::max(norm1, col);
    }
    const int substeps = std::max(1, static_cast<int>(std::ceil(norm1 / 0.5)));
    const SparseMatrix step = g / static_cast<double>(substeps);
    for (int s = 0; s < substeps; ++s) {
        StateVector term = v;
        StateVector sum = v;
        for (int j = 1; j < 60; ++j) {
            term = (step * term) / static_cast<double>(j);
            sum += term;
            if (term.norm() <= 1e-18 * sum.norm()) break;
        }
        v = std::move(sum);
    }
    return v;
}

}  // namespace

ComplexMatrix creation(int levels) {
    require_levels(levels);
    ComplexMatrix b = ComplexMatrix::Zero(levels, levels);
    for (int k = 0; k + 1 < levels; ++k) b(k + 1, k) = std::sqrt(static_cast<double>(k + 1));
    return b;
}

ComplexMatrix annihilation(int levels) { return creation(levels).adjoint(); }

ComplexMatrix displacement_generator(int levels) {
    const ComplexMatrix b = creation(levels);
    return Complex(0.0, 1.0) * (b - b.adjoint());
}

DisplacementSpectrum::DisplacementSpectrum(int levels) : levels_(levels) {
    require_levels(levels);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(displacement_generator(levels));
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of displacement generator failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
    vacuum_weights_ = eigenvectors_.row(0).cwiseAbs2().transpose();
}

ComplexMatrix DisplacementSpectrum::unitary(double theta) const {
    if (!std::isfinite(theta)) throw NumericError("displacement amplitude must be finite");
    Eigen::VectorXcd phases(levels_);
    for (int k = 0; k < levels_; ++k) phases(k) = std::polar(1.0, -theta * eigenvalues_(k));
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

double DisplacementSpectrum::vacuum_amplitude(double theta) const {
    if (!std::isfinite(theta)) throw NumericError("displacement amplitude must be finite");
    double amp = 0.0;
    for (int k = 0; k < levels_; ++k) amp += vacuum_weights_(k) * std::cos(theta * eigenvalues_(k));
    return amp;
}

ComplexMatrix displacement_unitary(int levels, double theta) {
    if (!std::isfinite(theta)) throw NumericError("displacement amplitude must be finite");
    return DisplacementSpectrum(levels).unitary(theta);
}

StateVector vacuum(int dim) { return basis_state(dim, 0); }

StateVector basis_state(int dim, int k) {
    if (dim < 1 || k < 0 || k >= dim) throw InvalidArgument("basis index out of range");
    StateVector v = StateVector::Zero(dim);
    v(k) = 1.0;
    return v;
}

StateVector coherent_state(int levels, double theta) {
    return displacement_unitary(levels, theta).col(0);
}

Complex overlap(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("overlap of states with dimensions " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    }
    return a.dot(b);  // Eigen's dot conjugates the first argument
}

double hermiticity_defect(const ComplexMatrix& a) {
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double unitarity_defect(const ComplexMatrix& u) {
    return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

StateVector pair_state(double alpha_i, double alpha_j, double gamma, const PairStateOptions& options) {
    const int n = options.levels_per_mode;
    if (n < 8) throw InvalidTruncation("pair state needs at least 8 levels per mode");
    if (!std::isfinite(alpha_i) || !std::isfinite(alpha_j) || !std::isfinite(gamma)) {
        throw NumericError("pair state parameters must be finite");
    }
    if (std::abs(gamma) > 2.0) throw InvalidArgument("pair state oracle is only valid for |gamma| <= 2");

    const ComplexMatrix b = annihilation(n);
    const ComplexMatrix bdag = creation(n);
    const SparseMatrix generator = gamma * (sparse_kron(b, b) - sparse_kron(bdag, bdag));

    StateVector state = expm_apply(generator, vacuum(n * n));

    // (D_i (x) D_j) psi, with psi viewed as the row-major n x n amplitude
    // matrix Psi(n_i, n_j): Psi -> D_i Psi D_j^T.
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMajor> psi(state.data(), n, n);
    const DisplacementSpectrum spectrum(n);
    const RowMajor displaced = spectrum.unitary(alpha_i) * psi * spectrum.unitary(alpha_j).transpose();
    psi = displaced;

    const int edge = std::clamp(options.boundary_levels, 1, n);
    double leakage = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i >= n - edge || j >= n - edge) leakage += std::norm(psi(i, j));
        }
    }
    if (leakage > options.leakage_tolerance) {
        throw TruncationLeakage("pair state leaks out of the truncated space (boundary population " +
                                    std::to_string(leakage) + ")",
                                leakage);
    }
    return state / state.norm();
}

}  // namespace qkgp::fock
