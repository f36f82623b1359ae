#pragma once

// Dense linear algebra on truncated bosonic Fock spaces.
//
// Level k of an N-level truncation is the number state |k>, k = 0..N-1.
// The truncated creation operator has (b^dag)_{k+1,k} = sqrt(k+1); its
// adjoint is the truncated annihilation operator. Everything in here is
// used as ground truth by the Pauli, kernel and squeezing code.

#include <complex>

#include <Eigen/Dense>

namespace qkgp::fock {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Truncated creation operator b^dag_N. Throws InvalidTruncation for N < 2.
ComplexMatrix creation(int levels);

/// Truncated annihilation operator b_N = (b^dag_N)^dag.
ComplexMatrix annihilation(int levels);

/// Hermitian generator H = i (b^dag_N - b_N). exp(-i theta H) is the
/// truncated displacement exp(theta (b^dag_N - b_N)).
ComplexMatrix displacement_generator(int levels);

/// exp(theta (b^dag_N - b_N)) from the eigendecomposition of the Hermitian
/// generator. Throws NumericError on non-finite theta.
ComplexMatrix displacement_unitary(int levels, double theta);

/// Eigendecomposition of the displacement generator at one truncation,
/// computed once and reused for any displacement amplitude.
class DisplacementSpectrum {
public:
    explicit DisplacementSpectrum(int levels);

    int levels() const noexcept { return levels_; }
    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

    ComplexMatrix unitary(double theta) const;

    /// <0| D_N(theta) |0>. Real because the spectrum is symmetric and the
    /// vacuum weights of paired eigenvalues coincide.
    double vacuum_amplitude(double theta) const;

private:
    int levels_;
    Eigen::VectorXd eigenvalues_;
    ComplexMatrix eigenvectors_;
    Eigen::VectorXd vacuum_weights_;
};

StateVector vacuum(int dim);
StateVector basis_state(int dim, int k);

/// D_N(theta)|0>.
StateVector coherent_state(int levels, double theta);

/// <a|b>, conjugate-linear in the first argument.
Complex overlap(const StateVector& a, const StateVector& b);

/// max |A - A^dag| / max |A|  (0 for the zero matrix).
double hermiticity_defect(const ComplexMatrix& a);

/// max |U^dag U - I|.
double unitarity_defect(const ComplexMatrix& u);

struct PairStateOptions {
    int levels_per_mode = 40;
    double leakage_tolerance = 1e-6;
    /// Number of top Fock levels (per mode) whose population counts as leakage.
    int boundary_levels = 2;
};

/// D_i(alpha_i) D_j(alpha_j) S_ij(gamma) |0,0> on the tensor product of two
/// truncated modes, S = exp(gamma (b_i b_j - b_i^dag b_j^dag)).
///
/// The returned vector has dimension levels^2 with index n_i * levels + n_j.
/// Throws TruncationLeakage when the population on the boundary levels exceeds
/// the tolerance, InvalidArgument when levels < 8 or |gamma| > 2.
StateVector pair_state(double alpha_i, double alpha_j, double gamma,
                       const PairStateOptions& options = {});

}  // namespace qkgp::fock
