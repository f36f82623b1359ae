#pragma once

// Coherent-state kernels and their truncated, qubit and two-mode squeezed
// variants.
//
// Every family encodes a coordinate as a displacement alpha = x / (sqrt(2) c).
// The coherent families evaluate s * prod_i |<alpha_i|alpha'_i>|^2, which is
// the squared-exponential kernel for exact coherent states. The squeezed
// family multiplies pair factors |<psi'_ij|psi_ij>| over the three dimension
// pairs of a 3-D input; each dimension then enters twice, so zero squeezing
// reproduces the coherent kernel.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qkgp/fock.hpp"
#include "qkgp/pauli.hpp"

namespace qkgp::kernels {

/// Points are stored one per row.
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Family { AnalyticCoherent, FiniteCoherent, QubitTrotter, Squeezed, ExternalGram };

enum class Provenance { Simulated, Ingested, ShotEmulated };

std::string to_string(Provenance p);
Provenance provenance_from_string(std::string_view text);

struct GramMatrix {
    Eigen::MatrixXd values;
    Provenance provenance = Provenance::Simulated;

    Eigen::Index size() const noexcept { return values.rows(); }
};

/// How the squeezing parameter of a dimension pair is formed.
enum class GammaMode {
    DataDependent,  ///< gamma_ij = x_i x_j d_ij
    Fixed,          ///< gamma_ij = d_ij
};

struct KernelSpec {
    Family family = Family::AnalyticCoherent;
    int dims = 1;
    int levels = 0;      ///< FiniteCoherent, QubitTrotter
    int steps = 0;       ///< QubitTrotter
    int series_cap = 8;  ///< Squeezed
    GammaMode gamma_mode = GammaMode::DataDependent;
    /// ExternalGram: unit-prefactor Gram over every point the model will see.
    /// Points passed to gram()/cross_gram() are row indices into it.
    std::shared_ptr<const GramMatrix> external;

    static KernelSpec analytic(int dims);
    static KernelSpec finite(int dims, int levels);
    static KernelSpec qubit(int dims, int levels, int steps);
    static KernelSpec squeezed(int series_cap = 8);
    static KernelSpec external_gram(GramMatrix unit_gram);

    /// Throws InvalidArgument / InvalidTruncation on inconsistent fields.
    void validate() const;
};

/// Parses "coherent", "C-N", "CQ-N-tm", "squeezed" (optionally "squeezed-capK").
/// Throws InvalidArgument on anything else.
KernelSpec parse_kernel(std::string_view label, int dims);

/// Inverse of parse_kernel; ExternalGram renders as "external".
std::string label(const KernelSpec& spec);

struct Hyperparams {
    double s = 1.0;
    std::vector<double> c;  ///< one per data dimension
    std::vector<double> d;  ///< one per squeezed pair (Squeezed only)
    double sigma_d = 0.0;   ///< discrepancy standard deviation (discrepancy models only)
};

/// The dimension pairs (i, j) of the 3-D squeezed kernel, in the order the
/// entries of Hyperparams::d refer to: (0,1), (1,2), (0,2).
inline constexpr std::array<std::pair<int, int>, 3> squeezed_pairs{{{0, 1}, {1, 2}, {0, 2}}};

// Per-dimension factors --------------------------------------------------------

/// exp(-(x - xp)^2 / (2 c^2)).
double dim_kernel_analytic(double x, double xp, double c);

/// |<0| D_N((x - xp)/(sqrt2 c)) |0>|^2.
double dim_kernel_finite(double x, double xp, double c, int levels);

/// Echo probability of the product-formula circuit at (x - xp)/(sqrt2 c).
double dim_kernel_qubit(double x, double xp, double c, int levels, int steps);

/// <m, alpha'| n, alpha> for displaced number states |n, alpha> = D(alpha)|n>
/// with real displacements. m, n must lie in [0, 20].
double displaced_number_overlap(int m, double alpha_p, int n, double alpha);

/// All overlaps <m, alpha + delta | n, alpha> for m, n in [0, cap]; entry
/// (m, n). They depend on the displacement difference only.
Eigen::MatrixXd displaced_number_overlaps(double delta, int cap);

struct SqueezedPairPoint {
    double xi = 0.0, xj = 0.0;    ///< first point, dimensions i and j
    double xpi = 0.0, xpj = 0.0;  ///< second point
};

/// Magnitude of the overlap of two displaced two-mode squeezed states,
/// evaluated as the truncated double series over displaced-number overlaps,
/// normalised by 1/(cosh gamma cosh gamma'). Not squared.
///
/// `out_of_range`, if given, is set when |gamma| or |gamma'| >= 2, where the
/// truncated series is no longer validated against the dense oracle.
double squeezed_pair_kernel(const SqueezedPairPoint& p, double ci, double cj, double dij, int cap = 8,
                            GammaMode mode = GammaMode::DataDependent, bool* out_of_range = nullptr);

// Full kernels -------------------------------------------------------------------

/// Evaluator for one KernelSpec. Construction precomputes the truncated
/// displacement spectrum or the compiled product-formula circuit, so one
/// instance should be reused for many evaluations. Instances are immutable
/// and safe to share across threads.
class Kernel {
public:
    explicit Kernel(KernelSpec spec);

    const KernelSpec& spec() const noexcept { return spec_; }

    /// k(x, xp). Throws InvalidArgument for ExternalGram (Gram-only family)
    /// or on dimension mismatch.
    double operator()(const Hyperparams& hp, std::span<const double> x, std::span<const double> xp) const;

    /// One-dimensional factor at coordinate difference `delta` and length scale c.
    double dim_factor(double delta, double c) const;

    /// Validates hp against this kernel's family.
    void check(const Hyperparams& hp) const;

private:
    friend Eigen::MatrixXd cross_gram(const Kernel&, const Hyperparams&, const Points&, const Points&);
    friend GramMatrix gram(const Kernel&, const Hyperparams&, const Points&);

    double squeezed(const Hyperparams& hp, std::span<const double> x, std::span<const double> xp) const;
    Eigen::MatrixXd external_block(const Hyperparams& hp, const Points& rows, const Points& cols) const;

    KernelSpec spec_;
    std::optional<fock::DisplacementSpectrum> spectrum_;
    std::optional<pauli::TrotterCircuit> circuit_;
};

/// Convenience wrapper building a Kernel for a single evaluation.
double eval_kernel(const KernelSpec& spec, const Hyperparams& hp, std::span<const double> x,
                   std::span<const double> xp);

/// K_{X,X}; upper triangle evaluated and mirrored.
GramMatrix gram(const Kernel& kernel, const Hyperparams& hp, const Points& x);

/// K_{X*,X}, shape n* x n.
Eigen::MatrixXd cross_gram(const Kernel& kernel, const Hyperparams& hp, const Points& xstar, const Points& x);

/// (G + G^T) / 2. Throws InvalidArgument on a non-square matrix.
GramMatrix symmetrize(const GramMatrix& g);

struct HardwareNoise {
    int shots = 8192;
    /// Weight of the background distribution mixed into every estimate.
    double floor_rate = 0.04;
    /// Vacuum probability of the background distribution.
    double background = 0.5;
};

/// Shot-noise plus background-leakage model of a hardware-evaluated Gram.
/// Each ordered entry p = G_ij / s is replaced by
///   (1 - floor_rate) * Binomial(shots, p)/shots + floor_rate * background,
/// rescaled by s and symmetrised. Entry seeds derive from `seed` and (i, j).
GramMatrix emulate_hardware_gram(const GramMatrix& g, double s, const HardwareNoise& noise, std::uint64_t seed);

}  // namespace qkgp::kernels
