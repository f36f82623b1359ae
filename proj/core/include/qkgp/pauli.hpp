#pragma once

// Pauli-string expansion of the truncated displacement generator and a
// first-order product-formula simulator on log2(N) qubits.
//
// String convention: symbol j of a Pauli string acts on bit j of the Fock
// level index (symbol 0 = least significant bit). With this convention the
// N = 4 generator reads 1/2((1+sqrt3) YI + (1-sqrt3) YZ + sqrt2 (XY - YX)).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qkgp/fock.hpp"

namespace qkgp::pauli {

using fock::ComplexMatrix;
using fock::StateVector;

struct PauliTerm {
    double coefficient = 0.0;
    std::string symbols;  ///< over {I, X, Y, Z}, one per qubit
};

struct PauliSum {
    int qubits = 0;
    std::vector<PauliTerm> terms;  ///< sorted lexicographically on symbols

    int dimension() const noexcept { return 1 << qubits; }
    /// Sum of c_k P_k as a dense matrix.
    ComplexMatrix dense() const;
};

/// Dense matrix of a single Pauli string.
ComplexMatrix pauli_matrix(std::string_view symbols);

/// Expansion of H = i (b^dag_N - b_N) in Pauli strings, coefficients from the
/// trace inner product Tr(P H) / N; |c| < 1e-12 pruned.
/// N must be a power of two in [2, 64], otherwise InvalidTruncation.
PauliSum decompose(int levels);

/// Same as decompose() but memoised per truncation.
const PauliSum& cached_decomposition(int levels);

/// exp(-i * angle * coefficient * P) |state>.
StateVector exp_pauli_apply(const PauliTerm& term, double angle, const StateVector& state);

/// Product formula for exp(-i theta sum_k c_k P_k) |0...0>: each step applies
/// exp(-i (theta/steps) c_k P_k) for every term in stored order.
StateVector trotter_evolve(const PauliSum& sum, double theta, int steps);

/// |<0...0| trotter_evolve(decompose(N), theta, steps)>|^2.
double echo_probability(int levels, double theta, int steps);

/// Precomputed bit masks for a PauliSum; the fast path behind
/// trotter_evolve/echo_probability when many angles are evaluated.
class TrotterCircuit {
public:
    explicit TrotterCircuit(PauliSum sum);

    const PauliSum& sum() const noexcept { return sum_; }
    StateVector evolve(double theta, int steps) const;
    double echo_probability(double theta, int steps) const;

private:
    struct CompiledTerm {
        double coefficient;
        std::uint32_t flip_mask;  // X or Y positions
        std::uint32_t y_mask;
        std::uint32_t z_mask;  // Y or Z positions (contribute a sign on bit = 1)
        int y_count;
    };
    void apply(const CompiledTerm& term, double angle, StateVector& state, StateVector& scratch) const;

    PauliSum sum_;
    std::vector<CompiledTerm> compiled_;
};

/// Binomial(shots, p) / shots from a generator seeded with `seed`.
/// Throws InvalidArgument for p outside [0, 1] or shots < 1.
double shot_estimate(double p, int shots, std::uint64_t seed);

}  // namespace qkgp::pauli
