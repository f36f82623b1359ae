#include "qkgp/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "qkgp/error.hpp"

namespace qkgp::pauli {

namespace {

using fock::Complex;

struct Masks {
    std::uint32_t flip = 0;
    std::uint32_t y = 0;
    std::uint32_t sign = 0;
    int y_count = 0;
};

Masks masks_of(std::string_view symbols) {
    if (symbols.empty() || symbols.size() > 16) throw InvalidArgument("Pauli string must have 1..16 symbols");
    Masks m;
    for (std::size_t q = 0; q < symbols.size(); ++q) {
        const std::uint32_t bit = 1u << q;
        switch (symbols[q]) {
            case 'I': break;
            case 'X': m.flip |= bit; break;
            case 'Y':
                m.flip |= bit;
                m.y |= bit;
                m.sign |= bit;
                ++m.y_count;
                break;
            case 'Z': m.sign |= bit; break;
            default: throw InvalidArgument(std::string("invalid Pauli symbol '") + symbols[q] + "'");
        }
    }
    return m;
}

Complex i_power(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// P|k> = phase(k) |k ^ flip>
Complex phase(const Masks& m, std::uint32_t k) {
    const Complex base = i_power(m.y_count);
    return (std::popcount(k & m.sign) & 1) ? -base : base;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ComplexMatrix pauli_matrix(std::string_view symbols) {
    const Masks m = masks_of(symbols);
    const int dim = 1 << symbols.size();
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(dim); ++k) out(k ^ m.flip, k) = phase(m, k);
    return out;
}

ComplexMatrix PauliSum::dense() const {
    const int dim = dimension();
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& term : terms) {
        const Masks m = masks_of(term.symbols);
        for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(dim); ++k) {
            out(k ^ m.flip, k) += term.coefficient * phase(m, k);
        }
    }
    return out;
}

PauliSum decompose(int levels) {
    if (levels < 2 || levels > 64 || !is_power_of_two(levels)) {
        throw InvalidTruncation("Pauli decomposition needs a power-of-two truncation in [2, 64], got " +
                                std::to_string(levels));
    }
    const int qubits = std::countr_zero(static_cast<unsigned>(levels));
    const ComplexMatrix h = fock::displacement_generator(levels);

    PauliSum sum;
    sum.qubits = qubits;
    constexpr char alphabet[] = {'I', 'X', 'Y', 'Z'};
    std::string symbols(qubits, 'I');
    const long strings = 1L << (2 * qubits);
    for (long code = 0; code < strings; ++code) {
        // Last symbol varies fastest so strings come out in lexicographic order.
        for (int q = 0; q < qubits; ++q) symbols[q] = alphabet[(code >> (2 * (qubits - 1 - q))) & 3];
        const Masks m = masks_of(symbols);
        Complex trace{};
        for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(levels); ++k) {
            trace += phase(m, k) * h(k, k ^ m.flip);
        }
        const Complex c = trace / static_cast<double>(levels);
        if (std::abs(c.imag()) > 1e-10) throw NumericError("non-real Pauli coefficient for " + symbols);
        if (std::abs(c.real()) < 1e-12) continue;
        sum.terms.push_back({c.real(), symbols});
    }
    return sum;
}

const PauliSum& cached_decomposition(int levels) {
    static std::mutex mutex;
    static std::map<int, PauliSum> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(levels);
    if (it == cache.end()) it = cache.emplace(levels, decompose(levels)).first;
    return it->second;
}

StateVector exp_pauli_apply(const PauliTerm& term, double angle, const StateVector& state) {
    const Masks m = masks_of(term.symbols);
    const long dim = 1L << term.symbols.size();
    if (state.size() != dim) {
        throw DimensionMismatch("state of dimension " + std::to_string(state.size()) + " for a " +
                                std::to_string(term.symbols.size()) + "-qubit term");
    }
    const double a = angle * term.coefficient;
    const double c = std::cos(a);
    const Complex minus_i_sin(0.0, -std::sin(a));
    StateVector out(dim);
    for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(dim); ++k) {
        const std::uint32_t src = k ^ m.flip;
        out(k) = c * state(k) + minus_i_sin * phase(m, src) * state(src);
    }
    return out;
}

TrotterCircuit::TrotterCircuit(PauliSum sum) : sum_(std::move(sum)) {
    compiled_.reserve(sum_.terms.size());
    for (const auto& t : sum_.terms) {
        if (static_cast<int>(t.symbols.size()) != sum_.qubits) {
            throw DimensionMismatch("term " + t.symbols + " does not match the qubit count");
        }
        const Masks m = masks_of(t.symbols);
        compiled_.push_back({t.coefficient, m.flip, m.y, m.sign, m.y_count});
    }
}

void TrotterCircuit::apply(const CompiledTerm& term, double angle, StateVector& state, StateVector& scratch) const {
    const double a = angle * term.coefficient;
    const double c = std::cos(a);
    const Complex minus_i_sin(0.0, -std::sin(a));
    const Complex base = i_power(term.y_count);
    const auto dim = static_cast<std::uint32_t>(state.size());
    for (std::uint32_t k = 0; k < dim; ++k) {
        const std::uint32_t src = k ^ term.flip_mask;
        const Complex ph = (std::popcount(src & term.z_mask) & 1) ? -base : base;
        scratch(k) = c * state(k) + minus_i_sin * ph * state(src);
    }
    state.swap(scratch);
}

StateVector TrotterCircuit::evolve(double theta, int steps) const {
    if (steps < 1) throw InvalidArgument("Trotter steps must be >= 1");
    if (!std::isfinite(theta)) throw NumericError("evolution angle must be finite");
    StateVector state = fock::vacuum(sum_.dimension());
    StateVector scratch(state.size());
    const double angle = theta / steps;
    for (int s = 0; s < steps; ++s) {
        for (const auto& term : compiled_) apply(term, angle, state, scratch);
    }
    return state;
}

double TrotterCircuit::echo_probability(double theta, int steps) const {
    return std::norm(evolve(theta, steps)(0));
}

StateVector trotter_evolve(const PauliSum& sum, double theta, int steps) {
    return TrotterCircuit(sum).evolve(theta, steps);
}

double echo_probability(int levels, double theta, int steps) {
    return TrotterCircuit(cached_decomposition(levels)).echo_probability(theta, steps);
}

double shot_estimate(double p, int shots, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0, 1]");
    if (shots < 1) throw InvalidArgument("shot count must be >= 1");
    if (p == 0.0 || p == 1.0) return p;
    std::mt19937_64 rng(seed);
    std::binomial_distribution<int> draw(shots, p);
    return static_cast<double>(draw(rng)) / shots;
}

}  // namespace qkgp::pauli
