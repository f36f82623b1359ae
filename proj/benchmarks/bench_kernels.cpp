#include <benchmark/benchmark.h>

#include "qkgp/kernels.hpp"
#include "qkgp/pauli.hpp"

using namespace qkgp;

namespace {

kernels::Points line(int n) {
    kernels::Points x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = 20.0 * i / (n - 1);
    return x;
}

void BM_Decompose(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pauli::decompose(n));
}
BENCHMARK(BM_Decompose)->Arg(4)->Arg(16)->Arg(32);

void BM_EchoProbability(benchmark::State& state) {
    const pauli::TrotterCircuit circuit(pauli::decompose(static_cast<int>(state.range(0))));
    const int steps = static_cast<int>(state.range(1));
    double theta = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(circuit.echo_probability(theta, steps));
        theta += 1e-3;
    }
}
BENCHMARK(BM_EchoProbability)->Args({4, 3})->Args({16, 6});

void BM_Gram1d(benchmark::State& state, const char* label) {
    const kernels::Kernel k(kernels::parse_kernel(label, 1));
    const kernels::Points x = line(static_cast<int>(state.range(0)));
    const kernels::Hyperparams hp{1.0, {2.0}, {}, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(kernels::gram(k, hp, x));
}
BENCHMARK_CAPTURE(BM_Gram1d, coherent, "coherent")->Arg(140);
BENCHMARK_CAPTURE(BM_Gram1d, finite8, "C-8")->Arg(140);
BENCHMARK_CAPTURE(BM_Gram1d, qubit4t3, "CQ-4-t3")->Arg(140);

void BM_SqueezedKernel(benchmark::State& state) {
    kernels::KernelSpec spec = kernels::KernelSpec::squeezed(static_cast<int>(state.range(0)));
    const kernels::Kernel k(spec);
    const kernels::Hyperparams hp{1.0, {0.5, 0.7, 0.9}, {0.3, 0.2, 0.1}, 0.0};
    const std::vector<double> x{0.2, -0.4, 0.6}, xp{-0.5, 0.3, 0.1};
    for (auto _ : state) benchmark::DoNotOptimize(k(hp, x, xp));
}
BENCHMARK(BM_SqueezedKernel)->Arg(8)->Arg(14);

}  // namespace
