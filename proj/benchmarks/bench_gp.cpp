#include <benchmark/benchmark.h>

#include "qkgp/gp.hpp"
#include "qkgp/tasks.hpp"

using namespace qkgp;

namespace {

void BM_LogMarginalLikelihood(benchmark::State& state) {
    const auto split = tasks::gen_1d(tasks::TargetFunction::XSinX, static_cast<int>(state.range(0)), 0);
    const auto k = std::make_shared<const kernels::Kernel>(kernels::KernelSpec::analytic(1));
    const kernels::Hyperparams hp{50.0, {1.5}, {}, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(gp::GPModel(k, hp, split.train).log_marginal_likelihood());
}
BENCHMARK(BM_LogMarginalLikelihood)->Arg(40)->Arg(128);

void BM_Posterior(benchmark::State& state) {
    const auto split = tasks::gen_1d(tasks::TargetFunction::XSinX, 40, 0);
    const gp::GPModel m(kernels::KernelSpec::analytic(1), {50.0, {1.5}, {}, 0.0}, split.train);
    for (auto _ : state) benchmark::DoNotOptimize(m.posterior(split.test.x));
}
BENCHMARK(BM_Posterior);

void BM_Optimize1d(benchmark::State& state) {
    const auto split = tasks::gen_1d(tasks::TargetFunction::XSinX, 40, 0);
    gp::OptimizeOptions o;
    o.restarts = 0;
    for (auto _ : state) benchmark::DoNotOptimize(gp::optimize(kernels::KernelSpec::analytic(1), split.train, o));
}
BENCHMARK(BM_Optimize1d)->Unit(benchmark::kMillisecond);

void BM_DynamicsGram(benchmark::State& state) {
    const auto data = tasks::gen_dynamics(tasks::HillConfig{}, 128, 0);
    const kernels::Kernel k(kernels::KernelSpec::squeezed());
    const kernels::Hyperparams hp{1.0, {1.0, 1.0, 1.0}, {0.5, 0.5, 0.5}, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(kernels::gram(k, hp, data.next_x.x));
}
BENCHMARK(BM_DynamicsGram)->Unit(benchmark::kMillisecond);

}  // namespace
