#include <benchmark/benchmark.h>

#include <cmath>

#include "irsma/beamforming.hpp"
#include "irsma/config.hpp"
#include "irsma/multi_user.hpp"
#include "irsma/scheme.hpp"
#include "irsma/sdp.hpp"
#include "irsma/single_user.hpp"

using namespace irsma;

namespace {

struct DeskScene {
    ExperimentConfig config = ExperimentConfig::desk();
    StatisticalCsi scsi = scenario_scsi(config, 1);
    RadioContext radio = config.radio();
    IrsLayout layout = config.layout();
    ArraySurfaceConfig ula =
        ArraySurfaceConfig::centered_ula(config.system.antennas, radio.min_spacing(), config.regions());
};

const DeskScene& scene()
{
    static const DeskScene s;
    return s;
}

void BM_SampleIcsi(benchmark::State& state)
{
    const auto& s = scene();
    const ChannelSampler sampler(s.scsi, s.ula, s.layout, s.radio);
    Rng rng(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(sampler.draw(rng));
}
BENCHMARK(BM_SampleIcsi);

void BM_Wmmse(benchmark::State& state)
{
    const auto& s = scene();
    const ChannelSampler sampler(s.scsi, s.ula, s.layout, s.radio);
    Rng rng(2);
    const CMat H = effective_channels(sampler.draw(rng), CVec::Ones(static_cast<Eigen::Index>(s.layout.size())));
    for (auto _ : state)
        benchmark::DoNotOptimize(wmmse(H, s.config.power_watts(), s.config.noise_watts()));
}
BENCHMARK(BM_Wmmse);

// Arg is -log10 of the solver tolerance.
void BM_SdpSummedHeff(benchmark::State& state)
{
    const auto& s = scene();
    const CMat H = summed_heff(s.scsi, s.ula, s.layout, s.radio);
    SdpOptions o = s.config.algorithm.sdp;
    o.tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    int iterations = 0;
    for (auto _ : state) {
        const SdpSolution sol = solve_diag_trace_sdp(H, o);
        iterations = sol.iterations;
        benchmark::DoNotOptimize(sol.objective);
    }
    state.counters["n"] = static_cast<double>(H.rows());
    state.counters["admm_iters"] = iterations;
}
BENCHMARK(BM_SdpSummedHeff)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ScgInner(benchmark::State& state)
{
    const auto& s = scene();
    InnerContext ctx;
    ctx.scsi = &s.scsi;
    ctx.layout = &s.layout;
    ctx.radio = &s.radio;
    ctx.power = s.config.power_watts();
    ctx.noise = s.config.noise_watts();
    ctx.eval_samples = s.config.algorithm.ssca.batch;
    P32Options o;
    o.sdp = s.config.algorithm.sdp;
    for (auto _ : state)
        benchmark::DoNotOptimize(scg_inner(s.ula, ctx, o, 3).rate.mean);
}
BENCHMARK(BM_ScgInner)->Unit(benchmark::kMillisecond);

void BM_SscaIteration(benchmark::State& state)
{
    const auto& s = scene();
    const ChannelSampler sampler(s.scsi, s.ula, s.layout, s.radio);
    Rng rng(4);
    std::vector<InstantaneousChannels> batch;
    for (std::size_t t = 0; t < s.config.algorithm.ssca.batch; ++t)
        batch.push_back(sampler.draw(rng));
    SscaState st = SscaState::initial(sampler.elements(), sampler.users());
    for (auto _ : state)
        ssca_iteration(st, batch, s.config.algorithm.ssca.tau, s.config.power_watts(), s.config.noise_watts(), {});
}
BENCHMARK(BM_SscaIteration)->Unit(benchmark::kMillisecond);

void BM_DeGeneration(benchmark::State& state)
{
    const auto& s = scene();
    const auto M = static_cast<Eigen::Index>(s.config.system.antennas);
    const Interval q = s.config.regions().q;
    const Bounds bounds = Bounds::uniform(M, q.lo, q.hi);
    const BsAngles angles = BsAngles::of(s.scsi);
    const auto fitness = sequential_fitness(
        [&](const RVec& x) { return de_fitness(x, 0.0, angles, s.radio, s.config.algorithm.de.penalty); });
    DeParams p;
    Rng rng(5);
    DePopulation pop = de_initialize(bounds, p, rng, fitness, M);
    for (auto _ : state)
        pop = de_step(pop, p, bounds, rng, fitness);
}
BENCHMARK(BM_DeGeneration);

} // namespace

BENCHMARK_MAIN();
