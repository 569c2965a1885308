#include <benchmark/benchmark.h>

#include "leojadce/baselines.hpp"
#include "leojadce/channel.hpp"
#include "leojadce/signal.hpp"
#include "leojadce/special.hpp"
#include "leojadce/vbi.hpp"

using namespace leojadce;

namespace {

struct Fixture {
  PreambleSet preambles;
  DeviceStateMatrix x;
  ComplexTensor y;
};

Fixture make_fixture(std::size_t devices, std::size_t antennas, std::vector<std::size_t> dims) {
  ChannelConfig chan;
  chan.devices = devices;
  chan.antennas = antennas;
  Rng rng(2024);
  Fixture f;
  f.preambles = gen_preambles(dims, devices, rng);
  f.x = device_state_matrix(draw_channels(chan, rng));
  f.y = synthesize_received(f.preambles, f.x, 0.1, rng);
  return f;
}

void BM_Gram(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto f = make_fixture(k, 8, {20, 20});
  for (auto _ : state) benchmark::DoNotOptimize(precompute_gram(f.preambles));
}
BENCHMARK(BM_Gram)->Arg(200)->Arg(500)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_GramFullProduct(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto f = make_fixture(k, 8, {20, 20});
  const CMatrix a = assemble_preamble_matrix(f.preambles);
  for (auto _ : state) benchmark::DoNotOptimize(CMatrix((a.adjoint() * a).conjugate()));
}
BENCHMARK(BM_GramFullProduct)->Arg(200)->Arg(500)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_VbiSweep(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto f = make_fixture(k, 8, {20, 20});
  const auto prob = make_problem(f.preambles, f.y);
  auto s = init_posterior(prob, EngineConfig{});
  for (auto _ : state) {
    update_qx(s, prob);
    update_qmu(s);
    update_qv(s);
    update_qbeta(s, prob);
  }
}
BENCHMARK(BM_VbiSweep)->Arg(200)->Arg(500)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_VbiRun(benchmark::State& state) {
  const auto f = make_fixture(500, 8, {20, 20});
  for (auto _ : state) benchmark::DoNotOptimize(run(f.preambles, f.y, EngineConfig{}));
}
BENCHMARK(BM_VbiRun)->Unit(benchmark::kMillisecond);

void BM_Somp(benchmark::State& state) {
  const auto f = make_fixture(500, 8, {20, 20});
  const CMatrix y = received_matrix(f.y);
  const CMatrix a = assemble_preamble_matrix(f.preambles);
  const auto cfg = default_somp_config(500, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(somp(y, a, cfg));
}
BENCHMARK(BM_Somp)->Unit(benchmark::kMillisecond);

void BM_MuMoments(benchmark::State& state) {
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu_inverse_moments(3.0, t, 1e-6));
    t = -t;
  }
}
BENCHMARK(BM_MuMoments);

void BM_Hyp1f1Large(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hyp1f1(0.5, 1.5, 300.0));
}
BENCHMARK(BM_Hyp1f1Large);

}  // namespace
BENCHMARK_MAIN();
