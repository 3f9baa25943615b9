#include <benchmark/benchmark.h>

#include <vector>

#include "uwbsim/allocator.hpp"
#include "uwbsim/channel_model.hpp"
#include "uwbsim/convolutional_code.hpp"
#include "uwbsim/link_abstraction.hpp"
#include "uwbsim/phy_link.hpp"
#include "uwbsim/rng.hpp"

using namespace uwbsim;

static void BM_ViterbiDecode(benchmark::State& state) {
  const auto info = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<std::uint8_t> bits(info);
  for (auto& b : bits) b = rng() & 1;
  const ConvolutionalCode code(CodeRate::R1_3);
  const auto coded = code.encode(bits);
  std::vector<float> llr(coded.size());
  for (std::size_t i = 0; i < coded.size(); ++i) llr[i] = coded[i] ? -1.0f : 1.0f;
  ViterbiDecoder dec;
  for (auto _ : state) benchmark::DoNotOptimize(dec.decode(llr, info));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * info));
}
BENCHMARK(BM_ViterbiDecode)->Arg(1000)->Arg(4000);

static void BM_EffectiveSinr(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> s(100);
  for (auto& v : s) v = 0.1 + 100.0 * uniform01(rng);
  for (auto _ : state) benchmark::DoNotOptimize(effective_sinr(s, 2.0));
}
BENCHMARK(BM_EffectiveSinr);

static void BM_FrequencyResponse(benchmark::State& state) {
  const auto r = generate_realization(ChannelModelParams::preset(ChannelModelId::CM4), 3);
  for (auto _ : state) benchmark::DoNotOptimize(frequency_response(r, 2, kNumDataTones));
  state.counters["taps"] = static_cast<double>(r.taps.size());
}
BENCHMARK(BM_FrequencyResponse);

static void BM_Negotiate(benchmark::State& state) {
  const std::vector<AllocationLevel> levels{
      {1, 0.9, {2, 1, 3}}, {2, 0.7, {2, 3, 1}}, {3, 0.4, {1, 2, 3}}, {4, 0.3, {3, 2, 1}}};
  for (auto _ : state) benchmark::DoNotOptimize(negotiate(levels));
}
BENCHMARK(BM_Negotiate);

static void BM_LinkFrame(benchmark::State& state) {
  const auto r = generate_realization(ChannelModelParams::preset(ChannelModelId::CM1), 4);
  LinkSimulator sim(mcs_by_label("480"), band_responses(r), BandPlan::fixed(1));
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(sim.run_frames(1, 8.0, rng));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * sim.info_bits_per_frame()));
}
BENCHMARK(BM_LinkFrame);
BENCHMARK_MAIN();
