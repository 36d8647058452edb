#include <random>

#include <benchmark/benchmark.h>

#include "memetic/config.hpp"
#include "memetic/midi.hpp"

namespace {

using namespace memetic;

void BM_CompileChain(benchmark::State& state) {
  const auto& config = *default_config();
  auto surface = config.make_surface();
  surface.set("optimist_pessimist", -0.8);
  surface.set("length", 0.1);
  surface.set("sarcasm", 1.0);
  auto snapshot = surface.snapshot();
  const auto& mode = config.presets.active_mode(snapshot);
  for (auto _ : state) {
    auto chain = compile(snapshot, "ocean dream blue sky", mode, config.descriptors, false);
    benchmark::DoNotOptimize(chain.serialize());
  }
}
BENCHMARK(BM_CompileChain);

void BM_Snapshot(benchmark::State& state) {
  auto surface = default_config()->make_surface();
  for (auto _ : state) benchmark::DoNotOptimize(surface.snapshot());
}
BENCHMARK(BM_Snapshot);

void BM_MidiDecode(benchmark::State& state) {
  std::vector<std::uint8_t> bytes;
  std::mt19937 rng(9);
  for (int i = 0; i < 4096; ++i) {
    bytes.insert(bytes.end(), {0xB0, static_cast<std::uint8_t>(rng() % 128), static_cast<std::uint8_t>(rng() % 128)});
    if (i % 8 == 0) bytes.push_back(0xF8);
  }
  for (auto _ : state) {
    midi::Decoder decoder;
    benchmark::DoNotOptimize(decoder.feed(bytes));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_MidiDecode);

}  // namespace
BENCHMARK_MAIN();
