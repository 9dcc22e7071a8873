// Serial reference vs OpenMP kernel for batch decoding and corpus generation.

#include <benchmark/benchmark.h>

#include "dw/datagen.hpp"
#include "dw/tagger.hpp"

namespace {

using namespace dw;

const std::vector<datagen::AnnotatedInstruction>& corpus() {
  static const auto c = datagen::generate_dataset(default_fixture(), 1584, 7);
  return c;
}

const tagger::TaggerModel& model() {
  static const auto m = [] {
    tagger::TrainOptions o;
    o.epochs = 5;
    return tagger::train(datagen::sequences(datagen::split_dataset(corpus(), 7).train), o);
  }();
  return m;
}

std::vector<std::vector<std::string>> inputs() {
  std::vector<std::vector<std::string>> in;
  for (const auto& d : corpus()) in.push_back(d.tokens);
  return in;
}

void BM_PredictBatchSerial(benchmark::State& state) {
  const auto in = inputs();
  const auto& m = model();
  for (auto _ : state) benchmark::DoNotOptimize(tagger::predict_batch_serial(m, in));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}

void BM_PredictBatchParallel(benchmark::State& state) {
  const auto in = inputs();
  const auto& m = model();
  for (auto _ : state) benchmark::DoNotOptimize(tagger::predict_batch(m, in));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}

void BM_GenerateSerial(benchmark::State& state) {
  const auto tables = default_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(datagen::generate_dataset_serial(tables, 1584, 7));
  state.SetItemsProcessed(state.iterations() * 1584);
}

void BM_GenerateParallel(benchmark::State& state) {
  const auto tables = default_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(datagen::generate_dataset(tables, 1584, 7));
  state.SetItemsProcessed(state.iterations() * 1584);
}

}  // namespace

BENCHMARK(BM_PredictBatchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictBatchParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
