// Serial reference kernels against their OpenMP counterparts.
// Arg 0 runs the serial version, arg 1 the parallel one.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <fstream>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "workauth/batch.hpp"
#include "workauth/linkage.hpp"
#include "workauth/tei.hpp"

using namespace workauth;
using namespace workauth::testing;

namespace {

const std::vector<linkage::LinkItem>& stub_items(std::size_t stubs) {
  static std::map<std::size_t, std::vector<linkage::LinkItem>> cache;
  auto& items = cache[stubs];
  if (items.empty()) {
    Rng rng(stubs);
    for (const auto& l : perturbed_stubs(rng, stubs / 4, stubs)) items.push_back(linkage::make_item(l.stub));
  }
  return items;
}

const std::vector<std::filesystem::path>& record_files() {
  static std::vector<std::filesystem::path> files;
  if (files.empty()) {
    auto dir = scratch_dir("bench-records");
    Rng rng(3);
    for (std::uint64_t id = 1; id <= 400; ++id)
      std::ofstream(dir / (std::to_string(id) + ".xml")) << serialize_work_record(random_record(rng, id));
    files = expand_inputs({dir});
  }
  return files;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "openmp x" + std::to_string(omp_get_max_threads()) : "serial");
}

void BM_CandidatePairs(benchmark::State& state) {
  const auto& items = stub_items(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto pairs = state.range(0) ? linkage::candidate_pairs(items) : linkage::candidate_pairs_serial(items);
    benchmark::DoNotOptimize(pairs);
  }
  label(state);
}

void BM_ScoreCandidates(benchmark::State& state) {
  const auto& items = stub_items(static_cast<std::size_t>(state.range(1)));
  const auto pairs = linkage::candidate_pairs_serial(items);
  for (auto _ : state) {
    auto scored = pairs;
    if (state.range(0))
      linkage::score_candidates(scored, items);
    else
      linkage::score_candidates_serial(scored, items);
    benchmark::DoNotOptimize(scored);
  }
  state.counters["pairs"] = static_cast<double>(pairs.size());
  label(state);
}

void BM_LoadRecords(benchmark::State& state) {
  const auto& files = record_files();
  for (auto _ : state) {
    auto outcomes = state.range(0) ? load_records(files) : load_records_serial(files);
    benchmark::DoNotOptimize(outcomes);
  }
  state.counters["files"] = static_cast<double>(files.size());
  label(state);
}

}  // namespace

BENCHMARK(BM_CandidatePairs)->ArgsProduct({{0, 1}, {400, 2000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreCandidates)->ArgsProduct({{0, 1}, {400, 2000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LoadRecords)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
