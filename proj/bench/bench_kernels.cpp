// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fil/family.hpp"
#include "fil/info.hpp"
#include "fil/kernels.hpp"

using namespace fil;
using namespace fil::kernels;

namespace {

std::vector<std::size_t> population(std::size_t size, std::size_t labels) {
  std::vector<std::size_t> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = i % labels;
  return out;
}

OutcomeKey sum_key() {
  return [](std::span<const std::size_t> drawn) {
    Rational s = 0;
    for (auto i : drawn) s += static_cast<long long>(i);
    return s;
  };
}

std::vector<Rational> uniform(std::size_t k) { return std::vector<Rational>(k, Rational(1, k)); }

std::vector<double> grid(std::size_t points) {
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) out[i] = (i + 0.5) / points;
  return out;
}

double fisher_at(double theta) {
  static const BinomialFamily binomial;
  return fisher_information(binomial, theta, 50, FisherMethod::Numeric);
}

}  // namespace

static void BM_PokerSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::poker_category_counts());
}
static void BM_PokerOmp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(omp::poker_category_counts());
}
BENCHMARK(BM_PokerSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PokerOmp)->Unit(benchmark::kMillisecond);

static void BM_EnumerateSerial(benchmark::State& state) {
  const auto labels = population(static_cast<std::size_t>(state.range(0)), 5);
  const auto key = sum_key();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        serial::enumerate_population(labels, 4, SamplingMode::WithoutReplacementOrdered, key));
  }
}
static void BM_EnumerateOmp(benchmark::State& state) {
  const auto labels = population(static_cast<std::size_t>(state.range(0)), 5);
  const auto key = sum_key();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        omp::enumerate_population(labels, 4, SamplingMode::WithoutReplacementOrdered, key));
  }
}
BENCHMARK(BM_EnumerateSerial)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateOmp)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_ConvolveSerial(benchmark::State& state) {
  const auto a = uniform(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::convolve(a, a));
}
static void BM_ConvolveOmp(benchmark::State& state) {
  const auto a = uniform(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(omp::convolve(a, a));
}
BENCHMARK(BM_ConvolveSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveOmp)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_GridSerial(benchmark::State& state) {
  const auto g = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::evaluate_grid(g, fisher_at));
}
static void BM_GridOmp(benchmark::State& state) {
  const auto g = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(omp::evaluate_grid(g, fisher_at));
}
BENCHMARK(BM_GridSerial)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridOmp)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
