#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fil/kernels.hpp"
#include "oracles.hpp"

using namespace fil;
using namespace fil::kernels;

TEST(Kernels, PokerSerialAndParallelAgreeWithOracle) {
  const CategoryCounts serial_counts = serial::poker_category_counts();
  const CategoryCounts omp_counts = omp::poker_category_counts();
  EXPECT_EQ(serial_counts, omp_counts);
  const auto oracle_counts = oracle::poker_counts();
  for (std::size_t i = 0; i < kPokerCategories; ++i) EXPECT_EQ(serial_counts[i], oracle_counts[i]);
}

TEST(Kernels, EnumerationSerialAndParallelAgree) {
  const std::vector<std::size_t> labels{0, 0, 1, 2, 2, 2, 3};
  const std::vector<Rational> value{Rational(1), Rational(5, 2), Rational(-3), Rational(7)};
  const OutcomeKey sum = [&](std::span<const std::size_t> drawn) {
    Rational s = 0;
    for (auto i : drawn) s += value[i];
    return s;
  };
  for (auto mode : {SamplingMode::WithReplacementIid, SamplingMode::WithoutReplacementSubsets,
                    SamplingMode::WithoutReplacementOrdered}) {
    for (unsigned n = 1; n <= 4; ++n) {
      EXPECT_EQ(serial::enumerate_population(labels, n, mode, sum),
                omp::enumerate_population(labels, n, mode, sum));
    }
  }
}

TEST(Kernels, EnumerationMatchesOracle) {
  const std::vector<std::size_t> labels{0, 1, 1, 2, 3};
  const std::vector<Rational> value{Rational(0), Rational(2), Rational(3), Rational(9)};
  std::vector<Rational> elements;
  for (auto l : labels) elements.push_back(value[l]);
  const OutcomeKey sum = [&](std::span<const std::size_t> drawn) {
    Rational s = 0;
    for (auto i : drawn) s += value[i];
    return s;
  };
  const std::pair<SamplingMode, oracle::Draw> modes[] = {
      {SamplingMode::WithReplacementIid, oracle::Draw::Iid},
      {SamplingMode::WithoutReplacementSubsets, oracle::Draw::Subsets},
      {SamplingMode::WithoutReplacementOrdered, oracle::Draw::Ordered}};
  for (const auto& [mode, draw] : modes) {
    for (unsigned n = 1; n <= 3; ++n) {
      const auto got = serial::enumerate_population(labels, n, mode, sum);
      const auto want = oracle::population_counts(elements, n, draw, oracle::sum_of);
      ASSERT_EQ(got.size(), want.size());
      for (const auto& [k, c] : want) EXPECT_EQ(got.at(k), c);
    }
  }
}

TEST(Kernels, ConvolutionSerialAndParallelAgree) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> weight(1, 9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> a(1 + trial % 7);
    std::vector<Rational> b(1 + trial % 5);
    for (auto& x : a) x = Rational(weight(rng), 10);
    for (auto& x : b) x = Rational(weight(rng), 7);
    EXPECT_EQ(serial::convolve(a, b), omp::convolve(a, b));
    std::vector<double> da;
    std::vector<double> db;
    for (const auto& x : a) da.push_back(to_double(x));
    for (const auto& x : b) db.push_back(to_double(x));
    EXPECT_EQ(serial::convolve(da, db), omp::convolve(da, db));
  }
}

TEST(Kernels, ConvolutionByHand) {
  const std::vector<Rational> a{Rational(1, 2), Rational(1, 2)};
  const std::vector<Rational> expected{Rational(1, 4), Rational(1, 2), Rational(1, 4)};
  EXPECT_EQ(serial::convolve(a, a), expected);
}

TEST(Kernels, GridEvaluationAgrees) {
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back(i * 0.01);
  auto f = [](double x) { return std::sin(x) * std::exp(-x); };
  EXPECT_EQ(serial::evaluate_grid(grid, f), omp::evaluate_grid(grid, f));
}

TEST(Kernels, GridEvaluationPropagatesExceptions) {
  std::vector<double> grid{0.0, 1.0, 2.0};
  auto f = [](double x) -> double {
    if (x > 1.5) throw std::runtime_error("boom");
    return x;
  };
  EXPECT_THROW(omp::evaluate_grid(grid, f), std::runtime_error);
}
