#pragma once

// Enumeration and scan kernels. Each kernel has a serial reference version
// and an OpenMP version with the same signature; the parallel versions must
// return results identical to the serial ones. Public operations call the
// parallel versions, tests and benchmarks call both.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "fil/rational.hpp"

namespace fil {

enum class SamplingMode { WithReplacementIid, WithoutReplacementSubsets, WithoutReplacementOrdered };

namespace kernels {

inline constexpr std::size_t kPokerCategories = 9;
using CategoryCounts = std::array<std::uint64_t, kPokerCategories>;

/// Statistic value -> number of outcomes producing it.
using OutcomeCounts = std::map<Rational, std::uint64_t>;

/// Maps the label indices of one drawn sample to the grouping key.
using OutcomeKey = std::function<Rational(std::span<const std::size_t>)>;

bool openmp_enabled();
int max_threads();

namespace serial {

/// Hand-category frequencies over all C(52,5) five-card hands.
CategoryCounts poker_category_counts();

/// Groups every outcome of drawing `n` elements from a population whose
/// element i has label `element_labels[i]`.
OutcomeCounts enumerate_population(std::span<const std::size_t> element_labels,
                                   unsigned n, SamplingMode mode,
                                   const OutcomeKey& key);

std::vector<Rational> convolve(std::span<const Rational> a, std::span<const Rational> b);
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

std::vector<double> evaluate_grid(std::span<const double> grid,
                                  const std::function<double(double)>& f);

}  // namespace serial

namespace omp {

CategoryCounts poker_category_counts();
OutcomeCounts enumerate_population(std::span<const std::size_t> element_labels,
                                   unsigned n, SamplingMode mode,
                                   const OutcomeKey& key);
std::vector<Rational> convolve(std::span<const Rational> a, std::span<const Rational> b);
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);
std::vector<double> evaluate_grid(std::span<const double> grid,
                                  const std::function<double(double)>& f);

}  // namespace omp

/// Category of a five-card hand; cards are 0..51 with rank = card / 4 (0 is a
/// deuce, 12 an ace) and suit = card % 4. Returns 0 (high card) .. 8
/// (straight flush).
int classify_hand(const std::array<int, 5>& cards);

}  // namespace kernels
}  // namespace fil
