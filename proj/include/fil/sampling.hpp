#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "fil/dist_core.hpp"
#include "fil/kernels.hpp"

namespace fil {

std::string_view to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(std::string_view text);

struct Provenance {
  std::string base;
  std::uint64_t n = 0;
  SamplingMode mode = SamplingMode::WithReplacementIid;
  /// Number of equally weighted outcomes; absent for floating-point bases.
  std::optional<BigInt> outcome_count;
};

struct SamplingDistribution {
  DiscreteDistribution dist;
  Provenance provenance;
};

/// A statistic of a drawn sample. It receives the label indices of the drawn
/// elements and returns either an exact value or a double; double values are
/// grouped after rounding to `EnumerationOptions::rounding_digits`.
struct SampleStatistic {
  std::string name;
  bool order_invariant = true;
  std::function<Rational(std::span<const std::size_t>)> exact;
  std::function<double(std::span<const std::size_t>)> floating;
};

namespace statistics {

SampleStatistic sum(const LabelSpace& space);
SampleStatistic mean(const LabelSpace& space);
SampleStatistic minimum(const LabelSpace& space);
SampleStatistic maximum(const LabelSpace& space);
SampleStatistic range(const LabelSpace& space);
/// Number of drawn elements carrying `label`; works for any structure.
SampleStatistic count_of(const LabelSpace& space, std::string_view label);
/// Value of the first drawn element; not order invariant.
SampleStatistic first(const LabelSpace& space);
/// Lookup by name: sum, mean, min, max, range, first, count:LABEL.
SampleStatistic by_name(std::string_view name, const LabelSpace& space);

}  // namespace statistics

struct EnumerationOptions {
  std::uint64_t budget = 100'000'000;
  int rounding_digits = 12;
  bool parallel = true;
};

/// Exact n-fold convolution of an integer-valued distribution. Rendering
/// denominators are (base denominator)^n.
SamplingDistribution iid_sum_distribution(const DiscreteDistribution& base, unsigned n,
                                          std::string base_id = "base");

/// Exact distribution of `statistic` over every equally weighted outcome of
/// drawing `n` elements of `bag` under `mode`.
SamplingDistribution finite_population_sampling(const Bag& bag, unsigned n,
                                                const SampleStatistic& statistic,
                                                SamplingMode mode,
                                                const EnumerationOptions& options = {},
                                                std::string base_id = "bag");

BigInt outcome_count(std::uint64_t population, unsigned n, SamplingMode mode);

/// Restricts to the labels in `event` and renormalizes.
DiscreteDistribution condition(const DiscreteDistribution& dist,
                               const std::set<std::string>& event);
DiscreteDistribution condition(const DiscreteDistribution& dist,
                               const std::function<bool(std::size_t)>& keep_index);

inline constexpr std::array<std::string_view, kernels::kPokerCategories> kPokerCategoryNames = {
    "high_card", "pair",      "two_pair",       "three_of_a_kind", "straight",
    "flush",     "full_house", "four_of_a_kind", "straight_flush"};

/// Ordered simple distribution of hand categories over all C(52,5) hands.
SimpleDistribution poker_rank_distribution(bool parallel = true);

}  // namespace fil
