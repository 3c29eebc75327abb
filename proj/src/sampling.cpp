#include "fil/sampling.hpp"

#include <array>
#include <cstdio>

#include <boost/integer/common_factor.hpp>

#include "fil/error.hpp"

namespace fil {

std::string_view to_string(SamplingMode mode) {
  switch (mode) {
    case SamplingMode::WithReplacementIid: return "iid";
    case SamplingMode::WithoutReplacementSubsets: return "subsets";
    case SamplingMode::WithoutReplacementOrdered: return "ordered";
  }
  return "iid";
}

SamplingMode parse_sampling_mode(std::string_view text) {
  if (text == "iid") return SamplingMode::WithReplacementIid;
  if (text == "subsets") return SamplingMode::WithoutReplacementSubsets;
  if (text == "ordered") return SamplingMode::WithoutReplacementOrdered;
  throw Error(ErrorCode::InvalidArgument,
              "unknown sampling mode '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Statistics

namespace statistics {
namespace {

std::vector<Rational> require_numeric(const LabelSpace& space, std::string_view stat) {
  if (!space.is_numeric()) {
    throw Error(ErrorCode::UnsupportedLabels,
                "statistic '" + std::string(stat) + "' needs numeric labels");
  }
  return space.exact_values();
}

}  // namespace

SampleStatistic sum(const LabelSpace& space) {
  auto values = require_numeric(space, "sum");
  return {"sum", true,
          [values](std::span<const std::size_t> drawn) {
            Rational acc = 0;
            for (std::size_t k : drawn) acc += values[k];
            return acc;
          },
          {}};
}

SampleStatistic mean(const LabelSpace& space) {
  auto values = require_numeric(space, "mean");
  return {"mean", true,
          [values](std::span<const std::size_t> drawn) {
            Rational acc = 0;
            for (std::size_t k : drawn) acc += values[k];
            return Rational(acc / static_cast<long long>(drawn.size()));
          },
          {}};
}

SampleStatistic minimum(const LabelSpace& space) {
  auto values = require_numeric(space, "min");
  return {"min", true,
          [values](std::span<const std::size_t> drawn) {
            std::size_t best = drawn[0];
            for (std::size_t k : drawn) best = std::min(best, k);
            return values[best];
          },
          {}};
}

SampleStatistic maximum(const LabelSpace& space) {
  auto values = require_numeric(space, "max");
  return {"max", true,
          [values](std::span<const std::size_t> drawn) {
            std::size_t best = drawn[0];
            for (std::size_t k : drawn) best = std::max(best, k);
            return values[best];
          },
          {}};
}

SampleStatistic range(const LabelSpace& space) {
  auto values = require_numeric(space, "range");
  return {"range", true,
          [values](std::span<const std::size_t> drawn) {
            auto [lo, hi] = std::minmax_element(drawn.begin(), drawn.end());
            return Rational(values[*hi] - values[*lo]);
          },
          {}};
}

SampleStatistic count_of(const LabelSpace& space, std::string_view label) {
  auto target = space.index_of(label);
  if (!target) {
    throw Error(ErrorCode::InvalidArgument,
                "label '" + std::string(label) + "' is not in the label space");
  }
  const std::size_t want = *target;
  return {"count_of:" + std::string(label), true,
          [want](std::span<const std::size_t> drawn) {
            long long hits = 0;
            for (std::size_t k : drawn) hits += (k == want);
            return Rational(hits);
          },
          {}};
}

SampleStatistic first(const LabelSpace& space) {
  auto values = require_numeric(space, "first");
  return {"first", false,
          [values](std::span<const std::size_t> drawn) { return values[drawn[0]]; },
          {}};
}

SampleStatistic by_name(std::string_view name, const LabelSpace& space) {
  if (name == "sum") return sum(space);
  if (name == "mean") return mean(space);
  if (name == "min") return minimum(space);
  if (name == "max") return maximum(space);
  if (name == "range") return range(space);
  if (name == "first") return first(space);
  if (name.starts_with("count:")) return count_of(space, name.substr(6));
  throw Error(ErrorCode::InvalidStatistic, "unknown statistic '" + std::string(name) + "'");
}

}  // namespace statistics

// ---------------------------------------------------------------------------
// Convolution

SamplingDistribution iid_sum_distribution(const DiscreteDistribution& base, unsigned n,
                                          std::string base_id) {
  const LabelSpace& space = base.space();
  if (!space.is_numeric()) {
    throw Error(ErrorCode::UnsupportedLabels, "sum distribution needs numeric labels");
  }
  for (const auto& v : space.exact_values()) {
    if (boost::multiprecision::denominator(v) != 1) {
      throw Error(ErrorCode::UnsupportedLabels,
                  "sum distribution needs integer labels; got " + numeric_label(v));
    }
  }
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");

  std::optional<BigInt> outcomes;
  if (base.is_exact()) {
    BigInt per_draw = 1;
    if (base.denominator()) {
      per_draw = *base.denominator();
    } else {
      for (const auto& p : base.exact_probs()) {
        per_draw = boost::integer::lcm(per_draw, boost::multiprecision::denominator(p));
      }
    }
    outcomes = boost::multiprecision::pow(per_draw, n);
  }
  Provenance provenance{std::move(base_id), n, SamplingMode::WithReplacementIid, outcomes};
  if (n == 1) {
    if (base.is_exact()) {
      return {DiscreteDistribution::exact(space, base.exact_probs(), outcomes),
              std::move(provenance)};
    }
    return {base, std::move(provenance)};
  }

  const BigInt lo = boost::multiprecision::numerator(space.exact_values().front());
  const BigInt hi = boost::multiprecision::numerator(space.exact_values().back());
  const std::size_t width = (hi - lo).convert_to<std::size_t>() + 1;
  const BigInt out_lo = lo * n;

  auto build_space = [&](const auto& dense, auto is_zero) {
    std::vector<Rational> values;
    for (std::size_t s = 0; s < dense.size(); ++s) {
      if (!is_zero(dense[s])) values.emplace_back(out_lo + s);
    }
    return LabelSpace::numeric(std::move(values));
  };

  if (base.is_exact()) {
    std::vector<Rational> single(width, Rational(0));
    for (std::size_t i = 0; i < space.size(); ++i) {
      single[(numerator(space.exact_values()[i]) - lo).convert_to<std::size_t>()] =
          base.exact_probs()[i];
    }
    std::vector<Rational> dense = single;
    for (unsigned k = 1; k < n; ++k) dense = kernels::omp::convolve(dense, single);
    auto out_space = build_space(dense, [](const Rational& r) { return r == 0; });
    std::vector<Rational> probs;
    for (const auto& p : dense) {
      if (p != 0) probs.push_back(p);
    }
    return {DiscreteDistribution::exact(std::move(out_space), std::move(probs), outcomes),
            std::move(provenance)};
  }

  std::vector<double> single(width, 0.0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    single[(numerator(space.exact_values()[i]) - lo).convert_to<std::size_t>()] =
        base.probs()[i];
  }
  std::vector<double> dense = single;
  for (unsigned k = 1; k < n; ++k) dense = kernels::omp::convolve(dense, single);
  auto out_space = build_space(dense, [](double p) { return p == 0.0; });
  std::vector<double> probs;
  for (double p : dense) {
    if (p != 0.0) probs.push_back(p);
  }
  return {DiscreteDistribution::approximate(std::move(out_space), std::move(probs)),
          std::move(provenance)};
}

// ---------------------------------------------------------------------------
// Finite-population enumeration

BigInt outcome_count(std::uint64_t population, unsigned n, SamplingMode mode) {
  switch (mode) {
    case SamplingMode::WithoutReplacementSubsets:
      return binomial_coefficient(static_cast<unsigned>(population), n);
    case SamplingMode::WithoutReplacementOrdered:
      return falling_factorial(static_cast<unsigned>(population), n);
    case SamplingMode::WithReplacementIid:
      return boost::multiprecision::pow(BigInt(population), n);
  }
  return 0;
}

namespace {

Rational round_significant(double x, int digits) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*e", std::max(digits, 1) - 1, x);
  return parse_rational(buf.data());
}

}  // namespace

SamplingDistribution finite_population_sampling(const Bag& bag, unsigned n,
                                                const SampleStatistic& statistic,
                                                SamplingMode mode,
                                                const EnumerationOptions& options,
                                                std::string base_id) {
  const std::uint64_t population = bag.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  if (mode != SamplingMode::WithReplacementIid && n > population) {
    throw Error(ErrorCode::SampleTooLarge,
                "sample size " + std::to_string(n) + " exceeds population size " +
                    std::to_string(population));
  }
  if (mode == SamplingMode::WithoutReplacementSubsets && !statistic.order_invariant) {
    throw Error(ErrorCode::InvalidStatistic,
                "statistic '" + statistic.name +
                    "' depends on draw order; use ordered mode");
  }
  if (!statistic.exact && !statistic.floating) {
    throw Error(ErrorCode::InvalidStatistic, "statistic has no evaluator");
  }
  const BigInt total = outcome_count(population, n, mode);
  if (total > options.budget) {
    throw Error(ErrorCode::EnumerationBudgetExceeded,
                total.str() + " outcomes exceed the enumeration budget of " +
                    std::to_string(options.budget));
  }

  kernels::OutcomeKey key;
  if (statistic.exact) {
    key = statistic.exact;
  } else {
    key = [f = statistic.floating, digits = options.rounding_digits](
              std::span<const std::size_t> drawn) {
      return round_significant(f(drawn), digits);
    };
  }
  const auto labels = bag.element_labels();
  const auto counts = options.parallel
                          ? kernels::omp::enumerate_population(labels, n, mode, key)
                          : kernels::serial::enumerate_population(labels, n, mode, key);

  std::vector<Rational> values;
  std::vector<Rational> probs;
  for (const auto& [value, count] : counts) {
    values.push_back(value);
    probs.emplace_back(BigInt(count), total);
  }
  return {DiscreteDistribution::exact(LabelSpace::numeric(std::move(values)),
                                      std::move(probs), total),
          Provenance{std::move(base_id), n, mode, total}};
}

// ---------------------------------------------------------------------------
// Conditioning

DiscreteDistribution condition(const DiscreteDistribution& dist,
                               const std::function<bool(std::size_t)>& keep_index) {
  const LabelSpace& space = dist.space();
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (keep_index(i)) kept.push_back(i);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyConditioningEvent,
                "conditioning event selects no support point");
  }
  std::vector<std::string> labels;
  std::vector<Rational> values;
  for (std::size_t i : kept) {
    labels.push_back(space.label(i));
    if (space.is_numeric()) values.push_back(space.exact_values()[i]);
  }
  LabelSpace sub = [&] {
    switch (space.structure()) {
      case Structure::Numeric: return LabelSpace::numeric(std::move(labels), std::move(values));
      case Structure::Ordered: return LabelSpace::ordered(std::move(labels));
      case Structure::Unordered: break;
    }
    return LabelSpace::unordered(std::move(labels));
  }();

  if (dist.is_exact()) {
    Rational mass = 0;
    for (std::size_t i : kept) mass += dist.exact_probs()[i];
    std::vector<Rational> probs;
    for (std::size_t i : kept) probs.push_back(dist.exact_probs()[i] / mass);
    std::optional<BigInt> denominator;
    if (dist.denominator()) {
      Rational scaled = mass * Rational(*dist.denominator());
      if (boost::multiprecision::denominator(scaled) == 1) {
        denominator = boost::multiprecision::numerator(scaled);
      }
    }
    return DiscreteDistribution::exact(std::move(sub), std::move(probs), denominator);
  }
  double mass = 0.0;
  for (std::size_t i : kept) mass += dist.probs()[i];
  std::vector<double> probs;
  for (std::size_t i : kept) probs.push_back(dist.probs()[i] / mass);
  return DiscreteDistribution::approximate(std::move(sub), std::move(probs));
}

DiscreteDistribution condition(const DiscreteDistribution& dist,
                               const std::set<std::string>& event) {
  return condition(dist, [&](std::size_t i) {
    return event.count(dist.space().label(i)) > 0;
  });
}

// ---------------------------------------------------------------------------
// Poker

SimpleDistribution poker_rank_distribution(bool parallel) {
  const auto counts = parallel ? kernels::omp::poker_category_counts()
                               : kernels::serial::poker_category_counts();
  std::vector<std::string> labels(kPokerCategoryNames.begin(), kPokerCategoryNames.end());
  return SimpleDistribution(LabelSpace::ordered(std::move(labels)),
                            std::vector<std::uint64_t>(counts.begin(), counts.end()));
}

}  // namespace fil
