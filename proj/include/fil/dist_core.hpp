#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fil/rational.hpp"

namespace fil {

enum class Structure { Unordered, Ordered, Numeric };

std::string_view to_string(Structure s);
Structure parse_structure(std::string_view text);

/// The support set of a distribution together with how much structure its
/// labels carry. Numeric spaces keep each value exactly so that sampling
/// statistics and observed values compare without rounding.
class LabelSpace {
 public:
  static LabelSpace unordered(std::vector<std::string> labels);
  static LabelSpace ordered(std::vector<std::string> labels);
  /// Labels are rendered from the values ("2", "3/2").
  static LabelSpace numeric(std::vector<Rational> values);
  static LabelSpace numeric(std::vector<std::string> labels,
                            std::vector<Rational> values);
  static LabelSpace integers(std::int64_t first, std::int64_t last);

  std::size_t size() const { return labels_.size(); }
  Structure structure() const { return structure_; }
  bool has_order() const { return structure_ != Structure::Unordered; }
  bool is_numeric() const { return structure_ == Structure::Numeric; }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  /// Exact values; empty unless numeric.
  const std::vector<Rational>& exact_values() const { return exact_values_; }
  const std::vector<double>& numeric_values() const { return numeric_values_; }

  std::optional<std::size_t> index_of(std::string_view label) const;
  std::optional<std::size_t> index_of_value(const Rational& value) const;

  /// Ordering coordinate: the numeric value, or the position for ordered
  /// spaces. Throws OrderingRequired for unordered spaces.
  double coordinate(std::size_t i) const;

  bool operator==(const LabelSpace& other) const;

 private:
  LabelSpace(std::vector<std::string> labels, Structure structure,
             std::vector<Rational> values);

  std::vector<std::string> labels_;
  Structure structure_ = Structure::Unordered;
  std::vector<Rational> exact_values_;
  std::vector<double> numeric_values_;
  std::unordered_map<std::string, std::size_t> index_;
};

class DiscreteDistribution;

/// Finite population described by positive integer frequencies.
class SimpleDistribution {
 public:
  SimpleDistribution(LabelSpace space, std::vector<std::uint64_t> frequencies);

  const LabelSpace& space() const { return space_; }
  const std::vector<std::uint64_t>& frequencies() const { return frequencies_; }
  std::uint64_t population_size() const { return population_size_; }
  std::size_t support_size() const { return space_.size(); }
  bool is_degenerate() const { return space_.size() == 1; }

  std::uint64_t frequency(std::string_view label) const;
  Rational proportion(std::size_t i) const;
  Rational proportion(std::string_view label) const;

  /// Exact probabilities with the population size kept as the rendering
  /// denominator.
  DiscreteDistribution to_discrete() const;

  /// Label-keyed comparison. Sequence order matters only when the space has
  /// an order.
  bool same_as(const SimpleDistribution& other) const;

 private:
  LabelSpace space_;
  std::vector<std::uint64_t> frequencies_;
  std::uint64_t population_size_ = 0;
};

/// Throws InvalidFrequency for entries < 1 and ShapeMismatch for a length
/// mismatch.
SimpleDistribution make_simple(LabelSpace space,
                               const std::vector<std::int64_t>& frequencies);

struct BagEntry {
  std::string label;
  std::uint64_t index = 0;

  bool operator==(const BagEntry&) const = default;
};

/// The multiset view of a simple distribution: N distinct (label, index)
/// pairs. Indices count occurrences within a label, starting at 1.
class Bag {
 public:
  Bag(LabelSpace space, std::vector<BagEntry> pairs);

  const LabelSpace& space() const { return space_; }
  const std::vector<BagEntry>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  /// Label index of each element, in pair order.
  std::vector<std::size_t> element_labels() const;

 private:
  LabelSpace space_;
  std::vector<BagEntry> pairs_;
};

Bag to_bag(const SimpleDistribution& dist);

/// Counts pre-images of the first-component projection.
SimpleDistribution reconstruct(const Bag& bag);

/// Probability assignment over a finite label space. Exact distributions
/// carry rationals that sum to exactly one; approximate ones carry doubles
/// that sum to one within 1e-12.
class DiscreteDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  static DiscreteDistribution exact(LabelSpace space, std::vector<Rational> probs,
                                    std::optional<BigInt> denominator = std::nullopt);
  static DiscreteDistribution approximate(LabelSpace space,
                                          std::vector<double> probs);

  const LabelSpace& space() const { return space_; }
  std::size_t size() const { return space_.size(); }
  bool is_exact() const { return !exact_.empty(); }

  const std::vector<double>& probs() const { return probs_; }
  const std::vector<Rational>& exact_probs() const { return exact_; }
  Prob prob(std::size_t i) const;
  /// Zero for labels outside the support.
  Prob prob_of(std::string_view label) const;

  /// Common denominator used when rendering exact probabilities, e.g. the
  /// population size or the number of equally weighted samples.
  const std::optional<BigInt>& denominator() const { return denominator_; }

  std::string render(const Rational& r) const;

 private:
  DiscreteDistribution(LabelSpace space, std::vector<double> probs,
                       std::vector<Rational> exact,
                       std::optional<BigInt> denominator);

  LabelSpace space_;
  std::vector<double> probs_;
  std::vector<Rational> exact_;
  std::optional<BigInt> denominator_;
};

/// Univariate distribution with a density on an open interval.
class ContinuousDistribution {
 public:
  using Function = std::function<double(double)>;

  /// Without a closed-form cdf, probabilities come from adaptive quadrature
  /// of the density.
  ContinuousDistribution(std::string name, double lower, double upper,
                         Function density, Function cdf = {},
                         Function survival = {});

  static ContinuousDistribution normal(double mean, double sd);
  static ContinuousDistribution exponential(double rate);
  static ContinuousDistribution uniform(double lower, double upper);

  const std::string& name() const { return name_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool has_closed_form_cdf() const { return static_cast<bool>(cdf_); }

  double density(double x) const;
  double cdf(double x) const;
  /// Mass at or above x; closed form when registered, else 1 - cdf.
  double survival(double x) const;

  /// Parameters the distribution was built from, for serialization.
  const std::vector<std::pair<std::string, double>>& params() const {
    return params_;
  }

 private:
  std::string name_;
  double lower_;
  double upper_;
  Function density_;
  Function cdf_;
  Function survival_;
  std::vector<std::pair<std::string, double>> params_;
};

/// Standard normal cdf through erfc; absolute error below 1e-15.
double normal_cdf(double z);

/// cdf(hi) - cdf(lo) clamped to [0, 1]. Infinite endpoints are allowed;
/// NaN endpoints or lo > hi raise InvalidInterval.
double continuous_prob(const ContinuousDistribution& dist, double lo, double hi);

/// Numerical integral of the density over the whole support.
double total_mass(const ContinuousDistribution& dist);

struct Rectangle {
  std::string label;
  double center = 0.0;
  double width = 0.0;
  double height = 0.0;
  Prob area;
};

struct RectangleGeometry {
  std::vector<Rectangle> rectangles;
};

/// Requires an ordered or numeric space only for the spacing rule; unordered
/// spaces are laid out in label order like ordered ones.
RectangleGeometry rectangle_geometry(const DiscreteDistribution& dist);
RectangleGeometry rectangle_geometry(const SimpleDistribution& dist);

/// center,width,height,area with 17 significant digits.
std::string to_csv(const RectangleGeometry& geometry);

}  // namespace fil
