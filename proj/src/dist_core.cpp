#include "fil/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fil/error.hpp"

namespace fil {

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::Unordered: return "unordered";
    case Structure::Ordered: return "ordered";
    case Structure::Numeric: return "numeric";
  }
  return "unordered";
}

Structure parse_structure(std::string_view text) {
  if (text == "unordered") return Structure::Unordered;
  if (text == "ordered") return Structure::Ordered;
  if (text == "numeric") return Structure::Numeric;
  throw Error(ErrorCode::InvalidLabelSpace,
              "unknown structure '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// LabelSpace

LabelSpace::LabelSpace(std::vector<std::string> labels, Structure structure,
                       std::vector<Rational> values)
    : labels_(std::move(labels)), structure_(structure),
      exact_values_(std::move(values)) {
  if (labels_.empty()) {
    throw Error(ErrorCode::InvalidLabelSpace, "label space must not be empty");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw Error(ErrorCode::InvalidLabelSpace,
                  "duplicate label '" + labels_[i] + "'");
    }
  }
  if (structure_ == Structure::Numeric) {
    if (exact_values_.size() != labels_.size()) {
      throw Error(ErrorCode::ShapeMismatch,
                  "numeric_values must have one entry per label");
    }
    for (std::size_t i = 1; i < exact_values_.size(); ++i) {
      if (!(exact_values_[i - 1] < exact_values_[i])) {
        throw Error(ErrorCode::InvalidLabelSpace,
                    "numeric_values must be strictly increasing");
      }
    }
    numeric_values_.reserve(exact_values_.size());
    for (const auto& v : exact_values_) numeric_values_.push_back(to_double(v));
  } else if (!exact_values_.empty()) {
    throw Error(ErrorCode::InvalidLabelSpace,
                "numeric_values are only allowed for numeric spaces");
  }
}

LabelSpace LabelSpace::unordered(std::vector<std::string> labels) {
  return LabelSpace(std::move(labels), Structure::Unordered, {});
}

LabelSpace LabelSpace::ordered(std::vector<std::string> labels) {
  return LabelSpace(std::move(labels), Structure::Ordered, {});
}

LabelSpace LabelSpace::numeric(std::vector<Rational> values) {
  std::vector<std::string> labels;
  labels.reserve(values.size());
  for (const auto& v : values) labels.push_back(numeric_label(v));
  return LabelSpace(std::move(labels), Structure::Numeric, std::move(values));
}

LabelSpace LabelSpace::numeric(std::vector<std::string> labels,
                               std::vector<Rational> values) {
  return LabelSpace(std::move(labels), Structure::Numeric, std::move(values));
}

LabelSpace LabelSpace::integers(std::int64_t first, std::int64_t last) {
  std::vector<Rational> values;
  for (std::int64_t v = first; v <= last; ++v) values.emplace_back(v);
  return numeric(std::move(values));
}

std::optional<std::size_t> LabelSpace::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> LabelSpace::index_of_value(const Rational& value) const {
  if (!is_numeric()) return std::nullopt;
  auto it = std::lower_bound(exact_values_.begin(), exact_values_.end(), value);
  if (it == exact_values_.end() || *it != value) return std::nullopt;
  return static_cast<std::size_t>(it - exact_values_.begin());
}

double LabelSpace::coordinate(std::size_t i) const {
  switch (structure_) {
    case Structure::Numeric: return numeric_values_.at(i);
    case Structure::Ordered: return static_cast<double>(i);
    case Structure::Unordered: break;
  }
  throw Error(ErrorCode::OrderingRequired,
              "operation needs an ordered or numeric label space");
}

bool LabelSpace::operator==(const LabelSpace& other) const {
  return structure_ == other.structure_ && labels_ == other.labels_ &&
         exact_values_ == other.exact_values_;
}

// ---------------------------------------------------------------------------
// SimpleDistribution

SimpleDistribution::SimpleDistribution(LabelSpace space,
                                       std::vector<std::uint64_t> frequencies)
    : space_(std::move(space)), frequencies_(std::move(frequencies)) {
  if (frequencies_.size() != space_.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "expected " + std::to_string(space_.size()) + " frequencies, got " +
                    std::to_string(frequencies_.size()));
  }
  for (std::size_t i = 0; i < frequencies_.size(); ++i) {
    if (frequencies_[i] == 0) {
      throw Error(ErrorCode::InvalidFrequency,
                  "frequency of '" + space_.label(i) + "' must be positive");
    }
    if (population_size_ > std::numeric_limits<std::uint64_t>::max() - frequencies_[i]) {
      throw Error(ErrorCode::InvalidFrequency, "population size overflows");
    }
    population_size_ += frequencies_[i];
  }
}

SimpleDistribution make_simple(LabelSpace space,
                               const std::vector<std::int64_t>& frequencies) {
  if (frequencies.size() != space.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "expected " + std::to_string(space.size()) + " frequencies, got " +
                    std::to_string(frequencies.size()));
  }
  std::vector<std::uint64_t> counts;
  counts.reserve(frequencies.size());
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (frequencies[i] < 1) {
      throw Error(ErrorCode::InvalidFrequency,
                  "frequency of '" + space.label(i) + "' is " +
                      std::to_string(frequencies[i]) + "; must be >= 1");
    }
    counts.push_back(static_cast<std::uint64_t>(frequencies[i]));
  }
  return SimpleDistribution(std::move(space), std::move(counts));
}

std::uint64_t SimpleDistribution::frequency(std::string_view label) const {
  auto i = space_.index_of(label);
  return i ? frequencies_[*i] : 0;
}

Rational SimpleDistribution::proportion(std::size_t i) const {
  return Rational(BigInt(frequencies_.at(i)), BigInt(population_size_));
}

Rational SimpleDistribution::proportion(std::string_view label) const {
  return Rational(BigInt(frequency(label)), BigInt(population_size_));
}

DiscreteDistribution SimpleDistribution::to_discrete() const {
  std::vector<Rational> probs;
  probs.reserve(frequencies_.size());
  for (std::size_t i = 0; i < frequencies_.size(); ++i) probs.push_back(proportion(i));
  return DiscreteDistribution::exact(space_, std::move(probs), BigInt(population_size_));
}

bool SimpleDistribution::same_as(const SimpleDistribution& other) const {
  if (space_.structure() != other.space_.structure() ||
      space_.size() != other.space_.size()) {
    return false;
  }
  if (space_.has_order()) {
    return space_ == other.space_ && frequencies_ == other.frequencies_;
  }
  for (std::size_t i = 0; i < space_.size(); ++i) {
    auto j = other.space_.index_of(space_.label(i));
    if (!j || other.frequencies_[*j] != frequencies_[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Bag

Bag::Bag(LabelSpace space, std::vector<BagEntry> pairs)
    : space_(std::move(space)), pairs_(std::move(pairs)) {
  std::set<std::pair<std::string, std::uint64_t>> seen;
  for (const auto& p : pairs_) {
    if (!space_.index_of(p.label)) {
      throw Error(ErrorCode::InvalidLabelSpace,
                  "bag label '" + p.label + "' is not in the label space");
    }
    if (p.index < 1 || p.index > pairs_.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "bag index " + std::to_string(p.index) + " outside 1..N");
    }
    if (!seen.emplace(p.label, p.index).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate bag pair (" + p.label + ", " + std::to_string(p.index) + ")");
    }
  }
}

std::vector<std::size_t> Bag::element_labels() const {
  std::vector<std::size_t> out;
  out.reserve(pairs_.size());
  for (const auto& p : pairs_) out.push_back(*space_.index_of(p.label));
  return out;
}

Bag to_bag(const SimpleDistribution& dist) {
  std::vector<BagEntry> pairs;
  pairs.reserve(dist.population_size());
  for (std::size_t k = 0; k < dist.support_size(); ++k) {
    for (std::uint64_t j = 1; j <= dist.frequencies()[k]; ++j) {
      pairs.push_back({dist.space().label(k), j});
    }
  }
  return Bag(dist.space(), std::move(pairs));
}

SimpleDistribution reconstruct(const Bag& bag) {
  std::vector<std::uint64_t> counts(bag.space().size(), 0);
  for (std::size_t k : bag.element_labels()) ++counts[k];
  return SimpleDistribution(bag.space(), std::move(counts));
}

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(LabelSpace space, std::vector<double> probs,
                                           std::vector<Rational> exact,
                                           std::optional<BigInt> denominator)
    : space_(std::move(space)), probs_(std::move(probs)), exact_(std::move(exact)),
      denominator_(std::move(denominator)) {}

DiscreteDistribution DiscreteDistribution::exact(LabelSpace space,
                                                 std::vector<Rational> probs,
                                                 std::optional<BigInt> denominator) {
  if (probs.size() != space.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one probability per label is required");
  }
  Rational total = 0;
  std::vector<double> approx;
  approx.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0 || probs[i] > 1) {
      throw Error(ErrorCode::InvalidProbability,
                  "probability of '" + space.label(i) + "' must lie in (0, 1]");
    }
    total += probs[i];
    approx.push_back(to_double(probs[i]));
  }
  if (total != 1) {
    throw Error(ErrorCode::InvalidProbability,
                "exact probabilities sum to " + rational_string(total) + ", not 1");
  }
  return DiscreteDistribution(std::move(space), std::move(approx), std::move(probs),
                              std::move(denominator));
}

DiscreteDistribution DiscreteDistribution::approximate(LabelSpace space,
                                                       std::vector<double> probs) {
  if (probs.size() != space.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one probability per label is required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0 && probs[i] <= 1.0)) {
      throw Error(ErrorCode::InvalidProbability,
                  "probability of '" + space.label(i) + "' must lie in (0, 1]");
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::InvalidProbability,
                "probabilities sum to " + decimal17(total) + ", not 1");
  }
  return DiscreteDistribution(std::move(space), std::move(probs), {}, std::nullopt);
}

Prob DiscreteDistribution::prob(std::size_t i) const {
  if (is_exact()) return Prob::from_exact(exact_.at(i));
  return Prob::from_double(probs_.at(i));
}

Prob DiscreteDistribution::prob_of(std::string_view label) const {
  if (auto i = space_.index_of(label)) return prob(*i);
  if (is_exact()) return Prob::from_exact(Rational(0));
  return Prob::from_double(0.0);
}

std::string DiscreteDistribution::render(const Rational& r) const {
  if (denominator_) return rational_string_over(r, *denominator_);
  return rational_string(r);
}

// ---------------------------------------------------------------------------
// ContinuousDistribution

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

ContinuousDistribution::ContinuousDistribution(std::string name, double lower,
                                               double upper, Function density,
                                               Function cdf, Function survival)
    : name_(std::move(name)), lower_(lower), upper_(upper),
      density_(std::move(density)), cdf_(std::move(cdf)),
      survival_(std::move(survival)) {
  if (!(lower_ < upper_)) {
    throw Error(ErrorCode::InvalidInterval, "support must satisfy lower < upper");
  }
  if (!density_) {
    throw Error(ErrorCode::InvalidArgument, "continuous distribution needs a density");
  }
}

ContinuousDistribution ContinuousDistribution::normal(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(mean)) {
    throw Error(ErrorCode::InvalidArgument, "normal needs finite mean and sd > 0");
  }
  const double inf = std::numeric_limits<double>::infinity();
  ContinuousDistribution d(
      "normal", -inf, inf,
      [mean, sd](double x) {
        const double z = (x - mean) / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
      },
      [mean, sd](double x) { return normal_cdf((x - mean) / sd); },
      [mean, sd](double x) { return normal_cdf((mean - x) / sd); });
  d.params_ = {{"mean", mean}, {"sd", sd}};
  return d;
}

ContinuousDistribution ContinuousDistribution::exponential(double rate) {
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "exponential needs rate > 0");
  ContinuousDistribution d(
      "exponential", 0.0, std::numeric_limits<double>::infinity(),
      [rate](double x) { return x < 0.0 ? 0.0 : rate * std::exp(-rate * x); },
      [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); },
      [rate](double x) { return x <= 0.0 ? 1.0 : std::exp(-rate * x); });
  d.params_ = {{"rate", rate}};
  return d;
}

ContinuousDistribution ContinuousDistribution::uniform(double lower, double upper) {
  if (!(std::isfinite(lower) && std::isfinite(upper) && lower < upper)) {
    throw Error(ErrorCode::InvalidInterval, "uniform needs finite lower < upper");
  }
  const double width = upper - lower;
  ContinuousDistribution d(
      "uniform", lower, upper,
      [=](double x) { return (x < lower || x > upper) ? 0.0 : 1.0 / width; },
      [=](double x) { return std::clamp((x - lower) / width, 0.0, 1.0); });
  d.params_ = {{"lower", lower}, {"upper", upper}};
  return d;
}

double ContinuousDistribution::density(double x) const {
  if (x <= lower_ || x >= upper_) return 0.0;
  return density_(x);
}

namespace {

// Integral of `f` over (a, b) for possibly infinite endpoints.
double integrate(const std::function<double(double)>& f, double a, double b) {
  using namespace boost::math::quadrature;
  if (!(a < b)) return 0.0;
  const bool a_inf = std::isinf(a);
  const bool b_inf = std::isinf(b);
  if (a_inf && b_inf) {
    sinh_sinh<double> integrator;
    return integrator.integrate(f, 1e-13);
  }
  if (a_inf || b_inf) {
    exp_sinh<double> integrator;
    return integrator.integrate(f, a, b, 1e-13);
  }
  tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, 1e-13);
}

}  // namespace

double ContinuousDistribution::cdf(double x) const {
  if (std::isnan(x)) throw Error(ErrorCode::InvalidInterval, "cdf of NaN");
  if (x <= lower_) return 0.0;
  if (x >= upper_) return 1.0;
  if (cdf_) return std::clamp(cdf_(x), 0.0, 1.0);
  return std::clamp(integrate(density_, lower_, x), 0.0, 1.0);
}

double ContinuousDistribution::survival(double x) const {
  if (std::isnan(x)) throw Error(ErrorCode::InvalidInterval, "survival of NaN");
  if (x <= lower_) return 1.0;
  if (x >= upper_) return 0.0;
  if (survival_) return std::clamp(survival_(x), 0.0, 1.0);
  return std::clamp(1.0 - cdf(x), 0.0, 1.0);
}

double continuous_prob(const ContinuousDistribution& dist, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi)) {
    throw Error(ErrorCode::InvalidInterval, "interval endpoints must be numbers");
  }
  if (lo > hi) {
    throw Error(ErrorCode::InvalidInterval,
                "interval lower end " + decimal17(lo) + " exceeds upper end " +
                    decimal17(hi));
  }
  if (lo == hi) return 0.0;
  return std::clamp(dist.cdf(hi) - dist.cdf(lo), 0.0, 1.0);
}

double total_mass(const ContinuousDistribution& dist) {
  return integrate([&dist](double x) { return dist.density(x); }, dist.lower(),
                   dist.upper());
}

// ---------------------------------------------------------------------------
// Rectangles

RectangleGeometry rectangle_geometry(const DiscreteDistribution& dist) {
  const LabelSpace& space = dist.space();
  const std::size_t k = space.size();
  std::vector<double> centers(k);
  std::vector<double> widths(k, 1.0);
  if (space.is_numeric() && k > 1) {
    const auto& v = space.numeric_values();
    std::vector<double> edges(k + 1);
    for (std::size_t i = 1; i < k; ++i) edges[i] = 0.5 * (v[i - 1] + v[i]);
    edges[0] = v[0] - (edges[1] - v[0]);
    edges[k] = v[k - 1] + (v[k - 1] - edges[k - 1]);
    for (std::size_t i = 0; i < k; ++i) {
      centers[i] = v[i];
      widths[i] = edges[i + 1] - edges[i];
    }
  } else if (space.is_numeric()) {
    centers[0] = space.numeric_values()[0];
  } else {
    std::iota(centers.begin(), centers.end(), 1.0);
  }

  RectangleGeometry geometry;
  geometry.rectangles.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    Prob area = dist.prob(i);
    geometry.rectangles.push_back(
        {space.label(i), centers[i], widths[i], area.value / widths[i], area});
  }
  return geometry;
}

RectangleGeometry rectangle_geometry(const SimpleDistribution& dist) {
  return rectangle_geometry(dist.to_discrete());
}

std::string to_csv(const RectangleGeometry& geometry) {
  std::ostringstream out;
  out << "center,width,height,area\n";
  for (const auto& r : geometry.rectangles) {
    out << decimal17(r.center) << ',' << decimal17(r.width) << ','
        << decimal17(r.height) << ',' << decimal17(r.area.value) << '\n';
  }
  return out.str();
}

}  // namespace fil
