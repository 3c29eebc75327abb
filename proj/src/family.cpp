#include "fil/family.hpp"

#include <algorithm>
#include <cmath>

#include "fil/error.hpp"

namespace fil {
namespace {

double log_choose(unsigned n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Integer value of y, or nullopt when y is not (numerically) an integer.
std::optional<long long> as_count(double y) {
  const double r = std::round(y);
  if (std::abs(y - r) > 1e-9) return std::nullopt;
  return static_cast<long long>(r);
}

Rational pow_rational(const Rational& base, unsigned exponent) {
  Rational result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

// Binomial(n, q) probabilities attached to the given support values,
// dropping entries that underflow to zero.
DiscreteDistribution binomial_over(const std::vector<Rational>& values, unsigned n,
                                   double q) {
  std::vector<Rational> kept_values;
  std::vector<double> probs;
  for (unsigned k = 0; k <= n; ++k) {
    const double p = std::exp(log_choose(n, k) + k * std::log(q) + (n - k) * std::log1p(-q));
    if (p > 0.0) {
      kept_values.push_back(values[k]);
      probs.push_back(p);
    }
  }
  return DiscreteDistribution::approximate(LabelSpace::numeric(std::move(kept_values)),
                                           std::move(probs));
}

DiscreteDistribution exact_binomial_over(const std::vector<Rational>& values, unsigned n,
                                         const Rational& q) {
  std::vector<Rational> probs;
  const Rational one_minus = 1 - q;
  for (unsigned k = 0; k <= n; ++k) {
    probs.push_back(Rational(binomial_coefficient(n, k)) * pow_rational(q, k) *
                    pow_rational(one_minus, n - k));
  }
  return DiscreteDistribution::exact(LabelSpace::numeric(values), std::move(probs));
}

std::vector<Rational> count_values(unsigned n) {
  std::vector<Rational> values;
  for (unsigned k = 0; k <= n; ++k) values.emplace_back(k);
  return values;
}

}  // namespace

// ---------------------------------------------------------------------------
// Transforms and estimators

Transform Transform::identity() {
  return {"identity", [](double u) { return u; }, [](double v) { return v; },
          [](const Rational& u) { return u; }, [](const Rational& v) { return v; },
          [](double) { return 1.0; }};
}

Transform Transform::reciprocal() {
  auto exact = [](const Rational& u) {
    if (u == 0) throw Error(ErrorCode::InvalidTransform, "reciprocal of zero");
    return Rational(1 / u);
  };
  return {"reciprocal", [](double u) { return 1.0 / u; }, [](double v) { return 1.0 / v; },
          exact, exact, [](double v) { return -1.0 / (v * v); }};
}

Transform Transform::linear(const Rational& scale, const Rational& shift) {
  if (scale == 0) throw Error(ErrorCode::InvalidTransform, "linear transform needs a nonzero scale");
  const double a = to_double(scale);
  const double b = to_double(shift);
  return {"linear(" + rational_string(scale) + "," + rational_string(shift) + ")",
          [a, b](double u) { return a * u + b; },
          [a, b](double v) { return (v - b) / a; },
          [scale, shift](const Rational& u) { return Rational(scale * u + shift); },
          [scale, shift](const Rational& v) { return Rational((v - shift) / scale); },
          [a](double) { return 1.0 / a; }};
}

Transform Transform::log() {
  return {"log", [](double u) { return std::log(u); }, [](double v) { return std::exp(v); },
          {}, {}, [](double v) { return std::exp(v); }};
}

Transform Transform::by_name(std::string_view name) {
  if (name == "identity") return identity();
  if (name == "reciprocal") return reciprocal();
  if (name == "log") return log();
  if (name.starts_with("linear:")) {
    const std::string_view args = name.substr(7);
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::InvalidTransform, "linear transform is written linear:a,b");
    }
    return linear(parse_rational(args.substr(0, comma)),
                  parse_rational(args.substr(comma + 1)));
  }
  throw Error(ErrorCode::InvalidTransform, "unknown transform '" + std::string(name) + "'");
}

Estimator compose(const Transform& psi, const Estimator& t) {
  Estimator out;
  out.name = psi.name + "(" + t.name + ")";
  out.value = [f = psi.forward, v = t.value](double y) { return f(v(y)); };
  if (psi.exact_forward && t.exact) {
    out.exact = [f = psi.exact_forward, e = t.exact](const Rational& y) { return f(e(y)); };
  }
  return out;
}

std::vector<std::string> registered_estimators() {
  return {"natural", "add-one", "square", "root"};
}

Estimator registered_estimator(std::string_view name, const ModelFamily& family, unsigned n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  if (name == "natural") return family.natural_estimator(n);
  if (name == "add-one") {
    return {"(y+1)/(n+2)", [n](double y) { return (y + 1) / (n + 2); },
            [n](const Rational& y) { return Rational((y + 1) / (n + 2)); }};
  }
  if (name == "square") {
    return {"(y/n)^2", [n](double y) { return (y / n) * (y / n); },
            [n](const Rational& y) { return Rational((y / n) * (y / n)); }};
  }
  if (name == "root") {
    return {"sqrt(y/n)", [n](double y) { return std::sqrt(std::max(y, 0.0) / n); }, {}};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown estimator '" + std::string(name) + "'");
}

GeneralizedEstimator GeneralizedEstimator::from(const Estimator& t, Monotone in_y) {
  return {t.name, [v = t.value](double y, double) { return v(y); }, in_y};
}

GeneralizedEstimator GeneralizedEstimator::canonical() {
  return {"y", [](double y, double) { return y; }, Monotone::Increasing};
}

// ---------------------------------------------------------------------------
// ModelFamily defaults

std::optional<DiscreteDistribution> ModelFamily::exact_sampling_dist_at(const Rational&,
                                                                        unsigned) const {
  return std::nullopt;
}

std::optional<double> ModelFamily::closed_form_fisher(double, unsigned) const {
  return std::nullopt;
}

std::pair<double, double> ModelFamily::scan_range(const Sample&) const {
  const ParameterSpace space = parameter_space();
  if (!std::isfinite(space.lower) || !std::isfinite(space.upper)) {
    throw Error(ErrorCode::InvalidArgument,
                name() + " has an unbounded parameter space; give a scan range");
  }
  return {space.lower, space.upper};
}

void ModelFamily::require_interior(double theta) const {
  if (!parameter_space().contains(theta)) {
    const ParameterSpace space = parameter_space();
    throw Error(ErrorCode::ParameterOutOfRange,
                parameter_name() + " = " + decimal17(theta) + " is outside (" +
                    decimal17(space.lower) + ", " + decimal17(space.upper) + ")");
  }
}

// ---------------------------------------------------------------------------
// Binomial

ModelLaw BinomialFamily::model_at(double theta) const {
  require_interior(theta);
  return DiscreteDistribution::approximate(LabelSpace::integers(0, 1),
                                           {1.0 - theta, theta});
}

ModelLaw BinomialFamily::sampling_dist_at(double theta, unsigned n) const {
  require_interior(theta);
  return binomial_over(count_values(n), n, theta);
}

std::optional<DiscreteDistribution> BinomialFamily::exact_sampling_dist_at(
    const Rational& theta, unsigned n) const {
  require_interior(to_double(theta));
  if (theta <= 0 || theta >= 1) {
    throw Error(ErrorCode::ParameterOutOfRange, "p must lie in (0, 1)");
  }
  return exact_binomial_over(count_values(n), n, theta);
}

double BinomialFamily::log_likelihood(double y, double theta, unsigned n) const {
  auto k = as_count(y);
  if (!k || *k < 0 || *k > static_cast<long long>(n)) {
    return -std::numeric_limits<double>::infinity();
  }
  return log_choose(n, *k) + *k * std::log(theta) + (n - *k) * std::log1p(-theta);
}

std::optional<double> BinomialFamily::closed_form_fisher(double theta, unsigned n) const {
  return n / (theta * (1.0 - theta));
}

Estimator BinomialFamily::natural_estimator(unsigned n) const {
  return {"y/n", [n](double y) { return y / n; },
          [n](const Rational& y) { return Rational(y / n); }};
}

// ---------------------------------------------------------------------------
// Poisson

ParameterSpace PoissonFamily::parameter_space() const {
  return {0.0, std::numeric_limits<double>::infinity()};
}

namespace {

DiscreteDistribution poisson_law(double mean) {
  const double spread = std::sqrt(mean);
  const double first = std::max(0.0, std::floor(mean - 15.0 * spread - 20.0));
  const double last = std::ceil(mean + 15.0 * spread + 50.0);
  std::vector<Rational> values;
  std::vector<double> probs;
  for (double y = first; y <= last; y += 1.0) {
    const double p = std::exp(y * std::log(mean) - mean - std::lgamma(y + 1.0));
    if (p > 0.0) {
      values.push_back(rational_from_double(y));
      probs.push_back(p);
    }
  }
  return DiscreteDistribution::approximate(LabelSpace::numeric(std::move(values)),
                                           std::move(probs));
}

}  // namespace

ModelLaw PoissonFamily::model_at(double theta) const {
  require_interior(theta);
  return poisson_law(theta);
}

ModelLaw PoissonFamily::sampling_dist_at(double theta, unsigned n) const {
  require_interior(theta);
  return poisson_law(n * theta);
}

double PoissonFamily::log_likelihood(double y, double theta, unsigned n) const {
  auto k = as_count(y);
  if (!k || *k < 0) return -std::numeric_limits<double>::infinity();
  const double mean = n * theta;
  return *k * std::log(mean) - mean - std::lgamma(*k + 1.0);
}

std::optional<double> PoissonFamily::closed_form_fisher(double theta, unsigned n) const {
  return n / theta;
}

Estimator PoissonFamily::natural_estimator(unsigned n) const {
  return {"y/n", [n](double y) { return y / n; },
          [n](const Rational& y) { return Rational(y / n); }};
}

std::pair<double, double> PoissonFamily::scan_range(const Sample& y_obs) const {
  const double y = std::max(0.0, y_obs.statistic);
  return {0.0, (y + 10.0 * std::sqrt(y + 1.0) + 10.0) / y_obs.n};
}

// ---------------------------------------------------------------------------
// Normal mean

NormalMeanFamily::NormalMeanFamily(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be positive and finite");
  }
}

ParameterSpace NormalMeanFamily::parameter_space() const { return {}; }

ModelLaw NormalMeanFamily::model_at(double theta) const {
  require_interior(theta);
  return ContinuousDistribution::normal(theta, sigma_);
}

ModelLaw NormalMeanFamily::sampling_dist_at(double theta, unsigned n) const {
  require_interior(theta);
  return ContinuousDistribution::normal(theta, sigma_ / std::sqrt(static_cast<double>(n)));
}

double NormalMeanFamily::log_likelihood(double y, double theta, unsigned n) const {
  const double sd = sigma_ / std::sqrt(static_cast<double>(n));
  const double z = (y - theta) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * M_PI);
}

std::optional<double> NormalMeanFamily::closed_form_fisher(double, unsigned n) const {
  return n / (sigma_ * sigma_);
}

Estimator NormalMeanFamily::natural_estimator(unsigned) const {
  return {"ybar", [](double y) { return y; }, [](const Rational& y) { return y; }};
}

std::pair<double, double> NormalMeanFamily::scan_range(const Sample& y_obs) const {
  const double sd = sigma_ / std::sqrt(static_cast<double>(y_obs.n));
  return {y_obs.statistic - 12.0 * sd, y_obs.statistic + 12.0 * sd};
}

// ---------------------------------------------------------------------------
// Two-point

TwoPointFamily::TwoPointFamily(Rational low, Rational high)
    : low_(std::move(low)), high_(std::move(high)) {
  if (!(low_ < high_)) {
    throw Error(ErrorCode::InvalidArgument, "two-point family needs low < high");
  }
}

ParameterSpace TwoPointFamily::parameter_space() const {
  return {to_double(low_), to_double(high_)};
}

ModelLaw TwoPointFamily::model_at(double theta) const {
  require_interior(theta);
  const double q = (theta - to_double(low_)) / to_double(high_ - low_);
  return DiscreteDistribution::approximate(LabelSpace::numeric({low_, high_}),
                                           {1.0 - q, q});
}

namespace {

std::vector<Rational> sum_values(const Rational& low, const Rational& high, unsigned n) {
  std::vector<Rational> values;
  for (unsigned k = 0; k <= n; ++k) values.push_back(low * (n - k) + high * k);
  return values;
}

}  // namespace

ModelLaw TwoPointFamily::sampling_dist_at(double theta, unsigned n) const {
  require_interior(theta);
  const double q = (theta - to_double(low_)) / to_double(high_ - low_);
  return binomial_over(sum_values(low_, high_, n), n, q);
}

std::optional<DiscreteDistribution> TwoPointFamily::exact_sampling_dist_at(
    const Rational& theta, unsigned n) const {
  if (theta <= low_ || theta >= high_) {
    throw Error(ErrorCode::ParameterOutOfRange,
                "mu = " + rational_string(theta) + " is outside (" +
                    rational_string(low_) + ", " + rational_string(high_) + ")");
  }
  const Rational q = (theta - low_) / (high_ - low_);
  return exact_binomial_over(sum_values(low_, high_, n), n, q);
}

double TwoPointFamily::log_likelihood(double y, double theta, unsigned n) const {
  const double a = to_double(low_);
  const double w = to_double(high_ - low_);
  auto k = as_count((y - n * a) / w);
  if (!k || *k < 0 || *k > static_cast<long long>(n)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double q = (theta - a) / w;
  return log_choose(n, *k) + *k * std::log(q) + (n - *k) * std::log1p(-q);
}

std::optional<double> TwoPointFamily::closed_form_fisher(double theta, unsigned n) const {
  return n / ((theta - to_double(low_)) * (to_double(high_) - theta));
}

Estimator TwoPointFamily::natural_estimator(unsigned n) const {
  return {"ybar", [n](double y) { return y / n; },
          [n](const Rational& y) { return Rational(y / n); }};
}

// ---------------------------------------------------------------------------
// Reparameterized

ReparameterizedFamily::ReparameterizedFamily(FamilyPtr base, Transform psi)
    : base_(std::move(base)), psi_(std::move(psi)) {
  if (!base_) throw Error(ErrorCode::InvalidArgument, "null base family");
}

std::string ReparameterizedFamily::name() const {
  return base_->name() + "[" + psi_.name + "]";
}

std::string ReparameterizedFamily::parameter_name() const {
  return psi_.name + "(" + base_->parameter_name() + ")";
}

ParameterSpace ReparameterizedFamily::parameter_space() const {
  const ParameterSpace base = base_->parameter_space();
  const double a = psi_.forward(base.lower);
  const double b = psi_.forward(base.upper);
  return {std::min(a, b), std::max(a, b)};
}

ModelLaw ReparameterizedFamily::model_at(double phi) const {
  require_interior(phi);
  return base_->model_at(psi_.inverse(phi));
}

ModelLaw ReparameterizedFamily::sampling_dist_at(double phi, unsigned n) const {
  require_interior(phi);
  return base_->sampling_dist_at(psi_.inverse(phi), n);
}

std::optional<DiscreteDistribution> ReparameterizedFamily::exact_sampling_dist_at(
    const Rational& phi, unsigned n) const {
  if (!psi_.exact_inverse) return std::nullopt;
  require_interior(to_double(phi));
  return base_->exact_sampling_dist_at(psi_.exact_inverse(phi), n);
}

double ReparameterizedFamily::log_likelihood(double y, double phi, unsigned n) const {
  return base_->log_likelihood(y, psi_.inverse(phi), n);
}

std::optional<double> ReparameterizedFamily::closed_form_fisher(double phi, unsigned n) const {
  if (!psi_.inverse_slope) return std::nullopt;
  const auto base = base_->closed_form_fisher(psi_.inverse(phi), n);
  if (!base) return std::nullopt;
  const double slope = psi_.inverse_slope(phi);
  return *base * slope * slope;
}

Estimator ReparameterizedFamily::natural_estimator(unsigned n) const {
  return compose(psi_, base_->natural_estimator(n));
}

std::pair<double, double> ReparameterizedFamily::scan_range(const Sample& y_obs) const {
  auto [lo, hi] = base_->scan_range(y_obs);
  const double inset = 1e-6 * (hi - lo);
  const double a = psi_.forward(lo + inset);
  const double b = psi_.forward(hi - inset);
  return {std::min(a, b), std::max(a, b)};
}

// ---------------------------------------------------------------------------

FamilyPtr make_family(std::string_view name,
                      const std::vector<std::pair<std::string, std::string>>& args) {
  auto arg = [&](std::string_view key) -> std::optional<std::string> {
    for (const auto& [k, v] : args) {
      if (k == key) return v;
    }
    return std::nullopt;
  };
  if (name == "binomial" || name == "bernoulli") return std::make_shared<BinomialFamily>();
  if (name == "poisson") return std::make_shared<PoissonFamily>();
  if (name == "normal-mean" || name == "normal") {
    const double sigma = arg("sigma") ? to_double(parse_rational(*arg("sigma"))) : 1.0;
    return std::make_shared<NormalMeanFamily>(sigma);
  }
  if (name == "two-point") {
    const Rational a = arg("a") ? parse_rational(*arg("a")) : Rational(1);
    const Rational b = arg("b") ? parse_rational(*arg("b")) : Rational(2);
    return std::make_shared<TwoPointFamily>(a, b);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family '" + std::string(name) + "'");
}

}  // namespace fil
