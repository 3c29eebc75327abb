#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "fil/dist_core.hpp"

namespace fil {

/// Open parameter interval; either end may be infinite.
struct ParameterSpace {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double theta) const { return theta > lower && theta < upper; }
};

using ModelLaw = std::variant<DiscreteDistribution, ContinuousDistribution>;

/// An estimate t(y) computed from the family's sample statistic y. `exact`
/// is optional and used when the sampling distribution is exact.
struct Estimator {
  std::string name;
  std::function<double(double)> value;
  std::function<Rational(const Rational&)> exact;
};

/// Strictly monotone reparameterization with an evaluable inverse.
struct Transform {
  std::string name;
  std::function<double(double)> forward;
  std::function<double(double)> inverse;
  std::function<Rational(const Rational&)> exact_forward;
  std::function<Rational(const Rational&)> exact_inverse;
  /// d inverse / d v, when known in closed form.
  std::function<double(double)> inverse_slope;

  static Transform identity();
  static Transform reciprocal();
  static Transform linear(const Rational& scale, const Rational& shift);
  static Transform log();
  static Transform by_name(std::string_view name);
};

/// psi o t, with the exact path kept when both sides have one.
Estimator compose(const Transform& psi, const Estimator& t);

/// g(y, theta). `in_y` declares monotonicity in y for fixed theta, which
/// continuous families need to turn the level-set condition into a cdf call.
struct GeneralizedEstimator {
  enum class Monotone { Increasing, Decreasing, Unknown };

  std::string name;
  std::function<double(double y, double theta)> g;
  Monotone in_y = Monotone::Unknown;

  /// The estimator itself, ignoring theta.
  static GeneralizedEstimator from(const Estimator& t,
                                   Monotone in_y = Monotone::Unknown);
  /// g(y, theta) = y, the family's canonical statistic.
  static GeneralizedEstimator canonical();
};

/// Observed value of the family's sample statistic together with its
/// sample size.
struct Sample {
  double statistic = 0.0;
  unsigned n = 1;
};

/// One-parameter family. Sampling distributions are distributions of the
/// family's sufficient statistic for a sample of size n.
class ModelFamily {
 public:
  virtual ~ModelFamily() = default;

  virtual std::string name() const = 0;
  virtual std::string parameter_name() const = 0;
  /// What the sample statistic y is, e.g. "success count".
  virtual std::string statistic_name() const = 0;
  virtual ParameterSpace parameter_space() const = 0;

  /// Distribution of one observation.
  virtual ModelLaw model_at(double theta) const = 0;
  virtual ModelLaw sampling_dist_at(double theta, unsigned n) const = 0;
  /// Exact sampling distribution at a rational parameter, where the
  /// probabilities are rational functions of theta.
  virtual std::optional<DiscreteDistribution> exact_sampling_dist_at(
      const Rational& theta, unsigned n) const;

  /// log of the sampling pmf/pdf of y.
  virtual double log_likelihood(double y, double theta, unsigned n) const = 0;
  virtual std::optional<double> closed_form_fisher(double theta, unsigned n) const;

  /// Estimate of theta as a function of y (the maximum likelihood estimate
  /// for the shipped families).
  virtual Estimator natural_estimator(unsigned n) const = 0;

  /// Finite range scanned when locating confidence-region boundaries.
  virtual std::pair<double, double> scan_range(const Sample& y_obs) const;

  /// Throws ParameterOutOfRange unless theta is interior.
  void require_interior(double theta) const;
};

using FamilyPtr = std::shared_ptr<const ModelFamily>;

/// Bernoulli observations; y is the number of successes in n trials.
class BinomialFamily final : public ModelFamily {
 public:
  std::string name() const override { return "binomial"; }
  std::string parameter_name() const override { return "p"; }
  std::string statistic_name() const override { return "success count"; }
  ParameterSpace parameter_space() const override { return {0.0, 1.0}; }
  ModelLaw model_at(double theta) const override;
  ModelLaw sampling_dist_at(double theta, unsigned n) const override;
  std::optional<DiscreteDistribution> exact_sampling_dist_at(const Rational& theta,
                                                             unsigned n) const override;
  double log_likelihood(double y, double theta, unsigned n) const override;
  std::optional<double> closed_form_fisher(double theta, unsigned n) const override;
  Estimator natural_estimator(unsigned n) const override;
};

/// Poisson observations; y is the total count over n observations. The
/// sampling distribution is truncated to about 15 sd either side of the mean.
class PoissonFamily final : public ModelFamily {
 public:
  std::string name() const override { return "poisson"; }
  std::string parameter_name() const override { return "lambda"; }
  std::string statistic_name() const override { return "total count"; }
  ParameterSpace parameter_space() const override;
  ModelLaw model_at(double theta) const override;
  ModelLaw sampling_dist_at(double theta, unsigned n) const override;
  double log_likelihood(double y, double theta, unsigned n) const override;
  std::optional<double> closed_form_fisher(double theta, unsigned n) const override;
  Estimator natural_estimator(unsigned n) const override;
  std::pair<double, double> scan_range(const Sample& y_obs) const override;
};

/// Normal observations with known sd; y is the sample mean.
class NormalMeanFamily final : public ModelFamily {
 public:
  explicit NormalMeanFamily(double sigma);

  double sigma() const { return sigma_; }
  std::string name() const override { return "normal-mean"; }
  std::string parameter_name() const override { return "mu"; }
  std::string statistic_name() const override { return "sample mean"; }
  ParameterSpace parameter_space() const override;
  ModelLaw model_at(double theta) const override;
  ModelLaw sampling_dist_at(double theta, unsigned n) const override;
  double log_likelihood(double y, double theta, unsigned n) const override;
  std::optional<double> closed_form_fisher(double theta, unsigned n) const override;
  Estimator natural_estimator(unsigned n) const override;
  std::pair<double, double> scan_range(const Sample& y_obs) const override;

 private:
  double sigma_;
};

/// Population on two numeric labels low < high, parameterized by its mean
/// mu in (low, high); y is the sample sum of n independent draws.
class TwoPointFamily final : public ModelFamily {
 public:
  TwoPointFamily(Rational low, Rational high);

  std::string name() const override { return "two-point"; }
  std::string parameter_name() const override { return "mu"; }
  std::string statistic_name() const override { return "sample sum"; }
  ParameterSpace parameter_space() const override;
  ModelLaw model_at(double theta) const override;
  ModelLaw sampling_dist_at(double theta, unsigned n) const override;
  std::optional<DiscreteDistribution> exact_sampling_dist_at(const Rational& theta,
                                                             unsigned n) const override;
  double log_likelihood(double y, double theta, unsigned n) const override;
  std::optional<double> closed_form_fisher(double theta, unsigned n) const override;
  Estimator natural_estimator(unsigned n) const override;

 private:
  Rational low_;
  Rational high_;
};

/// The same family indexed by phi = psi(theta). Fisher information follows
/// the chain rule when the base family and transform allow it.
class ReparameterizedFamily final : public ModelFamily {
 public:
  ReparameterizedFamily(FamilyPtr base, Transform psi);

  std::string name() const override;
  std::string parameter_name() const override;
  std::string statistic_name() const override { return base_->statistic_name(); }
  ParameterSpace parameter_space() const override;
  ModelLaw model_at(double phi) const override;
  ModelLaw sampling_dist_at(double phi, unsigned n) const override;
  std::optional<DiscreteDistribution> exact_sampling_dist_at(const Rational& phi,
                                                             unsigned n) const override;
  double log_likelihood(double y, double phi, unsigned n) const override;
  std::optional<double> closed_form_fisher(double phi, unsigned n) const override;
  Estimator natural_estimator(unsigned n) const override;
  std::pair<double, double> scan_range(const Sample& y_obs) const override;

 private:
  FamilyPtr base_;
  Transform psi_;
};

/// Registered estimators of a family's statistic y for sample size n:
/// natural (the family's own), add-one ((y + 1) / (n + 2)), square ((y / n)^2)
/// and root (sqrt(y / n)).
std::vector<std::string> registered_estimators();
Estimator registered_estimator(std::string_view name, const ModelFamily& family, unsigned n);

/// Builds a family from a name and key=value arguments:
/// binomial, bernoulli, poisson, normal-mean (sigma=...), two-point (a=..., b=...).
FamilyPtr make_family(std::string_view name,
                      const std::vector<std::pair<std::string, std::string>>& args = {});

}  // namespace fil
