#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fil/dist_core.hpp"
#include "fil/family.hpp"

namespace fil {

/// Sum of m1 log(m1/m2) over the support of m1 in nats, matched by label.
/// +infinity when some label of m1 has no mass under m2.
double kl_divergence(const DiscreteDistribution& m1, const DiscreteDistribution& m2);

/// -sum m log m in nats; zero-mass labels contribute nothing.
double entropy(const DiscreteDistribution& m);

enum class FisherMethod { Auto, ClosedForm, Numeric };

/// Expected squared score of the sampling distribution at theta. Numeric
/// evaluation uses central differences of the log likelihood with step
/// 1e-5 * max(|theta|, 1), shrunk near the parameter boundary.
double fisher_information(const ModelFamily& family, double theta, unsigned n,
                          FisherMethod method = FisherMethod::Auto);

/// Expectation of f(y) under a sampling law.
double expectation(const ModelLaw& law, const std::function<double(double)>& f);

/// (d/dtheta' E_theta'[g(Y, theta)] at theta' = theta)^2 / Var_theta g(Y, theta).
/// The derivative moves only the sampling distribution. Throws
/// DegenerateEstimator when the variance vanishes.
double lambda_info(const GeneralizedEstimator& g, const ModelFamily& family, double theta,
                   unsigned n);

struct AssessmentRecord {
  double theta = 0.0;
  std::optional<Rational> exact_theta;
  Prob mean;  // E[t]; Prob is reused as a value with an optional exact form
  Prob bias;
  Prob variance;
  Prob mse;
  double fisher_info = 0.0;
  std::optional<double> lambda_info;  // absent when t is constant
  std::optional<double> efficiency;
};

struct AssessmentReport {
  std::string estimator;
  std::string family;
  unsigned n = 0;
  std::vector<AssessmentRecord> records;
};

struct AssessOptions {
  std::uint64_t budget = 100'000'000;
  bool parallel = true;
};

/// Bias, variance and mse of t at every grid point, exact when the family
/// has an exact sampling distribution there and t has an exact form.
AssessmentReport assess(const Estimator& t, const ModelFamily& family, unsigned n,
                        const std::vector<Rational>& grid, const AssessOptions& options = {});

struct InvarianceReport {
  std::string transform;
  AssessmentReport original;
  /// psi o t as an estimator of psi(theta), at psi of each grid point.
  AssessmentReport transformed;
  /// Efficiency of t itself under the psi parameterization.
  std::vector<std::optional<double>> reparameterized_efficiency;
  /// Grid indices where t is unbiased but psi o t is not.
  std::vector<std::size_t> flagged;
};

InvarianceReport invariance_probe(const Estimator& t, const Transform& psi, FamilyPtr family,
                                  unsigned n, const std::vector<Rational>& grid,
                                  const AssessOptions& options = {});

/// theta,bias,variance,mse,fisher_info,lambda_info,efficiency
std::string to_csv(const AssessmentReport& report);

}  // namespace fil
