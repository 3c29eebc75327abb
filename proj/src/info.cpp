#include "fil/info.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fil/error.hpp"

namespace fil {
namespace {

constexpr double kTailCut = 1e-17;

// Finite interval holding all but ~1e-17 of the mass on each side.
std::pair<double, double> effective_support(const ContinuousDistribution& dist) {
  double lo = dist.lower();
  double hi = dist.upper();
  double step = 1.0;
  if (!std::isfinite(lo)) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    while (dist.cdf(lo) > kTailCut) {
      lo -= step;
      step *= 2.0;
    }
  }
  step = 1.0;
  if (!std::isfinite(hi)) {
    hi = lo + 1.0;
    while (dist.survival(hi) > kTailCut) {
      hi += step;
      step *= 2.0;
    }
  }
  return {lo, hi};
}

double integrate(const ContinuousDistribution& dist, const std::function<double(double)>& f) {
  const auto [lo, hi] = effective_support(dist);
  auto integrand = [&](double x) {
    const double d = dist.density(x);
    return d == 0.0 ? 0.0 : f(x) * d;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 20,
                                                                       1e-13);
}

// Step for central differences at theta, kept inside the parameter space.
double fd_step(const ModelFamily& family, double theta) {
  const ParameterSpace space = family.parameter_space();
  double h = 1e-5 * std::max(std::abs(theta), 1.0);
  if (std::isfinite(space.lower)) h = std::min(h, 0.5 * (theta - space.lower));
  if (std::isfinite(space.upper)) h = std::min(h, 0.5 * (space.upper - theta));
  return h;
}

struct Moments {
  Prob mean;
  Prob bias;
  Prob variance;
  Prob mse;
};

Moments exact_moments(const DiscreteDistribution& dist, const Estimator& t,
                      const Rational& theta) {
  const auto& values = dist.space().exact_values();
  const auto& probs = dist.exact_probs();
  std::vector<Rational> estimates;
  estimates.reserve(values.size());
  for (const auto& y : values) estimates.push_back(t.exact(y));
  Rational mean = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) mean += probs[i] * estimates[i];
  Rational variance = 0;
  Rational mse = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const Rational d = estimates[i] - mean;
    const Rational e = estimates[i] - theta;
    variance += probs[i] * d * d;
    mse += probs[i] * e * e;
  }
  return {Prob::from_exact(mean), Prob::from_exact(mean - theta), Prob::from_exact(variance),
          Prob::from_exact(mse)};
}

Moments double_moments(const ModelLaw& law, const Estimator& t, double theta) {
  const double mean = expectation(law, t.value);
  const double variance = expectation(law, [&](double y) {
    const double d = t.value(y) - mean;
    return d * d;
  });
  const double mse = expectation(law, [&](double y) {
    const double e = t.value(y) - theta;
    return e * e;
  });
  return {Prob::from_double(mean), Prob::from_double(mean - theta),
          Prob::from_double(variance), Prob::from_double(mse)};
}

bool is_zero(const Prob& value) {
  if (value.exact) return *value.exact == 0;
  return std::abs(value.value) <= 1e-12;
}

AssessmentRecord assess_point(const Estimator& t, const ModelFamily& family, unsigned n,
                              const Rational& exact_theta, const AssessOptions& options) {
  AssessmentRecord record;
  record.theta = to_double(exact_theta);
  record.exact_theta = exact_theta;
  family.require_interior(record.theta);

  std::optional<DiscreteDistribution> exact;
  if (t.exact) exact = family.exact_sampling_dist_at(exact_theta, n);
  Moments m;
  if (exact) {
    if (exact->size() > options.budget) {
      throw Error(ErrorCode::EnumerationBudgetExceeded,
                  "sampling distribution has more points than the enumeration budget");
    }
    m = exact_moments(*exact, t, exact_theta);
  } else {
    const ModelLaw law = family.sampling_dist_at(record.theta, n);
    if (const auto* d = std::get_if<DiscreteDistribution>(&law);
        d && d->size() > options.budget) {
      throw Error(ErrorCode::EnumerationBudgetExceeded,
                  "sampling distribution has more points than the enumeration budget");
    }
    m = double_moments(law, t, record.theta);
  }
  record.mean = m.mean;
  record.bias = m.bias;
  record.variance = m.variance;
  record.mse = m.mse;
  record.fisher_info = fisher_information(family, record.theta, n);
  try {
    record.lambda_info = lambda_info(GeneralizedEstimator::from(t), family, record.theta, n);
    record.efficiency = *record.lambda_info / record.fisher_info;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateEstimator) throw;
  }
  return record;
}

}  // namespace

double kl_divergence(const DiscreteDistribution& m1, const DiscreteDistribution& m2) {
  double total = 0.0;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    const double p = m1.probs()[i];
    if (p == 0.0) continue;
    const double q = m2.prob_of(m1.space().label(i)).value;
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    total += p * std::log(p / q);
  }
  return std::max(total, 0.0);
}

double entropy(const DiscreteDistribution& m) {
  double total = 0.0;
  for (double p : m.probs()) {
    if (p > 0.0) total -= p * std::log(p);
  }
  return std::max(total, 0.0);
}

double expectation(const ModelLaw& law, const std::function<double(double)>& f) {
  if (const auto* dist = std::get_if<DiscreteDistribution>(&law)) {
    const auto& values = dist->space().numeric_values();
    double total = 0.0;
    for (std::size_t i = 0; i < dist->size(); ++i) total += dist->probs()[i] * f(values[i]);
    return total;
  }
  return integrate(std::get<ContinuousDistribution>(law), f);
}

double fisher_information(const ModelFamily& family, double theta, unsigned n,
                          FisherMethod method) {
  family.require_interior(theta);
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  if (method != FisherMethod::Numeric) {
    if (auto closed = family.closed_form_fisher(theta, n)) return *closed;
    if (method == FisherMethod::ClosedForm) {
      throw Error(ErrorCode::InvalidArgument,
                  "family '" + family.name() + "' has no closed-form Fisher information");
    }
  }
  const double h = fd_step(family, theta);
  auto score_squared = [&](double y) {
    const double s = (family.log_likelihood(y, theta + h, n) -
                      family.log_likelihood(y, theta - h, n)) /
                     (2.0 * h);
    return s * s;
  };
  return expectation(family.sampling_dist_at(theta, n), score_squared);
}

double lambda_info(const GeneralizedEstimator& g, const ModelFamily& family, double theta,
                   unsigned n) {
  family.require_interior(theta);
  auto g_at = [&](double y) { return g.g(y, theta); };
  const ModelLaw law = family.sampling_dist_at(theta, n);
  const double mean = expectation(law, g_at);
  const double variance = expectation(law, [&](double y) {
    const double d = g_at(y) - mean;
    return d * d;
  });
  if (!(variance > 1e-24 * std::max(1.0, mean * mean))) {
    throw Error(ErrorCode::DegenerateEstimator,
                "estimator '" + g.name + "' has zero variance at " + decimal17(theta));
  }
  const double h = fd_step(family, theta);
  const double up = expectation(family.sampling_dist_at(theta + h, n), g_at);
  const double down = expectation(family.sampling_dist_at(theta - h, n), g_at);
  const double slope = (up - down) / (2.0 * h);
  return slope * slope / variance;
}

AssessmentReport assess(const Estimator& t, const ModelFamily& family, unsigned n,
                        const std::vector<Rational>& grid, const AssessOptions& options) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  AssessmentReport report;
  report.estimator = t.name;
  report.family = family.name();
  report.n = n;
  report.records.resize(grid.size());

  std::exception_ptr failure;
  const long count = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (long i = 0; i < count; ++i) {
    try {
      report.records[i] = assess_point(t, family, n, grid[i], options);
    } catch (...) {
#pragma omp critical(fil_assess_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

InvarianceReport invariance_probe(const Estimator& t, const Transform& psi, FamilyPtr family,
                                  unsigned n, const std::vector<Rational>& grid,
                                  const AssessOptions& options) {
  if (!family) throw Error(ErrorCode::InvalidArgument, "null family");
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "theta grid is empty");

  std::vector<double> thetas;
  for (const auto& r : grid) {
    thetas.push_back(to_double(r));
    family->require_interior(thetas.back());
  }
  std::sort(thetas.begin(), thetas.end());
  // Strict monotonicity over the grid's span, sampled densely.
  const double lo = thetas.front();
  const double hi = thetas.back();
  const double pad = fd_step(*family, lo) * 0.5;
  std::vector<double> probe = thetas;
  probe.push_back(lo - pad);
  probe.push_back(hi + fd_step(*family, hi) * 0.5);
  for (int k = 1; k < 256; ++k) probe.push_back(lo + (hi - lo) * k / 256.0);
  std::sort(probe.begin(), probe.end());
  probe.erase(std::unique(probe.begin(), probe.end()), probe.end());
  int direction = 0;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    const double v = psi.forward(probe[k]);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidTransform,
                  psi.name + " is not finite at " + decimal17(probe[k]));
    }
    if (k == 0) continue;
    const double prev = psi.forward(probe[k - 1]);
    const int step = v > prev ? 1 : (v < prev ? -1 : 0);
    if (step == 0 || (direction != 0 && step != direction)) {
      throw Error(ErrorCode::InvalidTransform,
                  psi.name + " is not strictly monotone on the grid range");
    }
    direction = step;
  }

  InvarianceReport report;
  report.transform = psi.name;
  report.original = assess(t, *family, n, grid, options);

  auto reparameterized = std::make_shared<ReparameterizedFamily>(family, psi);
  std::vector<Rational> phis;
  for (const auto& r : grid) {
    phis.push_back(psi.exact_forward ? psi.exact_forward(r)
                                     : rational_from_double(psi.forward(to_double(r))));
  }
  report.transformed = assess(compose(psi, t), *reparameterized, n, phis, options);

  const GeneralizedEstimator same_t = GeneralizedEstimator::from(t);
  for (const auto& phi : phis) {
    const double p = to_double(phi);
    try {
      report.reparameterized_efficiency.push_back(lambda_info(same_t, *reparameterized, p, n) /
                                                  fisher_information(*reparameterized, p, n));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateEstimator) throw;
      report.reparameterized_efficiency.push_back(std::nullopt);
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (is_zero(report.original.records[i].bias) &&
        !is_zero(report.transformed.records[i].bias)) {
      report.flagged.push_back(i);
    }
  }
  return report;
}

std::string to_csv(const AssessmentReport& report) {
  std::ostringstream out;
  out << "theta,bias,variance,mse,fisher_info,lambda_info,efficiency\n";
  for (const auto& r : report.records) {
    out << decimal17(r.theta) << ',' << decimal17(r.bias.value) << ','
        << decimal17(r.variance.value) << ',' << decimal17(r.mse.value) << ','
        << decimal17(r.fisher_info) << ','
        << (r.lambda_info ? decimal17(*r.lambda_info) : "") << ','
        << (r.efficiency ? decimal17(*r.efficiency) : "") << '\n';
  }
  return out.str();
}

}  // namespace fil
