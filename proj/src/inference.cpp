#include "fil/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fil/error.hpp"
#include "fil/kernels.hpp"

namespace fil {
namespace {

Outcome outcome_at(const LabelSpace& space, std::size_t i) {
  const double coordinate =
      space.has_order() ? space.coordinate(i) : std::numeric_limits<double>::quiet_NaN();
  return {space.label(i), coordinate, i};
}

bool is_identity(const TestStatistic& order) { return order.name == "identity"; }

std::string render_tail(const DiscreteDistribution& dist, const Prob& tail) {
  if (tail.exact) return dist.render(*tail.exact);
  return decimal17(tail.value);
}

constexpr std::string_view kFisherDisjunction =
    "Either the hypothesis is not true, or an exceptionally rare outcome has occurred";

ReductioResult deductive(double alpha, Side side, const std::string& observed) {
  ReductioResult result;
  result.verdict = Verdict::DeductiveRefutation;
  result.alpha = alpha;
  result.side = side;
  result.disjunction = "observed " + observed +
                       " is outside the support of the hypothesized distribution; "
                       "the hypothesis is not true";
  return result;
}

ReductioResult inductive_or_none(const DiscreteDistribution& dist, std::size_t observed,
                                 double alpha, Side side, const TestStatistic& order) {
  const Prob tail = level_set_tails(dist, observed, order).select(side);
  ReductioResult result;
  result.alpha = alpha;
  result.side = side;
  result.tail_area = tail;
  if (at_most(tail, alpha)) {
    result.verdict = Verdict::InductiveRefutation;
    result.disjunction =
        std::string(kFisherDisjunction) + " (TA = " + render_tail(dist, tail) + ")";
  } else {
    result.verdict = Verdict::NoContradiction;
  }
  return result;
}

}  // namespace

TestStatistic TestStatistic::identity() {
  return {"identity", [](const Outcome& o) {
            if (std::isnan(o.coordinate)) {
              throw Error(ErrorCode::OrderingRequired,
                          "the identity ordering needs an ordered or numeric space");
            }
            return o.coordinate;
          }};
}

std::vector<LevelSet> induced_partition(const DiscreteDistribution& dist,
                                        const TestStatistic& statistic) {
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double t = statistic.evaluate(outcome_at(dist.space(), i));
    if (std::isnan(t)) {
      throw Error(ErrorCode::InvalidStatistic,
                  "statistic '" + statistic.name + "' is undefined at '" +
                      dist.space().label(i) + "'");
    }
    groups[t].push_back(i);
  }
  std::vector<LevelSet> out;
  out.reserve(groups.size());
  for (const auto& [t, members] : groups) {
    LevelSet level;
    level.t = t;
    if (dist.is_exact()) {
      Rational mass = 0;
      for (std::size_t i : members) mass += dist.exact_probs()[i];
      level.probability = Prob::from_exact(mass);
    } else {
      double mass = 0.0;
      for (std::size_t i : members) mass += dist.probs()[i];
      level.probability = Prob::from_double(mass);
    }
    for (std::size_t i : members) level.labels.push_back(dist.space().label(i));
    out.push_back(std::move(level));
  }
  return out;
}

std::optional<Rational> exact_likelihood_ratio(const DiscreteDistribution& m0,
                                               const DiscreteDistribution& m1,
                                               std::string_view label) {
  const Prob p0 = m0.prob_of(label);
  const Prob p1 = m1.prob_of(label);
  if (p0.value == 0.0 && p1.value == 0.0) {
    throw Error(ErrorCode::UndefinedRatio,
                "'" + std::string(label) + "' is outside both supports");
  }
  if (p0.value == 0.0) return std::nullopt;
  if (p0.exact && p1.exact) return Rational(*p1.exact / *p0.exact);
  return rational_from_double(p1.value / p0.value);
}

TestStatistic likelihood_ratio_order(const DiscreteDistribution& m0,
                                     const DiscreteDistribution& m1) {
  return {"likelihood_ratio", [m0, m1](const Outcome& o) {
            const Prob p0 = m0.prob_of(o.label);
            const Prob p1 = m1.prob_of(o.label);
            if (p0.value == 0.0 && p1.value == 0.0) {
              throw Error(ErrorCode::UndefinedRatio,
                          "'" + std::string(o.label) + "' is outside both supports");
            }
            if (p0.value == 0.0) return std::numeric_limits<double>::infinity();
            if (p0.exact && p1.exact) return to_double(*p1.exact / *p0.exact);
            return p1.value / p0.value;
          }};
}

TailAreaReport level_set_tails(const DiscreteDistribution& dist, std::size_t observed,
                               const TestStatistic& order) {
  const LabelSpace& space = dist.space();
  const double t_obs = order.evaluate(outcome_at(space, observed));
  std::vector<double> t(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) t[i] = order.evaluate(outcome_at(space, i));
  if (dist.is_exact()) {
    Rational left = 0;
    Rational right = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (t[i] <= t_obs) left += dist.exact_probs()[i];
      if (t[i] >= t_obs) right += dist.exact_probs()[i];
    }
    return make_tail_report(Prob::from_exact(left), Prob::from_exact(right));
  }
  double left = 0.0;
  double right = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (t[i] <= t_obs) left += dist.probs()[i];
    if (t[i] >= t_obs) right += dist.probs()[i];
  }
  return make_tail_report(Prob::from_double(std::min(left, 1.0)),
                          Prob::from_double(std::min(right, 1.0)));
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::DeductiveRefutation: return "DEDUCTIVE_REFUTATION";
    case Verdict::InductiveRefutation: return "INDUCTIVE_REFUTATION";
    case Verdict::NoContradiction: return "NO_CONTRADICTION";
  }
  return "NO_CONTRADICTION";
}

ReductioResult reductio_test(const DiscreteDistribution& null_dist, const Rational& observed,
                             double alpha, Side side, const TestStatistic& order) {
  require_level(alpha);
  const LabelSpace& space = null_dist.space();
  if (is_identity(order) && !space.has_order()) {
    throw Error(ErrorCode::OrderingRequired,
                "the null distribution has no ordering; supply a test statistic");
  }
  if (!space.is_numeric()) {
    throw Error(ErrorCode::InvalidArgument,
                "numeric observations need a numeric null distribution");
  }
  auto at = space.index_of_value(observed);
  if (!at) return deductive(alpha, side, numeric_label(observed));
  return inductive_or_none(null_dist, *at, alpha, side, order);
}

ReductioResult reductio_test_label(const DiscreteDistribution& null_dist,
                                   std::string_view observed, double alpha, Side side,
                                   const TestStatistic& order) {
  require_level(alpha);
  const LabelSpace& space = null_dist.space();
  if (is_identity(order) && !space.has_order()) {
    throw Error(ErrorCode::OrderingRequired,
                "the null distribution has no ordering; supply a test statistic");
  }
  auto at = space.index_of(observed);
  if (!at && space.is_numeric()) {
    return reductio_test(null_dist, parse_rational(observed), alpha, side, order);
  }
  if (!at) return deductive(alpha, side, std::string(observed));
  return inductive_or_none(null_dist, *at, alpha, side, order);
}

ReductioResult reductio_test(const ContinuousDistribution& null_dist, double observed,
                             double alpha, Side side) {
  require_level(alpha);
  if (std::isnan(observed)) throw Error(ErrorCode::InvalidArgument, "observed value is NaN");
  if (observed < null_dist.lower() || observed > null_dist.upper()) {
    return deductive(alpha, side, decimal17(observed));
  }
  const Prob tail = tail_report(null_dist, observed).select(side);
  ReductioResult result;
  result.alpha = alpha;
  result.side = side;
  result.tail_area = tail;
  if (at_most(tail, alpha)) {
    result.verdict = Verdict::InductiveRefutation;
    result.disjunction =
        std::string(kFisherDisjunction) + " (TA = " + decimal17(tail.value) + ")";
  } else {
    result.verdict = Verdict::NoContradiction;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Families

TailAreaReport family_tail_area(const ModelFamily& family, double theta,
                                const Sample& y_obs, const GeneralizedEstimator& g) {
  family.require_interior(theta);
  if (y_obs.n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  const ModelLaw law = family.sampling_dist_at(theta, y_obs.n);
  const double g_obs = g.g(y_obs.statistic, theta);

  if (const auto* dist = std::get_if<DiscreteDistribution>(&law)) {
    const auto& values = dist->space().numeric_values();
    double left = 0.0;
    double right = 0.0;
    for (std::size_t i = 0; i < dist->size(); ++i) {
      const double gy = g.g(values[i], theta);
      if (gy <= g_obs) left += dist->probs()[i];
      if (gy >= g_obs) right += dist->probs()[i];
    }
    return make_tail_report(Prob::from_double(std::min(left, 1.0)),
                            Prob::from_double(std::min(right, 1.0)));
  }

  const auto& dist = std::get<ContinuousDistribution>(law);
  switch (g.in_y) {
    case GeneralizedEstimator::Monotone::Increasing:
      return make_tail_report(Prob::from_double(dist.cdf(y_obs.statistic)),
                              Prob::from_double(dist.survival(y_obs.statistic)));
    case GeneralizedEstimator::Monotone::Decreasing:
      return make_tail_report(Prob::from_double(dist.survival(y_obs.statistic)),
                              Prob::from_double(dist.cdf(y_obs.statistic)));
    case GeneralizedEstimator::Monotone::Unknown:
      break;
  }
  throw Error(ErrorCode::InvalidArgument,
              "generalized estimator '" + g.name +
                  "' must be declared monotone in y for a continuous family");
}

bool ConfidenceRegion::contains(double theta) const {
  return std::any_of(intervals.begin(), intervals.end(), [theta](const Interval& iv) {
    return theta >= iv.lower && theta <= iv.upper;
  });
}

ConfidenceRegion confidence_region(const ModelFamily& family, const Sample& y_obs,
                                   double alpha, const GeneralizedEstimator& g,
                                   const RegionOptions& options) {
  require_level(alpha);
  if (options.grid_points < 2) {
    throw Error(ErrorCode::InvalidArgument, "the region scan needs at least 2 grid points");
  }
  const ParameterSpace space = family.parameter_space();
  auto [lo, hi] = options.scan ? *options.scan : family.scan_range(y_obs);
  lo = std::max(lo, space.lower);
  hi = std::min(hi, space.upper);
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::InvalidArgument, "scan range must be a finite interval in the parameter space");
  }

  if (!std::isfinite(family.log_likelihood(y_obs.statistic, 0.5 * (lo + hi), y_obs.n))) {
    throw Error(ErrorCode::InvalidArgument,
                "observed " + family.statistic_name() + " " + decimal17(y_obs.statistic) +
                    " is impossible under every model of the family");
  }

  auto tail = [&](double theta) {
    return family_tail_area(family, theta, y_obs, g).select(options.side).value;
  };
  auto inside = [&](double theta) { return tail(theta) > alpha; };

  const std::size_t count = options.grid_points;
  const double step = (hi - lo) / static_cast<double>(count);
  std::vector<double> thetas(count);
  for (std::size_t i = 0; i < count; ++i) thetas[i] = lo + (i + 0.5) * step;
  const std::vector<double> tails = options.parallel
                                        ? kernels::omp::evaluate_grid(thetas, tail)
                                        : kernels::serial::evaluate_grid(thetas, tail);

  ConfidenceRegion region;
  region.alpha = alpha;
  region.side = options.side;
  region.grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    region.grid.push_back({thetas[i], tails[i], tails[i] > alpha});
    region.complement_nonempty = region.complement_nonempty || !(tails[i] > alpha);
  }

  auto refine = [&](double out, double in) {
    for (int iter = 0; iter < 400 && std::abs(in - out) > options.tolerance; ++iter) {
      const double mid = 0.5 * (in + out);
      if (inside(mid)) {
        in = mid;
      } else {
        out = mid;
      }
    }
    return 0.5 * (in + out);
  };
  // Extends a run that reaches the end of the grid up to the scan edge.
  auto edge = [&](double edge_theta, double toward, double in_theta) {
    double probe = edge_theta;
    if (!space.contains(probe)) {
      probe = edge_theta + (toward - edge_theta) * 1e-9;
    }
    if (inside(probe)) return edge_theta;
    const double boundary = refine(probe, in_theta);
    region.crossings.push_back({probe, in_theta, boundary});
    return boundary;
  };

  for (std::size_t i = 0; i < count;) {
    if (!region.grid[i].inside) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < count && region.grid[j + 1].inside) ++j;
    Interval interval;
    if (i == 0) {
      interval.lower = edge(lo, hi, thetas[0]);
    } else {
      interval.lower = refine(thetas[i - 1], thetas[i]);
      region.crossings.push_back({thetas[i - 1], thetas[i], interval.lower});
    }
    if (j == count - 1) {
      interval.upper = edge(hi, lo, thetas[j]);
    } else {
      interval.upper = refine(thetas[j + 1], thetas[j]);
      region.crossings.push_back({thetas[j + 1], thetas[j], interval.upper});
    }
    region.intervals.push_back(interval);
    i = j + 1;
  }
  return region;
}

std::vector<ModelConsistency> order_models(const ModelFamily& family, const Sample& y_obs,
                                           const GeneralizedEstimator& g,
                                           const std::vector<double>& grid) {
  for (double theta : grid) family.require_interior(theta);
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  std::vector<ModelConsistency> out;
  out.reserve(sorted.size());
  for (double theta : sorted) {
    out.push_back({theta, g.g(y_obs.statistic, theta),
                   family_tail_area(family, theta, y_obs, g)});
  }
  return out;
}

}  // namespace fil
