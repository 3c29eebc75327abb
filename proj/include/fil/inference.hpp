#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fil/dist_core.hpp"
#include "fil/family.hpp"
#include "fil/tail_area.hpp"

namespace fil {

/// A support point as seen by a test statistic. `coordinate` is the numeric
/// value, or the position for ordered spaces, or NaN for unordered ones.
struct Outcome {
  std::string_view label;
  double coordinate = 0.0;
  std::size_t position = 0;
};

/// Real-valued function on the sample space. Its level sets partition the
/// space and its values order them.
struct TestStatistic {
  std::string name;
  std::function<double(const Outcome&)> evaluate;

  /// The space's own ordering; needs an ordered or numeric space.
  static TestStatistic identity();
};

struct LevelSet {
  double t = 0.0;
  std::vector<std::string> labels;
  Prob probability;
};

/// Level sets of `statistic` over the support, sorted by t ascending.
std::vector<LevelSet> induced_partition(const DiscreteDistribution& dist,
                                        const TestStatistic& statistic);

/// m1(x)/m0(x) for a label, exact when both distributions are. Returns
/// nullopt for +infinity (x outside the support of m0 only) and throws
/// UndefinedRatio when x is outside both supports.
std::optional<Rational> exact_likelihood_ratio(const DiscreteDistribution& m0,
                                               const DiscreteDistribution& m1,
                                               std::string_view label);

/// Orders outcomes by m1(x)/m0(x), with +infinity where only m1 has mass.
TestStatistic likelihood_ratio_order(const DiscreteDistribution& m0,
                                     const DiscreteDistribution& m1);

/// Inclusive tails of the level set containing `observed` under `order`.
TailAreaReport level_set_tails(const DiscreteDistribution& dist, std::size_t observed,
                               const TestStatistic& order);

enum class Verdict { DeductiveRefutation, InductiveRefutation, NoContradiction };

std::string_view to_string(Verdict verdict);

struct ReductioResult {
  Verdict verdict = Verdict::NoContradiction;
  std::optional<Prob> tail_area;  // absent for deductive refutations
  double alpha = 0.0;
  Side side = Side::Right;
  std::string disjunction;
};

/// Refutes H_o outright when the observation is outside the null support;
/// otherwise refutes H_o together with "the observation is not rare" when the
/// selected tail (over level sets of `order`) is at most alpha.
ReductioResult reductio_test(const DiscreteDistribution& null_dist, const Rational& observed,
                             double alpha, Side side,
                             const TestStatistic& order = TestStatistic::identity());
ReductioResult reductio_test_label(const DiscreteDistribution& null_dist,
                                   std::string_view observed, double alpha, Side side,
                                   const TestStatistic& order = TestStatistic::identity());
ReductioResult reductio_test(const ContinuousDistribution& null_dist, double observed,
                             double alpha, Side side);

/// Tails of {y : g(y, theta) <= g(y_obs, theta)} and the >= counterpart
/// under the sampling distribution at theta.
TailAreaReport family_tail_area(const ModelFamily& family, double theta,
                                const Sample& y_obs, const GeneralizedEstimator& g);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct RegionGridPoint {
  double theta = 0.0;
  double tail = 0.0;
  bool inside = false;
};

struct RegionCrossing {
  double outside_theta = 0.0;
  double inside_theta = 0.0;
  double boundary = 0.0;
};

struct ConfidenceRegion {
  double alpha = 0.0;
  Side side = Side::TwoSided;
  std::vector<Interval> intervals;
  /// True when some scanned model was rejected.
  bool complement_nonempty = false;
  std::vector<RegionGridPoint> grid;
  std::vector<RegionCrossing> crossings;

  bool empty() const { return intervals.empty(); }
  bool contains(double theta) const;
};

struct RegionOptions {
  std::size_t grid_points = 512;
  double tolerance = 1e-10;
  Side side = Side::TwoSided;
  /// Defaults to the family's scan range.
  std::optional<std::pair<double, double>> scan;
  bool parallel = true;
};

/// {theta : TA(y_obs, theta) > alpha}, located by a grid scan with every
/// boundary crossing refined by bisection.
ConfidenceRegion confidence_region(const ModelFamily& family, const Sample& y_obs,
                                   double alpha, const GeneralizedEstimator& g,
                                   const RegionOptions& options = {});

struct ModelConsistency {
  double theta = 0.0;
  double g_obs = 0.0;
  TailAreaReport tails;
};

std::vector<ModelConsistency> order_models(const ModelFamily& family, const Sample& y_obs,
                                           const GeneralizedEstimator& g,
                                           const std::vector<double>& grid);

}  // namespace fil
