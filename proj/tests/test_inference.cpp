#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/distributions/binomial.hpp>

#include "fil/error.hpp"
#include "fil/inference.hpp"
#include "fil/sampling.hpp"
#include "oracles.hpp"

using namespace fil;

namespace {

DiscreteDistribution lottery(int faces) {
  const auto die = DiscreteDistribution::exact(LabelSpace::integers(0, faces - 1),
                                                std::vector<Rational>(faces, Rational(1, faces)),
                                                BigInt(faces));
  return iid_sum_distribution(die, 4).dist;
}

constexpr double kZ975 = 1.959963984540054;

// Normal(3 sin(theta), 1) observations; y_obs = 0 is consistent with
// several separated stretches of theta.
class WavyFamily final : public ModelFamily {
 public:
  std::string name() const override { return "wavy"; }
  std::string parameter_name() const override { return "theta"; }
  std::string statistic_name() const override { return "y"; }
  ParameterSpace parameter_space() const override { return {0.0, 10.0}; }
  ModelLaw model_at(double theta) const override { return sampling_dist_at(theta, 1); }
  ModelLaw sampling_dist_at(double theta, unsigned) const override {
    return ContinuousDistribution::normal(3.0 * std::sin(theta), 1.0);
  }
  double log_likelihood(double y, double theta, unsigned) const override {
    const double z = y - 3.0 * std::sin(theta);
    return -0.5 * z * z;
  }
  Estimator natural_estimator(unsigned) const override {
    return {"y", [](double y) { return y; }, {}};
  }
};

}  // namespace

TEST(Partition, IdentityOnLotterySums) {
  const auto parts = induced_partition(lottery(8), TestStatistic::identity());
  ASSERT_EQ(parts.size(), 29u);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    EXPECT_EQ(parts[i].t, static_cast<double>(i));
    EXPECT_EQ(parts[i].labels.size(), 1u);
  }
}

TEST(Partition, SumOverTupleSpace) {
  std::vector<std::string> labels;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c)
        for (int d = 0; d < 8; ++d) labels.push_back({char('0' + a), char('0' + b), char('0' + c), char('0' + d)});
  const auto tuples = DiscreteDistribution::exact(LabelSpace::unordered(labels),
                                                  std::vector<Rational>(4096, Rational(1, 4096)));
  const TestStatistic sum{"sum", [](const Outcome& o) {
                            double s = 0;
                            for (char ch : o.label) s += ch - '0';
                            return s;
                          }};
  const auto parts = induced_partition(tuples, sum);
  ASSERT_EQ(parts.size(), 29u);
  const auto sums = lottery(8);
  std::size_t total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    total += parts[i].labels.size();
    EXPECT_EQ(*parts[i].probability.exact, sums.exact_probs()[i]);
  }
  EXPECT_EQ(total, 4096u);
}

TEST(Partition, ConstantStatistic) {
  const auto parts = induced_partition(lottery(8), {"zero", [](const Outcome&) { return 0.0; }});
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(*parts[0].probability.exact, 1);
}

TEST(LikelihoodRatio, LotteryBOverA) {
  const auto a = lottery(8);
  const auto b = lottery(10);
  for (int s = 0; s <= 7; ++s) {
    EXPECT_EQ(*exact_likelihood_ratio(a, b, std::to_string(s)), Rational(4096, 10000));
  }
  for (int s = 8; s < 28; ++s) {
    EXPECT_LT(*exact_likelihood_ratio(a, b, std::to_string(s)),
              *exact_likelihood_ratio(a, b, std::to_string(s + 1)));
  }
  EXPECT_FALSE(exact_likelihood_ratio(a, b, "29").has_value());
  const auto order = likelihood_ratio_order(a, b);
  EXPECT_TRUE(std::isinf(order.evaluate({"29", 29.0, 29})));
  try {
    exact_likelihood_ratio(a, b, "40");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedRatio);
  }
}

TEST(LikelihoodRatio, StarsAndBarsConstant) {
  // For s <= 7 both lotteries count C(s+3, 3) compositions of s.
  const auto a = lottery(8);
  const auto b = lottery(10);
  for (int s = 0; s <= 7; ++s) {
    const Rational count(binomial_coefficient(s + 3, 3));
    EXPECT_EQ(a.exact_probs()[s], count / 4096);
    EXPECT_EQ(b.exact_probs()[s], count / 10000);
  }
}

TEST(Reductio, LotteryVerdicts) {
  const auto a = lottery(8);
  const auto r29 = reductio_test(a, Rational(29), 0.001, Side::Right);
  EXPECT_EQ(r29.verdict, Verdict::DeductiveRefutation);
  EXPECT_FALSE(r29.tail_area.has_value());

  const auto r28 = reductio_test(a, Rational(28), 0.001, Side::Right);
  EXPECT_EQ(r28.verdict, Verdict::InductiveRefutation);
  EXPECT_EQ(*r28.tail_area->exact, Rational(1, 4096));
  EXPECT_EQ(r28.disjunction,
            "Either the hypothesis is not true, or an exceptionally rare outcome has occurred "
            "(TA = 1/4096)");

  const auto r27 = reductio_test(a, Rational(27), 0.001, Side::Right);
  EXPECT_EQ(r27.verdict, Verdict::NoContradiction);
  EXPECT_EQ(*r27.tail_area->exact, Rational(5, 4096));

  const auto r14 = reductio_test(a, Rational(14), 0.05, Side::Right);
  EXPECT_EQ(r14.verdict, Verdict::NoContradiction);
  EXPECT_GT(r14.tail_area->value, 0.5);
}

TEST(Reductio, NonSupportPointBetweenValues) {
  EXPECT_EQ(reductio_test(lottery(8), Rational(27, 2), 0.05, Side::Right).verdict,
            Verdict::DeductiveRefutation);
}

TEST(Reductio, UnorderedNeedsStatistic) {
  const auto d = make_simple(LabelSpace::unordered({"x", "y"}), {1, 3}).to_discrete();
  try {
    reductio_test_label(d, "x", 0.05, Side::Right);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderingRequired);
  }
  const TestStatistic rank{"rank", [](const Outcome& o) { return o.label == "x" ? 1.0 : 0.0; }};
  const auto r = reductio_test_label(d, "x", 0.3, Side::Right, rank);
  EXPECT_EQ(r.verdict, Verdict::InductiveRefutation);
  EXPECT_EQ(*r.tail_area->exact, Rational(1, 4));
}

TEST(Reductio, TiedLevelSetMatchesPartitionTail) {
  const auto a = lottery(8);
  const TestStatistic distance{"distance", [](const Outcome& o) { return std::abs(o.coordinate - 14.0); }};
  const auto parts = induced_partition(a, distance);
  std::vector<Rational> values;
  std::vector<Rational> probs;
  for (const auto& level : parts) {
    values.push_back(rational_from_double(level.t));
    probs.push_back(*level.probability.exact);
  }
  const auto collapsed = DiscreteDistribution::exact(LabelSpace::numeric(values), probs);
  for (int s = 0; s <= 28; ++s) {
    for (double alpha : {0.001, 0.01, 0.05, 0.2}) {
      const auto r = reductio_test(a, Rational(s), alpha, Side::Right, distance);
      const auto tails = tail_report(collapsed, Rational(std::abs(s - 14)));
      EXPECT_EQ(*r.tail_area->exact, *tails.right.exact);
      EXPECT_EQ(r.verdict == Verdict::InductiveRefutation, at_most(tails.right, alpha));
    }
  }
}

TEST(Reductio, Continuous) {
  const auto z = ContinuousDistribution::normal(0.0, 1.0);
  EXPECT_EQ(reductio_test(z, 2.5, 0.05, Side::TwoSided).verdict, Verdict::InductiveRefutation);
  EXPECT_EQ(reductio_test(z, 1.0, 0.05, Side::TwoSided).verdict, Verdict::NoContradiction);
  const auto u = ContinuousDistribution::uniform(0.0, 1.0);
  EXPECT_EQ(reductio_test(u, 1.5, 0.05, Side::Right).verdict, Verdict::DeductiveRefutation);
}

TEST(FamilyTail, BinomialAtPointThree) {
  BinomialFamily binomial;
  const auto r = family_tail_area(binomial, 0.3, {3.0, 10}, GeneralizedEstimator::canonical());
  const auto pmf = oracle::binomial_pmf(10, 0.3);
  double left = 0;
  double right = 0;
  for (int k = 0; k <= 10; ++k) {
    if (k <= 3) left += pmf[k];
    if (k >= 3) right += pmf[k];
  }
  EXPECT_NEAR(r.left.value, left, 1e-14);
  EXPECT_NEAR(r.right.value, right, 1e-14);
  EXPECT_NEAR(r.left.value, 0.6496, 5e-5);
  EXPECT_NEAR(r.right.value, 0.6172, 5e-5);
}

TEST(FamilyTail, MaximumAtomAndNormal) {
  BinomialFamily binomial;
  const auto top = family_tail_area(binomial, 0.8, {10.0, 10}, GeneralizedEstimator::canonical());
  EXPECT_NEAR(top.right.value, std::pow(0.8, 10), 1e-15);
  NormalMeanFamily normal(2.0);
  const auto r = family_tail_area(normal, 1.0, {2.0, 4}, GeneralizedEstimator::canonical());
  EXPECT_NEAR(r.right.value, 1.0 - normal_cdf(1.0), 1e-15);
  EXPECT_THROW(family_tail_area(binomial, 1.2, {3.0, 10}, GeneralizedEstimator::canonical()), Error);
}

TEST(Region, BinomialMatchesClopperPearson) {
  BinomialFamily binomial;
  using boost::math::binomial_distribution;
  for (unsigned y : {1u, 3u, 5u, 9u}) {
    for (double alpha : {0.1, 0.05, 0.01}) {
      const auto region =
          confidence_region(binomial, {static_cast<double>(y), 10}, alpha, GeneralizedEstimator::canonical());
      ASSERT_EQ(region.intervals.size(), 1u);
      const double lo = binomial_distribution<>::find_lower_bound_on_p(10, y, alpha / 2);
      const double hi = binomial_distribution<>::find_upper_bound_on_p(10, y, alpha / 2);
      EXPECT_NEAR(region.intervals[0].lower, lo, 1e-8) << y << ' ' << alpha;
      EXPECT_NEAR(region.intervals[0].upper, hi, 1e-8) << y << ' ' << alpha;
    }
  }
}

TEST(Region, BinomialThreeOfTen) {
  BinomialFamily binomial;
  const auto region = confidence_region(binomial, {3.0, 10}, 0.05, GeneralizedEstimator::canonical());
  ASSERT_EQ(region.intervals.size(), 1u);
  EXPECT_NEAR(region.intervals[0].lower, 0.06674, 5e-6);
  EXPECT_NEAR(region.intervals[0].upper, 0.65245, 5e-6);
  EXPECT_TRUE(region.complement_nonempty);
  EXPECT_EQ(region.grid.size(), 512u);
}

TEST(Region, ZeroSuccessesReachesTheBoundary) {
  BinomialFamily binomial;
  const auto region = confidence_region(binomial, {0.0, 10}, 0.05, GeneralizedEstimator::canonical());
  ASSERT_EQ(region.intervals.size(), 1u);
  EXPECT_EQ(region.intervals[0].lower, 0.0);
  EXPECT_NEAR(region.intervals[0].upper,
              boost::math::binomial_distribution<>::find_upper_bound_on_p(10, 0, 0.025), 1e-8);
}

TEST(Region, NormalMean) {
  NormalMeanFamily normal(1.0);
  const auto region = confidence_region(normal, {0.5, 4}, 0.05, GeneralizedEstimator::canonical());
  ASSERT_EQ(region.intervals.size(), 1u);
  EXPECT_NEAR(region.intervals[0].lower, 0.5 - kZ975 * 0.5, 1e-9);
  EXPECT_NEAR(region.intervals[0].upper, 0.5 + kZ975 * 0.5, 1e-9);
  EXPECT_NEAR(region.intervals[0].lower, -0.479982, 1e-6);
}

TEST(Region, DisjointIntervals) {
  WavyFamily wavy;
  const auto region = confidence_region(wavy, {0.0, 1}, 0.05, GeneralizedEstimator::canonical());
  // 3 |sin(theta)| < z holds near 0, pi, 2 pi and 3 pi.
  const double c = std::asin(kZ975 / 3.0);
  const std::vector<std::pair<double, double>> expected{
      {0.0, c}, {M_PI - c, M_PI + c}, {2 * M_PI - c, 2 * M_PI + c}, {3 * M_PI - c, std::min(10.0, 3 * M_PI + c)}};
  ASSERT_EQ(region.intervals.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(region.intervals[i].lower, expected[i].first, 1e-8);
    EXPECT_NEAR(region.intervals[i].upper, expected[i].second, 1e-8);
  }
}

TEST(Region, EmptyWhenNoScannedModelSurvives) {
  NormalMeanFamily normal(1.0);
  RegionOptions options;
  options.scan = std::make_pair(5.0, 6.0);
  const auto region = confidence_region(normal, {0.0, 1}, 0.05, GeneralizedEstimator::canonical(), options);
  EXPECT_TRUE(region.empty());
  EXPECT_TRUE(region.complement_nonempty);
}

TEST(Region, ShrinksAsAlphaGrows) {
  BinomialFamily binomial;
  const auto wide = confidence_region(binomial, {4.0, 10}, 0.01, GeneralizedEstimator::canonical());
  const auto narrow = confidence_region(binomial, {4.0, 10}, 0.5, GeneralizedEstimator::canonical());
  EXPECT_LT(wide.intervals[0].lower, narrow.intervals[0].lower);
  EXPECT_GT(wide.intervals[0].upper, narrow.intervals[0].upper);
}

TEST(Region, SerialAndParallelScansAgree) {
  PoissonFamily poisson;
  RegionOptions serial;
  serial.parallel = false;
  const auto a = confidence_region(poisson, {7.0, 2}, 0.05, GeneralizedEstimator::canonical(), serial);
  const auto b = confidence_region(poisson, {7.0, 2}, 0.05, GeneralizedEstimator::canonical());
  ASSERT_EQ(a.intervals.size(), b.intervals.size());
  EXPECT_EQ(a.intervals[0].lower, b.intervals[0].lower);
  EXPECT_EQ(a.intervals[0].upper, b.intervals[0].upper);
}

TEST(Region, ReciprocalReparameterization) {
  auto poisson = std::make_shared<PoissonFamily>();
  ReparameterizedFamily inverse(poisson, Transform::reciprocal());
  const Sample y{4.0, 1};
  const auto theta_region = confidence_region(*poisson, y, 0.05, GeneralizedEstimator::canonical());
  RegionOptions options;
  options.scan = std::make_pair(0.01, 10.0);
  const auto phi_region = confidence_region(inverse, y, 0.05, GeneralizedEstimator::canonical(), options);
  ASSERT_EQ(theta_region.intervals.size(), 1u);
  ASSERT_EQ(phi_region.intervals.size(), 1u);
  const auto& t = theta_region.intervals[0];
  const auto& p = phi_region.intervals[0];
  EXPECT_NEAR(p.lower, 1.0 / t.upper, 1e-8);
  EXPECT_NEAR(p.upper, 1.0 / t.lower, 1e-8);
}

TEST(Region, ImpossibleObservation) {
  BinomialFamily binomial;
  EXPECT_THROW(confidence_region(binomial, {11.0, 10}, 0.05, GeneralizedEstimator::canonical()), Error);
}

TEST(OrderModels, BinomialGrid) {
  BinomialFamily binomial;
  const auto rows = order_models(binomial, {3.0, 10}, GeneralizedEstimator::canonical(), {0.5, 0.1, 0.3});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].theta, 0.1);
  EXPECT_EQ(rows[1].theta, 0.3);
  EXPECT_GT(rows[1].tails.two_sided.value, rows[0].tails.two_sided.value);
  EXPECT_GT(rows[1].tails.two_sided.value, rows[2].tails.two_sided.value);
  EXPECT_EQ(order_models(binomial, {3.0, 10}, GeneralizedEstimator::canonical(), {0.4}).size(), 1u);
  try {
    order_models(binomial, {3.0, 10}, GeneralizedEstimator::canonical(), {0.2, 1.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParameterOutOfRange);
  }
}
