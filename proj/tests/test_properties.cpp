#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fil/family.hpp"
#include "fil/inference.hpp"
#include "fil/info.hpp"
#include "fil/sampling.hpp"
#include "fil/tail_area.hpp"
#include "oracles.hpp"

using namespace fil;

namespace {

std::vector<std::string> names(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back("L" + std::to_string(i));
  return out;
}

std::vector<std::int64_t> random_freqs(std::mt19937& rng, std::size_t k, int max_freq) {
  std::uniform_int_distribution<int> f(1, max_freq);
  std::vector<std::int64_t> out(k);
  for (auto& x : out) x = f(rng);
  return out;
}

DiscreteDistribution random_unordered(std::mt19937& rng, std::size_t k) {
  return make_simple(LabelSpace::unordered(names(k)), random_freqs(rng, k, 9)).to_discrete();
}

/// Distinct integer values in [-4, 12] with random positive weights.
std::pair<std::vector<Rational>, std::vector<Rational>> random_integer_base(std::mt19937& rng,
                                                                           std::size_t k) {
  std::vector<int> pool(17);
  std::iota(pool.begin(), pool.end(), -4);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> chosen(pool.begin(), pool.begin() + static_cast<long>(k));
  std::sort(chosen.begin(), chosen.end());
  const auto w = random_freqs(rng, k, 7);
  const std::int64_t total = std::accumulate(w.begin(), w.end(), std::int64_t{0});
  std::vector<Rational> values;
  std::vector<Rational> probs;
  for (std::size_t i = 0; i < k; ++i) {
    values.emplace_back(chosen[i]);
    probs.emplace_back(w[i], total);
  }
  return {values, probs};
}

/// Every vector of k positive integers summing to at most max_total.
void for_each_composition(std::size_t k, int max_total,
                          const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  std::vector<std::int64_t> f(k, 1);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int used) {
    if (pos == k) {
      visit(f);
      return;
    }
    const int left_for_rest = static_cast<int>(k - pos - 1);
    for (int v = 1; used + v + left_for_rest <= max_total; ++v) {
      f[pos] = v;
      rec(pos + 1, used + v);
    }
  };
  rec(0, 0);
}

}  // namespace

TEST(Properties, GibbsInequality) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + trial % 6;
    const auto p = random_unordered(rng, k);
    const auto q = random_unordered(rng, k);
    EXPECT_GE(kl_divergence(p, q), 0.0);
    EXPECT_NEAR(kl_divergence(p, p), 0.0, 1e-15);
  }
}

TEST(Properties, KlInfiniteExactlyOnSupportMismatch) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + trial % 5;
    const auto all = names(k + 2);
    // Random subsets of a shared label pool.
    std::vector<std::string> a;
    std::vector<std::string> b;
    for (const auto& l : all) {
      if (rng() % 2) a.push_back(l);
      if (rng() % 2) b.push_back(l);
    }
    if (a.empty() || b.empty()) continue;
    const auto m1 =
        make_simple(LabelSpace::unordered(a), random_freqs(rng, a.size(), 5)).to_discrete();
    const auto m2 =
        make_simple(LabelSpace::unordered(b), random_freqs(rng, b.size(), 5)).to_discrete();
    const bool contained = std::all_of(a.begin(), a.end(), [&](const std::string& l) {
      return std::find(b.begin(), b.end(), l) != b.end();
    });
    EXPECT_EQ(std::isinf(kl_divergence(m1, m2)), !contained);
  }
}

TEST(Properties, EntropyBounds) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + trial % 8;
    const auto p = random_unordered(rng, k);
    const double h = entropy(p);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log(static_cast<double>(k)) + 1e-12);
  }
  for (std::size_t k = 1; k <= 64; ++k) {
    const auto uniform =
        make_simple(LabelSpace::unordered(names(k)), std::vector<std::int64_t>(k, 3)).to_discrete();
    EXPECT_NEAR(entropy(uniform), std::log(static_cast<double>(k)), 1e-12);
  }
}

TEST(Properties, BagRoundTripExhaustive) {
  std::size_t checked = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    for (auto structure : {Structure::Unordered, Structure::Ordered}) {
      const auto space = structure == Structure::Unordered ? LabelSpace::unordered(names(k))
                                                           : LabelSpace::ordered(names(k));
      for_each_composition(k, 8, [&](const std::vector<std::int64_t>& f) {
        const auto m = make_simple(space, f);
        const Bag bag = to_bag(m);
        EXPECT_EQ(bag.size(), m.population_size());
        auto pairs = bag.pairs();
        std::sort(pairs.begin(), pairs.end(), [](const BagEntry& x, const BagEntry& y) {
          return std::tie(x.label, x.index) < std::tie(y.label, y.index);
        });
        EXPECT_EQ(std::adjacent_find(pairs.begin(), pairs.end()), pairs.end());
        EXPECT_TRUE(reconstruct(bag).same_as(m));
        ++checked;
      });
    }
  }
  // Compositions of N <= 8 into k <= 4 positive parts, counted twice.
  EXPECT_EQ(checked, 2u * (8 + 28 + 56 + 70));
}

TEST(Properties, PermutationEquivariance) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 5;
    auto labels = names(k);
    const auto f = random_freqs(rng, k, 6);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> labels2;
    std::vector<std::int64_t> f2;
    for (auto i : perm) {
      labels2.push_back(labels[i]);
      f2.push_back(f[i]);
    }
    const auto m = make_simple(LabelSpace::unordered(labels), f);
    const auto m2 = make_simple(LabelSpace::unordered(labels2), f2);
    EXPECT_TRUE(m.same_as(m2));
    const auto d = m.to_discrete();
    const auto d2 = m2.to_discrete();
    EXPECT_DOUBLE_EQ(entropy(d), entropy(d2));
    EXPECT_EQ(kl_divergence(d, d2), 0.0);
    for (const auto& l : labels) EXPECT_EQ(*d.prob_of(l).exact, *d2.prob_of(l).exact);

    const auto s1 = finite_population_sampling(to_bag(m), 2, statistics::count_of(m.space(), "L0"),
                                               SamplingMode::WithoutReplacementSubsets);
    const auto s2 = finite_population_sampling(to_bag(m2), 2,
                                               statistics::count_of(m2.space(), "L0"),
                                               SamplingMode::WithoutReplacementSubsets);
    EXPECT_EQ(s1.dist.exact_probs(), s2.dist.exact_probs());
  }
}

TEST(Properties, TailMonotonicityAndComplement) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [values, probs] = random_integer_base(rng, 2 + trial % 5);
    const auto d = iid_sum_distribution(DiscreteDistribution::exact(LabelSpace::numeric(values),
                                                                    probs),
                                        1 + trial % 3)
                       .dist;
    Rational prev_left = -1;
    Rational prev_right = 2;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto r = tail_report(d, d.space().exact_values()[i]);
      EXPECT_GT(*r.left.exact, prev_left);
      EXPECT_LT(*r.right.exact, prev_right);
      prev_left = *r.left.exact;
      prev_right = *r.right.exact;
      EXPECT_EQ(*r.left.exact + *r.right.exact, 1 + d.exact_probs()[i]);
      EXPECT_LE(*r.two_sided.exact, 1);
      EXPECT_EQ(*r.percentile.exact, 100 * *r.left.exact);
    }
    EXPECT_EQ(prev_left, 1);
    EXPECT_EQ(*tail_report(d, d.space().exact_values().front()).right.exact, 1);
  }
}

TEST(Properties, RarityIsMonotoneInAlpha) {
  std::mt19937 rng(6);
  const std::vector<double> alphas{0.001, 0.01, 0.05, 0.1, 0.25, 0.5};
  for (int trial = 0; trial < 30; ++trial) {
    const auto [values, probs] = random_integer_base(rng, 3 + trial % 3);
    const auto d =
        iid_sum_distribution(DiscreteDistribution::exact(LabelSpace::numeric(values), probs), 3)
            .dist;
    for (std::size_t i = 0; i < d.size(); ++i) {
      bool was_rare = false;
      for (double a : alphas) {
        const bool rare = is_rare(d, d.space().exact_values()[i], a, Side::TwoSided).rare;
        EXPECT_TRUE(!was_rare || rare);
        was_rare = rare;
      }
    }
  }
}

TEST(Properties, IidSumMatchesTupleOracle) {
  std::mt19937 rng(7);
  for (std::size_t k = 1; k <= 6; ++k) {
    for (unsigned n = 1; n <= 4; ++n) {
      for (int trial = 0; trial < 4; ++trial) {
        const auto [values, probs] = random_integer_base(rng, k);
        const auto got =
            iid_sum_distribution(DiscreteDistribution::exact(LabelSpace::numeric(values), probs), n)
                .dist;
        const auto want = oracle::tuple_sum(values, probs, n);
        ASSERT_EQ(got.size(), want.size());
        std::size_t i = 0;
        for (const auto& [v, p] : want) {
          EXPECT_EQ(got.space().exact_values()[i], v);
          EXPECT_EQ(got.exact_probs()[i], p);
          ++i;
        }
      }
    }
  }
}

TEST(Properties, PopulationSamplingMatchesOracle) {
  std::mt19937 rng(8);
  const std::pair<SamplingMode, oracle::Draw> modes[] = {
      {SamplingMode::WithReplacementIid, oracle::Draw::Iid},
      {SamplingMode::WithoutReplacementSubsets, oracle::Draw::Subsets},
      {SamplingMode::WithoutReplacementOrdered, oracle::Draw::Ordered}};
  for (std::size_t big_n = 1; big_n <= 8; ++big_n) {
    for (int trial = 0; trial < 3; ++trial) {
      const std::size_t k = 1 + rng() % std::min<std::size_t>(big_n, 4);
      // Split big_n into k positive frequencies.
      std::vector<std::int64_t> f(k, 1);
      for (std::size_t extra = k; extra < big_n; ++extra) ++f[rng() % k];
      const auto [values, ignored] = random_integer_base(rng, k);
      const auto m = make_simple(LabelSpace::numeric(values), f);
      std::vector<Rational> elements;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::int64_t c = 0; c < f[i]; ++c) elements.push_back(values[i]);
      }
      for (unsigned n = 1; n <= 4; ++n) {
        for (const auto& [mode, draw] : modes) {
          if (mode != SamplingMode::WithReplacementIid && n > big_n) continue;
          for (const auto& [stat, fn] :
               {std::pair{statistics::sum(m.space()), oracle::sum_of},
                std::pair{statistics::mean(m.space()), oracle::mean_of}}) {
            const auto got = finite_population_sampling(to_bag(m), n, stat, mode);
            const auto want = oracle::population_counts(elements, n, draw, fn);
            const BigInt total = outcome_count(big_n, n, mode);
            ASSERT_EQ(got.dist.size(), want.size());
            std::size_t i = 0;
            for (const auto& [v, c] : want) {
              EXPECT_EQ(got.dist.space().exact_values()[i], v);
              EXPECT_EQ(got.dist.exact_probs()[i], Rational(BigInt(c), total));
              ++i;
            }
          }
        }
      }
    }
  }
}

TEST(Properties, SubsetAndOrderedModesAgree) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = 2 + trial % 3;
    const auto [values, ignored] = random_integer_base(rng, k);
    const auto m = make_simple(LabelSpace::numeric(values), random_freqs(rng, k, 3));
    const unsigned n = 1 + trial % std::min<unsigned>(4, static_cast<unsigned>(m.population_size()));
    for (const auto& stat : {statistics::sum(m.space()), statistics::maximum(m.space()),
                             statistics::range(m.space())}) {
      const auto subsets =
          finite_population_sampling(to_bag(m), n, stat, SamplingMode::WithoutReplacementSubsets);
      const auto ordered =
          finite_population_sampling(to_bag(m), n, stat, SamplingMode::WithoutReplacementOrdered);
      EXPECT_EQ(subsets.dist.exact_probs(), ordered.dist.exact_probs());
      EXPECT_EQ(subsets.dist.space().exact_values(), ordered.dist.space().exact_values());
      BigInt factorial = 1;
      for (unsigned i = 2; i <= n; ++i) factorial *= i;
      EXPECT_EQ(*ordered.provenance.outcome_count, *subsets.provenance.outcome_count * factorial);
    }
  }
}

TEST(Properties, SerialAndParallelSamplingAgree) {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto [values, ignored] = random_integer_base(rng, 4);
    const auto m = make_simple(LabelSpace::numeric(values), random_freqs(rng, 4, 4));
    EnumerationOptions serial;
    serial.parallel = false;
    for (auto mode : {SamplingMode::WithReplacementIid, SamplingMode::WithoutReplacementSubsets,
                      SamplingMode::WithoutReplacementOrdered}) {
      const auto a = finite_population_sampling(to_bag(m), 3, statistics::sum(m.space()), mode);
      const auto b =
          finite_population_sampling(to_bag(m), 3, statistics::sum(m.space()), mode, serial);
      EXPECT_EQ(a.dist.exact_probs(), b.dist.exact_probs());
    }
  }
}

TEST(Properties, ConditioningPreservesRatiosAndMass) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 7;
    const auto d = random_unordered(rng, k);
    std::vector<bool> keep(k);
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) any |= (keep[i] = rng() % 2);
    if (!any) keep[0] = true;
    const auto c = condition(d, [&](std::size_t i) { return static_cast<bool>(keep[i]); });
    Rational kept_mass = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (keep[i]) kept_mass += d.exact_probs()[i];
    }
    Rational total = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto& label = c.space().label(j);
      EXPECT_EQ(c.exact_probs()[j], *d.prob_of(label).exact / kept_mass);
      total += c.exact_probs()[j];
    }
    EXPECT_EQ(total, 1);
  }
}

TEST(Properties, LambdaNeverExceedsFisher) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> theta(0.05, 0.95);
  BinomialFamily binomial;
  const std::vector<GeneralizedEstimator> estimators{
      GeneralizedEstimator::canonical(),
      {"square", [](double y, double) { return y * y; }, GeneralizedEstimator::Monotone::Increasing},
      {"root", [](double y, double) { return std::sqrt(y); },
       GeneralizedEstimator::Monotone::Increasing},
      {"capped", [](double y, double) { return std::min(y, 3.0); },
       GeneralizedEstimator::Monotone::Unknown},
      {"centred cube", [](double y, double t) { return std::pow(y - 10 * t, 3); },
       GeneralizedEstimator::Monotone::Increasing}};
  for (int trial = 0; trial < 40; ++trial) {
    const double t = theta(rng);
    const double info = fisher_information(binomial, t, 10);
    for (const auto& g : estimators) {
      EXPECT_LE(lambda_info(g, binomial, t, 10), info * (1 + 1e-8)) << g.name << " at " << t;
    }
  }
}

TEST(Properties, MseDecomposesExactly) {
  BinomialFamily binomial;
  const Estimator shrunk{"(y+1)/(n+2)", [](double y) { return (y + 1) / 12.0; },
                         [](const Rational& y) { return Rational((y + 1) / 12); }};
  const Estimator square{"(y/n)^2", [](double y) { return y * y / 100.0; },
                         [](const Rational& y) { return Rational(y * y / 100); }};
  std::vector<Rational> grid;
  for (int i = 1; i < 20; ++i) grid.emplace_back(i, 20);
  for (const auto& t : {shrunk, square, binomial.natural_estimator(10)}) {
    const auto report = assess(t, binomial, 10, grid);
    for (const auto& r : report.records) {
      ASSERT_TRUE(r.mse.exact && r.bias.exact && r.variance.exact);
      EXPECT_EQ(*r.mse.exact, *r.variance.exact + *r.bias.exact * *r.bias.exact);
      EXPECT_GE(*r.variance.exact, 0);
    }
  }
}

TEST(Properties, RegionContainsExactlyTheUnrejectedModels) {
  std::mt19937 rng(13);
  BinomialFamily binomial;
  for (unsigned y = 0; y <= 10; ++y) {
    const auto region =
        confidence_region(binomial, {double(y), 10}, 0.05, GeneralizedEstimator::canonical());
    std::uniform_real_distribution<double> theta(0.001, 0.999);
    for (int i = 0; i < 100; ++i) {
      const double t = theta(rng);
      const double ta =
          family_tail_area(binomial, t, {double(y), 10}, GeneralizedEstimator::canonical())
              .two_sided.value;
      // Skip points within the boundary tolerance.
      bool near_edge = false;
      for (const auto& iv : region.intervals) {
        near_edge |= std::abs(t - iv.lower) < 1e-8 || std::abs(t - iv.upper) < 1e-8;
      }
      if (near_edge) continue;
      EXPECT_EQ(region.contains(t), ta > 0.05) << "y=" << y << " theta=" << t;
    }
  }
}
