#include <gtest/gtest.h>

#include <cmath>

#include "degtest/divergence.hpp"
#include "degtest/estimators.hpp"
#include "degtest/rng.hpp"

using namespace degtest;

TEST(AddK, Examples) {
  auto e = add_k_estimate(SampleCounts({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(e[0], 0.5);
  EXPECT_DOUBLE_EQ(e[1], 0.5);
  e = add_k_estimate(SampleCounts({3, 1}), 2.0);
  EXPECT_DOUBLE_EQ(e[0], 5.0 / 8.0);
  EXPECT_DOUBLE_EQ(e[1], 3.0 / 8.0);
  e = add_k_estimate(SampleCounts({3, 1}), 0.0);
  EXPECT_DOUBLE_EQ(e[0], 0.75);
  EXPECT_DOUBLE_EQ(e[1], 0.25);
}

TEST(AddK, Errors) {
  EXPECT_THROW(add_k_estimate(SampleCounts({0, 0}), 0.0), std::invalid_argument);
  EXPECT_THROW(add_k_estimate(SampleCounts({1, 0}), -1.0), std::invalid_argument);
  EXPECT_THROW(add_k_estimate(SampleCounts(std::vector<std::uint64_t>{}), 1.0), std::invalid_argument);
}

TEST(AddK, ValidPositiveAndLowerBounded) {
  Rng rng(1);
  for (int t = 0; t < 300; ++t) {
    std::vector<std::uint64_t> c(17);
    for (auto& x : c) x = rng() % 6;
    const SampleCounts counts(c);
    const double k = t % 3 == 0 ? 0.0 : 0.5 * static_cast<double>(t % 7 + 1);
    if (k == 0.0 && counts.total == 0) continue;
    const auto e = add_k_estimate(counts, k);
    EXPECT_NEAR(e.sum(), 1.0, 1e-12);
    EXPECT_GE(e.minCoeff(), 0.0);
    const double floor = k / (static_cast<double>(counts.total) + k * 17.0);
    EXPECT_GE(e.minCoeff(), floor - 1e-15);
    if (k > 0.0) EXPECT_GT(e.minCoeff(), 0.0);
    else EXPECT_EQ(e.minCoeff() > 0.0, *std::min_element(c.begin(), c.end()) > 0);
  }
}

TEST(AddK, LargeKTendsToUniform) {
  const SampleCounts counts({50, 3, 0, 7});
  double prev = 1.0;
  for (double k : {1.0, 10.0, 100.0, 1e4, 1e6}) {
    const double gap = (add_k_estimate(counts, k).array() - 0.25).abs().maxCoeff();
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(SampleCounts, Tally) {
  const std::vector<std::uint64_t> s{0, 2, 2, 3, 2};
  const auto c = SampleCounts::tally(s, 4);
  EXPECT_EQ(c.count, (std::vector<std::uint64_t>{1, 0, 3, 1}));
  EXPECT_EQ(c.total, 5u);
  EXPECT_THROW(SampleCounts::tally(s, 3), std::out_of_range);
}

TEST(ChooseK, Examples) {
  EXPECT_EQ(choose_k(1.0), 1);
  EXPECT_EQ(choose_k(std::exp(-5.0)), 5);
  EXPECT_EQ(choose_k(0.01), 5);
  EXPECT_EQ(choose_k(0.001), 7);
  EXPECT_EQ(choose_k(0.01, 2.0), 10);
  EXPECT_THROW(choose_k(0.0), std::invalid_argument);
  EXPECT_THROW(choose_k(1.5), std::invalid_argument);
}

TEST(Quantile, NearestRank) {
  const std::vector<double> v{5, 1, 4, 2, 3};
  EXPECT_DOUBLE_EQ(nearest_rank_quantile(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(nearest_rank_quantile(v, 0.9), 5.0);
  EXPECT_DOUBLE_EQ(nearest_rank_quantile(v, 0.2), 1.0);
  EXPECT_DOUBLE_EQ(nearest_rank_quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(nearest_rank_quantile(v, 1.0), 5.0);
}

TEST(RiskExperiment, PointMassHasNoVariance) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(8);
  p[3] = 1.0;
  const auto r = high_prob_risk_experiment(p, 20, 1.0, 50, 0.1, 9);
  // counts are always (0,0,0,20,0,...)
  std::vector<std::uint64_t> c(8, 0);
  c[3] = 20;
  const double expected = chi2(p, add_k_estimate(SampleCounts(c), 1.0));
  for (double v : r.chi2) EXPECT_DOUBLE_EQ(v, expected);
}

TEST(RiskExperiment, ReproducibleAndSummarized) {
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(16, 1.0 / 16.0);
  const auto a = high_prob_risk_experiment(p, 200, 2.0, 100, 0.05, 3, 2.0);
  const auto b = high_prob_risk_experiment(p, 200, 2.0, 100, 0.05, 3, 2.0);
  EXPECT_EQ(a.chi2, b.chi2);
  EXPECT_EQ(a.trial_stream, b.trial_stream);
  EXPECT_EQ(a.chi2.size(), 100u);
  EXPECT_DOUBLE_EQ(a.quantile, nearest_rank_quantile(a.chi2, 0.95));
  EXPECT_NEAR(a.bound, 2.0 * 16.0 * std::log(16.0 / 0.05) / 200.0, 1e-15);
  EXPECT_DOUBLE_EQ(a.exceed_fraction, a.fraction_above(a.bound));
  double mean = 0.0;
  for (double v : a.chi2) mean += v / 100.0;
  EXPECT_NEAR(a.mean, mean, 1e-12);
}

TEST(RiskExperiment, SameSeedSameDrawsAcrossK) {
  // paired comparisons rely on K not changing the sample path
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 0.25);
  const auto a = high_prob_risk_experiment(p, 30, 1.0, 20, 0.1, 5);
  const auto b = high_prob_risk_experiment(p, 30, 0.0, 20, 0.1, 5);
  EXPECT_EQ(a.trial_stream, b.trial_stream);
}
