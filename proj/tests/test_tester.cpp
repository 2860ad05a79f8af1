#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "degtest/calibration.hpp"
#include "degtest/divergence.hpp"
#include "degtest/estimators.hpp"
#include "degtest/io.hpp"
#include "degtest/tester.hpp"

using namespace degtest;

namespace {

TesterConfig tester(double eps, DistanceMode mode = DistanceMode::hellinger) {
  TesterConfig cfg;
  cfg.epsilon = eps;
  cfg.mode = mode;
  return cfg;
}

double median(std::vector<double> v) { return nearest_rank_quantile(std::move(v), 0.5); }

}  // namespace

TEST(TesterConfig, Validation) {
  EXPECT_NO_THROW(tester(0.25).validate());
  EXPECT_THROW(tester(1.2).validate(), std::invalid_argument);
  auto cfg = tester(0.25);
  cfg.gamma = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_mode("tv"), DistanceMode::tv);
  EXPECT_EQ(parse_mode("hellinger"), DistanceMode::hellinger);
  EXPECT_THROW(parse_mode("kl"), std::invalid_argument);
}

TEST(TesterConfig, SampleMean) {
  EXPECT_NEAR(test_sample_mean(8, tester(0.25)), 16.0 / 0.0625, 1e-9);
  auto cfg = tester(0.5);
  cfg.m_multiplier = 2.0;
  EXPECT_NEAR(test_sample_mean(3, cfg), 2.0 * std::pow(2.0, 1.5) / 0.25, 1e-12);
}

TEST(TolerantTest, EmptySampleAccepts) {
  const BayesNetModel q{Dag::empty(2), {{0.5}, {0.5}}};
  const auto r = tolerant_test({}, q, SupportMask(q.dag), tester(0.25), 10.0);
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_TRUE(r.accept);
}

TEST(TolerantTest, HandComputedStatistic) {
  const BayesNetModel q{Dag::empty(2), {{0.5}, {0.5}}};  // q_x = 1/4
  const std::vector<Assignment> s{0, 0, 0, 1, 3};
  const double m = 8.0;  // m q = 2
  // x=0: ((3-2)^2 - 3)/2 = -1; x=1: ((1-2)^2-1)/2 = 0; x=3: 0; x=2 unobserved, omitted
  auto cfg = tester(0.25);
  const auto r = tolerant_test(s, q, SupportMask(q.dag), cfg, m);
  EXPECT_DOUBLE_EQ(r.statistic, -1.0);
  EXPECT_DOUBLE_EQ(r.threshold, cfg.gamma * m * 0.0625);
  EXPECT_EQ(r.accept, r.statistic <= r.threshold);
  EXPECT_EQ(r.poissonized_count, 5u);
}

TEST(TolerantTest, OutOfSupportSamplesAddOneEach) {
  const BayesNetModel q{Dag::empty(2), {{0.5}, {1.0}}};
  SupportMask mask(q.dag);
  mask.exclude(1, 0, 0);
  const std::vector<Assignment> in{2, 3};
  const std::vector<Assignment> with_out{2, 3, 0, 1, 1};
  const auto a = tolerant_test(in, q, mask, tester(0.25), 4.0);
  const auto b = tolerant_test(with_out, q, mask, tester(0.25), 4.0);
  EXPECT_EQ(b.out_of_support, 3u);
  EXPECT_DOUBLE_EQ(b.statistic, a.statistic + 3.0);
}

TEST(TolerantTest, ZeroHypothesisInsideMaskThrows) {
  const BayesNetModel q{Dag::empty(1), {{1.0}}};
  const std::vector<Assignment> s{0};
  EXPECT_THROW(tolerant_test(s, q, SupportMask(q.dag), tester(0.25), 4.0), std::domain_error);
}

TEST(TolerantTest, DeterministicAndOrderFree) {
  Rng rng(1);
  const auto q = random_net(Dag::empty(4), rng, 0.2, 0.8);
  auto s = sample(q, 200, 3);
  const auto a = tolerant_test(s, q, SupportMask(q.dag), tester(0.25), 200.0);
  std::reverse(s.begin(), s.end());
  const auto b = tolerant_test(s, q, SupportMask(q.dag), tester(0.25), 200.0);
  EXPECT_DOUBLE_EQ(a.statistic, b.statistic);
}

TEST(TolerantTest, PointMassHypothesisAgainstUniformRejects) {
  // q~ puts all mass on x = 0; mask is its support
  const BayesNetModel q{Dag::empty(6), std::vector<std::vector<double>>(6, {0.0})};
  SupportMask mask(q.dag);
  for (int i = 0; i < 6; ++i) mask.exclude(i, 1, 0);
  const DenseSampler uniform(DenseDistribution::uniform(6));
  for (double eps : {0.1, 0.25, 0.5}) {
    auto cfg = tester(eps);
    const double m = test_sample_mean(6, cfg);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      const auto draws = uniform.draw(rng.poisson(m), rng);
      EXPECT_FALSE(tolerant_test(draws, q, mask, cfg, m).accept) << "eps=" << eps << " seed=" << seed;
    }
  }
}

TEST(TolerantTest, CloserSourceHasSmallerMedianStatistic) {
  Rng gen(2);
  const Dag dag = Dag::empty(6);
  const auto q = random_net(dag, gen, 0.3, 0.7);
  auto far = q;
  for (auto& row : far.cpt) row[0] = std::clamp(row[0] + 0.2, 0.0, 1.0);
  ASSERT_GT(chi2(exact_distribution(far), exact_distribution(q)), 0.1);
  const auto cfg = tester(0.25);
  const double m = test_sample_mean(6, cfg);
  std::vector<double> same, shifted;
  for (std::uint64_t seed = 0; seed < 51; ++seed) {
    Rng r1(seed), r2(seed);
    same.push_back(tolerant_test(NetSampler(q).draw(r1.poisson(m), r1), q, SupportMask(dag), cfg, m).statistic);
    shifted.push_back(tolerant_test(NetSampler(far).draw(r2.poisson(m), r2), q, SupportMask(dag), cfg, m).statistic);
  }
  EXPECT_LE(median(same), median(shifted));
}

TEST(TestGraph, ModeControlsMassShift) {
  Rng gen(3);
  const auto truth = random_net(random_dag(5, 1, gen), gen, 0.1, 0.9);
  const auto h = test_graph(NetSampler(truth), truth.dag, tester(0.25), 1);
  const auto t = test_graph(NetSampler(truth), truth.dag, tester(0.25, DistanceMode::tv), 1);
  EXPECT_TRUE(h.mass_shift_applied);
  EXPECT_FALSE(t.mass_shift_applied);
  EXPECT_EQ(h.seed, 1u);
  EXPECT_EQ(h.d, 1);
  EXPECT_EQ(h.n, 5);
  EXPECT_NEAR(h.m, test_sample_mean(5, tester(0.25)), 1e-12);
}

TEST(TestGraph, ReproducibleFromSeed) {
  Rng gen(4);
  const auto truth = random_net(random_dag(5, 1, gen), gen, 0.1, 0.9);
  const auto a = test_graph(NetSampler(truth), truth.dag, tester(0.25), 9);
  const auto b = test_graph(NetSampler(truth), truth.dag, tester(0.25), 9);
  EXPECT_DOUBLE_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.poissonized_count, b.poissonized_count);
}

TEST(TestGraph, DeterministicSourceAccepts) {
  const BayesNetModel det{Dag{4, {{}, {0}, {1}, {2}}}, {{1.0}, {0.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    EXPECT_TRUE(test_graph(NetSampler(det), det.dag, tester(0.25), seed).accept) << seed;
}

TEST(TestGraph, DimensionMismatchThrows) {
  const BayesNetModel net{Dag::empty(2), {{0.5}, {0.5}}};
  EXPECT_THROW(test_graph(NetSampler(net), Dag::empty(3), tester(0.25), 1), std::invalid_argument);
}

TEST(Amplify, MajorityVote) {
  const Rng rng(1);
  EXPECT_TRUE(amplify([](const Rng&) { return true; }, 5, rng).accept);
  int call = 0;
  const std::vector<bool> votes{true, false, true};
  const auto v = amplify([&](const Rng&) { return votes[static_cast<std::size_t>(call++)]; }, 3, rng);
  EXPECT_TRUE(v.accept);
  EXPECT_EQ(v.accepts, 2);
  EXPECT_THROW(amplify([](const Rng&) { return true; }, 4, rng), std::invalid_argument);
  EXPECT_THROW(amplify([](const Rng&) { return true; }, 0, rng), std::invalid_argument);
}

TEST(Amplify, BoostsABiasedTest) {
  // P[Bin(31, 0.7) >= 16] ~ 0.989
  const Rng root(5);
  int accepted = 0;
  for (std::uint64_t meta = 0; meta < 500; ++meta) {
    auto coin = [](const Rng& r) {
      Rng copy = r;
      return copy.bernoulli(0.7);
    };
    accepted += amplify(coin, 31, root.substream(meta)).accept;
  }
  EXPECT_GE(accepted, 475);
}

TEST(Amplify, RepCount) {
  EXPECT_EQ(amplification_reps(3, 0, 2.0), 1);
  EXPECT_EQ(amplification_reps(3, 1, 2.0), 7);  // ceil(2 * 3 ln 3) = 7
  EXPECT_EQ(amplification_reps(4, 1, 2.0), 13);  // ceil(2 * 4 ln 4) = 12 -> 13
  for (int n = 2; n <= 5; ++n)
    for (int d = 0; d < n; ++d) EXPECT_EQ(amplification_reps(n, d, 2.0) % 2, 1);
}

TEST(TestDegree, ProductAcceptedByEmptyGraph) {
  const BayesNetModel prod{Dag::empty(3), {{0.3}, {0.6}, {0.5}}};
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 11; ++seed) {
    const auto r = test_degree(NetSampler(prod), 3, 0, tester(0.25, DistanceMode::tv), seed);
    EXPECT_EQ(r.dags_total, 1u);
    EXPECT_EQ(r.reps, 1);
    if (r.accept) {
      ++accepted;
      ASSERT_TRUE(r.accepting_dag.has_value());
      EXPECT_EQ(*r.accepting_dag, Dag::empty(3));
    }
  }
  EXPECT_GE(accepted, 8);
}

TEST(TestDegree, StopsAtFirstAcceptAndRespectsCap) {
  const BayesNetModel prod{Dag::empty(3), {{0.3}, {0.6}, {0.5}}};
  const auto r = test_degree(NetSampler(prod), 3, 1, tester(0.25, DistanceMode::tv), 2);
  if (r.accept) {
    EXPECT_EQ(r.tried.size(), *r.accepting_index + 1);
    EXPECT_EQ(*r.accepting_dag, enumerate_dags(3, 1)[*r.accepting_index]);
  }
  EXPECT_THROW(test_degree(NetSampler(BayesNetModel{Dag::empty(6), std::vector<std::vector<double>>(6, {0.5})}), 6, 1,
                           tester(0.25), 1),
               std::invalid_argument);
}

TEST(CalibratedGamma, MatchesCommittedCalibration) {
  const Json cal = read_json(DEGTEST_CALIBRATION_FILE);
  EXPECT_DOUBLE_EQ(kCalibratedGamma, calibrated_value(cal, "gamma"));
}
