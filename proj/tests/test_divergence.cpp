#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "degtest/divergence.hpp"
#include "degtest/hardness.hpp"

using namespace degtest;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Eigen::VectorXd random_simplex(Rng& rng, Eigen::Index k) {
  Eigen::VectorXd v(k);
  for (auto& e : v) e = rng.uniform() + 1e-3;
  return v / v.sum();
}

Subset random_subset(Rng& rng, Eigen::Index k) {
  Subset s(k);
  for (Eigen::Index i = 0; i < k; ++i) s[i] = rng.bernoulli(0.6);
  return s;
}

}  // namespace

TEST(Divergence, IdentityIsZero) {
  const auto p = vec({0.1, 0.2, 0.3, 0.4});
  EXPECT_DOUBLE_EQ(tv(p, p), 0.0);
  EXPECT_NEAR(kl(p, p), 0.0, 1e-15);
  EXPECT_NEAR(hellinger_sq(p, p), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(chi2(p, p), 0.0);
}

TEST(Divergence, DisjointSupports) {
  const auto p = vec({1.0, 0.0}), q = vec({0.0, 1.0});
  EXPECT_DOUBLE_EQ(tv(p, q), 1.0);
  EXPECT_DOUBLE_EQ(hellinger_sq(p, q), 1.0);
  EXPECT_EQ(kl(p, q), kInfinity);
  EXPECT_EQ(chi2(p, q), kInfinity);
}

TEST(Divergence, Arithmetic) {
  const auto p = vec({0.5, 0.5}), q = vec({0.25, 0.75});
  EXPECT_DOUBLE_EQ(tv(p, q), 0.25);
  EXPECT_NEAR(chi2(p, q), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(kl(p, q), 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(hellinger_sq(p, q), 1.0 - std::sqrt(0.125) - std::sqrt(0.375), 1e-15);
}

TEST(Divergence, ZeroCellsContributeNothing) {
  const auto p = vec({0.0, 0.5, 0.5}), q = vec({0.0, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(chi2(p, q), 0.0);
  EXPECT_DOUBLE_EQ(kl(p, q), 0.0);
  // p = 0 where q > 0 is fine for KL
  EXPECT_TRUE(std::isfinite(kl(vec({0.0, 1.0}), vec({0.5, 0.5}))));
}

TEST(Divergence, SymmetryAndRange) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_simplex(rng, 16), q = random_simplex(rng, 16);
    EXPECT_NEAR(tv(p, q), tv(q, p), 1e-15);
    EXPECT_NEAR(hellinger_sq(p, q), hellinger_sq(q, p), 1e-15);
    EXPECT_GE(tv(p, q), 0.0);
    EXPECT_LE(tv(p, q), 1.0);
    EXPECT_GE(hellinger_sq(p, q), -1e-15);
    EXPECT_LE(hellinger_sq(p, q), 1.0);
    EXPECT_GE(chi2(p, q), 0.0);
    EXPECT_GE(kl(p, q), -1e-15);
  }
  // chi2 and KL are not symmetric
  const auto p = vec({0.5, 0.5}), q = vec({0.25, 0.75});
  EXPECT_GT(std::abs(chi2(p, q) - chi2(q, p)), 1e-3);
  EXPECT_GT(std::abs(kl(p, q) - kl(q, p)), 1e-3);
}

TEST(Divergence, SizeMismatchThrows) {
  EXPECT_THROW(tv(vec({1.0}), vec({0.5, 0.5})), std::invalid_argument);
}

TEST(Chi2Restricted, FullAndEmptySubsets) {
  Rng rng(2);
  const auto p = random_simplex(rng, 64), q = random_simplex(rng, 64);
  EXPECT_NEAR(chi2_restricted(p, q, Subset::Constant(64, true)), chi2(p, q), 1e-12);
  EXPECT_DOUBLE_EQ(chi2_restricted(p, q, Subset::Constant(64, false)), 0.0);
}

TEST(Chi2Restricted, MatchesBruteForceAndExpandedForm) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_simplex(rng, 64), q = random_simplex(rng, 64);
    const auto s = random_subset(rng, 64);
    double brute = 0.0, ps = 0.0, qs = 0.0, ratio = 0.0;
    for (int i = 0; i < 64; ++i) {
      if (!s[i]) continue;
      brute += (p[i] - q[i]) * (p[i] - q[i]) / q[i];
      ps += p[i];
      qs += q[i];
      ratio += p[i] * p[i] / q[i];
    }
    const auto forms = chi2_restricted_forms(p, q, s);
    EXPECT_NEAR(forms.direct, brute, 1e-12);
    EXPECT_NEAR(forms.expanded, -2.0 * ps + qs + ratio, 1e-12);
    EXPECT_NEAR(forms.direct, forms.expanded, 1e-10);
  }
}

TEST(Chi2Restricted, ZeroDenominatorInsideSubsetThrows) {
  const auto p = vec({0.5, 0.5}), q = vec({1.0, 0.0});
  Subset s(2);
  s << true, true;
  EXPECT_THROW(chi2_restricted(p, q, s), std::domain_error);
  s << true, false;
  EXPECT_NEAR(chi2_restricted(p, q, s), 0.25, 1e-15);
}

TEST(Chi2Restricted, PairOverload) {
  const RestrictedPair pair{DenseDistribution::uniform(1), DenseDistribution(1, vec({0.25, 0.75})), Subset::Constant(2, true)};
  EXPECT_NEAR(chi2_restricted(pair), 1.0 / 3.0, 1e-15);
}

TEST(HellingerSplit, Examples) {
  Rng rng(4);
  const auto p = random_simplex(rng, 64), q = random_simplex(rng, 64);
  const auto full = hellinger_sq_split(p, q, Subset::Constant(64, true));
  EXPECT_NEAR(full.on_subset, hellinger_sq(p, q), 1e-12);
  EXPECT_DOUBLE_EQ(full.off_subset, 0.0);
  const auto same = hellinger_sq_split(p, p, random_subset(rng, 64));
  EXPECT_DOUBLE_EQ(same.on_subset, 0.0);
  EXPECT_DOUBLE_EQ(same.off_subset, 0.0);
}

TEST(HellingerSplit, Additivity) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const auto p = random_simplex(rng, 64), q = random_simplex(rng, 64);
    const auto split = hellinger_sq_split(p, q, random_subset(rng, 64));
    EXPECT_GE(split.on_subset, 0.0);
    EXPECT_GE(split.off_subset, 0.0);
    EXPECT_NEAR(split.on_subset + split.off_subset, hellinger_sq(p, q), 1e-12);
  }
}

TEST(Factorization, IdenticalNets) {
  Rng rng(6);
  const auto net = random_net(random_dag(5, 2, rng), rng, 0.1, 0.9);
  const auto check = conditional_chi2_factorization_check(net, net);
  EXPECT_NEAR(check.lhs, 1.0, 1e-12);
  EXPECT_NEAR(check.rhs, 1.0, 1e-12);
  EXPECT_TRUE(check.holds);
}

TEST(Factorization, RandomChains) {
  Rng rng(7);
  Dag chain{6, {{}, {0}, {1}, {2}, {3}, {4}}};
  for (int t = 0; t < 100; ++t) {
    const auto p = random_net(chain, rng, 0.05, 0.95);
    const auto q = random_net(chain, rng, 0.05, 0.95);
    const auto check = conditional_chi2_factorization_check(p, q);
    EXPECT_TRUE(check.holds) << check.lhs << " > " << check.rhs;
    EXPECT_NEAR(check.lhs, 1.0 + chi2(exact_distribution(p), exact_distribution(q)), 1e-9);
  }
}

TEST(Factorization, SinglePerturbedConditional) {
  Rng rng(8);
  Dag chain{6, {{}, {0}, {1}, {2}, {3}, {4}}};
  const auto p = random_net(chain, rng, 0.2, 0.8);
  auto q = p;
  q.cpt[3][1] += 0.1;
  const auto check = conditional_chi2_factorization_check(p, q);
  EXPECT_TRUE(check.holds);
  EXPECT_LT(check.lhs, check.rhs);
  EXPECT_GT(check.lhs, 1.0);
}

TEST(Factorization, RestrictedFormExposed) {
  Rng rng(9);
  const auto p = random_net(Dag::empty(3), rng, 0.2, 0.8);
  const auto q = random_net(Dag::empty(3), rng, 0.2, 0.8);
  Subset s = Subset::Constant(8, true);
  s[3] = false;
  const auto check = conditional_chi2_factorization_check(p, q, s);
  ASSERT_TRUE(check.lhs_restricted.has_value());
  const auto pd = exact_distribution(p), qd = exact_distribution(q);
  EXPECT_NEAR(*check.lhs_restricted, 2.0 * mass_on(pd.mass, s) - mass_on(qd.mass, s) + chi2_restricted(pd.mass, qd.mass, s),
              1e-12);
}

TEST(Factorization, DifferentDagsThrow) {
  const BayesNetModel a{Dag::empty(2), {{0.5}, {0.5}}};
  const BayesNetModel b{Dag{2, {{}, {0}}}, {{0.5}, {0.5, 0.5}}};
  EXPECT_THROW(conditional_chi2_factorization_check(a, b), std::invalid_argument);
}

TEST(BernoulliChi2, Value) {
  EXPECT_NEAR(bernoulli_chi2(0.5, 0.75), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(bernoulli_chi2(0.3, 0.3), 0.0);
}

TEST(Certify, ProductsAreNotFar) {
  EXPECT_LE(certify_tv_far_from_degree0(DenseDistribution::product(std::vector<double>{0.3, 0.8, 0.5}), 0.05), 0.0);
  EXPECT_LE(certify_tv_far_from_degree0(DenseDistribution::point_mass(3, 5), 0.05), 0.0);
}

TEST(Certify, TwoPointMixture) {
  const DenseDistribution p(2, vec({0.5, 0.0, 0.0, 0.5}));
  const double bound = certify_tv_far_from_degree0(p, 0.01);
  // brute-force distance to the nearest product on a 0.001 grid
  double nearest = 1.0;
  for (int i = 0; i <= 1000; ++i)
    for (int j = 0; j <= 1000; ++j) {
      const double a = i / 1000.0, b = j / 1000.0;
      const double d = tv(p.mass, vec({(1 - a) * (1 - b), a * (1 - b), (1 - a) * b, a * b}));
      nearest = std::min(nearest, d);
    }
  EXPECT_NEAR(nearest, std::sqrt(2.0) - 1.0, 1e-4);
  EXPECT_LE(bound, nearest);
  EXPECT_GE(bound, nearest - 0.011);  // Lipschitz slack n * step / 2 plus grid error
}

TEST(Certify, BoundIsBelowEveryProduct) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd v(8);
    for (auto& e : v) e = rng.uniform();
    const DenseDistribution p(3, v / v.sum());
    const double bound = certify_tv_far_from_degree0(p, 0.1);
    for (int s = 0; s < 200; ++s) {
      const std::vector<double> m{rng.uniform(), rng.uniform(), rng.uniform()};
      EXPECT_LE(bound, tv(p, DenseDistribution::product(m)) + 1e-12);
    }
  }
}

TEST(Certify, Preconditions) {
  EXPECT_THROW(certify_tv_far_from_degree0(DenseDistribution::uniform(5), 0.1), std::invalid_argument);
  EXPECT_THROW(certify_tv_far_from_degree0(DenseDistribution::uniform(2), 0.0), std::invalid_argument);
  EXPECT_THROW(certify_tv_far_from_degree0(DenseDistribution::uniform(2), 0.6), std::invalid_argument);
}

TEST(Chi2, HardInstanceAgainstIgnorant) {
  const std::vector<int> hidden{1, 0};
  const auto inst = make_hard_instance(hidden, 0.1);
  EXPECT_NEAR(chi2(exact_distribution(inst.net), exact_distribution(ignorant_hypothesis(3, 0.1))), 0.3, 1e-12);
}
