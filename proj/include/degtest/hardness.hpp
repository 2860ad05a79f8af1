#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "degtest/bayesnet.hpp"
#include "degtest/learner.hpp"
#include "degtest/rng.hpp"

namespace degtest {

/// Star-shaped degree-1 net: node 0 is a rare parent with Pr[X_0 = 1] = eps0;
/// given X_0 = 1 the other bits equal the hidden string, given X_0 = 0 they
/// are uniform.
struct HardInstance {
  BayesNetModel net;
  std::vector<int> hidden;  // x^h, one bit per node 1..n-1
  double eps0 = 0.0;
};

/// Star dag with node 0 as the parent of every other node.
Dag star_dag(int n);

HardInstance make_hard_instance(std::span<const int> hidden, double eps0);
HardInstance draw_hard_instance(int n, double eps0, Rng& rng);
HardInstance draw_hard_instance(int n, double eps0, std::uint64_t seed);

/// Same star with Pr[X_0 = 1] = eps0 and every other conditional uniform.
BayesNetModel ignorant_hypothesis(int n, double eps0);

/// eps0 (2^(n-1) - 1), the chi^2 from a hard instance to the ignorant hypothesis.
double ignorant_risk_closed_form(int n, double eps0);

/// Default rare-parent bias 2 eps / 2^(n/2).
double default_eps0(int n, double epsilon);

/// Largest sample size covered by the lower bound: floor(2^(n/2) / (4 eps)).
std::size_t lower_bound_sample_size(int n, double epsilon);

/// What a learner hands back: a dense estimate, or a net (optionally with
/// the support mask it was learned on).
struct LearnerOutput {
  std::variant<DenseDistribution, BayesNetModel> estimate;
  std::optional<SupportMask> mask;
};

using MinimaxLearner = std::function<LearnerOutput(std::span<const Assignment> samples, int n, const Rng& rng)>;

enum class LearnerKind { ignorant, addk, nearproper, empirical };
std::string to_string(LearnerKind kind);
LearnerKind parse_learner(const std::string& text);

struct MinimaxTrial {
  std::size_t trial = 0;
  std::uint64_t stream = 0;
  double risk = 0.0;            // full-support chi2(truth, output)
  bool no_rare_sample = false;  // no draw had X_0 = 1
  std::optional<double> restricted_risk;  // chi2 on the learner's mask, if any
  std::optional<double> support_mass;     // truth mass on that mask
};

struct MinimaxReport {
  int n = 0;
  double epsilon = 0.0;
  double eps0 = 0.0;
  std::size_t m_samples = 0;
  std::uint64_t seed = 0;
  std::string learner;
  std::vector<MinimaxTrial> trials;

  double mean_risk = 0.0;
  double median_risk = 0.0;
  double q90_risk = 0.0;
  double no_rare_fraction = 0.0;
  /// (1 - eps0)^m and its binomial standard error over the trial count.
  double no_rare_expected = 0.0;
  double no_rare_std_error = 0.0;
};

/// Learner factories. `k` is the add-K smoothing over the full 2^n domain.
MinimaxLearner ignorant_learner(double eps0);
MinimaxLearner addk_learner(double k);
MinimaxLearner empirical_learner();
/// Splits the batch in halves: support identification, then add-K fitting on the star.
MinimaxLearner nearproper_learner(const LearnerConfig& cfg);

/// Trial t: fresh hard instance and m draws from Rng(seed).substream(t)
/// (substreams 0 and 1), learner gets substream 2.
MinimaxReport minimax_experiment(const MinimaxLearner& learner, const std::string& learner_name, int n,
                                 double epsilon, std::size_t m_samples, std::size_t trials, std::uint64_t seed,
                                 std::optional<double> eps0_override = std::nullopt);

struct ReciprocalCheck {
  double value_at_q = 0.0;
  double value_at_optimum = 0.0;
  bool holds = false;
};

/// sum a_i / q_i at q and at q*_i = sqrt(a_i) / sum_j sqrt(a_j).
ReciprocalCheck weighted_reciprocal_min_check(std::span<const double> a, std::span<const double> q);

/// sum_i 1/(k q_i) over k = q.size() entries, the objective minimized on the
/// sphere sum q_i^2 = 1 by the uniform point.
double sphere_reciprocal_objective(std::span<const double> q);

}  // namespace degtest
