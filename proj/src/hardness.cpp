#include "degtest/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "degtest/divergence.hpp"
#include "degtest/estimators.hpp"

namespace degtest {

Dag star_dag(int n) {
  Dag dag = Dag::empty(n);
  for (int i = 1; i < n; ++i) dag.parents[static_cast<std::size_t>(i)] = {0};
  return dag;
}

HardInstance make_hard_instance(std::span<const int> hidden, double eps0) {
  const int n = static_cast<int>(hidden.size()) + 1;
  if (n < 2) throw std::invalid_argument("hard instance: n must be at least 2");
  if (!(eps0 >= 0.0 && eps0 < 1.0)) throw std::invalid_argument("hard instance: eps0 must lie in [0, 1)");
  HardInstance inst;
  inst.eps0 = eps0;
  inst.hidden.assign(hidden.begin(), hidden.end());
  inst.net.dag = star_dag(n);
  inst.net.cpt.resize(static_cast<std::size_t>(n));
  inst.net.cpt[0] = {eps0};
  for (int i = 1; i < n; ++i) {
    const int h = hidden[static_cast<std::size_t>(i - 1)];
    if (h != 0 && h != 1) throw std::invalid_argument("hard instance: hidden string must be binary");
    // config 0: parent off (uniform); config 1: parent on (point mass at h).
    inst.net.cpt[static_cast<std::size_t>(i)] = {0.5, static_cast<double>(h)};
  }
  return inst;
}

HardInstance draw_hard_instance(int n, double eps0, Rng& rng) {
  if (n < 2) throw std::invalid_argument("draw_hard_instance: n must be at least 2");
  std::vector<int> hidden(static_cast<std::size_t>(n - 1));
  for (auto& h : hidden) h = static_cast<int>(rng() >> 63);
  return make_hard_instance(hidden, eps0);
}

HardInstance draw_hard_instance(int n, double eps0, std::uint64_t seed) {
  Rng rng(seed);
  return draw_hard_instance(n, eps0, rng);
}

BayesNetModel ignorant_hypothesis(int n, double eps0) {
  BayesNetModel net{star_dag(n), {}};
  net.cpt.resize(static_cast<std::size_t>(n));
  net.cpt[0] = {eps0};
  for (int i = 1; i < n; ++i) net.cpt[static_cast<std::size_t>(i)] = {0.5, 0.5};
  return net;
}

double ignorant_risk_closed_form(int n, double eps0) { return eps0 * (std::ldexp(1.0, n - 1) - 1.0); }

double default_eps0(int n, double epsilon) { return 2.0 * epsilon / std::pow(2.0, n / 2.0); }

std::size_t lower_bound_sample_size(int n, double epsilon) {
  return static_cast<std::size_t>(std::floor(std::pow(2.0, n / 2.0) / (4.0 * epsilon)));
}

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::ignorant: return "ignorant";
    case LearnerKind::addk: return "addk";
    case LearnerKind::nearproper: return "nearproper";
    case LearnerKind::empirical: return "empirical";
  }
  return "?";
}

LearnerKind parse_learner(const std::string& text) {
  for (auto kind : {LearnerKind::ignorant, LearnerKind::addk, LearnerKind::nearproper, LearnerKind::empirical})
    if (to_string(kind) == text) return kind;
  throw std::invalid_argument("unknown learner '" + text + "' (expected ignorant, addk, nearproper or empirical)");
}

MinimaxLearner ignorant_learner(double eps0) {
  return [eps0](std::span<const Assignment>, int n, const Rng&) {
    return LearnerOutput{ignorant_hypothesis(n, eps0), std::nullopt};
  };
}

MinimaxLearner addk_learner(double k) {
  return [k](std::span<const Assignment> samples, int n, const Rng&) {
    const auto counts = SampleCounts::tally(samples, std::size_t{1} << n);
    return LearnerOutput{DenseDistribution(n, add_k_estimate(counts, k)), std::nullopt};
  };
}

MinimaxLearner empirical_learner() { return addk_learner(0.0); }

MinimaxLearner nearproper_learner(const LearnerConfig& cfg) {
  return [cfg](std::span<const Assignment> samples, int n, const Rng&) {
    const std::size_t half = samples.size() / 2;
    auto result = near_proper_learn_from_batches(samples.first(half), samples.subspan(half), star_dag(n), cfg);
    return LearnerOutput{std::move(result.q), std::move(result.mask)};
  };
}

namespace {

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

MinimaxReport minimax_experiment(const MinimaxLearner& learner, const std::string& learner_name, int n,
                                 double epsilon, std::size_t m_samples, std::size_t trials, std::uint64_t seed,
                                 std::optional<double> eps0_override) {
  if (trials == 0) throw std::invalid_argument("minimax_experiment: need at least one trial");
  if (n > kDefaultOracleCap) throw std::invalid_argument("minimax_experiment: n exceeds oracle cap");
  MinimaxReport report;
  report.n = n;
  report.epsilon = epsilon;
  report.eps0 = eps0_override.value_or(default_eps0(n, epsilon));
  report.m_samples = m_samples;
  report.seed = seed;
  report.learner = learner_name;

  const Rng root(seed);
  std::vector<double> risks;
  std::size_t no_rare = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Rng trial_rng = root.substream(t);
    Rng instance_rng = trial_rng.substream(0);
    Rng sample_rng = trial_rng.substream(1);
    const HardInstance inst = draw_hard_instance(n, report.eps0, instance_rng);
    const auto samples = sample(inst.net, m_samples, sample_rng);
    const LearnerOutput out = learner(samples, n, trial_rng.substream(2));

    const DenseDistribution truth = exact_distribution(inst.net);
    const DenseDistribution estimate = std::visit(
        [](const auto& e) -> DenseDistribution {
          if constexpr (std::is_same_v<std::decay_t<decltype(e)>, DenseDistribution>)
            return e;
          else
            return exact_distribution(e);
        },
        out.estimate);
    if (estimate.n != n || !estimate.is_normalized(1e-9))
      throw std::runtime_error("minimax_experiment: learner output is not a distribution on {0,1}^n");

    MinimaxTrial row;
    row.trial = t;
    row.stream = trial_rng.key();
    row.risk = chi2(truth, estimate);
    row.no_rare_sample = std::none_of(samples.begin(), samples.end(), [](Assignment x) { return bit(x, 0) == 1; });
    if (out.mask) {
      const Subset subset = support_subset(*out.mask);
      row.restricted_risk = chi2_restricted(truth.mass, estimate.mass, subset);
      row.support_mass = mass_on(truth.mass, subset);
    }
    if (row.no_rare_sample) ++no_rare;
    risks.push_back(row.risk);
    report.trials.push_back(row);
  }

  CompensatedSum total;
  for (double r : risks) total.add(r);
  report.mean_risk = total.value() / static_cast<double>(trials);
  report.median_risk = median_of(risks);
  report.q90_risk = nearest_rank_quantile(risks, 0.9);
  report.no_rare_fraction = static_cast<double>(no_rare) / static_cast<double>(trials);
  report.no_rare_expected = std::pow(1.0 - report.eps0, static_cast<double>(m_samples));
  report.no_rare_std_error =
      std::sqrt(report.no_rare_expected * (1.0 - report.no_rare_expected) / static_cast<double>(trials));
  return report;
}

ReciprocalCheck weighted_reciprocal_min_check(std::span<const double> a, std::span<const double> q) {
  if (a.size() != q.size() || a.empty()) throw std::invalid_argument("weighted_reciprocal_min_check: size mismatch");
  auto value = [&](auto&& q_of) {
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < 0.0) throw std::invalid_argument("weighted_reciprocal_min_check: negative weight");
      if (a[i] == 0.0) continue;
      const double qi = q_of(i);
      if (qi <= 0.0) return kInfinity;
      s.add(a[i] / qi);
    }
    return s.value();
  };
  double root_sum = 0.0;
  for (double ai : a) root_sum += std::sqrt(ai);

  ReciprocalCheck out;
  out.value_at_q = value([&](std::size_t i) { return q[i]; });
  out.value_at_optimum = root_sum > 0.0 ? value([&](std::size_t i) { return std::sqrt(a[i]) / root_sum; }) : 0.0;
  out.holds = out.value_at_q >= out.value_at_optimum - 1e-10;
  return out;
}

double sphere_reciprocal_objective(std::span<const double> q) {
  const auto k = static_cast<double>(q.size());
  double s = 0.0;
  for (double qi : q) s += 1.0 / (k * qi);
  return s;
}

}  // namespace degtest
