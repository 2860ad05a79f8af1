#include "degtest/tester.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degtest {

std::string to_string(DistanceMode mode) { return mode == DistanceMode::tv ? "tv" : "hellinger"; }

DistanceMode parse_mode(const std::string& text) {
  if (text == "tv") return DistanceMode::tv;
  if (text == "hellinger") return DistanceMode::hellinger;
  throw std::invalid_argument("unknown mode '" + text + "' (expected tv or hellinger)");
}

void TesterConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("TesterConfig: epsilon must lie in (0, 1)");
  if (!(gamma > 0.0)) throw std::invalid_argument("TesterConfig: gamma must be positive");
  if (!(m_multiplier > 0.0)) throw std::invalid_argument("TesterConfig: m_multiplier must be positive");
  if (!(c_amp > 0.0)) throw std::invalid_argument("TesterConfig: c_amp must be positive");
  learner_config().validate();
}

LearnerConfig TesterConfig::learner_config() const {
  LearnerConfig out = learner;
  out.epsilon = epsilon;
  return out;
}

double test_sample_mean(int n, const TesterConfig& cfg) {
  return cfg.m_multiplier * std::pow(2.0, n / 2.0) / (cfg.epsilon * cfg.epsilon);
}

TestReport tolerant_test(std::span<const Assignment> samples, const BayesNetModel& q_tilde, const SupportMask& mask,
                         const TesterConfig& cfg, double m) {
  if (!(q_tilde.dag == mask.dag())) throw std::invalid_argument("tolerant_test: model and mask use different dags");
  TestReport report;
  report.m = m;
  report.poissonized_count = samples.size();
  report.n = q_tilde.n();
  report.epsilon = cfg.epsilon;
  report.mode = cfg.mode;
  report.threshold = cfg.gamma * m * cfg.epsilon * cfg.epsilon;

  std::vector<Assignment> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double z = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const Assignment x = sorted[i];
    const auto count = static_cast<double>(j - i);
    if (!mask.contains(x)) {
      report.out_of_support += j - i;
    } else {
      const double qx = exact_probability(q_tilde, x);
      if (!(qx > 0.0)) throw std::domain_error("tolerant_test: hypothesis vanishes on an in-mask observation");
      const double expected = m * qx;
      const double diff = count - expected;
      z += (diff * diff - count) / expected;
    }
    i = j;
  }
  z += static_cast<double>(report.out_of_support);
  report.statistic = z;
  report.accept = report.statistic <= report.threshold;
  return report;
}

TestReport test_graph(const SampleSource& source, const Dag& dag, const TesterConfig& cfg, const Rng& rng) {
  cfg.validate();
  if (source.dimension() != dag.n) throw std::invalid_argument("test_graph: sampler and dag dimensions differ");
  const LearnerConfig lcfg = cfg.learner_config();
  NearProperResult learned = near_proper_learn(source, dag, lcfg, rng.substream(0));

  const bool shift = cfg.mode == DistanceMode::hellinger;
  const BayesNetModel hypothesis = shift ? mass_shift(learned.q, learned.mask) : learned.q;

  Rng test_rng = rng.substream(1);
  const double m = test_sample_mean(dag.n, cfg);
  const std::uint64_t draws = test_rng.poisson(m);
  const auto samples = source.draw(static_cast<std::size_t>(draws), test_rng);

  TestReport report = tolerant_test(samples, hypothesis, learned.mask, cfg, m);
  report.stream = rng.key();
  report.d = lcfg.degree_for(dag);
  report.mass_shift_applied = shift;
  report.support_samples = learned.support_samples;
  report.learn_samples = learned.learn_samples;
  return report;
}

TestReport test_graph(const SampleSource& source, const Dag& dag, const TesterConfig& cfg, std::uint64_t seed) {
  TestReport report = test_graph(source, dag, cfg, Rng(seed));
  report.seed = seed;
  return report;
}

AmplifiedVerdict amplify(const std::function<bool(const Rng&)>& single_test, int reps, const Rng& rng) {
  if (reps <= 0 || reps % 2 == 0) throw std::invalid_argument("amplify: reps must be a positive odd number");
  AmplifiedVerdict out;
  out.reps = reps;
  for (int r = 0; r < reps; ++r)
    if (single_test(rng.substream(static_cast<std::uint64_t>(r)))) ++out.accepts;
  out.accept = 2 * out.accepts > reps;
  return out;
}

int amplification_reps(int n, int d, double c_amp) {
  // ln(1/delta) = d n ln n
  const double log_inv_delta = static_cast<double>(d) * n * std::log(static_cast<double>(std::max(n, 1)));
  int reps = static_cast<int>(std::ceil(c_amp * log_inv_delta - 1e-9));
  reps = std::max(reps, 1);
  if (reps % 2 == 0) ++reps;
  return reps;
}

DegreeTestReport test_degree(const SampleSource& source, int n, int d, const TesterConfig& cfg, std::uint64_t seed,
                             int enumeration_cap) {
  cfg.validate();
  const auto dags = enumerate_dags(n, d, enumeration_cap);
  DegreeTestReport report;
  report.dags_total = dags.size();
  report.reps = amplification_reps(n, d, cfg.c_amp);
  report.n = n;
  report.d = d;
  report.epsilon = cfg.epsilon;
  report.mode = cfg.mode;
  report.seed = seed;

  TesterConfig per_graph = cfg;
  per_graph.learner.degree_bound = d;
  const Rng root(seed);
  for (std::size_t g = 0; g < dags.size(); ++g) {
    const Dag& dag = dags[g];
    auto single = [&](const Rng& rng) { return test_graph(source, dag, per_graph, rng).accept; };
    const AmplifiedVerdict verdict = amplify(single, report.reps, root.substream(g));
    report.tried.push_back({g, verdict});
    if (verdict.accept) {
      report.accept = true;
      report.accepting_dag = dag;
      report.accepting_index = g;
      break;
    }
  }
  return report;
}

}  // namespace degtest
