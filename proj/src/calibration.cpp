#include "degtest/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "degtest/divergence.hpp"
#include "degtest/estimators.hpp"
#include "degtest/experiments.hpp"
#include "degtest/learner.hpp"
#include "degtest/tester.hpp"

namespace degtest {

namespace {

constexpr double kOperatingQuantile = 0.9;

double round_up(double v, double unit) { return std::ceil(v / unit - 1e-9) * unit; }

void require_budget(const std::string& target, std::size_t budget) {
  const std::size_t minimum = minimum_budget(target);
  if (budget < minimum) {
    throw CalibrationError("insufficient trials for " + target + ": budget " + std::to_string(budget) +
                               " < minimum " + std::to_string(minimum),
                           Json{{"target", target}, {"budget", budget}, {"minimum", minimum}});
  }
}

// null: random degree-1 nets on n = 3..8 bits tested against their own dag,
// both modes. The statistic omits empty cells, so its null location moves
// with n; one gamma has to cover every n the tester is run at.
// far: 3-bit cores certified >= eps from products, alone (n = 3) or padded
// to n = 8, empty graph, tv mode.
Json calibrate_gamma(std::size_t budget, std::uint64_t seed) {
  constexpr int n_min = 3;
  constexpr int n_max = 8;
  constexpr int d = 1;
  constexpr double eps = 0.25;
  constexpr double certify_step = 0.05;
  const Rng root(seed);

  std::vector<double> ratios;
  std::vector<std::vector<double>> by_n(n_max + 1);
  for (std::size_t t = 0; t < budget; ++t) {
    const int n = n_min + static_cast<int>(t % (n_max - n_min + 1));
    const Rng trial = root.substream(0).substream(t);
    Rng gen = trial.substream(0);
    const BayesNetModel truth = suites::random_markov_net(n, d, gen);
    const NetSampler source(truth);
    for (const DistanceMode mode : {DistanceMode::hellinger, DistanceMode::tv}) {
      TesterConfig cfg;
      cfg.epsilon = eps;
      cfg.mode = mode;
      const TestReport r = test_graph(source, truth.dag, cfg, trial.substream(mode == DistanceMode::tv ? 2 : 1));
      ratios.push_back(r.statistic / (r.m * eps * eps));
      by_n[static_cast<std::size_t>(n)].push_back(ratios.back());
    }
  }
  double q = -kInfinity;
  for (const auto& v : by_n)
    if (!v.empty()) q = std::max(q, nearest_rank_quantile(v, kOperatingQuantile));
  const double gamma = round_up(std::max(q, 0.01), 0.01);
  auto accept_rate = [&](const std::vector<double>& v) {
    const auto k = std::count_if(v.begin(), v.end(), [&](double r) { return r <= gamma; });
    return static_cast<double>(k) / static_cast<double>(v.size());
  };
  const double null_accept = accept_rate(ratios);
  Json per_n = Json::object();
  for (int n = n_min; n <= n_max; ++n)
    if (!by_n[static_cast<std::size_t>(n)].empty())
      per_n[std::to_string(n)] = accept_rate(by_n[static_cast<std::size_t>(n)]);

  std::size_t rejected = 0;
  double weakest_certificate = 1.0;
  for (std::size_t t = 0; t < budget; ++t) {
    const Rng trial = root.substream(1).substream(t);
    Rng gen = trial.substream(0);
    DenseDistribution core = suites::random_far_core(gen);
    double cert = certify_tv_far_from_degree0(core, certify_step);
    for (int attempt = 0; cert < eps && attempt < 100; ++attempt) {
      core = suites::random_far_core(gen);
      cert = certify_tv_far_from_degree0(core, certify_step);
    }
    if (cert < eps) throw CalibrationError("could not draw a certified far core", Json{{"trial", t}});
    weakest_certificate = std::min(weakest_certificate, cert);
    const int pad = t % 2 == 0 ? n_max - 3 : 0;
    const DenseDistribution p = pad > 0 ? suites::embed_with_padding(core, pad) : core;
    TesterConfig cfg;
    cfg.epsilon = eps;
    cfg.gamma = gamma;
    cfg.mode = DistanceMode::tv;
    if (!test_graph(DenseSampler(p), Dag::empty(p.n), cfg, trial.substream(1)).accept) ++rejected;
  }
  const double far_reject = static_cast<double>(rejected) / static_cast<double>(budget);

  Json record{{"value", gamma},
              {"seed", seed},
              {"trials", budget},
              {"operating_point", "gamma = largest per-n 0.9-quantile of statistic/(m eps^2) on the null, rounded up to 0.01"},
              {"protocol",
               {{"n_range", {n_min, n_max}}, {"d", d}, {"epsilon", eps},
                {"cpt_range", {suites::kCptLow, suites::kCptHigh}}, {"null_runs_per_trial", 2},
                {"far_core_bits", 3}, {"far_padding", {0, n_max - 3}}, {"far_certify_step", certify_step}}},
              {"null_quantile", q},
              {"null_accept_rate", null_accept},
              {"null_accept_rate_by_n", per_n},
              {"far_reject_rate", far_reject},
              {"far_min_certificate", weakest_certificate}};
  bool every_n = true;
  for (const auto& [key, rate] : per_n.items()) every_n = every_n && rate.get<double>() >= 0.9;
  if (!every_n || null_accept < 0.9 || far_reject < 0.9)
    throw CalibrationError("gamma operating point not reached", record);
  return record;
}

// Shared by c_acc and C_rec: near-proper runs on random degree-2 nets.
std::vector<suites::NearProperRun> near_proper_runs(std::size_t budget, std::uint64_t seed, LearnerConfig& cfg) {
  cfg.epsilon = 0.25;
  cfg.degree_bound = 2;
  const Rng root(seed);
  std::vector<suites::NearProperRun> runs;
  for (std::size_t t = 0; t < budget; ++t) {
    const Rng trial = root.substream(t);
    Rng gen = trial.substream(0);
    const BayesNetModel truth = suites::random_markov_net(8, 2, gen);
    runs.push_back(suites::near_proper_run(truth, cfg, trial.substream(1), 0.0));
  }
  return runs;
}

Json near_proper_protocol(const LearnerConfig& cfg) {
  return {{"n", 8}, {"d", 2}, {"epsilon", cfg.epsilon}, {"c", cfg.c},
          {"m1_multiplier", cfg.m1_multiplier}, {"m2_multiplier", cfg.m2_multiplier},
          {"cpt_range", {suites::kCptLow, suites::kCptHigh}}};
}

Json calibrate_c_acc(std::size_t budget, std::uint64_t seed) {
  LearnerConfig cfg;
  const auto runs = near_proper_runs(budget, seed, cfg);
  std::vector<double> need;
  for (const auto& r : runs) need.push_back(r.required_c_acc(cfg.epsilon));
  const double q = nearest_rank_quantile(need, kOperatingQuantile);
  const double value = round_up(std::max(q, 0.01), 0.01);
  const auto ok = std::count_if(need.begin(), need.end(), [&](double v) { return v <= value; });
  return {{"value", value},
          {"seed", seed},
          {"trials", budget},
          {"operating_point",
           "smallest c_acc (step 0.01) with P(S) >= 1 - c_acc eps^2 and chi2_S <= c_acc eps^2 in 0.9 of runs"},
          {"protocol", near_proper_protocol(cfg)},
          {"quantile", q},
          {"achieved_rate", static_cast<double>(ok) / static_cast<double>(need.size())}};
}

Json calibrate_c_rec(std::size_t budget, std::uint64_t seed) {
  LearnerConfig cfg;
  const auto runs = near_proper_runs(budget, seed, cfg);
  std::vector<double> need;
  for (const auto& r : runs) need.push_back(std::max(r.audit.required_c_rec, 0.0));
  const double q = nearest_rank_quantile(need, kOperatingQuantile);
  const double value = round_up(std::max(q, 0.01), 0.01);
  const auto ok = std::count_if(need.begin(), need.end(), [&](double v) { return v <= value; });
  return {{"value", value},
          {"seed", seed},
          {"trials", budget},
          {"operating_point", "smallest C_rec (step 0.01) with no flagged prefix step in 0.9 of runs"},
          {"protocol", near_proper_protocol(cfg)},
          {"quantile", q},
          {"achieved_rate", static_cast<double>(ok) / static_cast<double>(need.size())}};
}

Json calibrate_c_k_check(std::size_t budget, std::uint64_t seed) {
  constexpr std::size_t size = 64;
  constexpr double eps = 0.1;
  constexpr double delta = 0.01;
  constexpr double max_exceed = 0.01;
  const std::vector<double> grid{0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  const int k = choose_k(delta);
  const auto names = suites::risk_target_names();

  Json tried = Json::array();
  for (const double big_c : grid) {
    const std::size_t n_samples = suites::risk_sample_size(big_c, size, eps, delta);
    Json rates = Json::object();
    bool ok = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto report = high_prob_risk_experiment(suites::risk_target(names[i], size), n_samples, k, budget,
                                                    delta, Rng(seed).substream(i).key());
      const double rate = report.fraction_above(eps);
      rates[names[i]] = rate;
      ok = ok && rate <= max_exceed;
    }
    tried.push_back({{"C", big_c}, {"n_samples", n_samples}, {"exceed_rate", rates}});
    if (ok) {
      return {{"value", big_c},
              {"seed", seed},
              {"trials", budget},
              {"operating_point", "smallest C on the grid with fraction chi2 > eps at most 0.01 on every target"},
              {"protocol", {{"alphabet", size}, {"epsilon", eps}, {"delta", delta}, {"k", k}, {"grid", grid},
                            {"targets", names}}},
              {"tried", tried}};
    }
  }
  throw CalibrationError("no C on the grid reaches the operating point", Json{{"tried", tried}});
}

}  // namespace

std::vector<std::string> calibration_targets() { return {"gamma", "c_acc", "C_rec", "c_K-check"}; }

std::size_t minimum_budget(const std::string& target) {
  if (target == "gamma") return 60;
  if (target == "c_acc" || target == "C_rec") return 20;
  if (target == "c_K-check") return 100;
  throw std::invalid_argument("unknown calibration target '" + target + "'");
}

std::size_t default_budget(const std::string& target) {
  if (target == "gamma") return 1200;
  if (target == "c_acc" || target == "C_rec") return 100;
  if (target == "c_K-check") return 1000;
  throw std::invalid_argument("unknown calibration target '" + target + "'");
}

Json calibrate(const std::string& target, std::size_t budget, std::uint64_t seed) {
  require_budget(target, budget);
  if (target == "gamma") return calibrate_gamma(budget, seed);
  if (target == "c_acc") return calibrate_c_acc(budget, seed);
  if (target == "C_rec") return calibrate_c_rec(budget, seed);
  return calibrate_c_k_check(budget, seed);
}

double calibrated_value(const Json& calibration, const std::string& target) {
  if (!calibration.contains(target) || !calibration[target].contains("value"))
    throw FormatError("calibration file has no value for '" + target + "'");
  return calibration[target]["value"].get<double>();
}

}  // namespace degtest
