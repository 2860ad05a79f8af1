#include "degtest/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "degtest/divergence.hpp"

namespace degtest::suites {

BayesNetModel random_markov_net(int n, int d, Rng& rng) {
  const Dag dag = random_dag(n, d, rng);
  return random_net(dag, rng, kCptLow, kCptHigh);
}

std::vector<std::string> risk_target_names() { return {"uniform", "zipf", "step"}; }

Eigen::VectorXd risk_target(const std::string& name, std::size_t size) {
  const auto k = static_cast<Eigen::Index>(size);
  Eigen::VectorXd p(k);
  if (name == "uniform") {
    p.setConstant(1.0 / static_cast<double>(size));
  } else if (name == "zipf") {
    for (Eigen::Index i = 0; i < k; ++i) p[i] = 1.0 / static_cast<double>(i + 1);
    p /= p.sum();
  } else if (name == "step") {
    const Eigen::Index heavy = std::max<Eigen::Index>(1, k / 4);
    for (Eigen::Index i = 0; i < k; ++i)
      p[i] = i < heavy ? 0.8 / static_cast<double>(heavy) : 0.2 / static_cast<double>(k - heavy);
  } else {
    throw std::invalid_argument("unknown risk target '" + name + "' (expected uniform, zipf or step)");
  }
  return p;
}

std::size_t risk_sample_size(double big_c, std::size_t domain_size, double epsilon, double delta) {
  const double sigma = static_cast<double>(domain_size);
  return static_cast<std::size_t>(std::ceil(big_c * (sigma / epsilon) * std::log(sigma / delta)));
}

DenseDistribution antipodal_core() {
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(8);
  mass[0] = 0.5;
  mass[7] = 0.5;
  return {3, std::move(mass)};
}

DenseDistribution random_far_core(Rng& rng) {
  const Assignment a = rng() % 8;
  const Assignment b = a ^ 7u;
  const double w = 0.35 + 0.3 * rng.uniform();
  const double noise = 0.1 * rng.uniform();
  Eigen::VectorXd mass = Eigen::VectorXd::Constant(8, noise / 8.0);
  mass[static_cast<Eigen::Index>(a)] += (1.0 - noise) * w;
  mass[static_cast<Eigen::Index>(b)] += (1.0 - noise) * (1.0 - w);
  return {3, std::move(mass)};
}

DenseDistribution embed_with_padding(const DenseDistribution& core, int pad_bits) {
  return DenseDistribution::concat(core, DenseDistribution::uniform(pad_bits));
}

std::vector<std::vector<double>> exact_pair_masses(const DenseDistribution& p, const Dag& dag) {
  if (p.n != dag.n) throw std::invalid_argument("exact_pair_masses: dimension mismatch");
  std::vector<std::vector<double>> out(static_cast<std::size_t>(dag.n));
  for (int i = 0; i < dag.n; ++i) out[static_cast<std::size_t>(i)].assign(2 * dag.num_configs(i), 0.0);
  for (Eigen::Index xi = 0; xi < p.mass.size(); ++xi) {
    const auto x = static_cast<Assignment>(xi);
    for (int i = 0; i < dag.n; ++i)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(bit(x, i)) + 2 * dag.parent_config(i, x)] += p.mass[xi];
  }
  return out;
}

bool support_sandwich_holds(const SupportMask& mask, const DenseDistribution& p, const LearnerConfig& cfg) {
  const Dag& dag = mask.dag();
  const int d = cfg.degree_for(dag);
  const double unit = cfg.c * cfg.epsilon * cfg.epsilon / (std::ldexp(1.0, d + 1) * dag.n);
  const auto masses = exact_pair_masses(p, dag);
  for (int i = 0; i < dag.n; ++i) {
    const auto& row = masses[static_cast<std::size_t>(i)];
    for (std::size_t idx = 0; idx < row.size(); ++idx) {
      const bool kept = mask.keep(i, static_cast<int>(idx % 2), idx / 2);
      if (row[idx] >= 4.0 * unit && !kept) return false;
      if (row[idx] <= unit && kept) return false;
    }
  }
  return true;
}

double NearProperRun::required_c_acc(double epsilon) const {
  return std::max(restricted_chi2, 1.0 - support_mass) / (epsilon * epsilon);
}

NearProperRun near_proper_run(const BayesNetModel& truth, const LearnerConfig& cfg, const Rng& rng, double c_rec) {
  const NetSampler source(truth);
  const NearProperResult learned = near_proper_learn(source, truth.dag, cfg, rng);
  const DenseDistribution p = exact_distribution(truth);
  const DenseDistribution q = exact_distribution(learned.q);
  const Subset subset = support_subset(learned.mask);

  NearProperRun run;
  run.support_mass = mass_on(p.mass, subset);
  const auto forms = chi2_restricted_forms(p.mass, q.mass, subset);
  run.restricted_chi2 = forms.direct;
  run.ratio_term = forms.expanded + 2.0 * run.support_mass - mass_on(q.mass, subset);
  run.valid = validate(learned.q, cfg.degree_for(truth.dag)).empty();
  run.excluded_pairs = learned.mask.excluded().size();
  try {
    const DenseDistribution shifted = exact_distribution(mass_shift(learned.q, learned.mask));
    const auto shifted_forms = chi2_restricted_forms(p.mass, shifted.mass, subset);
    run.shift_ok = true;
    run.shifted_mass = mass_on(shifted.mass, subset);
    run.shifted_chi2 = shifted_forms.direct;
    run.shifted_ratio_term = shifted_forms.expanded + 2.0 * run.support_mass - run.shifted_mass;
  } catch (const std::domain_error&) {
    run.shift_ok = false;
  }
  run.audit = prefix_recurrence_audit(p, learned.q, learned.mask, cfg, c_rec);
  return run;
}

}  // namespace degtest::suites
