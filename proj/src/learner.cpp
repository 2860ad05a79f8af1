#include "degtest/learner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace degtest {

void LearnerConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("LearnerConfig: epsilon must lie in (0, 1)");
  if (!(c > 0.0 && m1_multiplier > 0.0 && m2_multiplier > 0.0))
    throw std::invalid_argument("LearnerConfig: constants must be positive");
  if (k_override && !(*k_override > 0.0)) throw std::invalid_argument("LearnerConfig: k_override must be positive");
  if (degree_bound && *degree_bound < 0) throw std::invalid_argument("LearnerConfig: negative degree bound");
}

std::size_t support_sample_size(int n, int d, const LearnerConfig& cfg) {
  const double configs = std::ldexp(1.0, d + 1) * n;
  const double m = cfg.m1_multiplier * configs * std::log(6.0 * configs) / (cfg.c * cfg.epsilon * cfg.epsilon);
  return static_cast<std::size_t>(std::ceil(m));
}

std::size_t learn_sample_size(int n, int d, const LearnerConfig& cfg) {
  const double width = std::ldexp(1.0, d) * n;
  const double m = cfg.m2_multiplier * cfg.c * width * n * std::log(std::max(width, 2.0)) /
                   (cfg.epsilon * cfg.epsilon);
  return static_cast<std::size_t>(std::ceil(m));
}

double exclusion_threshold(int n, int d, const LearnerConfig& cfg) {
  return 2.0 * cfg.c * cfg.epsilon * cfg.epsilon / (std::ldexp(1.0, d + 1) * n);
}

double smoothing_for(int n, int d, const LearnerConfig& cfg) {
  if (cfg.k_override) return *cfg.k_override;
  return std::ceil(std::log(6.0 * std::ldexp(1.0, d + 1) * n));
}

PairCounts PairCounts::tally(const Dag& dag, std::span<const Assignment> samples) {
  PairCounts out;
  out.total = samples.size();
  out.count.resize(static_cast<std::size_t>(dag.n));
  for (int i = 0; i < dag.n; ++i) out.count[static_cast<std::size_t>(i)].assign(2 * dag.num_configs(i), 0);
  for (Assignment x : samples)
    for (int i = 0; i < dag.n; ++i)
      ++out.count[static_cast<std::size_t>(i)][static_cast<std::size_t>(bit(x, i)) + 2 * dag.parent_config(i, x)];
  return out;
}

SupportMask::SupportMask(Dag dag) : dag_(std::move(dag)), order_(topological_order(dag_)) {
  keep_.resize(static_cast<std::size_t>(dag_.n));
  for (int i = 0; i < dag_.n; ++i) keep_[static_cast<std::size_t>(i)].assign(2 * dag_.num_configs(i), 1);
}

void SupportMask::exclude(int node, int value, std::size_t config) {
  if (node < 0 || node >= dag_.n || (value != 0 && value != 1) || config >= dag_.num_configs(node))
    throw std::out_of_range("SupportMask::exclude: pair outside the table");
  keep_[static_cast<std::size_t>(node)][static_cast<std::size_t>(value) + 2 * config] = 0;
}

std::vector<ExcludedPair> SupportMask::excluded() const {
  std::vector<ExcludedPair> out;
  for (int i = 0; i < dag_.n; ++i) {
    const auto& row = keep_[static_cast<std::size_t>(i)];
    for (std::size_t idx = 0; idx < row.size(); ++idx)
      if (!row[idx]) out.push_back({i, static_cast<int>(idx % 2), idx / 2});
  }
  return out;
}

bool SupportMask::contains(Assignment x, int k) const {
  if (k < 0 || k > dag_.n) throw std::out_of_range("SupportMask::contains: prefix length out of range");
  for (int j = 0; j < k; ++j) {
    const int node = order_[static_cast<std::size_t>(j)];
    if (!keep(node, bit(x, node), dag_.parent_config(node, x))) return false;
  }
  return true;
}

Subset support_subset(const SupportMask& mask, int cap) {
  if (mask.n() > cap) throw std::invalid_argument("support_subset: n exceeds oracle cap");
  Subset out(Eigen::Index{1} << mask.n());
  for (Eigen::Index x = 0; x < out.size(); ++x) out[x] = mask.contains(static_cast<Assignment>(x));
  return out;
}

SupportMask identify_support_from_samples(std::span<const Assignment> samples, const Dag& dag,
                                          const LearnerConfig& cfg) {
  cfg.validate();
  SupportMask mask(dag);
  const PairCounts counts = PairCounts::tally(dag, samples);
  const double threshold = exclusion_threshold(dag.n, cfg.degree_for(dag), cfg);
  const double m = static_cast<double>(samples.size());
  for (int i = 0; i < dag.n; ++i)
    for (std::size_t config = 0; config < dag.num_configs(i); ++config)
      for (int value = 0; value < 2; ++value) {
        const double freq = m > 0.0 ? static_cast<double>(counts.at(i, value, config)) / m : 0.0;
        if (freq <= threshold) mask.exclude(i, value, config);
      }
  return mask;
}

SupportMask identify_support(const SampleSource& source, const Dag& dag, const LearnerConfig& cfg, Rng& rng) {
  const auto samples = source.draw(support_sample_size(dag.n, cfg.degree_for(dag), cfg), rng);
  return identify_support_from_samples(samples, dag, cfg);
}

BayesNetModel fit_conditionals(std::span<const Assignment> samples, const Dag& dag, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("fit_conditionals: smoothing must be positive");
  const PairCounts counts = PairCounts::tally(dag, samples);
  BayesNetModel q{dag, {}};
  q.cpt.resize(static_cast<std::size_t>(dag.n));
  for (int i = 0; i < dag.n; ++i) {
    auto& row = q.cpt[static_cast<std::size_t>(i)];
    row.resize(dag.num_configs(i));
    for (std::size_t config = 0; config < row.size(); ++config) {
      const double zero = k + static_cast<double>(counts.at(i, 0, config));
      const double one = k + static_cast<double>(counts.at(i, 1, config));
      row[config] = one / (zero + one);
    }
  }
  return q;
}

NearProperResult near_proper_learn_from_batches(std::span<const Assignment> support_batch,
                                                std::span<const Assignment> learn_batch, const Dag& dag,
                                                const LearnerConfig& cfg) {
  cfg.validate();
  const int d = cfg.degree_for(dag);
  NearProperResult out{BayesNetModel{}, identify_support_from_samples(support_batch, dag, cfg), support_batch.size(),
                       learn_batch.size(), smoothing_for(dag.n, d, cfg)};
  out.q = fit_conditionals(learn_batch, dag, out.k);
  return out;
}

NearProperResult near_proper_learn(const SampleSource& source, const Dag& dag, const LearnerConfig& cfg,
                                   const Rng& rng) {
  cfg.validate();
  const int d = cfg.degree_for(dag);
  Rng support_rng = rng.substream(0);
  Rng learn_rng = rng.substream(1);
  const auto support_batch = source.draw(support_sample_size(dag.n, d, cfg), support_rng);
  const auto learn_batch = source.draw(learn_sample_size(dag.n, d, cfg), learn_rng);
  return near_proper_learn_from_batches(support_batch, learn_batch, dag, cfg);
}

NearProperResult near_proper_learn(const SampleSource& source, const Dag& dag, const LearnerConfig& cfg,
                                   std::uint64_t seed) {
  return near_proper_learn(source, dag, cfg, Rng(seed));
}

namespace {

/// True when some assignment of the ancestors of `node` satisfies every keep
/// constraint among them and puts the parents of `node` at `config`.
bool config_reachable(const SupportMask& mask, int node, std::size_t config) {
  const Dag& dag = mask.dag();
  std::vector<char> is_ancestor(static_cast<std::size_t>(dag.n), 0);
  std::vector<int> stack(dag.parents[static_cast<std::size_t>(node)]);
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (is_ancestor[static_cast<std::size_t>(v)]) continue;
    is_ancestor[static_cast<std::size_t>(v)] = 1;
    for (int p : dag.parents[static_cast<std::size_t>(v)]) stack.push_back(p);
  }
  std::vector<int> ancestors;
  for (int v : mask.order())
    if (is_ancestor[static_cast<std::size_t>(v)]) ancestors.push_back(v);

  // Values forced by the target configuration.
  std::vector<int> forced(static_cast<std::size_t>(dag.n), -1);
  const auto& ps = dag.parents[static_cast<std::size_t>(node)];
  for (std::size_t j = 0; j < ps.size(); ++j) forced[static_cast<std::size_t>(ps[j])] = static_cast<int>((config >> j) & 1u);

  auto search = [&](auto&& self, std::size_t depth, Assignment x) -> bool {
    if (depth == ancestors.size()) return true;
    const int v = ancestors[depth];
    const std::size_t pc = dag.parent_config(v, x);
    for (int value = 0; value < 2; ++value) {
      if (forced[static_cast<std::size_t>(v)] >= 0 && forced[static_cast<std::size_t>(v)] != value) continue;
      if (!mask.keep(v, value, pc)) continue;
      const Assignment next = value ? (x | (Assignment{1} << v)) : x;
      if (self(self, depth + 1, next)) return true;
    }
    return false;
  };
  return search(search, 0, 0);
}

}  // namespace

BayesNetModel mass_shift(const BayesNetModel& q, const SupportMask& mask) {
  if (!(q.dag == mask.dag())) throw std::invalid_argument("mass_shift: model and mask use different dags");
  BayesNetModel shifted = q;
  for (int node : mask.order()) {
    auto& row = shifted.cpt[static_cast<std::size_t>(node)];
    for (std::size_t config = 0; config < row.size(); ++config) {
      const bool keep0 = mask.keep(node, 0, config);
      const bool keep1 = mask.keep(node, 1, config);
      if (keep0 && keep1) continue;
      if (keep1) {
        row[config] = 1.0;
      } else if (keep0) {
        row[config] = 0.0;
      } else if (config_reachable(mask, node, config)) {
        std::ostringstream os;
        os << "mass_shift: degenerate mask, node " << node << " parent configuration " << config
           << " is reachable but has no kept child value";
        throw std::domain_error(os.str());
      }
    }
  }
  return shifted;
}

bool RecurrenceAudit::any_flagged() const {
  return std::any_of(steps.begin(), steps.end(), [](const PrefixStep& s) { return s.flagged; });
}

RecurrenceAudit prefix_recurrence_audit(const DenseDistribution& p, const BayesNetModel& q, const SupportMask& mask,
                                        const LearnerConfig& cfg, double c_rec, int cap) {
  const int n = p.n;
  if (n > cap) throw std::invalid_argument("prefix_recurrence_audit: n exceeds oracle cap");
  if (q.n() != n || mask.n() != n) throw std::invalid_argument("prefix_recurrence_audit: dimension mismatch");
  const auto& order = mask.order();

  RecurrenceAudit audit;
  audit.c_rec = c_rec;
  audit.required_c_rec = 0.0;
  const double eps2 = cfg.epsilon * cfg.epsilon;
  const double growth = 1.0 + 1.0 / n;

  double prev = 0.0;
  for (int k = 0; k <= n; ++k) {
    const Eigen::Index size = Eigen::Index{1} << k;
    // Compact index: bit j <-> node order[j].
    auto expand = [&](Eigen::Index c) {
      Assignment x = 0;
      for (int j = 0; j < k; ++j)
        if ((c >> j) & 1) x |= Assignment{1} << order[static_cast<std::size_t>(j)];
      return x;
    };
    Eigen::VectorXd p_marg = Eigen::VectorXd::Zero(size);
    for (Eigen::Index xi = 0; xi < p.mass.size(); ++xi) {
      Eigen::Index c = 0;
      for (int j = 0; j < k; ++j) c |= Eigen::Index{bit(static_cast<Assignment>(xi), order[static_cast<std::size_t>(j)])} << j;
      p_marg[c] += p.mass[xi];
    }
    Eigen::VectorXd q_marg(size);
    Subset subset(size);
    for (Eigen::Index c = 0; c < size; ++c) {
      const Assignment x = expand(c);
      double prob = 1.0;
      for (int j = 0; j < k; ++j) prob *= q.conditional(order[static_cast<std::size_t>(j)], x);
      q_marg[c] = prob;
      subset[c] = mask.contains(x, k);
    }

    const auto forms = chi2_restricted_forms(p_marg, q_marg, subset);
    PrefixStep step;
    step.k = k;
    step.divergence = forms.direct;
    step.expanded = forms.expanded;
    step.p_mass = mass_on(p_marg, subset);
    step.q_mass = mass_on(q_marg, subset);
    if (k > 0) {
      step.gap = step.divergence - growth * prev;
      step.bound = growth * prev + c_rec * eps2 / n;
      step.flagged = step.divergence > step.bound + 1e-12;
      audit.required_c_rec = std::max(audit.required_c_rec, n * step.gap / eps2);
    }
    audit.steps.push_back(step);
    prev = step.divergence;
  }
  return audit;
}

}  // namespace degtest
