#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "degtest/bayesnet.hpp"
#include "degtest/divergence.hpp"
#include "degtest/rng.hpp"

namespace degtest {

struct LearnerConfig {
  double epsilon = 0.25;
  /// Threshold constant of the effective-support definitions.
  double c = 1.0;
  double m1_multiplier = 3.0;
  double m2_multiplier = 4.0;
  std::optional<double> k_override;
  /// Degree d used in the sample-size and threshold formulas; defaults to
  /// the dag's max in-degree.
  std::optional<int> degree_bound;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  [[nodiscard]] int degree_for(const Dag& dag) const { return degree_bound.value_or(dag.max_in_degree()); }
};

/// ceil(m1 * 2^(d+1) n ln(6 * 2^(d+1) n) / (c eps^2))
std::size_t support_sample_size(int n, int d, const LearnerConfig& cfg);
/// ceil(m2 * c * 2^d n^2 ln(max(2^d n, 2)) / eps^2)
std::size_t learn_sample_size(int n, int d, const LearnerConfig& cfg);
/// Pairs with empirical frequency at or below 2 c eps^2 / (2^(d+1) n) are excluded.
double exclusion_threshold(int n, int d, const LearnerConfig& cfg);
/// ceil(ln(6 * 2^(d+1) n)) unless overridden.
double smoothing_for(int n, int d, const LearnerConfig& cfg);

/// Counts N_{x_i, pi_i} for every node, indexed [node][value + 2 * config].
struct PairCounts {
  std::vector<std::vector<std::uint64_t>> count;
  std::uint64_t total = 0;

  static PairCounts tally(const Dag& dag, std::span<const Assignment> samples);
  [[nodiscard]] std::uint64_t at(int node, int value, std::size_t config) const {
    return count[static_cast<std::size_t>(node)][static_cast<std::size_t>(value) + 2 * config];
  }
};

/// Excluded (node, value, parent-configuration) triple.
struct ExcludedPair {
  int node = 0;
  int value = 0;
  std::size_t config = 0;
  friend bool operator==(const ExcludedPair&, const ExcludedPair&) = default;
};

/// Per-node keep table over (x_i, pi_i). Membership of an assignment is the
/// conjunction of keep(i, x_i, pi_i(x)); the prefix of length k uses the first
/// k nodes of the dag's topological order.
class SupportMask {
 public:
  explicit SupportMask(Dag dag);

  [[nodiscard]] const Dag& dag() const { return dag_; }
  [[nodiscard]] const std::vector<int>& order() const { return order_; }
  [[nodiscard]] int n() const { return dag_.n; }

  [[nodiscard]] bool keep(int node, int value, std::size_t config) const {
    return keep_[static_cast<std::size_t>(node)][static_cast<std::size_t>(value) + 2 * config] != 0;
  }
  void exclude(int node, int value, std::size_t config);

  [[nodiscard]] std::vector<ExcludedPair> excluded() const;
  [[nodiscard]] bool contains(Assignment x, int k) const;
  [[nodiscard]] bool contains(Assignment x) const { return contains(x, dag_.n); }

 private:
  Dag dag_;
  std::vector<int> order_;
  std::vector<std::vector<char>> keep_;
};

inline bool support_contains(const SupportMask& mask, Assignment x, int k) { return mask.contains(x, k); }

/// Dense membership table of the full support over {0,1}^n (n <= cap).
Subset support_subset(const SupportMask& mask, int cap = kDefaultOracleCap);

/// Exclusion rule applied to an already-drawn batch.
SupportMask identify_support_from_samples(std::span<const Assignment> samples, const Dag& dag,
                                          const LearnerConfig& cfg);

/// Draws support_sample_size(...) samples from `source` with `rng`.
SupportMask identify_support(const SampleSource& source, const Dag& dag, const LearnerConfig& cfg, Rng& rng);

/// Q(x_i | pi_i) = (K + N_{x_i,pi_i}) / sum_{x'} (K + N_{x',pi_i}).
BayesNetModel fit_conditionals(std::span<const Assignment> samples, const Dag& dag, double k);

struct NearProperResult {
  BayesNetModel q;
  SupportMask mask;
  std::size_t support_samples = 0;
  std::size_t learn_samples = 0;
  double k = 0.0;
};

/// Support identification on its own batch (substream 0), then add-K fitting
/// on a fresh batch (substream 1).
NearProperResult near_proper_learn(const SampleSource& source, const Dag& dag, const LearnerConfig& cfg,
                                   const Rng& rng);
NearProperResult near_proper_learn(const SampleSource& source, const Dag& dag, const LearnerConfig& cfg,
                                   std::uint64_t seed);
NearProperResult near_proper_learn_from_batches(std::span<const Assignment> support_batch,
                                                std::span<const Assignment> learn_batch, const Dag& dag,
                                                const LearnerConfig& cfg);

/// Renormalizes each conditional onto its kept child values. A parent
/// configuration whose child values are all excluded is left untouched when
/// no prefix of the support can reach it; if one can, throws
/// std::domain_error.
BayesNetModel mass_shift(const BayesNetModel& q, const SupportMask& mask);

struct PrefixStep {
  int k = 0;
  double divergence = 0.0;  // chi2 of prefix marginals on the prefix support
  double expanded = 0.0;    // same via -2P(S)+Q(S)+sum p^2/q
  double p_mass = 0.0;      // P(S_k)
  double q_mass = 0.0;      // Q(S_k)
  double bound = 0.0;       // (1+1/n) prev + C_rec eps^2 / n
  double gap = 0.0;         // divergence - (1+1/n) prev
  bool flagged = false;
};

struct RecurrenceAudit {
  std::vector<PrefixStep> steps;  // k = 0..n
  double c_rec = 0.0;
  /// Smallest C_rec that would clear every step: max_k n * gap_k / eps^2.
  double required_c_rec = 0.0;
  [[nodiscard]] bool any_flagged() const;
};

RecurrenceAudit prefix_recurrence_audit(const DenseDistribution& p, const BayesNetModel& q, const SupportMask& mask,
                                        const LearnerConfig& cfg, double c_rec, int cap = kDefaultOracleCap);

}  // namespace degtest
