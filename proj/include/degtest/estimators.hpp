#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace degtest {

/// Occurrence counts over a finite alphabet {0, ..., domain_size - 1}.
struct SampleCounts {
  std::vector<std::uint64_t> count;
  std::uint64_t total = 0;

  SampleCounts() = default;
  explicit SampleCounts(std::vector<std::uint64_t> counts);

  [[nodiscard]] std::size_t domain_size() const { return count.size(); }

  static SampleCounts tally(std::span<const std::uint64_t> symbols, std::size_t domain_size);
};

/// Add-K estimate (N_i + k) / (N + k |Sigma|). k = 0 is the empirical
/// estimator and needs N > 0.
Eigen::VectorXd add_k_estimate(const SampleCounts& counts, double k);

/// max(1, ceil(c_k * ln(1/delta))).
int choose_k(double delta, double c_k = 1.0);

/// Empirical q-quantile by nearest rank: the ceil(q * T)-th smallest value.
double nearest_rank_quantile(std::vector<double> values, double q);

struct RiskReport {
  std::size_t domain_size = 0;
  std::size_t n_samples = 0;
  double k = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double bound_multiple = 0.0;
  /// bound_multiple * |Sigma| ln(|Sigma|/delta) / N
  double bound = 0.0;

  std::vector<double> chi2;                 // per trial
  std::vector<std::uint64_t> trial_stream;  // substream key of each trial

  double quantile = 0.0;  // (1 - delta)-quantile of chi2
  double mean = 0.0;
  double exceed_fraction = 0.0;  // fraction of trials with chi2 > bound

  /// Fraction of trials with chi2 strictly above `threshold`.
  [[nodiscard]] double fraction_above(double threshold) const;
};

/// T independent trials; trial t uses Rng(seed).substream(t) to draw N
/// samples from p, fits add-K, and records chi2(p, estimate).
RiskReport high_prob_risk_experiment(const Eigen::VectorXd& p, std::size_t n_samples, double k, std::size_t trials,
                                     double delta, std::uint64_t seed, double bound_multiple = 1.0);

}  // namespace degtest
