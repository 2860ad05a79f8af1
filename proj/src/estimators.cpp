#include "degtest/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "degtest/divergence.hpp"
#include "degtest/rng.hpp"

namespace degtest {

SampleCounts::SampleCounts(std::vector<std::uint64_t> counts)
    : count(std::move(counts)), total(std::accumulate(count.begin(), count.end(), std::uint64_t{0})) {}

SampleCounts SampleCounts::tally(std::span<const std::uint64_t> symbols, std::size_t domain_size) {
  std::vector<std::uint64_t> counts(domain_size, 0);
  for (auto s : symbols) {
    if (s >= domain_size) throw std::out_of_range("SampleCounts::tally: symbol outside the alphabet");
    ++counts[s];
  }
  return SampleCounts(std::move(counts));
}

Eigen::VectorXd add_k_estimate(const SampleCounts& counts, double k) {
  if (k < 0.0) throw std::invalid_argument("add_k_estimate: k must be nonnegative");
  if (counts.domain_size() == 0) throw std::invalid_argument("add_k_estimate: empty alphabet");
  if (k == 0.0 && counts.total == 0) throw std::invalid_argument("add_k_estimate: k = 0 with no samples");
  const auto size = static_cast<Eigen::Index>(counts.domain_size());
  const double denom = static_cast<double>(counts.total) + k * static_cast<double>(size);
  Eigen::VectorXd out(size);
  for (Eigen::Index i = 0; i < size; ++i) out[i] = (static_cast<double>(counts.count[static_cast<std::size_t>(i)]) + k) / denom;
  return out;
}

int choose_k(double delta, double c_k) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("choose_k: delta must lie in (0, 1]");
  if (!(c_k > 0.0)) throw std::invalid_argument("choose_k: c_k must be positive");
  // Guard against ln(1/e^-5) landing a hair above 5.
  const double raw = c_k * std::log(1.0 / delta);
  const double k = std::ceil(raw - 1e-9);
  return std::max(1, static_cast<int>(k));
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("nearest_rank_quantile: no values");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size()) - 1e-9));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

double RiskReport::fraction_above(double threshold) const {
  if (chi2.empty()) return 0.0;
  const auto above = std::count_if(chi2.begin(), chi2.end(), [threshold](double v) { return v > threshold; });
  return static_cast<double>(above) / static_cast<double>(chi2.size());
}

RiskReport high_prob_risk_experiment(const Eigen::VectorXd& p, std::size_t n_samples, double k, std::size_t trials,
                                     double delta, std::uint64_t seed, double bound_multiple) {
  if (trials == 0) throw std::invalid_argument("high_prob_risk_experiment: need at least one trial");
  if (n_samples == 0) throw std::invalid_argument("high_prob_risk_experiment: need at least one sample");
  RiskReport report;
  report.domain_size = static_cast<std::size_t>(p.size());
  report.n_samples = n_samples;
  report.k = k;
  report.delta = delta;
  report.seed = seed;
  report.bound_multiple = bound_multiple;
  const double sigma = static_cast<double>(report.domain_size);
  report.bound = bound_multiple * sigma * std::log(sigma / delta) / static_cast<double>(n_samples);

  const AliasTable table(std::span<const double>(p.data(), report.domain_size));
  const Rng root(seed);
  std::vector<std::uint64_t> counts(report.domain_size);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = root.substream(t);
    report.trial_stream.push_back(rng.key());
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t s = 0; s < n_samples; ++s) ++counts[table(rng)];
    const Eigen::VectorXd estimate = add_k_estimate(SampleCounts(counts), k);
    report.chi2.push_back(chi2(p, estimate));
  }

  CompensatedSum total;
  for (double v : report.chi2) total.add(v);
  report.mean = total.value() / static_cast<double>(trials);
  report.quantile = nearest_rank_quantile(report.chi2, 1.0 - delta);
  report.exceed_fraction = report.fraction_above(report.bound);
  return report;
}

}  // namespace degtest
