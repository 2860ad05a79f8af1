#pragma once

// Instance generators and per-run measurements shared by the calibration
// protocols, the acceptance suite and the CLI.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "degtest/bayesnet.hpp"
#include "degtest/learner.hpp"
#include "degtest/tester.hpp"

namespace degtest::suites {

/// CPT range of the random Markov instances. Every conditional lies in
/// [0.1, 0.9], so every parent configuration of a degree-2 net has mass
/// at least 0.01.
inline constexpr double kCptLow = 0.1;
inline constexpr double kCptHigh = 0.9;

/// Random dag (labels in topological order) with random CPTs in the range above.
BayesNetModel random_markov_net(int n, int d, Rng& rng);

/// Named targets over an alphabet of `size` symbols: "uniform", "zipf"
/// (p_i proportional to 1/(i+1)) and "step" (first quarter of the symbols
/// shares 0.8 of the mass).
Eigen::VectorXd risk_target(const std::string& name, std::size_t size);
std::vector<std::string> risk_target_names();

/// N = ceil(C * (|Sigma| / eps) * ln(|Sigma| / delta))
std::size_t risk_sample_size(double big_c, std::size_t domain_size, double epsilon, double delta);

/// Half the mass on 000, half on 111.
DenseDistribution antipodal_core();

/// Random 3-bit distribution: a noisy mixture of two antipodal points.
DenseDistribution random_far_core(Rng& rng);

/// core (low bits) times `pad_bits` independent fair bits.
DenseDistribution embed_with_padding(const DenseDistribution& core, int pad_bits);

/// Exact P(X_i = b, Pi_i = a) for every node, indexed [node][b + 2a].
std::vector<std::vector<double>> exact_pair_masses(const DenseDistribution& p, const Dag& dag);

/// Pairs of mass >= 4 c eps^2/(2^(d+1) n) kept and pairs of mass
/// <= c eps^2/(2^(d+1) n) excluded, simultaneously.
bool support_sandwich_holds(const SupportMask& mask, const DenseDistribution& p, const LearnerConfig& cfg);

/// Measurements of one near-proper learning run against an exact truth.
struct NearProperRun {
  double support_mass = 0.0;       // P(S)
  double restricted_chi2 = 0.0;    // chi2(P, Q, S)
  bool valid = false;              // Q passes validate(., d)
  bool shift_ok = false;           // mass_shift did not throw
  double shifted_mass = 0.0;       // Q~(S)
  double shifted_chi2 = 0.0;       // chi2(P, Q~, S)
  double ratio_term = 0.0;         // sum_S P^2 / Q
  double shifted_ratio_term = 0.0; // sum_S P^2 / Q~
  std::size_t excluded_pairs = 0;
  RecurrenceAudit audit;
  /// max(chi2(P,Q,S), 1 - P(S)) / eps^2
  [[nodiscard]] double required_c_acc(double epsilon) const;
};

NearProperRun near_proper_run(const BayesNetModel& truth, const LearnerConfig& cfg, const Rng& rng, double c_rec);

}  // namespace degtest::suites
