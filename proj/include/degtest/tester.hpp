#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "degtest/bayesnet.hpp"
#include "degtest/learner.hpp"
#include "degtest/rng.hpp"

namespace degtest {

enum class DistanceMode { hellinger, tv };

std::string to_string(DistanceMode mode);
DistanceMode parse_mode(const std::string& text);

/// Acceptance multiplier pinned by the committed gamma calibration
/// (calibration/calibration.json); tests check the two agree.
inline constexpr double kCalibratedGamma = 1.46;

struct TesterConfig {
  double epsilon = 0.25;
  /// Accept iff statistic <= gamma * m * eps^2.
  double gamma = kCalibratedGamma;
  double m_multiplier = 1.0;
  DistanceMode mode = DistanceMode::hellinger;
  /// Amplification constant: reps = ceil(c_amp * ln(1/delta)), forced odd.
  double c_amp = 2.0;
  /// Constants for the learning stage; its epsilon is overwritten by `epsilon`.
  LearnerConfig learner;

  void validate() const;
  [[nodiscard]] LearnerConfig learner_config() const;
};

struct TestReport {
  bool accept = false;
  double statistic = 0.0;
  double threshold = 0.0;
  double m = 0.0;                        // nominal Poisson mean
  std::uint64_t poissonized_count = 0;   // realized draws
  std::uint64_t out_of_support = 0;      // draws outside the mask
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;              // key of the stream that produced this run
  // metadata
  std::string graph_id;
  int n = 0;
  int d = 0;
  double epsilon = 0.0;
  DistanceMode mode = DistanceMode::hellinger;
  bool mass_shift_applied = false;
  std::size_t support_samples = 0;
  std::size_t learn_samples = 0;
};

/// m = m_multiplier * 2^(n/2) / eps^2
double test_sample_mean(int n, const TesterConfig& cfg);

/// Poissonized identity statistic over the in-mask cells that were observed,
///   Z = sum_{x in A, N_x > 0} ((N_x - m q_x)^2 - N_x) / (m q_x) + N_out,
/// where N_out counts draws outside the mask. Accepts iff Z <= gamma m eps^2.
TestReport tolerant_test(std::span<const Assignment> samples, const BayesNetModel& q_tilde, const SupportMask& mask,
                         const TesterConfig& cfg, double m);

/// Learn on `dag` (stream 0), shift mass in Hellinger mode, then run the
/// tolerant test on Poisson(m) fresh draws (stream 1).
TestReport test_graph(const SampleSource& source, const Dag& dag, const TesterConfig& cfg, const Rng& rng);
TestReport test_graph(const SampleSource& source, const Dag& dag, const TesterConfig& cfg, std::uint64_t seed);

struct AmplifiedVerdict {
  bool accept = false;
  int accepts = 0;
  int reps = 0;
};

/// Majority over `reps` runs; run r receives rng.substream(r). reps must be odd.
AmplifiedVerdict amplify(const std::function<bool(const Rng&)>& single_test, int reps, const Rng& rng);

/// ceil(c_amp * ln(1/delta)) with delta = n^(-d n), bumped to the next odd
/// number; at least 1.
int amplification_reps(int n, int d, double c_amp);

struct DagVerdict {
  std::size_t dag_index = 0;
  AmplifiedVerdict verdict;
};

struct DegreeTestReport {
  bool accept = false;
  std::optional<Dag> accepting_dag;
  std::optional<std::size_t> accepting_index;
  std::vector<DagVerdict> tried;  // in enumeration order, up to the first accept
  std::size_t dags_total = 0;
  int reps = 0;
  int n = 0;
  int d = 0;
  double epsilon = 0.0;
  DistanceMode mode = DistanceMode::hellinger;
  std::uint64_t seed = 0;
};

/// Runs the amplified per-graph test on every dag from enumerate_dags(n, d),
/// in canonical order, stopping at the first accept. Dag g, repetition r uses
/// Rng(seed).substream(g).substream(r).
DegreeTestReport test_degree(const SampleSource& source, int n, int d, const TesterConfig& cfg, std::uint64_t seed,
                             int enumeration_cap = 5);

}  // namespace degtest
