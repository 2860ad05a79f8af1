#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "degtest/distribution.hpp"
#include "degtest/rng.hpp"

namespace degtest {

/// Directed graph on n nodes given by per-node ordered parent lists.
/// The parent order fixes the parent-configuration index of each node.
struct Dag {
  int n = 0;
  std::vector<std::vector<int>> parents;

  static Dag empty(int n);

  [[nodiscard]] int max_in_degree() const;

  /// Little-endian packing of the parent values of `node` under x, in
  /// declared parent order.
  [[nodiscard]] std::size_t parent_config(int node, Assignment x) const {
    std::size_t config = 0;
    const auto& ps = parents[static_cast<std::size_t>(node)];
    for (std::size_t j = 0; j < ps.size(); ++j) config |= static_cast<std::size_t>(bit(x, ps[j])) << j;
    return config;
  }

  [[nodiscard]] std::size_t num_configs(int node) const {
    return std::size_t{1} << parents[static_cast<std::size_t>(node)].size();
  }

  friend bool operator==(const Dag&, const Dag&) = default;
};

class CycleError : public std::runtime_error {
 public:
  explicit CycleError(std::vector<int> cycle);
  [[nodiscard]] const std::vector<int>& cycle() const { return cycle_; }

 private:
  std::vector<int> cycle_;
};

/// Parents before children, lowest index first among ready nodes.
/// Throws CycleError naming one cycle.
std::vector<int> topological_order(const Dag& dag);

/// Bayes net on {0,1}^n: cpt[i][config] = Pr[X_i = 1 | parents of i = config].
struct BayesNetModel {
  Dag dag;
  std::vector<std::vector<double>> cpt;

  [[nodiscard]] int n() const { return dag.n; }

  /// Pr[X_node = x_node | parents] under x.
  [[nodiscard]] double conditional(int node, Assignment x) const {
    const double p1 = cpt[static_cast<std::size_t>(node)][dag.parent_config(node, x)];
    return bit(x, node) ? p1 : 1.0 - p1;
  }

  friend bool operator==(const BayesNetModel&, const BayesNetModel&) = default;
};

/// Every structural and CPT violation; empty when the net is a valid
/// degree-`d` Bayes net.
std::vector<std::string> validate(const BayesNetModel& net, int d);
std::vector<std::string> validate(const Dag& dag, int d);

std::vector<Assignment> sample(const BayesNetModel& net, std::size_t m, Rng& rng);
std::vector<Assignment> sample(const BayesNetModel& net, std::size_t m, std::uint64_t seed);

double exact_probability(const BayesNetModel& net, Assignment x);

DenseDistribution exact_distribution(const BayesNetModel& net, int cap = kDefaultOracleCap);

/// All labeled DAGs on n nodes with in-degree <= d, each exactly once.
/// Order: odometer over per-node parent-set choices (node 0 most
/// significant), each node's candidates ranked by size then lexicographically.
std::vector<Dag> enumerate_dags(int n, int d, int cap = 5);

/// Net on `dag` whose CPTs are p's exact conditionals. Parent configurations
/// with zero mass under p get 0.5.
BayesNetModel kl_projection(const DenseDistribution& p, const Dag& dag, int cap = kDefaultOracleCap);

/// Source of i.i.d. samples from some distribution on {0,1}^n.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  [[nodiscard]] virtual int dimension() const = 0;
  virtual std::vector<Assignment> draw(std::size_t m, Rng& rng) const = 0;
};

class NetSampler final : public SampleSource {
 public:
  explicit NetSampler(BayesNetModel net);
  [[nodiscard]] int dimension() const override { return net_.n(); }
  std::vector<Assignment> draw(std::size_t m, Rng& rng) const override;
  [[nodiscard]] const BayesNetModel& net() const { return net_; }

 private:
  BayesNetModel net_;
  std::vector<int> order_;
};

class DenseSampler final : public SampleSource {
 public:
  explicit DenseSampler(DenseDistribution p);
  [[nodiscard]] int dimension() const override { return p_.n; }
  std::vector<Assignment> draw(std::size_t m, Rng& rng) const override;
  [[nodiscard]] const DenseDistribution& distribution() const { return p_; }

 private:
  DenseDistribution p_;
  AliasTable table_;
};

/// Random DAG whose labels are already a topological order: node i picks
/// min(d, i) distinct parents uniformly among 0..i-1.
Dag random_dag(int n, int d, Rng& rng);

/// Random CPTs on `dag`, entries uniform in [lo, hi].
BayesNetModel random_net(const Dag& dag, Rng& rng, double lo = 0.0, double hi = 1.0);

}  // namespace degtest
