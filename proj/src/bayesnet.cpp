#include "degtest/bayesnet.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

namespace degtest {

namespace {

std::string cycle_message(const std::vector<int>& cycle) {
  std::ostringstream os;
  os << "cycle detected:";
  for (int v : cycle) os << ' ' << v;
  return os.str();
}

void check_parent_indices(const Dag& dag) {
  if (static_cast<int>(dag.parents.size()) != dag.n)
    throw std::invalid_argument("Dag: parents list size differs from n");
  for (int i = 0; i < dag.n; ++i)
    for (int p : dag.parents[static_cast<std::size_t>(i)])
      if (p < 0 || p >= dag.n) throw std::invalid_argument("Dag: parent index out of range");
}

void check_oracle_cap(int n, int cap, const char* what) {
  if (n > cap) {
    std::ostringstream os;
    os << what << ": n = " << n << " exceeds cap " << cap;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

CycleError::CycleError(std::vector<int> cycle)
    : std::runtime_error(cycle_message(cycle)), cycle_(std::move(cycle)) {}

Dag Dag::empty(int n) { return Dag{n, std::vector<std::vector<int>>(static_cast<std::size_t>(n))}; }

int Dag::max_in_degree() const {
  std::size_t best = 0;
  for (const auto& ps : parents) best = std::max(best, ps.size());
  return static_cast<int>(best);
}

std::vector<int> topological_order(const Dag& dag) {
  check_parent_indices(dag);
  const auto n = static_cast<std::size_t>(dag.n);
  std::vector<int> pending(n, 0);
  std::vector<std::vector<int>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int p : dag.parents[i]) {
      children[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
      ++pending[i];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (pending[i] == 0) ready.push(static_cast<int>(i));

  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int c : children[static_cast<std::size_t>(v)])
      if (--pending[static_cast<std::size_t>(c)] == 0) ready.push(c);
  }
  if (order.size() == n) return order;

  // Every leftover node has a leftover parent; walk parents until a repeat.
  int v = 0;
  while (pending[static_cast<std::size_t>(v)] == 0) ++v;
  std::vector<int> seen_at(n, -1);
  std::vector<int> walk;
  while (seen_at[static_cast<std::size_t>(v)] < 0) {
    seen_at[static_cast<std::size_t>(v)] = static_cast<int>(walk.size());
    walk.push_back(v);
    for (int p : dag.parents[static_cast<std::size_t>(v)]) {
      if (pending[static_cast<std::size_t>(p)] > 0) {
        v = p;
        break;
      }
    }
  }
  std::vector<int> cycle(walk.begin() + seen_at[static_cast<std::size_t>(v)], walk.end());
  std::reverse(cycle.begin(), cycle.end());  // parent -> child direction
  throw CycleError(std::move(cycle));
}

std::vector<std::string> validate(const Dag& dag, int d) {
  std::vector<std::string> issues;
  if (static_cast<int>(dag.parents.size()) != dag.n) {
    issues.push_back("parents list has " + std::to_string(dag.parents.size()) + " entries, expected " +
                     std::to_string(dag.n));
    return issues;
  }
  bool indices_ok = true;
  for (int i = 0; i < dag.n; ++i) {
    const auto& ps = dag.parents[static_cast<std::size_t>(i)];
    std::set<int> distinct;
    for (int p : ps) {
      if (p < 0 || p >= dag.n) {
        issues.push_back("parent " + std::to_string(p) + " of node " + std::to_string(i) + " out of range");
        indices_ok = false;
      } else if (p == i) {
        issues.push_back("self-loop at " + std::to_string(i));
        indices_ok = false;
      }
      if (!distinct.insert(p).second)
        issues.push_back("duplicate parent " + std::to_string(p) + " at node " + std::to_string(i));
    }
    if (static_cast<int>(ps.size()) > d)
      issues.push_back("in-degree " + std::to_string(ps.size()) + " > " + std::to_string(d) + " at node " +
                       std::to_string(i));
  }
  if (indices_ok) {
    try {
      topological_order(dag);
    } catch (const CycleError& e) {
      issues.emplace_back(e.what());
    }
  }
  return issues;
}

std::vector<std::string> validate(const BayesNetModel& net, int d) {
  auto issues = validate(net.dag, d);
  if (net.cpt.size() != static_cast<std::size_t>(net.dag.n)) {
    issues.push_back("cpt has " + std::to_string(net.cpt.size()) + " rows, expected " + std::to_string(net.dag.n));
    return issues;
  }
  for (int i = 0; i < net.dag.n; ++i) {
    const auto& row = net.cpt[static_cast<std::size_t>(i)];
    if (net.dag.parents[static_cast<std::size_t>(i)].size() < 63 && row.size() != net.dag.num_configs(i)) {
      issues.push_back("cpt row " + std::to_string(i) + " has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(net.dag.num_configs(i)));
      continue;
    }
    for (std::size_t c = 0; c < row.size(); ++c)
      if (!(row[c] >= 0.0 && row[c] <= 1.0))
        issues.push_back("cpt entry (" + std::to_string(i) + ", " + std::to_string(c) + ") outside [0,1]");
  }
  return issues;
}

namespace {

Assignment draw_one(const BayesNetModel& net, const std::vector<int>& order, Rng& rng) {
  Assignment x = 0;
  for (int v : order) {
    const double p1 = net.cpt[static_cast<std::size_t>(v)][net.dag.parent_config(v, x)];
    if (rng.uniform() < p1) x |= Assignment{1} << v;
  }
  return x;
}

}  // namespace

std::vector<Assignment> sample(const BayesNetModel& net, std::size_t m, Rng& rng) {
  const auto order = topological_order(net.dag);
  std::vector<Assignment> out(m);
  for (auto& x : out) x = draw_one(net, order, rng);
  return out;
}

std::vector<Assignment> sample(const BayesNetModel& net, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  return sample(net, m, rng);
}

double exact_probability(const BayesNetModel& net, Assignment x) {
  double prob = 1.0;
  for (int i = 0; i < net.dag.n; ++i) prob *= net.conditional(i, x);
  return prob;
}

DenseDistribution exact_distribution(const BayesNetModel& net, int cap) {
  check_oracle_cap(net.n(), cap, "exact_distribution");
  Eigen::VectorXd mass(Eigen::Index{1} << net.n());
  for (Eigen::Index x = 0; x < mass.size(); ++x) mass[x] = exact_probability(net, static_cast<Assignment>(x));
  return {net.n(), std::move(mass)};
}

std::vector<Dag> enumerate_dags(int n, int d, int cap) {
  check_oracle_cap(n, cap, "enumerate_dags");
  if (n < 0 || d < 0) throw std::invalid_argument("enumerate_dags: n and d must be nonnegative");

  // Candidate parent sets per node as bitmasks, ranked by size then lexicographically.
  std::vector<std::vector<std::uint32_t>> candidates(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<std::vector<int>> sets;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (mask & (1u << i)) continue;
      if (std::popcount(mask) > d) continue;
      std::vector<int> members;
      for (int j = 0; j < n; ++j)
        if (mask & (1u << j)) members.push_back(j);
      sets.push_back(std::move(members));
    }
    std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (const auto& s : sets) {
      std::uint32_t mask = 0;
      for (int j : s) mask |= 1u << j;
      candidates[static_cast<std::size_t>(i)].push_back(mask);
    }
  }

  auto acyclic = [n](const std::vector<std::uint32_t>& parent_masks) {
    std::uint32_t placed = 0;
    for (int round = 0; round < n; ++round) {
      std::uint32_t added = 0;
      for (int i = 0; i < n; ++i)
        if (!(placed & (1u << i)) && (parent_masks[static_cast<std::size_t>(i)] & ~placed) == 0) added |= 1u << i;
      if (added == 0) break;
      placed |= added;
    }
    return placed == (n == 32 ? ~0u : (1u << n) - 1u);
  };

  std::vector<Dag> out;
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(n));
  while (true) {
    for (int i = 0; i < n; ++i) masks[static_cast<std::size_t>(i)] = candidates[static_cast<std::size_t>(i)][digit[static_cast<std::size_t>(i)]];
    if (acyclic(masks)) {
      Dag dag = Dag::empty(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (masks[static_cast<std::size_t>(i)] & (1u << j)) dag.parents[static_cast<std::size_t>(i)].push_back(j);
      out.push_back(std::move(dag));
    }
    int pos = n - 1;
    while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] == candidates[static_cast<std::size_t>(pos)].size()) {
      digit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

BayesNetModel kl_projection(const DenseDistribution& p, const Dag& dag, int cap) {
  check_oracle_cap(p.n, cap, "kl_projection");
  if (p.n != dag.n) throw std::invalid_argument("kl_projection: dimension mismatch");
  check_parent_indices(dag);
  BayesNetModel net{dag, {}};
  net.cpt.resize(static_cast<std::size_t>(dag.n));
  for (int i = 0; i < dag.n; ++i) {
    const std::size_t configs = dag.num_configs(i);
    std::vector<double> parent_mass(configs, 0.0), joint_one(configs, 0.0);
    for (Eigen::Index xi = 0; xi < p.mass.size(); ++xi) {
      const auto x = static_cast<Assignment>(xi);
      const std::size_t c = dag.parent_config(i, x);
      parent_mass[c] += p.mass[xi];
      if (bit(x, i)) joint_one[c] += p.mass[xi];
    }
    auto& row = net.cpt[static_cast<std::size_t>(i)];
    row.resize(configs);
    for (std::size_t c = 0; c < configs; ++c)
      row[c] = parent_mass[c] > 0.0 ? std::clamp(joint_one[c] / parent_mass[c], 0.0, 1.0) : 0.5;
  }
  return net;
}

NetSampler::NetSampler(BayesNetModel net) : net_(std::move(net)), order_(topological_order(net_.dag)) {}

std::vector<Assignment> NetSampler::draw(std::size_t m, Rng& rng) const {
  std::vector<Assignment> out(m);
  for (auto& x : out) x = draw_one(net_, order_, rng);
  return out;
}

DenseSampler::DenseSampler(DenseDistribution p)
    : p_(std::move(p)), table_(std::span<const double>(p_.mass.data(), p_.size())) {}

std::vector<Assignment> DenseSampler::draw(std::size_t m, Rng& rng) const {
  std::vector<Assignment> out(m);
  for (auto& x : out) x = static_cast<Assignment>(table_(rng));
  return out;
}

Dag random_dag(int n, int d, Rng& rng) {
  Dag dag = Dag::empty(n);
  for (int i = 1; i < n; ++i) {
    std::vector<int> pool(static_cast<std::size_t>(i));
    for (int j = 0; j < i; ++j) pool[static_cast<std::size_t>(j)] = j;
    const int k = std::min(d, i);
    // Partial Fisher-Yates.
    for (int j = 0; j < k; ++j) {
      const auto r = static_cast<std::size_t>(j) + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(i - j));
      std::swap(pool[static_cast<std::size_t>(j)], pool[r]);
    }
    auto& ps = dag.parents[static_cast<std::size_t>(i)];
    ps.assign(pool.begin(), pool.begin() + k);
    std::sort(ps.begin(), ps.end());
  }
  return dag;
}

BayesNetModel random_net(const Dag& dag, Rng& rng, double lo, double hi) {
  BayesNetModel net{dag, {}};
  net.cpt.resize(static_cast<std::size_t>(dag.n));
  for (int i = 0; i < dag.n; ++i) {
    auto& row = net.cpt[static_cast<std::size_t>(i)];
    row.resize(dag.num_configs(i));
    for (auto& v : row) v = lo + (hi - lo) * rng.uniform();
  }
  return net;
}

}  // namespace degtest
