#include "degtest/divergence.hpp"

#include <algorithm>
#include <vector>

namespace degtest {

double bernoulli_chi2(double p1, double q1) {
  const double diff = p1 - q1;
  const double d2 = diff * diff;
  double total = 0.0;
  for (const auto& [pv, qv] : {std::pair{p1, q1}, std::pair{1.0 - p1, 1.0 - q1}}) {
    if (qv <= 0.0) {
      if (pv > 0.0) return kInfinity;
      continue;
    }
    total += d2 / qv;
  }
  return total;
}

FactorizationCheck conditional_chi2_factorization_check(const BayesNetModel& p, const BayesNetModel& q,
                                                        const std::optional<Subset>& subset) {
  if (!(p.dag == q.dag)) throw std::invalid_argument("factorization check: nets must share a dag");
  const DenseDistribution pd = exact_distribution(p);
  const DenseDistribution qd = exact_distribution(q);

  FactorizationCheck out;
  out.lhs = 1.0 + chi2(pd, qd);
  out.rhs = 1.0;
  for (int i = 0; i < p.n(); ++i) {
    double worst = 0.0;
    const auto& prow = p.cpt[static_cast<std::size_t>(i)];
    const auto& qrow = q.cpt[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < prow.size(); ++c) worst = std::max(worst, bernoulli_chi2(prow[c], qrow[c]));
    out.rhs *= 1.0 + worst;
  }
  out.holds = out.lhs <= out.rhs + 1e-10;
  if (subset) {
    const auto forms = chi2_restricted_forms(pd.mass, qd.mass, *subset);
    out.lhs_restricted = 2.0 * mass_on(pd.mass, *subset) - mass_on(qd.mass, *subset) + forms.direct;
  }
  return out;
}

double certify_tv_far_from_degree0(const DenseDistribution& p, double grid_resolution) {
  if (p.n > 4) throw std::invalid_argument("certify_tv_far_from_degree0: n must be at most 4");
  if (!(grid_resolution > 0.0 && grid_resolution <= 0.5))
    throw std::invalid_argument("certify_tv_far_from_degree0: grid_resolution must lie in (0, 0.5]");

  // Every point of [0,1] is within step/2 of this grid.
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double v = k * grid_resolution;
    if (v >= 1.0 - 1e-12) break;
    grid.push_back(v);
  }
  grid.push_back(1.0);

  const int n = p.n;
  const std::size_t cells = std::size_t{1} << n;
  // partial[i] holds the product over bits < i for the current grid prefix.
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(n) + 1);
  partial[0] = {1.0};
  double best = kInfinity;

  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      double s = 0.0;
      for (std::size_t x = 0; x < cells; ++x) s += std::abs(p.mass[static_cast<Eigen::Index>(x)] - partial[static_cast<std::size_t>(n)][x]);
      best = std::min(best, 0.5 * s);
      return;
    }
    const auto& prev = partial[static_cast<std::size_t>(depth)];
    auto& next = partial[static_cast<std::size_t>(depth) + 1];
    next.resize(prev.size() * 2);
    for (double g : grid) {
      for (std::size_t x = 0; x < prev.size(); ++x) {
        next[x] = prev[x] * (1.0 - g);
        next[x + prev.size()] = prev[x] * g;
      }
      self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
  return best - n * grid_resolution / 2.0;
}

}  // namespace degtest
