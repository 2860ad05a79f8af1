#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "degtest/bayesnet.hpp"
#include "degtest/distribution.hpp"

namespace degtest {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Membership table over {0,1}^n indexed by Assignment.
using Subset = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

template <typename DP, typename DQ>
void require_same_size(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("divergence: dimension mismatch");
}

}  // namespace detail

/// (1/2) sum |p - q|
template <typename DP, typename DQ>
double tv(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q) {
  detail::require_same_size(p, q);
  CompensatedSum s;
  for (Eigen::Index i = 0; i < p.size(); ++i) s.add(std::abs(double(p[i]) - double(q[i])));
  return 0.5 * s.value();
}

/// sum p log(p/q), 0 log 0 = 0; +inf when p > 0 = q.
template <typename DP, typename DQ>
double kl(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q) {
  detail::require_same_size(p, q);
  CompensatedSum s;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p[i], qi = q[i];
    if (pi <= 0.0) continue;
    if (qi <= 0.0) return kInfinity;
    s.add(pi * std::log(pi / qi));
  }
  return s.value();
}

/// 1 - sum sqrt(p q)
template <typename DP, typename DQ>
double hellinger_sq(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q) {
  detail::require_same_size(p, q);
  CompensatedSum s;
  for (Eigen::Index i = 0; i < p.size(); ++i) s.add(std::sqrt(double(p[i]) * double(q[i])));
  return std::max(0.0, 1.0 - s.value());
}

/// sum (p - q)^2 / q; 0/0 terms vanish, p > 0 = q gives +inf.
template <typename DP, typename DQ>
double chi2(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q) {
  detail::require_same_size(p, q);
  CompensatedSum s;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p[i], qi = q[i];
    if (qi <= 0.0) {
      if (pi > 0.0) return kInfinity;
      continue;
    }
    const double diff = pi - qi;
    s.add(diff * diff / qi);
  }
  return s.value();
}

inline double tv(const DenseDistribution& p, const DenseDistribution& q) { return tv(p.mass, q.mass); }
inline double kl(const DenseDistribution& p, const DenseDistribution& q) { return kl(p.mass, q.mass); }
inline double hellinger_sq(const DenseDistribution& p, const DenseDistribution& q) {
  return hellinger_sq(p.mass, q.mass);
}
inline double chi2(const DenseDistribution& p, const DenseDistribution& q) { return chi2(p.mass, q.mass); }

/// Two distributions on the same domain together with a subset S of it.
struct RestrictedPair {
  DenseDistribution p;
  DenseDistribution q;
  Subset subset;
};

/// chi^2 restricted to S, in the direct form and in the expanded form
/// -2 P(S) + Q(S) + sum_{x in S} p^2/q.
struct RestrictedChi2 {
  double direct = 0.0;
  double expanded = 0.0;
};

/// Throws std::domain_error if q vanishes somewhere on S.
template <typename DP, typename DQ>
RestrictedChi2 chi2_restricted_forms(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q,
                                     const Subset& subset) {
  detail::require_same_size(p, q);
  if (subset.size() != p.size()) throw std::invalid_argument("chi2_restricted: subset size mismatch");
  CompensatedSum direct, p_mass, q_mass, ratio;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!subset[i]) continue;
    const double pi = p[i], qi = q[i];
    if (!(qi > 0.0)) throw std::domain_error("chi2_restricted: q vanishes inside the subset");
    const double diff = pi - qi;
    direct.add(diff * diff / qi);
    p_mass.add(pi);
    q_mass.add(qi);
    ratio.add(pi * pi / qi);
  }
  return {direct.value(), -2.0 * p_mass.value() + q_mass.value() + ratio.value()};
}

template <typename DP, typename DQ>
double chi2_restricted(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q, const Subset& subset) {
  return chi2_restricted_forms(p, q, subset).direct;
}

inline double chi2_restricted(const RestrictedPair& pair) {
  if (pair.p.n != pair.q.n) throw std::invalid_argument("chi2_restricted: dimension mismatch");
  return chi2_restricted(pair.p.mass, pair.q.mass, pair.subset);
}

/// (1/2) sum_{x in S} |p - q|, the unnormalized TV restricted to S.
template <typename DP, typename DQ>
double tv_restricted(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q, const Subset& subset) {
  detail::require_same_size(p, q);
  CompensatedSum s;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (subset[i]) s.add(std::abs(double(p[i]) - double(q[i])));
  return 0.5 * s.value();
}

template <typename D>
double mass_on(const Eigen::MatrixBase<D>& p, const Subset& subset) {
  CompensatedSum s;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (subset[i]) s.add(p[i]);
  return s.value();
}

/// Squared Hellinger split as sum_{x in S} (sqrt p - sqrt q)^2 / 2 plus the
/// same sum over the complement; the two parts add up to hellinger_sq.
struct HellingerSplit {
  double on_subset = 0.0;
  double off_subset = 0.0;
};

template <typename DP, typename DQ>
HellingerSplit hellinger_sq_split(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q,
                                  const Subset& subset) {
  detail::require_same_size(p, q);
  if (subset.size() != p.size()) throw std::invalid_argument("hellinger_sq_split: subset size mismatch");
  CompensatedSum on, off;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double diff = std::sqrt(double(p[i])) - std::sqrt(double(q[i]));
    (subset[i] ? on : off).add(0.5 * diff * diff);
  }
  return {on.value(), off.value()};
}

/// 1 + chi2(P, Q) against the product over nodes of (1 + worst per-conditional chi2).
struct FactorizationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  /// 2 P(S) - Q(S) + chi2(P_S, Q_S) when a subset was supplied.
  std::optional<double> lhs_restricted;
};

/// chi^2 between Bernoulli(p1) and Bernoulli(q1).
double bernoulli_chi2(double p1, double q1);

/// Both nets must share a dag; throws std::invalid_argument otherwise.
FactorizationCheck conditional_chi2_factorization_check(const BayesNetModel& p, const BayesNetModel& q,
                                                        const std::optional<Subset>& subset = std::nullopt);

/// Lower bound on min over product distributions r of tv(p, r), from a grid
/// search with per-coordinate step `grid_resolution` minus the Lipschitz
/// slack n * step / 2. Requires n <= 4.
double certify_tv_far_from_degree0(const DenseDistribution& p, double grid_resolution);

}  // namespace degtest
