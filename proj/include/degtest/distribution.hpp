#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace degtest {

/// Full assignment x in {0,1}^n, packed little-endian: bit i holds x_i.
using Assignment = std::uint64_t;

inline int bit(Assignment x, int i) { return static_cast<int>((x >> i) & 1u); }

/// Largest n for which dense 2^n oracles are materialized by default.
inline constexpr int kDefaultOracleCap = 20;

/// Exact probability vector over {0,1}^n, indexed by Assignment.
struct DenseDistribution {
  int n = 0;
  Eigen::VectorXd mass;

  DenseDistribution() = default;
  DenseDistribution(int n, Eigen::VectorXd mass);

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(mass.size()); }
  double operator[](Assignment x) const { return mass[static_cast<Eigen::Index>(x)]; }

  static DenseDistribution uniform(int n);
  static DenseDistribution point_mass(int n, Assignment x);
  /// Independent bits with Pr[X_i = 1] = marginals[i].
  static DenseDistribution product(std::span<const double> marginals);
  /// Joint of two independent blocks; `low` occupies the low bits.
  static DenseDistribution concat(const DenseDistribution& low, const DenseDistribution& high);

  /// Entries nonnegative and summing to 1 within `tol`.
  [[nodiscard]] bool is_normalized(double tol = 1e-12) const;
};

/// Pr[X_i = 1] for every i.
std::vector<double> marginals(const DenseDistribution& p);

}  // namespace degtest
