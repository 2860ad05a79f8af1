#include "degtest/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace degtest {

DenseDistribution::DenseDistribution(int n, Eigen::VectorXd mass) : n(n), mass(std::move(mass)) {
  if (n < 0 || n > 62) throw std::invalid_argument("DenseDistribution: n out of range");
  if (this->mass.size() != (Eigen::Index{1} << n))
    throw std::invalid_argument("DenseDistribution: mass vector must have 2^n entries");
}

DenseDistribution DenseDistribution::uniform(int n) {
  const Eigen::Index size = Eigen::Index{1} << n;
  return {n, Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size))};
}

DenseDistribution DenseDistribution::point_mass(int n, Assignment x) {
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(Eigen::Index{1} << n);
  mass[static_cast<Eigen::Index>(x)] = 1.0;
  return {n, std::move(mass)};
}

DenseDistribution DenseDistribution::product(std::span<const double> marginals) {
  const int n = static_cast<int>(marginals.size());
  Eigen::VectorXd mass(Eigen::Index{1} << n);
  for (Eigen::Index x = 0; x < mass.size(); ++x) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i) {
      const double p1 = marginals[static_cast<std::size_t>(i)];
      prob *= bit(static_cast<Assignment>(x), i) ? p1 : 1.0 - p1;
    }
    mass[x] = prob;
  }
  return {n, std::move(mass)};
}

DenseDistribution DenseDistribution::concat(const DenseDistribution& low, const DenseDistribution& high) {
  const int n = low.n + high.n;
  Eigen::VectorXd mass(Eigen::Index{1} << n);
  const Eigen::Index low_size = low.mass.size();
  for (Eigen::Index h = 0; h < high.mass.size(); ++h)
    mass.segment(h * low_size, low_size) = high.mass[h] * low.mass;
  return {n, std::move(mass)};
}

bool DenseDistribution::is_normalized(double tol) const {
  if ((mass.array() < 0.0).any()) return false;
  return std::abs(mass.sum() - 1.0) <= tol;
}

std::vector<double> marginals(const DenseDistribution& p) {
  std::vector<double> out(static_cast<std::size_t>(p.n), 0.0);
  for (Eigen::Index x = 0; x < p.mass.size(); ++x)
    for (int i = 0; i < p.n; ++i)
      if (bit(static_cast<Assignment>(x), i)) out[static_cast<std::size_t>(i)] += p.mass[x];
  return out;
}

}  // namespace degtest
