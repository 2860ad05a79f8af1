#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace degtest {

/// Counter-based generator (Philox4x32-10). The full state is (key, counter),
/// so a stream is a pure function of its seed and the path of substream
/// indices that produced it. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  /// Independent child stream keyed by `index`. Does not advance *this.
  [[nodiscard]] Rng substream(std::uint64_t index) const;

  result_type operator()();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t poisson(double mean);

  [[nodiscard]] std::uint64_t key() const {
    return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
  }

 private:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Rng(Key key) : key_(key) {}

  static Block philox(Block ctr, Key key);
  void refill();

  Key key_{};
  Block counter_{};
  Block buffer_{};
  int buffered_ = 0;  // 64-bit words left in buffer_
};

/// Walker alias table over a finite set of weights; O(1) per draw.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);

  std::size_t operator()(Rng& rng) const;
  [[nodiscard]] std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace degtest
