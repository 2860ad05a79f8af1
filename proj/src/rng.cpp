#include "degtest/rng.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace degtest {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

Rng::Rng(std::uint64_t seed)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

Rng::Block Rng::philox(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Rng Rng::substream(std::uint64_t index) const {
  // Domain-separated from ordinary output by the tag in the top counter word.
  const Block derived = philox({static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32), 0u, 0x5EED5EEDu},
                               key_);
  return Rng(Key{derived[0] ^ derived[2], derived[1] ^ derived[3]});
}

void Rng::refill() {
  buffer_ = philox(counter_, key_);
  buffered_ = 2;
  for (auto& word : counter_) {
    if (++word != 0) break;
  }
}

Rng::result_type Rng::operator()() {
  if (buffered_ == 0) refill();
  const int base = (2 - buffered_) * 2;
  --buffered_;
  return (static_cast<std::uint64_t>(buffer_[base + 1]) << 32) | buffer_[base];
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(*this);
}

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size()), alias_(weights.size()) {
  const std::size_t k = weights.size();
  if (k == 0) throw std::invalid_argument("AliasTable: empty weight vector");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("AliasTable: weights must have positive sum");

  std::vector<double> scaled(k);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < k; ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("AliasTable: negative weight");
    scaled[i] = weights[i] * static_cast<double>(k) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  // Leftovers from rounding. A zero-weight leftover must alias to a live entry.
  const auto heaviest = static_cast<std::size_t>(
      std::max_element(weights.begin(), weights.end()) - weights.begin());
  for (std::size_t i : small) {
    prob_[i] = weights[i] > 0.0 ? 1.0 : 0.0;
    alias_[i] = weights[i] > 0.0 ? i : heaviest;
  }
}

std::size_t AliasTable::operator()(Rng& rng) const {
  const double u = rng.uniform() * static_cast<double>(prob_.size());
  std::size_t column = static_cast<std::size_t>(u);
  if (column >= prob_.size()) column = prob_.size() - 1;
  const double frac = u - static_cast<double>(column);
  return frac < prob_[column] ? column : alias_[column];
}

}  // namespace degtest
