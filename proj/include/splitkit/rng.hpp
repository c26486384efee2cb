#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace splitkit {

/// Counter-based pseudo-random generator: the SplitMix64 finalizer applied
/// to `seed + (counter+1) * golden`. The k-th output depends only on
/// (seed, k), so streams are reproducible across platforms and can be
/// forked without sharing state. Normal deviates use Box-Muller.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Seed of an independent child stream.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return finalize(seed + kGolden * (stream + 1));
  }

  std::uint64_t next_u64() { return finalize(seed_ + kGolden * (++counter_)); }

  /// Uniform on [0,1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1]; safe as a log() argument.
  double next_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal deviate.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(next_open()));
    const double theta = 2.0 * std::numbers::pi * next_double();
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Unbiased uniform integer in [0, bound) via rejection.
  std::uint64_t next_index(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::next_index: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// First n entries of a seeded partial Fisher-Yates shuffle of 0..total-1:
/// a uniform sample without replacement, in sampled order.
inline std::vector<std::int64_t> sample_without_replacement(std::int64_t total,
                                                            std::int64_t n, Rng& rng) {
  if (n < 0 || n > total)
    throw std::invalid_argument("sample_without_replacement: n out of range");
  std::vector<std::int64_t> idx(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(rng.next_index(static_cast<std::uint64_t>(total - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(n));
  return idx;
}

}  // namespace splitkit
