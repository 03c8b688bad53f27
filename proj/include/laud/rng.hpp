#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace laud {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// 64-bit FNV-1a. Used for feature hashing and for keying per-request
// substreams, so its output is part of the on-disk reproducibility contract.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// xoshiro256** (Blackman & Vigna), state expanded from the seed with
/// SplitMix64. Bounded integers use rejection sampling so that draws are
/// identical on every platform and standard library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Independent purposes within one run. The numeric values are fixed: a
/// substream seed is `seed ^ purpose ^ (index * 0x9E3779B97F4A7C15)`.
enum class Stream : std::uint64_t {
  selection = 0x5345'4C45'4354'0001ULL,
  evaluation = 0x4556'414C'5541'0002ULL,
  training = 0x5452'4149'4E49'0003ULL,
  noise = 0x4E4F'4953'4559'0004ULL,
  synth = 0x5359'4E54'4845'0005ULL,
};

Rng substream(std::uint64_t seed, Stream purpose, std::uint64_t index = 0) noexcept;

/// `count` distinct indices from [0, population), in draw order (partial
/// Fisher-Yates). Requires count <= population.
std::vector<std::size_t> sample_indices(Rng& rng, std::size_t population, std::size_t count);

}  // namespace laud
