#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace asbench {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: the n-th draw is a pure function of (key, n),
/// so independent substreams can be handed to parallel workers and the
/// results never depend on scheduling. Output is identical on every
/// platform because no std:: distribution is involved.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(splitmix64(seed ^ splitmix64(stream ^ 0x632be59bd9b4e019ULL))) {}

  [[nodiscard]] CounterRng substream(std::uint64_t stream) const noexcept {
    return CounterRng(key_, stream);
  }

  std::uint64_t next() noexcept { return splitmix64(key_ ^ splitmix64(counter_++)); }

  /// Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n) noexcept {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t draw;
    do {
      draw = next();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
  }

  template <typename T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace asbench
