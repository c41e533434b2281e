#ifndef PDSTSP_RNG_HPP
#define PDSTSP_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace pdstsp {

/// xoshiro256** seeded through splitmix64.
///
/// The standard library distributions are implementation-defined, so every
/// draw used by the generators and heuristics goes through the members below,
/// whose output is fixed bit-for-bit on any platform:
///   uniform01()  = (next() >> 11) * 2^-53
///   below(n)     = Lemire multiply-shift with rejection
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Independent generator for a numbered sub-stream.
  Rng fork(std::uint64_t stream) const;

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace pdstsp

#endif  // PDSTSP_RNG_HPP
