#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace h22 {

/// xoshiro256** seeded through splitmix64.
///
/// Every variate is produced by code in this file, so a given seed yields the
/// same stream on every platform:
///   - uniform(): top 53 bits of next() scaled by 2^-53, in [0, 1);
///   - normal(): Box-Muller on two uniforms, the sine branch cached for the
///     following call.
/// Independent streams come from derive_seed(master, index), which runs
/// splitmix64 over master + (index + 1) * 0x9E3779B97F4A7C15.
class Rng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kAlgorithm =
      "xoshiro256** (splitmix64 seeding; derive_seed = splitmix64(master + (index+1)*0x9E3779B97F4A7C15); "
      "uniform = (next>>11)*2^-53; normal = Box-Muller with cached pair)";

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

  std::uint64_t next();
  double uniform();
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace h22
