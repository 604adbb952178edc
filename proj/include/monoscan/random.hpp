#ifndef MONOSCAN_RANDOM_HPP_
#define MONOSCAN_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace monoscan {

// Identifies the generator and the child-stream derivation. Stored in every
// quantile table so that tables from incompatible builds can be told apart.
inline constexpr std::string_view kGeneratorId =
    "mt19937_64;child=splitmix64(splitmix64(seed)^splitmix64(k+1));normal=polar";

std::uint64_t splitmix64(std::uint64_t x);

// Seed of child stream k of `seed`. Replication k of every Monte Carlo loop
// uses derive_seed(seed, k), so results do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

// Reproducible source of uniform and standard normal variates.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream child(std::uint64_t seed, std::uint64_t k) {
    return RandomStream(derive_seed(seed, k));
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal by the Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace monoscan

#endif  // MONOSCAN_RANDOM_HPP_
