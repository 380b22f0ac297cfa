#ifndef THMC_RNG_HPP
#define THMC_RNG_HPP

#include <cstdint>
#include <random>

namespace thmc {

// Seeded generator with fixed draw recipes, so results are reproducible
// independently of standard-library distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform state in 1..S.
  int state(int n_states) {
    return 1 + static_cast<int>(below(static_cast<std::uint64_t>(n_states)));
  }

  bool coin() { return (next() & 1) != 0; }

private:
  std::mt19937_64 gen_;
};

}  // namespace thmc

#endif
