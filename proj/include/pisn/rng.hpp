#pragma once

// Seeded RNG with a fixed uniform mapping. std::uniform_real_distribution is
// implementation-defined, so draws go through an explicit 53-bit conversion
// to keep runs bit-reproducible.

#include <cstdint>
#include <random>

namespace pisn {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t bits() { return gen_(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pisn
