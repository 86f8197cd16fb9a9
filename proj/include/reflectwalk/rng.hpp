#pragma once

// Counter-derived random streams. stream(seed, i) is a pure function of the
// master seed and the trajectory index, so any trajectory can be regenerated
// in isolation and results never depend on scheduling.

#include <cmath>
#include <cstdint>
#include <random>

#include "reflectwalk/linalg.hpp"

namespace reflectwalk {

namespace detail {

// splitmix64 finalizer; used only to turn (seed, index) into engine seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t trajectory_index)
      : engine_(detail::mix64(detail::mix64(master_seed) ^
                              (0xD1B54A32D192ED03ull * (trajectory_index + 1)))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1) with 53 random bits. Avoids std::uniform_real_distribution,
  // whose output sequence is implementation-defined.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// d independent fair signs.
inline Vec bernoulli_pm1(RngStream& stream, int d) {
  Vec xi(d);
  for (int i = 0; i < d; ++i) xi[i] = (stream.next_u64() >> 63) ? 1.0 : -1.0;
  return xi;
}

// d independent draws from {0, +sqrt(3), -sqrt(3)} with P(0) = 2/3 and
// P(+-sqrt(3)) = 1/6 each; matches the first five standard normal moments.
inline Vec three_point(RngStream& stream, int d) {
  static const double root3 = std::sqrt(3.0);
  Vec xi(d);
  for (int i = 0; i < d; ++i) {
    const double u = stream.next_unit();
    xi[i] = (u < 2.0 / 3.0) ? 0.0 : (u < 5.0 / 6.0 ? root3 : -root3);
  }
  return xi;
}

}  // namespace reflectwalk
