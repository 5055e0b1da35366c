#ifndef EPON_RNG_HPP
#define EPON_RNG_HPP

#include <cmath>
#include <cstdint>

namespace epon::rng {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t combine(std::uint64_t key, std::uint64_t v) {
  return mix(key ^ (v + 0x9E3779B97F4A7C15ull + (key << 6) + (key >> 2)));
}

// Counter-based stream: the n-th draw is a pure function of (key, n), so
// streams keyed by (seed, replication, onu, purpose) are independent and
// insensitive to scheduling order across replications.
struct Stream {
  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_bits() { return mix(key + counter++ * 0x9E3779B97F4A7C15ull); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }
};

inline Stream make_stream(std::uint64_t seed, std::uint64_t replication, std::uint64_t onu,
                          std::uint64_t purpose) {
  std::uint64_t k = mix(seed);
  k = combine(k, replication);
  k = combine(k, onu);
  k = combine(k, purpose);
  return Stream{k, 0};
}

}  // namespace epon::rng

#endif  // EPON_RNG_HPP
