#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mark0 {

/// SplitMix64 finalizer. Used to spread user seeds over the generator state
/// and to derive independent per-run seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for a task addressed by a path of indices below a base seed, e.g.
/// derive_seed(base, {ix, iy, replicate}). Depends only on the path, so the
/// result is independent of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform [0, 1) source over std::mt19937_64. The 53-bit conversion is done
/// here so the stream is identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(splitmix64(seed)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace mark0
