#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace diffnet {

// splitmix64 finalizer; used both as a bit mixer and for key derivation.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream key from a base seed and a tag path, e.g.
// {tag, run, node}. Identical inputs give identical keys, so every logical
// stream is replayable regardless of scheduling.
inline uint64_t derive_key(uint64_t seed, std::initializer_list<uint64_t> tags) {
  uint64_t k = mix64(seed ^ 0x8e9c2f0b6a5d31c7ULL);
  for (uint64_t t : tags) {
    k = mix64(k ^ mix64(t + 0xd1342543de82ef95ULL));
  }
  return k;
}

// xoshiro256++ seeded from a 64-bit key expanded through splitmix64.
// Gaussian draws use the Marsaglia polar method so the byte stream does not
// depend on any library's distribution internals.
class RngStream {
 public:
  explicit RngStream(uint64_t key) {
    uint64_t s = key;
    for (auto& word : state_) {
      s += 0x9e3779b97f4a7c15ULL;
      word = mix64(s);
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Tags separating the independent stream families of one experiment.
enum StreamTag : uint64_t {
  kStreamWalk = 1,        // random-walk increments, per run
  kStreamRegressor = 2,   // regressor samples, per run and node
  kStreamNoise = 3,       // measurement noise, per run and node
  kStreamNoiseVar = 4,    // one-off draw of per-node noise powers
  kStreamWInit = 5,       // one-off draw of the initial parameter vector
  kStreamTest = 900,      // scratch streams in tests
};

}  // namespace diffnet
