#ifndef SENTIKIT_RANDOM_H_
#define SENTIKIT_RANDOM_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace sentikit {

// SplitMix64. Used instead of the <random> engines+distributions because the
// standard distributions are implementation-defined, and every artifact has
// to be reproducible across machines from its manifest seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) without modulo bias.
  uint64_t below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [0, 1).
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() >> 63) != 0; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

// Seed for the `counter`-th consumer of a master seed (fold i, replicate r).
inline uint64_t derive_seed(uint64_t master, uint64_t counter) {
  Rng rng(master ^ (0xD1B54A32D192ED03ULL * (counter + 1)));
  return rng.next();
}

}  // namespace sentikit

#endif  // SENTIKIT_RANDOM_H_
