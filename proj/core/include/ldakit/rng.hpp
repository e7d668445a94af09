// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_RNG_HPP
#define LDAKIT_RNG_HPP

#include <cstdint>

namespace ldakit {

// All randomness in the library flows through this generator so that runs
// are reproducible bit-for-bit across platforms (the standard library's
// distributions are implementation-defined and are deliberately avoided).
//
// Stream-splitting rule: every sampling pass owns a stream derived as
//   derive_stream(seed, phase, iteration, row, col)
// where (row, col) identify the data partition the pass works on:
//   serial sweep          -> (iteration, 0, 0)
//   AD-LDA worker p       -> (iteration, p, 0)
//   blocked block (r, c)  -> (iteration, r, c)
// P=1 parallel training therefore consumes exactly the serial stream and
// reproduces serial results bit-for-bit.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class StreamPhase : std::uint64_t {
  kInit = 1,       // initial topic assignment
  kSweep = 2,      // training sweeps (serial and parallel)
  kInfer = 3,      // new-document inference
  kPartition = 4,  // block-plan permutation trials
  kVemInit = 5,    // variational EM sufficient-statistic seeding
};

inline std::uint64_t derive_stream(std::uint64_t seed, StreamPhase phase,
                                   std::uint64_t iteration = 0,
                                   std::uint64_t row = 0,
                                   std::uint64_t col = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= static_cast<std::uint64_t>(phase);
  h ^= splitmix64(s);
  s ^= iteration + 0x632be59bd9b4e019ULL;
  h ^= splitmix64(s);
  s ^= row + 0x2545f4914f6cdd1dULL;
  h ^= splitmix64(s);
  s ^= col + 0x9e6c63d0a48b2a4fULL;
  h ^= splitmix64(s);
  return h;
}

// xoshiro256++ seeded through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    for (auto& word : s_) word = splitmix64(seed);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, n) (Lemire's multiply-shift).
  std::uint32_t next_below(std::uint32_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0ULL - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace ldakit

#endif  // LDAKIT_RNG_HPP
