#pragma once

#include <cstdint>

namespace netbandit {

// Counter-based random streams. Every draw is a pure function of
// (seed, purpose, ctr0, ctr1), so two consumers keyed differently never
// perturb each other's stream. This is what makes paired-seed policy
// comparison exact: the environment draw for base-arm i at time t is
// identical no matter which actions the policy has taken so far.
namespace rng {

// Stream separation tags.
inline constexpr std::uint64_t kPurposeBaseArm = 1;   // environment X_i(t) draws
inline constexpr std::uint64_t kPurposeDelivery = 2;  // sporadic-delivery coins
inline constexpr std::uint64_t kPurposePolicy = 3;    // policy-internal randomness
inline constexpr std::uint64_t kPurposeEnvSetup = 4;  // theta sampling etc.
inline constexpr std::uint64_t kPurposeGraphGen = 5;  // graph generators

inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t purpose,
                          std::uint64_t ctr0, std::uint64_t ctr1) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ mix64(purpose));
  h = mix64(h ^ mix64(ctr0));
  h = mix64(h ^ mix64(ctr1));
  return h;
}

// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform(std::uint64_t seed, std::uint64_t purpose,
                      std::uint64_t ctr0, std::uint64_t ctr1) {
  return static_cast<double>(hash(seed, purpose, ctr0, ctr1) >> 11) *
         0x1.0p-53;
}

inline bool bernoulli(double p, std::uint64_t seed, std::uint64_t purpose,
                      std::uint64_t ctr0, std::uint64_t ctr1) {
  return uniform(seed, purpose, ctr0, ctr1) < p;
}

}  // namespace rng

// Sequential view over one (seed, purpose, stream) key, for generators that
// need an unbounded number of draws (shuffles, rejection sampling).
class SequentialRng {
 public:
  SequentialRng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t stream)
      : seed_(seed), purpose_(purpose), stream_(stream) {}

  double uniform() { return rng::uniform(seed_, purpose_, stream_, next_++); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) %
           n;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t purpose_;
  std::uint64_t stream_;
  std::uint64_t next_ = 0;
};

}  // namespace netbandit
