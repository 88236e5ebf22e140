#ifndef NPDRIFT_RNG_HPP
#define NPDRIFT_RNG_HPP

#include <cstdint>
#include <random>

namespace npdrift {

// splitmix64 mix step; used to derive well-separated substream seeds from a
// master seed plus stream coordinates (iteration, segment index, ...).
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c = 0, uint64_t d = 0) {
  uint64_t h = mix64(a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  h = mix64(h ^ d);
  return h;
}

// Seeded generator with the distributions the samplers need. Deterministic
// given the seed; substream() derives independent child generators so that
// per-segment work is reproducible regardless of scheduling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(mix64(seed ^ 0x6a09e667f3bcc908ULL)) {}

  double uniform() { return unif_(gen_); }
  double normal() { return normal_(gen_); }
  // Gamma(shape, scale)
  double gamma(double shape, double scale) {
    std::gamma_distribution<double> g(shape, scale);
    return g(gen_);
  }
  // X ~ IG(shape, rate)  <=>  rate / Gamma(shape, 1)
  double inverse_gamma(double shape, double rate) {
    return rate / gamma(shape, 1.0);
  }

  // Child generator keyed on the parent's seed and the given coordinates,
  // independent of how much the parent stream has been consumed.
  Rng substream(uint64_t a, uint64_t b = 0, uint64_t c = 0) const {
    return Rng(mix_seed(seed_, a, b, c));
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace npdrift

#endif
