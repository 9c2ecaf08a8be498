#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace swarmnes {

// One step of the splitmix64 generator; also the seed mixer.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Derives an independent sub-stream seed from (base, stream, index).
// Used to hand out per-episode and per-generation seeds so that results
// never depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index = 0);

// Deterministic random stream: a std::mt19937_64 engine (bit-exact across
// platforms by the standard) with uniforms taken from the top 53 bits of
// each word and Gaussian draws via the Marsaglia polar method with the
// spare value discarded. The whole draw sequence is therefore reproducible
// at the sequence level, and the engine state serializes to text.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via the polar method. No caching: the second value of
  // each accepted pair is discarded so the stream state is the engine alone.
  double normal();

  std::string serialize() const;
  static Rng deserialize(const std::string& text);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  Rng() : engine_() {}
  std::mt19937_64 engine_;
};

}  // namespace swarmnes
