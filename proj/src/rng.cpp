#include "swarmnes/rng.hpp"

#include <cmath>
#include <sstream>

#include "swarmnes/errors.hpp"

namespace swarmnes {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index) {
  std::uint64_t s = base;
  std::uint64_t a = splitmix64_next(s);
  s ^= stream * 0xd1342543de82ef95ULL;
  std::uint64_t b = splitmix64_next(s);
  s ^= index * 0xaf251af3b0f025b5ULL;
  std::uint64_t c = splitmix64_next(s);
  return a ^ (b + 0x9e3779b97f4a7c15ULL * c);
}

double Rng::normal() {
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

std::string Rng::serialize() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

Rng Rng::deserialize(const std::string& text) {
  Rng rng;
  std::istringstream in(text);
  in >> rng.engine_;
  if (in.fail()) {
    throw DataError("rng: malformed engine state");
  }
  return rng;
}

}  // namespace swarmnes
