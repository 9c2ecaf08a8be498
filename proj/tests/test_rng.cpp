#include <doctest.h>

#include <cmath>
#include <set>

#include "swarmnes/errors.hpp"
#include "swarmnes/rng.hpp"

using namespace swarmnes;

TEST_CASE("rng: identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
  }
}

TEST_CASE("rng: uniform stays in [0, 1)") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rng: serialization resumes the exact stream") {
  Rng rng(123);
  for (int i = 0; i < 37; ++i) {
    rng.normal();
  }
  const std::string state = rng.serialize();
  Rng restored = Rng::deserialize(state);
  CHECK(restored == rng);
  for (int i = 0; i < 500; ++i) {
    CHECK(restored.normal() == rng.normal());
    CHECK(restored.uniform() == rng.uniform());
  }
}

TEST_CASE("rng: malformed state is rejected") {
  CHECK_THROWS_AS(Rng::deserialize("not a state"), DataError);
}

TEST_CASE("rng: normal draws have roughly standard moments") {
  Rng rng(99);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("rng: derived sub-seeds are distinct across streams and indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base : {0ULL, 1ULL, 2023ULL}) {
    for (std::uint64_t stream = 0; stream < 8; ++stream) {
      for (std::uint64_t index = 0; index < 64; ++index) {
        seen.insert(derive_seed(base, stream, index));
      }
    }
  }
  CHECK(seen.size() == 3 * 8 * 64);
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}
