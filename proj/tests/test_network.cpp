#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "swarmnes/errors.hpp"
#include "swarmnes/network.hpp"
#include "swarmnes/rng.hpp"

using namespace swarmnes;

namespace {

NetworkSpec spec_of(std::vector<int> sizes) {
  NetworkSpec spec;
  spec.layer_sizes = std::move(sizes);
  return spec;
}

Eigen::VectorXd random_genome(const NetworkSpec& spec, double scale, Rng& rng) {
  Eigen::VectorXd g(genome_size(spec));
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    g(i) = rng.uniform(-scale, scale);
  }
  return g;
}

}  // namespace

TEST_CASE("network: genome sizes") {
  CHECK(genome_size(spec_of({6, 5, 2})) == 47);
  CHECK(genome_size(spec_of({1, 1})) == 2);
  CHECK(genome_size(spec_of({2, 3, 1})) == 13);
  CHECK_THROWS_AS(genome_size(spec_of({6})), ConfigError);
  CHECK_THROWS_AS(genome_size(spec_of({6, 0, 2})), ConfigError);
}

TEST_CASE("network: layout offsets follow the flat ordering") {
  const auto small = encode_layout(spec_of({2, 1}));
  REQUIRE(small.size() == 1);
  CHECK(small[0].weight_offset == 0);
  CHECK(small[0].bias_offset == 2);

  const auto full = encode_layout(spec_of({6, 5, 2}));
  REQUIRE(full.size() == 2);
  CHECK(full[0].weight_offset == 0);   // indices 0-29: layer-1 weights
  CHECK(full[0].bias_offset == 30);    // 30-34: layer-1 biases
  CHECK(full[1].weight_offset == 35);  // 35-44: layer-2 weights
  CHECK(full[1].bias_offset == 45);    // 45-46: layer-2 biases
  CHECK(full[1].outputs == 2);
  CHECK(full[1].inputs == 5);
}

TEST_CASE("network: layout round-trips a genome through matrices") {
  const NetworkSpec spec = spec_of({6, 5, 2});
  Rng rng(31);
  const Eigen::VectorXd g = random_genome(spec, 2.0, rng);

  Eigen::VectorXd rebuilt(genome_size(spec));
  for (const LayerLayout& layer : encode_layout(spec)) {
    Eigen::MatrixXd weights(layer.outputs, layer.inputs);
    for (Eigen::Index r = 0; r < layer.outputs; ++r) {
      for (Eigen::Index c = 0; c < layer.inputs; ++c) {
        weights(r, c) = g(layer.weight_offset + r * layer.inputs + c);
      }
    }
    Eigen::VectorXd bias = g.segment(layer.bias_offset, layer.outputs);
    for (Eigen::Index r = 0; r < layer.outputs; ++r) {
      for (Eigen::Index c = 0; c < layer.inputs; ++c) {
        rebuilt(layer.weight_offset + r * layer.inputs + c) = weights(r, c);
      }
      rebuilt(layer.bias_offset + r) = bias(r);
    }
  }
  CHECK(rebuilt == g);
}

TEST_CASE("network: zero genome gives zero rotation and 1 m/s") {
  const NetworkSpec spec;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(47);
  const Action action =
      forward(zero, spec, {0.3, 0.9, 0.1, 0.5}, ObjectiveWeights(0.5, 0.5));
  CHECK(action.rotation == 0.0);
  CHECK(action.forward_velocity == 1.0);
}

TEST_CASE("network: saturated outputs hit the range endpoints") {
  const NetworkSpec spec;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(47);
  g(45) = 1000.0;  // output bias, rotation
  g(46) = 1000.0;  // output bias, velocity
  const Action action =
      forward(g, spec, {0.0, 0.0, 0.0, 0.0}, ObjectiveWeights(1.0, 0.0));
  CHECK(action.rotation == std::numbers::pi / 4.0);
  CHECK(action.forward_velocity == 2.0);

  g(45) = -1000.0;
  g(46) = -1000.0;
  const Action low =
      forward(g, spec, {0.0, 0.0, 0.0, 0.0}, ObjectiveWeights(1.0, 0.0));
  CHECK(low.rotation == -std::numbers::pi / 4.0);
  CHECK(low.forward_velocity == 0.0);
}

TEST_CASE("network: hand-built single-weight path routes sensor to velocity") {
  const NetworkSpec spec;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(47);
  g(0) = 40.0;   // W1(0,0): sensor 1 -> hidden 0
  g(40) = 25.0;  // W2(1,0): hidden 0 -> output 1 (velocity)
  const Action action =
      forward(g, spec, {1.0, 0.0, 0.0, 0.0}, ObjectiveWeights(1.0, 0.0));

  const double hidden = std::tanh(40.0 * 1.0);
  const double out = std::tanh(25.0 * hidden);
  CHECK(action.forward_velocity == (out + 1.0) / 2.0 * 2.0);
  CHECK(action.forward_velocity == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(action.rotation == 0.0);
}

TEST_CASE("network: outputs always stay in command ranges") {
  const NetworkSpec spec;
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::VectorXd g = random_genome(spec, 5.0, rng);
    const std::array<double, 4> sensors = {rng.uniform(), rng.uniform(),
                                           rng.uniform(), rng.uniform()};
    const double w1 = rng.uniform();
    const Action action = forward(g, spec, sensors, ObjectiveWeights(w1, 1.0 - w1));
    CHECK(action.rotation >= -std::numbers::pi / 4.0);
    CHECK(action.rotation <= std::numbers::pi / 4.0);
    CHECK(action.forward_velocity >= 0.0);
    CHECK(action.forward_velocity <= 2.0);
  }
}

TEST_CASE("network: objective weights are genuinely consumed") {
  const NetworkSpec spec;
  Rng rng(23);
  const Eigen::VectorXd g = random_genome(spec, 1.5, rng);
  const std::array<double, 4> sensors = {0.4, 0.2, 0.6, 0.8};
  const Action a = forward(g, spec, sensors, ObjectiveWeights(1.0, 0.0));
  const Action b = forward(g, spec, sensors, ObjectiveWeights(0.0, 1.0));
  CHECK((a.rotation != b.rotation || a.forward_velocity != b.forward_velocity));
}

TEST_CASE("network: genome length mismatch is a configuration error") {
  const NetworkSpec spec;
  CHECK_THROWS_AS(forward(Eigen::VectorXd::Zero(46), spec, {0, 0, 0, 0},
                          ObjectiveWeights(1.0, 0.0)),
                  ConfigError);
  CHECK_THROWS_AS(network_eval(Eigen::VectorXd::Zero(47), spec,
                               Eigen::VectorXd::Zero(5)),
                  ConfigError);
  CHECK_THROWS_AS(forward(Eigen::VectorXd::Zero(13), spec_of({2, 3, 1}),
                          {0, 0, 0, 0}, ObjectiveWeights(1.0, 0.0)),
                  ConfigError);
}
