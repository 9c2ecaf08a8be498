#pragma once

#include <Eigen/Core>
#include <array>
#include <numbers>
#include <vector>

#include "swarmnes/objectives.hpp"

namespace swarmnes {

// Command ranges of the simulated robot.
inline constexpr double kMaxRotationRad = std::numbers::pi / 4.0;
inline constexpr double kMaxForwardVelocityMps = 2.0;

// Fixed feed-forward topology. Default controller: 6 inputs (4 sensors +
// 2 objective weights), 5 hidden, 2 outputs (rotation, forward velocity).
struct NetworkSpec {
  std::vector<int> layer_sizes{6, 5, 2};
};

// Robot command, clamped to range by construction (tanh outputs scaled
// onto the command intervals).
struct Action {
  double rotation = 0.0;          // rad, in [-pi/4, pi/4]
  double forward_velocity = 0.0;  // m/s, in [0, 2]
};

// Flat genome ordering per layer: weight matrix row-major (row = output
// unit), then bias vector. The layout is stable; checkpoints depend on it.
struct LayerLayout {
  Eigen::Index weight_offset = 0;
  Eigen::Index bias_offset = 0;
  Eigen::Index outputs = 0;
  Eigen::Index inputs = 0;
};

// Sum over layers of fan_in * fan_out + fan_out.
Eigen::Index genome_size(const NetworkSpec& spec);

std::vector<LayerLayout> encode_layout(const NetworkSpec& spec);

// Generic MLP pass, tanh on hidden and output layers.
Eigen::VectorXd network_eval(const Eigen::VectorXd& genome,
                             const NetworkSpec& spec,
                             const Eigen::VectorXd& input);

// Controller pass: input (s1..s4, w1, w2); rotation = out1 * pi/4,
// velocity = (out2 + 1) / 2 * 2 m/s. Pure and stateless: the same genome
// drives every robot in a swarm.
Action forward(const Eigen::VectorXd& genome, const NetworkSpec& spec,
               const std::array<double, 4>& sensors,
               const ObjectiveWeights& weights);

}  // namespace swarmnes
