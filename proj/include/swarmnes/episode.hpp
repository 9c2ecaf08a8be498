#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "swarmnes/network.hpp"
#include "swarmnes/objectives.hpp"
#include "swarmnes/sim.hpp"

namespace swarmnes {

// One trace row per (step, robot): pose and realized displacement after
// the step, the sensor snapshot the controller saw, and the commands it
// issued. Rows exist for steps 1..n only; the initial state has no
// command and is not recorded.
struct TraceRow {
  double time_s = 0.0;
  int robot_id = 0;
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;
  double dx_m = 0.0;
  double dy_m = 0.0;
  std::array<double, 4> sensors{};  // front, right, back, left
  double rotation_cmd_rad = 0.0;
  double velocity_cmd_mps = 0.0;
};

// Drives every robot in `world` with the same genome for num_steps steps:
// sense all against the pre-step snapshot, one forward pass per robot,
// step the world, accumulate currentFit of the post-step state. Returns
// the episode fitness sum. Optional sinks capture the trace and the
// per-step objective values.
double run_episode(const Eigen::VectorXd& genome, const NetworkSpec& spec,
                   const ObjectiveWeights& weights, WorldState& world,
                   int num_steps, std::vector<TraceRow>* trace = nullptr,
                   std::vector<StepObjectives>* per_step = nullptr);

}  // namespace swarmnes
