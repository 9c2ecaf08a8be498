#include "swarmnes/episode.hpp"

namespace swarmnes {

double run_episode(const Eigen::VectorXd& genome, const NetworkSpec& spec,
                   const ObjectiveWeights& weights, WorldState& world,
                   int num_steps, std::vector<TraceRow>* trace,
                   std::vector<StepObjectives>* per_step) {
  const int num_robots = static_cast<int>(world.robots.size());
  std::vector<SensorReading> readings(num_robots);
  std::vector<Action> actions(num_robots);

  double fit_sum = 0.0;
  for (int t = 1; t <= num_steps; ++t) {
    for (int r = 0; r < num_robots; ++r) {
      readings[r] = sense(world, r);
    }
    for (int r = 0; r < num_robots; ++r) {
      actions[r] = forward(genome, spec, readings[r].ranges, weights);
    }
    step_world(world, actions);

    const StepObjectives step = step_objectives(world, weights);
    fit_sum += step.current_fit;

    if (per_step != nullptr) {
      per_step->push_back(step);
    }
    if (trace != nullptr) {
      for (int r = 0; r < num_robots; ++r) {
        const RobotState& robot = world.robots[r];
        TraceRow row;
        row.time_s = world.time;
        row.robot_id = r;
        row.x_m = robot.position.x();
        row.y_m = robot.position.y();
        row.heading_rad = robot.heading;
        row.dx_m = robot.last_displacement.x();
        row.dy_m = robot.last_displacement.y();
        row.sensors = readings[r].ranges;
        row.rotation_cmd_rad = actions[r].rotation;
        row.velocity_cmd_mps = actions[r].forward_velocity;
        trace->push_back(row);
      }
    }
  }
  return fit_sum;
}

}  // namespace swarmnes
