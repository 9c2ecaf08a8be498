#include "swarmnes/objectives.hpp"

#include <cmath>
#include <string>

#include "swarmnes/errors.hpp"
#include "swarmnes/sim.hpp"

namespace swarmnes {

ObjectiveWeights::ObjectiveWeights(double w1, double w2) : w1_(w1), w2_(w2) {
  if (!(w1 >= 0.0 && w1 <= 1.0) || !(w2 >= 0.0 && w2 <= 1.0)) {
    throw ConfigError("weights: w1 and w2 must lie in [0, 1]");
  }
  if (std::abs(w1 + w2 - 1.0) > 1e-12) {
    throw ConfigError("weights: w1 + w2 must equal 1");
  }
}

double obj1_distance(const WorldState& world) {
  double total = 0.0;
  for (const RobotState& robot : world.robots) {
    total += std::abs(robot.position.x()) + std::abs(robot.position.y());
  }
  return total;
}

double obj2_velocity(const WorldState& world) {
  double total = 0.0;
  for (const RobotState& robot : world.robots) {
    total += (std::abs(robot.last_displacement.x()) +
              std::abs(robot.last_displacement.y())) /
             world.arena.dt;
  }
  return total;
}

double current_fit(const ObjectiveWeights& weights, double obj1, double obj2) {
  return weights.w1() * -1.0 * obj1 + weights.w2() * obj2;
}

StepObjectives step_objectives(const WorldState& world,
                               const ObjectiveWeights& weights) {
  StepObjectives step;
  step.obj1_distance = obj1_distance(world);
  step.obj2_velocity = obj2_velocity(world);
  step.current_fit = current_fit(weights, step.obj1_distance, step.obj2_velocity);
  return step;
}

std::vector<ObjectiveWeights> weight_schedule(double dw_increment) {
  if (!(dw_increment > 0.0 && dw_increment <= 1.0)) {
    throw ConfigError("weight_schedule: increment must lie in (0, 1]");
  }
  const double steps = 1.0 / dw_increment;
  const long n = std::lround(steps);
  if (n < 1 || std::abs(static_cast<double>(n) * dw_increment - 1.0) > 1e-9) {
    throw ConfigError("weight_schedule: increment must divide 1 exactly");
  }

  std::vector<ObjectiveWeights> schedule;
  schedule.reserve(n + 1);
  for (long k = 0; k <= n; ++k) {
    const double dw = static_cast<double>(k) / static_cast<double>(n);
    schedule.push_back(ObjectiveWeights::from_dw(dw));
  }
  return schedule;
}

double network_fit(std::span<const double> per_step_fits) {
  double total = 0.0;
  for (std::size_t i = 0; i < per_step_fits.size(); ++i) {
    if (!std::isfinite(per_step_fits[i])) {
      throw EvalError("network_fit: non-finite entry at index " +
                      std::to_string(i));
    }
    total += per_step_fits[i];
  }
  return total;
}

}  // namespace swarmnes
