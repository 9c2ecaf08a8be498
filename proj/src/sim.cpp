#include "swarmnes/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "swarmnes/errors.hpp"

namespace swarmnes {

namespace {

constexpr double kPi = std::numbers::pi;

void check_robot_index(const WorldState& world, int robot_index) {
  if (robot_index < 0 || robot_index >= static_cast<int>(world.robots.size())) {
    throw UsageError("robot index " + std::to_string(robot_index) +
                     " out of range for " + std::to_string(world.robots.size()) +
                     " robots");
  }
}

// Distance along unit direction u from p to the boundary of the square
// |x|, |y| <= half, assuming p is inside.
double ray_to_square_exit(const Eigen::Vector2d& p, const Eigen::Vector2d& u,
                          double half) {
  double t = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    if (u[axis] != 0.0) {
      const double bound = u[axis] > 0.0 ? half : -half;
      t = std::min(t, (bound - p[axis]) / u[axis]);
    }
  }
  return t;
}

// First intersection distance of the ray p + t u with the circle around c
// of radius r, or infinity when the ray misses or points away.
double ray_to_circle(const Eigen::Vector2d& p, const Eigen::Vector2d& u,
                     const Eigen::Vector2d& c, double r) {
  const Eigen::Vector2d rel = c - p;
  const double b = u.dot(rel);
  const double disc = b * b - (rel.squaredNorm() - r * r);
  if (disc < 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double t = b - std::sqrt(disc);
  return t >= 0.0 ? t : std::numeric_limits<double>::infinity();
}

}  // namespace

void ArenaSpec::validate() const {
  if (!(robot_radius > 0.0)) {
    throw ConfigError("arena: robot_radius must be positive");
  }
  if (!(side_length > 4.0 * robot_radius)) {
    throw ConfigError("arena: side_length must exceed 4x robot_radius");
  }
  if (!(sensor_max_range > 0.0)) {
    throw ConfigError("arena: sensor_max_range must be positive");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("arena: dt must be positive");
  }
}

double wrap_angle(double angle) {
  if (angle >= -kPi && angle < kPi) {
    return angle;  // exact no-op for in-range headings
  }
  double y = std::fmod(angle + kPi, 2.0 * kPi);
  if (y < 0.0) {
    y += 2.0 * kPi;
  }
  return y - kPi;
}

WorldState reset_world(const ArenaSpec& arena, int num_robots, Rng& rng) {
  arena.validate();
  if (num_robots < 1) {
    throw ConfigError("reset_world: num_robots must be positive");
  }

  WorldState world;
  world.arena = arena;
  world.robots.reserve(num_robots);

  const double inset = arena.inset_half_extent();
  const double min_gap = 2.0 * arena.robot_radius + kContactBackoffM;
  const double min_gap_sq = min_gap * min_gap;

  int consecutive_rejections = 0;
  for (int i = 0; i < num_robots; ++i) {
    Eigen::Vector2d pos;
    for (;;) {
      pos.x() = rng.uniform(-inset, inset);
      pos.y() = rng.uniform(-inset, inset);
      bool clear = true;
      for (const RobotState& other : world.robots) {
        if ((other.position - pos).squaredNorm() < min_gap_sq) {
          clear = false;
          break;
        }
      }
      if (clear) {
        break;
      }
      if (++consecutive_rejections >= kMaxPlacementRejections) {
        throw CapacityError("reset_world: arena too crowded for " +
                            std::to_string(num_robots) + " robots (" +
                            std::to_string(kMaxPlacementRejections) +
                            " consecutive rejected placements)");
      }
    }
    consecutive_rejections = 0;

    RobotState robot;
    robot.position = pos;
    robot.heading = rng.uniform(-kPi, kPi);
    world.robots.push_back(robot);
  }
  world.time = 0.0;
  return world;
}

SensorReading sense(const WorldState& world, int robot_index) {
  check_robot_index(world, robot_index);
  const RobotState& self = world.robots[robot_index];
  const ArenaSpec& arena = world.arena;

  // front, right, back, left
  static constexpr std::array<double, 4> kOffsets = {0.0, -kPi / 2.0, kPi,
                                                     kPi / 2.0};
  SensorReading reading;
  for (std::size_t k = 0; k < kOffsets.size(); ++k) {
    const double angle = self.heading + kOffsets[k];
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));

    double dist = ray_to_square_exit(self.position, dir, arena.half_extent());
    for (std::size_t j = 0; j < world.robots.size(); ++j) {
      if (static_cast<int>(j) == robot_index) {
        continue;
      }
      dist = std::min(dist, ray_to_circle(self.position, dir,
                                          world.robots[j].position,
                                          arena.robot_radius));
    }

    const double raw = std::max(0.0, dist - arena.robot_radius);
    reading.ranges[k] =
        std::clamp(raw, 0.0, arena.sensor_max_range) / arena.sensor_max_range;
  }
  return reading;
}

void apply_action(WorldState& world, int robot_index, const Action& action) {
  check_robot_index(world, robot_index);
  RobotState& self = world.robots[robot_index];
  const ArenaSpec& arena = world.arena;

  const double rotation =
      std::clamp(action.rotation, -kMaxRotationRad, kMaxRotationRad);
  const double velocity =
      std::clamp(action.forward_velocity, 0.0, kMaxForwardVelocityMps);

  self.heading = wrap_angle(self.heading + rotation);
  const Eigen::Vector2d dir(std::cos(self.heading), std::sin(self.heading));
  const double intended = velocity * arena.dt;

  double contact =
      ray_to_square_exit(self.position, dir, arena.inset_half_extent());
  for (std::size_t j = 0; j < world.robots.size(); ++j) {
    if (static_cast<int>(j) == robot_index) {
      continue;
    }
    contact = std::min(contact, ray_to_circle(self.position, dir,
                                              world.robots[j].position,
                                              2.0 * arena.robot_radius));
  }

  double realized = intended;
  if (contact < intended) {
    realized = std::max(0.0, contact - kContactBackoffM);
  }

  self.last_displacement = dir * realized;
  self.position += self.last_displacement;
}

void step_world(WorldState& world, const std::vector<Action>& actions) {
  if (actions.size() != world.robots.size()) {
    throw UsageError("step_world: " + std::to_string(actions.size()) +
                     " actions for " + std::to_string(world.robots.size()) +
                     " robots");
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    apply_action(world, static_cast<int>(i), actions[i]);
  }
  world.time += world.arena.dt;
}

}  // namespace swarmnes
