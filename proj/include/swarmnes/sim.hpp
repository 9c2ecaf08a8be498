#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "swarmnes/network.hpp"
#include "swarmnes/rng.hpp"

namespace swarmnes {

// Clipped moves stop this far short of the contact point, which keeps the
// containment and separation invariants strict.
inline constexpr double kContactBackoffM = 1e-3;

// Consecutive rejected placements before reset_world declares the arena
// too crowded.
inline constexpr int kMaxPlacementRejections = 10000;

// Square arena centered on the origin; walls at +-side_length/2.
struct ArenaSpec {
  double side_length = 3.7;       // m
  double robot_radius = 0.125;    // m
  double sensor_max_range = 3.7;  // m
  double dt = 1.0;                // s

  double half_extent() const { return side_length / 2.0; }
  // Reachable region for robot centers: body fully inside the arena.
  double inset_half_extent() const { return half_extent() - robot_radius; }

  void validate() const;
};

struct RobotState {
  Eigen::Vector2d position{0.0, 0.0};  // m
  double heading = 0.0;                // rad, [-pi, pi)
  Eigen::Vector2d last_displacement{0.0, 0.0};  // m, most recent step
};

// Normalized rangefinder values in [0, 1], order front, right, back, left.
struct SensorReading {
  std::array<double, 4> ranges{};
};

struct WorldState {
  ArenaSpec arena;
  std::vector<RobotState> robots;
  double time = 0.0;  // s
};

// Wraps into [-pi, pi).
double wrap_angle(double angle);

// Uniform non-overlapping placement with uniform headings. Throws
// CapacityError after kMaxPlacementRejections consecutive rejections.
// Draw order per robot: x, y (repeated until accepted), then heading.
WorldState reset_world(const ArenaSpec& arena, int num_robots, Rng& rng);

// Casts 4 rays at heading + {0, -pi/2, pi, +pi/2} from the robot center
// against the walls and all other robot bodies; readings are
// surface-to-obstacle distances (own radius subtracted), clamped to
// [0, sensor_max_range] and normalized.
SensorReading sense(const WorldState& world, int robot_index);

// Rotate, then translate to the farthest collision-free point along the
// new heading: the full commanded displacement when unobstructed, else
// the contact distance minus kContactBackoffM, floored at zero. Obstacles
// are the walls inset by robot_radius and other robots inflated by
// 2 * robot_radius. Never throws on contact.
void apply_action(WorldState& world, int robot_index, const Action& action);

// Applies one action per robot sequentially in index order (robot r
// collides against 1..r-1 at new positions, r+1..n at old positions),
// then advances time by dt. Sensing for the step must already have
// happened against the pre-step snapshot.
void step_world(WorldState& world, const std::vector<Action>& actions);

}  // namespace swarmnes
