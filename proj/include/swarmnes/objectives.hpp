#pragma once

#include <span>
#include <vector>

namespace swarmnes {

struct WorldState;

// Scalarization weight pair. Both weights in [0, 1] and w1 + w2 = 1
// within 1e-12, checked at construction.
class ObjectiveWeights {
 public:
  ObjectiveWeights(double w1, double w2);

  // (1 - dw, dw) for a schedule position dw.
  static ObjectiveWeights from_dw(double dw) {
    return ObjectiveWeights(1.0 - dw, dw);
  }

  double w1() const { return w1_; }
  double w2() const { return w2_; }

 private:
  double w1_;
  double w2_;
};

// Per-step objective values of one world snapshot.
struct StepObjectives {
  double obj1_distance = 0.0;  // m, swarm L1 distance sum
  double obj2_velocity = 0.0;  // m/s, swarm L1 speed sum
  double current_fit = 0.0;
};

// Sum over robots of |x| + |y|.
double obj1_distance(const WorldState& world);

// Sum over robots of (|dx| + |dy|) / dt, from realized displacement.
double obj2_velocity(const WorldState& world);

// w1 * (-obj1) + w2 * obj2.
double current_fit(const ObjectiveWeights& weights, double obj1, double obj2);

StepObjectives step_objectives(const WorldState& world,
                               const ObjectiveWeights& weights);

// Weight pairs (1 - dw, dw) for dw = 0, inc, 2 inc, ..., 1. The increment
// must divide 1 exactly (within 1e-9), so the schedule lands on (0, 1).
std::vector<ObjectiveWeights> weight_schedule(double dw_increment);

// Plain sum of per-step currentFit values across all schedule episodes.
double network_fit(std::span<const double> per_step_fits);

}  // namespace swarmnes
