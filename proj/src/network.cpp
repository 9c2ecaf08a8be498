#include "swarmnes/network.hpp"

#include <string>

#include "swarmnes/errors.hpp"

namespace swarmnes {

namespace {

void validate_spec(const NetworkSpec& spec) {
  if (spec.layer_sizes.size() < 2) {
    throw ConfigError("network: need at least input and output layers");
  }
  for (int size : spec.layer_sizes) {
    if (size < 1) {
      throw ConfigError("network: layer sizes must be positive");
    }
  }
}

}  // namespace

Eigen::Index genome_size(const NetworkSpec& spec) {
  validate_spec(spec);
  Eigen::Index total = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    const Eigen::Index fan_in = spec.layer_sizes[l];
    const Eigen::Index fan_out = spec.layer_sizes[l + 1];
    total += fan_in * fan_out + fan_out;
  }
  return total;
}

std::vector<LayerLayout> encode_layout(const NetworkSpec& spec) {
  validate_spec(spec);
  std::vector<LayerLayout> layout;
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    LayerLayout layer;
    layer.inputs = spec.layer_sizes[l];
    layer.outputs = spec.layer_sizes[l + 1];
    layer.weight_offset = offset;
    layer.bias_offset = offset + layer.inputs * layer.outputs;
    offset = layer.bias_offset + layer.outputs;
    layout.push_back(layer);
  }
  return layout;
}

Eigen::VectorXd network_eval(const Eigen::VectorXd& genome,
                             const NetworkSpec& spec,
                             const Eigen::VectorXd& input) {
  if (genome.size() != genome_size(spec)) {
    throw ConfigError("network: genome length " + std::to_string(genome.size()) +
                      " does not match spec size " +
                      std::to_string(genome_size(spec)));
  }
  if (input.size() != spec.layer_sizes.front()) {
    throw ConfigError("network: input length does not match first layer");
  }

  using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                     Eigen::Dynamic, Eigen::RowMajor>>;
  Eigen::VectorXd activation = input;
  for (const LayerLayout& layer : encode_layout(spec)) {
    RowMajorMap weights(genome.data() + layer.weight_offset, layer.outputs,
                        layer.inputs);
    Eigen::Map<const Eigen::VectorXd> bias(genome.data() + layer.bias_offset,
                                           layer.outputs);
    activation = ((weights * activation + bias).array().tanh()).matrix();
  }
  return activation;
}

Action forward(const Eigen::VectorXd& genome, const NetworkSpec& spec,
               const std::array<double, 4>& sensors,
               const ObjectiveWeights& weights) {
  if (spec.layer_sizes.front() != 6 || spec.layer_sizes.back() != 2) {
    throw ConfigError("controller: spec must take 6 inputs and emit 2 outputs");
  }
  Eigen::VectorXd input(6);
  input << sensors[0], sensors[1], sensors[2], sensors[3], weights.w1(),
      weights.w2();
  const Eigen::VectorXd out = network_eval(genome, spec, input);

  Action action;
  action.rotation = out(0) * kMaxRotationRad;
  action.forward_velocity = (out(1) + 1.0) / 2.0 * kMaxForwardVelocityMps;
  return action;
}

}  // namespace swarmnes
