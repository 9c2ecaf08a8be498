#include "swarmnes/checkpoint.hpp"

#include <cstdio>
#include <initializer_list>
#include <string_view>

#include <json.hpp>

#include "swarmnes/errors.hpp"
#include "swarmnes/io.hpp"

namespace swarmnes {

namespace {

using nlohmann::json;

constexpr std::string_view kCheckpointFormat = "swarmnes-checkpoint";
constexpr std::string_view kGenomeFormat = "swarmnes-genome";

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

json vector_to_hex(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(format_hex_double(v(i)));
  }
  return arr;
}

Eigen::VectorXd vector_from_hex(const json& arr, const std::string& field) {
  if (!arr.is_array()) {
    throw DataError("checkpoint: field '" + field + "' must be an array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        parse_hex_double(arr[i].get<std::string>());
  }
  return v;
}

json matrix_to_hex_row_major(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      arr.push_back(format_hex_double(m(r, c)));
    }
  }
  return arr;
}

Eigen::MatrixXd matrix_from_hex_row_major(const json& arr, Eigen::Index rows,
                                          Eigen::Index cols,
                                          const std::string& field) {
  if (!arr.is_array() ||
      arr.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw DataError("checkpoint: field '" + field + "' has wrong size");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = parse_hex_double(arr[k++].get<std::string>());
    }
  }
  return m;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("config: unknown field '" + item.key() + "' in " +
                        where);
    }
  }
}

json config_to_json_impl(const TrainConfig& c, bool hex) {
  const auto num = [hex](double v) -> json {
    return hex ? json(format_hex_double(v)) : json(v);
  };
  json j;
  j["seed"] = c.seed;
  j["num_robots"] = c.num_robots;
  j["t_max_s"] = num(c.t_max_s);
  j["dw_increment"] = num(c.dw_increment);
  if (!hex) {
    j["max_evaluations"] = c.max_evaluations;
  }
  j["strategy"] = {{"population_size", c.strategy.population_size},
                   {"eta_mu", num(c.strategy.eta_mu)},
                   {"eta_sigma", num(c.strategy.eta_sigma)},
                   {"eta_b", num(c.strategy.eta_b)},
                   {"seed", c.strategy.seed}};
  j["arena"] = {{"side_length_m", num(c.arena.side_length)},
                {"robot_radius_m", num(c.arena.robot_radius)},
                {"sensor_max_range_m", num(c.arena.sensor_max_range)},
                {"dt_s", num(c.arena.dt)}};
  j["network"] = {{"layer_sizes", c.network.layer_sizes}};
  return j;
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  check_keys(j,
             {"seed", "num_robots", "t_max_s", "dw_increment",
              "max_evaluations", "strategy", "arena", "network"},
             "config");
  c.seed = j.value("seed", c.seed);
  c.num_robots = j.value("num_robots", c.num_robots);
  c.t_max_s = j.value("t_max_s", c.t_max_s);
  c.dw_increment = j.value("dw_increment", c.dw_increment);
  c.max_evaluations = j.value("max_evaluations", c.max_evaluations);
  if (j.contains("strategy")) {
    const json& s = j.at("strategy");
    check_keys(s, {"population_size", "eta_mu", "eta_sigma", "eta_b", "seed"},
               "strategy");
    c.strategy.population_size =
        s.value("population_size", c.strategy.population_size);
    c.strategy.eta_mu = s.value("eta_mu", c.strategy.eta_mu);
    c.strategy.eta_sigma = s.value("eta_sigma", c.strategy.eta_sigma);
    c.strategy.eta_b = s.value("eta_b", c.strategy.eta_b);
    c.strategy.seed = s.value("seed", c.strategy.seed);
  }
  if (j.contains("arena")) {
    const json& a = j.at("arena");
    check_keys(a, {"side_length_m", "robot_radius_m", "sensor_max_range_m",
                   "dt_s"},
               "arena");
    c.arena.side_length = a.value("side_length_m", c.arena.side_length);
    c.arena.robot_radius = a.value("robot_radius_m", c.arena.robot_radius);
    c.arena.sensor_max_range =
        a.value("sensor_max_range_m", c.arena.sensor_max_range);
    c.arena.dt = a.value("dt_s", c.arena.dt);
  }
  if (j.contains("network")) {
    const json& n = j.at("network");
    check_keys(n, {"layer_sizes"}, "network");
    if (n.contains("layer_sizes")) {
      c.network.layer_sizes = n.at("layer_sizes").get<std::vector<int>>();
    }
  }
  return c;
}

}  // namespace

std::string config_hash(const TrainConfig& config) {
  return fnv1a_hex(config_to_json_impl(config, /*hex=*/true).dump());
}

void save_checkpoint(const std::filesystem::path& path,
                     const TrainState& state) {
  json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["tool_version"] = kToolVersion;
  j["config"] = config_to_json_impl(state.config, /*hex=*/false);
  j["config_hash"] = config_hash(state.config);
  j["distribution"] = {
      {"dim", state.dist.dim()},
      {"mu", vector_to_hex(state.dist.mu)},
      {"sigma", format_hex_double(state.dist.sigma)},
      {"b_matrix", matrix_to_hex_row_major(state.dist.b_matrix)},
      {"generation", state.dist.generation}};
  j["rng_state"] = state.strategy_rng.serialize();
  j["best_fitness"] = format_hex_double(state.best_fitness);
  j["best_genome"] = vector_to_hex(state.best_genome);
  j["evaluations"] = state.evaluations;
  json log = json::array();
  for (const TrainLogRecord& rec : state.log) {
    log.push_back({{"generation", rec.generation},
                   {"evaluations_so_far", rec.evaluations_so_far},
                   {"best_fitness", format_hex_double(rec.best_fitness)},
                   {"mean_fitness", format_hex_double(rec.mean_fitness)},
                   {"sigma", format_hex_double(rec.sigma)}});
  }
  j["log"] = log;
  write_file_atomic(path, j.dump(2) + "\n");
}

TrainState load_checkpoint(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw DataError("checkpoint: '" + path.string() + "' is not valid JSON: " +
                    e.what());
  }

  try {
    if (j.value("format", "") != kCheckpointFormat) {
      throw DataError("checkpoint: field 'format' missing or wrong");
    }
    if (j.value("version", -1) != kCheckpointVersion) {
      throw DataError("checkpoint: unsupported 'version' " +
                      std::to_string(j.value("version", -1)));
    }

    TrainState state;
    state.config = config_from_json(j.at("config"));
    if (j.value("config_hash", "") != config_hash(state.config)) {
      throw DataError("checkpoint: field 'config_hash' does not match the "
                      "embedded config");
    }

    const json& d = j.at("distribution");
    const auto dim = d.at("dim").get<Eigen::Index>();
    state.dist.mu = vector_from_hex(d.at("mu"), "distribution.mu");
    state.dist.sigma = parse_hex_double(d.at("sigma").get<std::string>());
    state.dist.b_matrix =
        matrix_from_hex_row_major(d.at("b_matrix"), dim, dim,
                                  "distribution.b_matrix");
    state.dist.generation = d.at("generation").get<std::int64_t>();
    if (state.dist.mu.size() != dim ||
        dim != genome_size(state.config.network)) {
      throw DataError("checkpoint: field 'distribution.dim' is inconsistent "
                      "with mu/network");
    }
    if (!(state.dist.sigma > 0.0)) {
      throw DataError("checkpoint: field 'distribution.sigma' must be positive");
    }

    state.strategy_rng = Rng::deserialize(j.at("rng_state").get<std::string>());
    state.best_fitness = parse_hex_double(j.at("best_fitness").get<std::string>());
    state.best_genome = vector_from_hex(j.at("best_genome"), "best_genome");
    state.evaluations = j.at("evaluations").get<std::int64_t>();

    for (const json& rec : j.at("log")) {
      TrainLogRecord r;
      r.generation = rec.at("generation").get<std::int64_t>();
      r.evaluations_so_far = rec.at("evaluations_so_far").get<std::int64_t>();
      r.best_fitness = parse_hex_double(rec.at("best_fitness").get<std::string>());
      r.mean_fitness = parse_hex_double(rec.at("mean_fitness").get<std::string>());
      r.sigma = parse_hex_double(rec.at("sigma").get<std::string>());
      state.log.push_back(r);
    }
    return state;
  } catch (const json::exception& e) {
    throw DataError("checkpoint: '" + path.string() + "' malformed: " +
                    e.what());
  }
}

void save_genome(const std::filesystem::path& path, const NetworkSpec& spec,
                 const Eigen::VectorXd& params, double fitness) {
  json j;
  j["format"] = kGenomeFormat;
  j["version"] = 1;
  j["layer_sizes"] = spec.layer_sizes;
  j["params"] = vector_to_hex(params);
  j["fitness"] = format_hex_double(fitness);
  write_file_atomic(path, j.dump(2) + "\n");
}

GenomeFile load_genome(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw DataError("genome: '" + path.string() + "' is not valid JSON: " +
                    e.what());
  }
  try {
    if (j.value("format", "") != kGenomeFormat) {
      throw DataError("genome: field 'format' missing or wrong");
    }
    GenomeFile g;
    g.spec.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    g.params = vector_from_hex(j.at("params"), "params");
    g.fitness = parse_hex_double(j.at("fitness").get<std::string>());
    if (g.params.size() != genome_size(g.spec)) {
      throw DataError("genome: params length " +
                      std::to_string(g.params.size()) +
                      " does not match layer_sizes");
    }
    return g;
  } catch (const json::exception& e) {
    throw DataError("genome: '" + path.string() + "' malformed: " + e.what());
  }
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  try {
    return parse_train_config(read_file(path));
  } catch (const DataError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

TrainConfig parse_train_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, /*allow_exceptions=*/true,
                    /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed: ") + e.what());
  }
}

std::string train_config_to_json(const TrainConfig& config) {
  return config_to_json_impl(config, /*hex=*/false).dump(2) + "\n";
}

}  // namespace swarmnes
