#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>

#include "swarmnes/trainer.hpp"

namespace swarmnes {

inline constexpr int kCheckpointVersion = 1;
inline constexpr std::string_view kToolVersion = "1.0.0";

// Hash of every config field except max_evaluations, so a resumed run may
// extend the budget but nothing else.
std::string config_hash(const TrainConfig& config);

// Checkpoints are JSON with all floating-point state encoded as hex-float
// strings: round trips are bit-exact and a resumed run continues
// identically to an uninterrupted one.
void save_checkpoint(const std::filesystem::path& path, const TrainState& state);
TrainState load_checkpoint(const std::filesystem::path& path);

struct GenomeFile {
  NetworkSpec spec;
  Eigen::VectorXd params;
  double fitness = 0.0;
};

void save_genome(const std::filesystem::path& path, const NetworkSpec& spec,
                 const Eigen::VectorXd& params, double fitness);
GenomeFile load_genome(const std::filesystem::path& path);

// Config files are JSON (comments allowed). Absent fields keep their
// defaults; unknown fields are rejected.
TrainConfig load_train_config(const std::filesystem::path& path);
TrainConfig parse_train_config(const std::string& text);
std::string train_config_to_json(const TrainConfig& config);

}  // namespace swarmnes
