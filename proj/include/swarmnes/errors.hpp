#pragma once

#include <stdexcept>
#include <string>

namespace swarmnes {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError / UsageError -> 2, DataError -> 3, CapacityError -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values where finite numbers are required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or non-finite candidate fitness at tell time.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arena cannot hold the requested number of robots.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Corrupt or inconsistent data files (checkpoints, traces, CSVs).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace swarmnes
