#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinball/harness.hpp"

namespace pinball {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything a lab invocation can set. Lists give the sweep axes.
struct LabConfig {
  std::vector<int> distances = {3};
  std::vector<double> rates = {1e-3};
  uint64_t shots = 10000;
  uint64_t seed = 1;
  std::vector<PredecoderKind> predecoders = {PredecoderKind::kPinball};
  bool decode_l2 = true;
  int threads = 1;
  EnergyParams energy;
};

// Sets one key from its textual value. Throws ConfigError for unknown keys
// and malformed values.
void apply_setting(LabConfig& config, const std::string& key, const std::string& value);

// Flat "key = value" lines; '#' starts a comment. Unknown keys are errors.
LabConfig parse_config(std::istream& in, LabConfig base = {});
LabConfig load_config(const std::string& path, LabConfig base = {});

// Range checks on the assembled config; throws ConfigError.
void validate_config(const LabConfig& config);

// Canonical "key=value" lines covering every result-affecting key, in a
// fixed order. The thread count is left out because it never changes
// results.
std::vector<std::string> echo_config(const LabConfig& config);

RunConfig run_config(const LabConfig& config, int distance, double p);

}  // namespace pinball
