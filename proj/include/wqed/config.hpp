#pragma once

// Plain-text run configuration: INI-style nested tables with `key = value`
// lines, `[section]` headers, `[[emitter]]` for repeated emitter blocks and
// `#` comments. Unknown sections or keys are rejected with the offending
// line number. The parsed, normalized config is echoed into run manifests.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wqed/dynamics.hpp"
#include "wqed/sweep.hpp"

namespace wqed {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

struct DynamicsSettings {
  double t_max = 200.0;
  int num_times = 2001;
  std::string initial = "emitter:0";  // emitter:<m> | photon:<site> | pair:<re,im,re,im>
  std::vector<double> snapshot_times;
};

struct OutputSettings {
  std::string dir = "out";
  int jobs = 0;  // 0: hardware concurrency
};

struct RunConfig {
  SystemSpec system;
  std::optional<SweepAxis> axis1;
  std::optional<SweepAxis> axis2;
  SweepOutputs outputs;
  DynamicsSettings dynamics;
  SpectralOptions tolerances;
  OutputSettings output;

  nlohmann::json to_json() const;
};

/// Documented defaults: uniform periodic chain of 400 sites, one emitter at
/// the center with detuning 0 and coupling 0.1 J.
RunConfig default_config();

RunConfig parse_config_text(const std::string& text, const std::string& source_name);
RunConfig parse_config_file(const std::string& path);

/// Inverse of the parser for the system tables; round-trips exactly.
std::string system_to_config_text(const SystemSpec& spec);

InitialState make_initial_state(const std::string& descriptor, const BasisIndex& basis);

}  // namespace wqed
