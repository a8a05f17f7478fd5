#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "depthlab/report.hpp"

namespace depthlab {

/// Outcome of one CLI run. exit_code: 0 consistent/vacuous, 2 violated,
/// 1 configuration or solver error.
struct RunOutcome {
    int exit_code = 1;
    std::string summary;
    std::vector<std::string> artifacts;
};

/// Parses, validates (strict keys) and dispatches one config object.
RunOutcome run_config(const nlohmann::json& config);

/// Loads a config file, applies --set overrides (dotted paths, JSON values),
/// and runs it.
RunOutcome run_config_file(const std::string& path, const std::vector<std::string>& overrides);

/// Runs a homogeneous list of configs; writes per-run artifacts plus a merged
/// CSV with config columns prefixed. Aborts on the first hard error, keeping
/// completed outputs and an index of finished runs.
RunOutcome run_sweep(const std::vector<std::string>& config_paths,
                     const std::vector<std::string>& overrides,
                     const std::string& out_dir_override = "");

nlohmann::json apply_overrides(nlohmann::json config, const std::vector<std::string>& overrides);

}  // namespace depthlab
