#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "depthlab/core.hpp"

namespace depthlab {

/// Structured record of one experiment: config echo, per-trial outcomes,
/// aggregates, the theorem-bound value computed from the config, and the
/// verdict. Serializes losslessly to JSON; trials flatten to CSV rows.
struct ExperimentReport {
    std::string kind;
    nlohmann::json config = nlohmann::json::object();
    std::vector<nlohmann::json> trials;  // flat objects, one per trial
    nlohmann::json aggregate = nlohmann::json::object();
    double theorem_bound = std::numeric_limits<double>::quiet_NaN();
    std::string verdict = "consistent";  // consistent | violated | vacuous

    nlohmann::json to_json() const;
    static ExperimentReport from_json(const nlohmann::json& j);

    /// One row per trial; columns are the sorted keys of the first trial row.
    std::string to_csv() const;

    void write(const std::string& report_path, const std::string& csv_path) const;
};

/// Deterministic float formatting shared by every CSV writer (%.17g).
std::string format_double(double v);

std::string json_value_to_csv(const nlohmann::json& v);

}  // namespace depthlab
