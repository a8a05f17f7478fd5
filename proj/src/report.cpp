#include <algorithm>
#include <cstdio>
#include <fstream>

#include "depthlab/report.hpp"

namespace depthlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_value_to_csv(const nlohmann::json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["config"] = config;
    j["trials"] = trials;
    j["aggregate"] = aggregate;
    if (std::isnan(theorem_bound)) j["theorem_bound"] = nullptr;
    else j["theorem_bound"] = theorem_bound;
    j["verdict"] = verdict;
    return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
    ExperimentReport r;
    r.kind = j.at("kind").get<std::string>();
    r.config = j.at("config");
    for (const auto& t : j.at("trials")) r.trials.push_back(t);
    r.aggregate = j.at("aggregate");
    if (j.contains("theorem_bound") && !j.at("theorem_bound").is_null())
        r.theorem_bound = j.at("theorem_bound").get<double>();
    r.verdict = j.at("verdict").get<std::string>();
    return r;
}

std::string ExperimentReport::to_csv() const {
    std::string out;
    if (trials.empty()) return out;
    std::vector<std::string> cols;
    for (auto it = trials.front().begin(); it != trials.front().end(); ++it)
        cols.push_back(it.key());
    std::sort(cols.begin(), cols.end());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out += ',';
        out += cols[c];
    }
    out += '\n';
    for (const auto& t : trials) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out += ',';
            if (t.contains(cols[c])) out += json_value_to_csv(t.at(cols[c]));
        }
        out += '\n';
    }
    return out;
}

void ExperimentReport::write(const std::string& report_path, const std::string& csv_path) const {
    {
        std::ofstream f(report_path);
        if (!f) throw ConfigError("cannot write " + report_path);
        f << to_json().dump(2) << '\n';
    }
    {
        std::ofstream f(csv_path);
        if (!f) throw ConfigError("cannot write " + csv_path);
        f << to_csv();
    }
}

}  // namespace depthlab
