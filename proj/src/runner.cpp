#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "depthlab/bodies.hpp"
#include "depthlab/experiments.hpp"
#include "depthlab/grids.hpp"
#include "depthlab/polytopes.hpp"
#include "depthlab/rng.hpp"
#include "depthlab/runner.hpp"
#include "depthlab/svg.hpp"

namespace depthlab {

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kCommands = {"depth", "region", "body",   "cramer", "inclusion",
                                         "nmu",   "hlo",    "volume", "epsnet", "vc"};

const std::set<std::string> kCommonKeys = {"command", "measure", "seed",   "out_dir",
                                           "emit_svg", "workers", "grid",  "mc_budget"};

const std::map<std::string, std::set<std::string>> kCommandKeys = {
    {"depth", {"x"}},
    {"region", {"p", "beta", "N", "grid_seed"}},
    {"body", {"body_kind", "p", "grid_seed"}},
    {"cramer", {"x", "p", "grid_seed"}},
    {"inclusion", {"N", "beta", "trials", "region_grid"}},
    {"nmu", {"x", "trials_per_probe"}},
    {"hlo", {"x", "N", "trials"}},
    {"volume", {"N_list", "trials", "volume_budget"}},
    {"epsnet", {"eps", "gamma", "N", "trials", "body_p", "region_grid"}},
    {"vc", {"n", "body", "random_trials", "pattern_grid"}},
};

void validate_keys(const nlohmann::json& config, const std::string& command) {
    const auto& extra = kCommandKeys.at(command);
    for (auto it = config.begin(); it != config.end(); ++it) {
        if (kCommonKeys.count(it.key()) || extra.count(it.key())) continue;
        throw ConfigError("unknown config key for command '" + command + "': " + it.key());
    }
}

Vec get_vec(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("expected a numeric array");
    Vec v;
    for (const auto& e : j) v.push_back(e.get<double>());
    return v;
}

std::string stem_for(const std::string& kind, int n, long long N, std::uint64_t seed) {
    std::string s = kind + "_n" + std::to_string(n);
    if (N >= 0) s += "_N" + std::to_string(N);
    s += "_s" + std::to_string(seed);
    return s;
}

Matrix body_polygon(const ConvexBodyApprox& body) {
    // Boundary points of a planar body, ordered by grid angle already.
    return body.boundary_points;
}

struct RunContext {
    nlohmann::json config;
    std::string command;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    bool emit_svg = false;
    std::size_t grid = 0;
    std::size_t mc_budget = 200000;
    bool has_measure = false;
    MeasureSpec measure;
};

RunContext prepare(const nlohmann::json& config) {
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    if (!config.contains("command")) throw ConfigError("config needs a 'command'");
    RunContext ctx;
    ctx.config = config;
    ctx.command = config.at("command").get<std::string>();
    if (!kCommands.count(ctx.command)) throw ConfigError("unknown command: " + ctx.command);
    validate_keys(config, ctx.command);
    ctx.seed = config.value("seed", (std::uint64_t)0);
    if (config.contains("out_dir")) {
        ctx.out_dir = config.at("out_dir").get<std::string>();
    } else if (const char* root = std::getenv("DEPTHLAB_OUT_ROOT")) {
        ctx.out_dir = root;
    }
    ctx.emit_svg = config.value("emit_svg", false);
    ctx.grid = config.value("grid", (std::size_t)0);
    ctx.mc_budget = config.value("mc_budget", (std::size_t)200000);
    if (config.contains("workers")) set_default_workers(config.at("workers").get<std::size_t>());
    if (config.contains("measure")) {
        ctx.measure = MeasureSpec::from_json(config.at("measure"));
        ctx.has_measure = true;
    } else if (ctx.command != "vc") {
        throw ConfigError("command '" + ctx.command + "' needs a 'measure'");
    }
    if (ctx.emit_svg && ctx.has_measure && ctx.measure.dim != 2)
        throw ConfigError("emit_svg is available only for n == 2");
    return ctx;
}

struct Artifacts {
    ExperimentReport report;
    std::string stem;
    nlohmann::json body_json;  // optional secondary artifact
    bool has_body = false;
    SvgScene svg;
    bool has_svg = false;
    std::string summary;
    int exit_code = 0;
};

int verdict_exit_code(const std::string& verdict) {
    if (verdict == "violated") return 2;
    return 0;  // consistent and vacuous both succeed
}

// --------------------------- command handlers -----------------------------

Artifacts cmd_depth(const RunContext& ctx) {
    if (!ctx.config.contains("x")) throw ConfigError("depth: missing 'x'");
    Vec x = get_vec(ctx.config.at("x"));
    DirectionBudget budget;
    budget.grid = ctx.grid;
    budget.mc_budget = ctx.mc_budget;
    budget.seed = ctx.seed;
    DepthEstimate d = depth_at(ctx.measure, x, budget);
    Artifacts art;
    art.report.kind = "depth";
    art.report.config = ctx.config;
    art.report.trials.push_back({{"x", ctx.config.at("x")},
                                 {"upper", d.upper},
                                 {"lower", d.lower},
                                 {"method", depth_method_name(d.method)},
                                 {"directions_used", d.directions_used}});
    art.report.aggregate = {{"upper", d.upper}, {"lower", d.lower}};
    art.stem = stem_for("depth", ctx.measure.dim, -1, ctx.seed);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", d.upper);
    art.summary = std::string(buf) + " [lower=" + format_double(d.lower) +
                  ", method=" + depth_method_name(d.method) + "]";
    return art;
}

Artifacts cmd_region(const RunContext& ctx) {
    double p;
    if (ctx.config.contains("p")) {
        p = ctx.config.at("p").get<double>();
    } else if (ctx.config.contains("beta") && ctx.config.contains("N")) {
        double beta = ctx.config.at("beta").get<double>();
        double N = ctx.config.at("N").get<double>();
        p = beta * std::log(N / ctx.measure.dim);
    } else {
        throw ConfigError("region: provide 'p' or both 'beta' and 'N'");
    }
    RegionParams rp;
    rp.grid = ctx.grid;
    rp.grid_seed = ctx.config.value("grid_seed", (std::uint64_t)0);
    ConvexBodyApprox body = tukey_region(ctx.measure, p, rp);
    Artifacts art;
    art.report.kind = "region";
    art.report.config = ctx.config;
    art.report.aggregate = {{"p", p},
                            {"grid", body.grid.rows},
                            {"max_support_gap", body.max_support_gap()},
                            {"outer_radius", body.outer_radius()}};
    art.report.trials.push_back(
        {{"p", p}, {"outer_radius", body.outer_radius()}, {"max_support_gap", body.max_support_gap()}});
    art.body_json = body.to_json();
    art.has_body = true;
    art.stem = stem_for("region", ctx.measure.dim, -1, ctx.seed);
    if (ctx.emit_svg) {
        art.svg.add_polygon(body_polygon(body), "#1f77b4", "#1f77b4", 0.15);
        art.has_svg = true;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "consistent region p=%.4f outer_radius=%.6g", p,
                  body.outer_radius());
    art.summary = buf;
    return art;
}

Artifacts cmd_body(const RunContext& ctx) {
    if (!ctx.config.contains("p")) throw ConfigError("body: missing 'p'");
    double p = ctx.config.at("p").get<double>();
    std::string kind = ctx.config.value("body_kind", std::string("zp_plus"));
    std::uint64_t gseed = ctx.config.value("grid_seed", (std::uint64_t)0);
    std::size_t M = ctx.grid ? ctx.grid : default_grid_size(ctx.measure.dim);
    Matrix dirs = direction_grid(ctx.measure.dim, M, gseed);
    ConvexBodyApprox body;
    if (kind == "zp_plus") {
        body = zp_plus_body(ctx.measure, p, dirs, ctx.mc_budget, ctx.seed);
    } else if (kind == "ball_kp") {
        const MeasureSpec& spec = ctx.measure;
        body.grid = dirs;
        body.center.assign((std::size_t)spec.dim, 0.0);
        body.p = p;
        body.boundary_points = Matrix(M, (std::size_t)spec.dim);
        body.support_values.assign(M, 0.0);
        for (std::size_t i = 0; i < M; ++i) {
            double rho = ball_body_radial(spec, p, dirs.row_span(i));
            for (int j = 0; j < spec.dim; ++j) body.boundary_points.at(i, j) = rho * dirs.at(i, j);
        }
        for (std::size_t i = 0; i < M; ++i) {
            double mx = 0.0;
            for (std::size_t j = 0; j < M; ++j)
                mx = std::max(mx, dot(body.boundary_points.row_span(j), dirs.row_span(i)));
            body.support_values[i] = mx;
        }
    } else {
        throw ConfigError("body: body_kind must be zp_plus or ball_kp");
    }
    Artifacts art;
    art.report.kind = "body";
    art.report.config = ctx.config;
    art.report.aggregate = {{"p", p},
                            {"kind", kind},
                            {"grid", body.grid.rows},
                            {"outer_radius", body.outer_radius()}};
    art.report.trials.push_back({{"p", p}, {"kind", kind}, {"outer_radius", body.outer_radius()}});
    art.body_json = body.to_json();
    art.has_body = true;
    art.stem = stem_for("body", ctx.measure.dim, -1, ctx.seed);
    if (ctx.emit_svg) {
        art.svg.add_polygon(body_polygon(body), "#2ca02c", "#2ca02c", 0.15);
        art.has_svg = true;
    }
    art.summary = "consistent body kind=" + kind + " outer_radius=" +
                  format_double(body.outer_radius());
    return art;
}

Artifacts cmd_cramer(const RunContext& ctx) {
    Artifacts art;
    art.report.kind = "cramer";
    art.report.config = ctx.config;
    if (ctx.config.contains("x")) {
        Vec x = get_vec(ctx.config.at("x"));
        CramerResult r = cramer_transform(ctx.measure, x);
        nlohmann::json row{{"x", ctx.config.at("x")},
                           {"value", r.finite ? r.value : std::numeric_limits<double>::infinity()},
                           {"finite", r.finite},
                           {"converged", r.converged}};
        if (!r.finite) row["certificate_dir"] = r.certificate_dir;
        art.report.trials.push_back(row);
        art.report.aggregate = {{"value", r.finite ? nlohmann::json(r.value) : nlohmann::json("inf")},
                                {"finite", r.finite}};
        art.stem = stem_for("cramer", ctx.measure.dim, -1, ctx.seed);
        art.summary = r.finite ? ("consistent cramer value=" + format_double(r.value))
                               : "consistent cramer value=inf";
        return art;
    }
    if (!ctx.config.contains("p")) throw ConfigError("cramer: provide 'x' or 'p'");
    double p = ctx.config.at("p").get<double>();
    RegionParams rp;
    rp.grid = ctx.grid;
    rp.grid_seed = ctx.config.value("grid_seed", (std::uint64_t)0);
    ConvexBodyApprox body = bp_level_set(ctx.measure, p, rp);
    art.report.aggregate = {{"p", p},
                            {"grid", body.grid.rows},
                            {"outer_radius", body.outer_radius()},
                            {"max_support_gap", body.max_support_gap()}};
    art.report.trials.push_back({{"p", p}, {"outer_radius", body.outer_radius()}});
    art.body_json = body.to_json();
    art.has_body = true;
    art.stem = stem_for("cramer", ctx.measure.dim, -1, ctx.seed);
    if (ctx.emit_svg) {
        art.svg.add_polygon(body_polygon(body), "#d62728", "#d62728", 0.12);
        art.has_svg = true;
    }
    art.summary = "consistent cramer body p=" + format_double(p) +
                  " outer_radius=" + format_double(body.outer_radius());
    return art;
}

Artifacts cmd_inclusion(const RunContext& ctx) {
    for (const char* k : {"N", "beta", "trials"})
        if (!ctx.config.contains(k)) throw ConfigError(std::string("inclusion: missing '") + k + "'");
    std::size_t N = ctx.config.at("N").get<std::size_t>();
    double beta = ctx.config.at("beta").get<double>();
    std::size_t trials = ctx.config.at("trials").get<std::size_t>();
    InclusionTrialParams params;
    params.region_grid = ctx.config.value("region_grid", (std::size_t)0);
    Artifacts art;
    art.report = inclusion_trial(ctx.measure, N, beta, trials, ctx.seed, params);
    art.report.config["cli"] = ctx.config;
    art.stem = stem_for("inclusion", ctx.measure.dim, (long long)N, ctx.seed);
    if (ctx.emit_svg) {
        RegionParams rp;
        rp.grid = params.region_grid;
        double p = beta * std::log((double)N / ctx.measure.dim);
        try {
            ConvexBodyApprox body = tukey_region(ctx.measure, p, rp);
            PointCloud cloud = sample(ctx.measure, N, splitmix64(ctx.seed + 0x9e3779b97f4a7c15ULL));
            RandomPolytope P(cloud.points, false, cloud.seed);
            art.svg.add_points(cloud.points, "#7f7f7f", 1.2);
            art.svg.add_polygon(hull_2d(P), "#ff7f0e", "", 0.0);
            art.svg.add_polygon(body_polygon(body), "#1f77b4", "#1f77b4", 0.2);
            art.has_svg = true;
        } catch (const EmptyLevelSet&) {
        }
    }
    double freq = art.report.aggregate.value("frequency", 0.0);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s inclusion failures=%zu/%zu bound=%.3g",
                  art.report.verdict.c_str(),
                  (std::size_t)art.report.aggregate.value("failures", (std::size_t)0), trials,
                  art.report.theorem_bound);
    (void)freq;
    art.summary = buf;
    art.exit_code = verdict_exit_code(art.report.verdict);
    return art;
}

Artifacts cmd_nmu(const RunContext& ctx) {
    if (!ctx.config.contains("x")) throw ConfigError("nmu: missing 'x'");
    Vec x = get_vec(ctx.config.at("x"));
    std::size_t tpp = ctx.config.value("trials_per_probe", (std::size_t)100000);
    NmuResult r = nmu_estimate(ctx.measure, x, tpp, ctx.seed);
    Artifacts art;
    art.report = r.report;
    art.report.config["cli"] = ctx.config;
    art.stem = stem_for("nmu", ctx.measure.dim, -1, ctx.seed);
    std::ostringstream s;
    s << art.report.verdict << " nmu N_hat=" << r.n_hat << " band=[" << r.band_lo << ','
      << r.band_hi << "] phi=" << format_double(r.depth_used);
    art.summary = s.str();
    art.exit_code = verdict_exit_code(art.report.verdict);
    return art;
}

Artifacts cmd_hlo(const RunContext& ctx) {
    for (const char* k : {"x", "N", "trials"})
        if (!ctx.config.contains(k)) throw ConfigError(std::string("hlo: missing '") + k + "'");
    Vec x = get_vec(ctx.config.at("x"));
    std::size_t N = ctx.config.at("N").get<std::size_t>();
    std::size_t trials = ctx.config.at("trials").get<std::size_t>();
    Artifacts art;
    art.report = hlo_bound_check(ctx.measure, x, N, trials, ctx.seed);
    art.report.config["cli"] = ctx.config;
    art.stem = stem_for("hlo", ctx.measure.dim, (long long)N, ctx.seed);
    std::ostringstream s;
    s << art.report.verdict << " hlo p_out=" << art.report.aggregate.value("p_outside", 0.0)
      << " bound=" << art.report.theorem_bound;
    art.summary = s.str();
    art.exit_code = verdict_exit_code(art.report.verdict);
    return art;
}

Artifacts cmd_volume(const RunContext& ctx) {
    for (const char* k : {"N_list", "trials"})
        if (!ctx.config.contains(k)) throw ConfigError(std::string("volume: missing '") + k + "'");
    std::vector<std::size_t> N_list;
    for (const auto& v : ctx.config.at("N_list")) N_list.push_back(v.get<std::size_t>());
    std::size_t trials = ctx.config.at("trials").get<std::size_t>();
    std::size_t vb = ctx.config.value("volume_budget", (std::size_t)20000);
    Artifacts art;
    art.report = volume_scaling(ctx.measure, N_list, trials, ctx.seed, vb);
    art.report.config["cli"] = ctx.config;
    art.stem = stem_for("volume", ctx.measure.dim,
                        (long long)N_list.back(), ctx.seed);
    std::ostringstream s;
    s << art.report.verdict << " volume r_min=" << art.report.aggregate.value("r_min", 0.0)
      << " r_max=" << art.report.aggregate.value("r_max", 0.0);
    art.summary = s.str();
    art.exit_code = verdict_exit_code(art.report.verdict);
    return art;
}

Artifacts cmd_epsnet(const RunContext& ctx) {
    for (const char* k : {"eps", "gamma", "N", "trials"})
        if (!ctx.config.contains(k)) throw ConfigError(std::string("epsnet: missing '") + k + "'");
    double eps = ctx.config.at("eps").get<double>();
    double gamma = ctx.config.at("gamma").get<double>();
    std::size_t N = ctx.config.at("N").get<std::size_t>();
    std::size_t trials = ctx.config.at("trials").get<std::size_t>();
    double body_p = ctx.config.value("body_p", std::log(1.0 / eps));
    RegionParams rp;
    rp.grid = ctx.config.value("region_grid", (std::size_t)0);
    ConvexBodyApprox body = tukey_region(ctx.measure, body_p, rp);
    Artifacts art;
    art.report = epsnet_transversal(ctx.measure, body, eps, gamma, N, trials, ctx.seed);
    art.report.config["cli"] = ctx.config;
    art.stem = stem_for("epsnet", ctx.measure.dim, (long long)N, ctx.seed);
    if (ctx.emit_svg) {
        PointCloud cloud = sample(ctx.measure, N, splitmix64(ctx.seed + 1));
        RandomPolytope P(cloud.points, false, cloud.seed);
        art.svg.add_points(cloud.points, "#7f7f7f", 1.0);
        art.svg.add_polygon(hull_2d(P), "#ff7f0e", "", 0.0);
        art.svg.add_polygon(body_polygon(body), "#1f77b4", "#1f77b4", 0.2);
        art.has_svg = true;
    }
    std::ostringstream s;
    s << art.report.verdict << " epsnet freq=" << art.report.aggregate.value("frequency", 0.0)
      << " bound=" << art.report.theorem_bound;
    art.summary = s.str();
    art.exit_code = verdict_exit_code(art.report.verdict);
    return art;
}

Matrix named_body_vertices(const nlohmann::json& body, int n) {
    if (body.is_string()) {
        std::string name = body.get<std::string>();
        if (name == "square") {
            if (n != 2) throw ConfigError("vc: square body needs n == 2");
            Matrix v(4, 2);
            double corners[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 2; ++j) v.at(i, j) = corners[i][j];
            return v;
        }
        if (name == "cube") {
            if (n != 3) throw ConfigError("vc: cube body needs n == 3");
            Matrix v(8, 3);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 3; ++j) v.at(i, j) = (i >> j) & 1 ? 1.0 : -1.0;
            return v;
        }
        throw ConfigError("vc: unknown body name: " + name);
    }
    Matrix v;
    v.rows = body.size();
    v.cols = (std::size_t)n;
    for (const auto& row : body) {
        if ((int)row.size() != n) throw ConfigError("vc: ragged body vertices");
        for (const auto& e : row) v.data.push_back(e.get<double>());
    }
    return v;
}

Artifacts cmd_vc(const RunContext& ctx) {
    if (!ctx.config.contains("n")) throw ConfigError("vc: missing 'n'");
    int n = ctx.config.at("n").get<int>();
    nlohmann::json body = ctx.config.value("body", nlohmann::json(n == 2 ? "square" : "cube"));
    std::size_t random_trials = ctx.config.value("random_trials", (std::size_t)100);
    std::size_t pattern_grid = ctx.config.value("pattern_grid", (std::size_t)10000);
    Artifacts art;
    art.report = vc_shatter_check(n, named_body_vertices(body, n), random_trials, ctx.seed,
                                  pattern_grid);
    art.report.config["cli"] = ctx.config;
    art.stem = stem_for("vc", n, -1, ctx.seed);
    std::ostringstream s;
    s << art.report.verdict << " vc patterns="
      << art.report.aggregate.value("constructed_patterns_realized", (std::size_t)0) << "/"
      << art.report.aggregate.value("constructed_patterns_wanted", (std::size_t)0)
      << " shattered_random_sets="
      << art.report.aggregate.value("random_sets_shattered", (std::size_t)0);
    art.summary = s.str();
    art.exit_code = verdict_exit_code(art.report.verdict);
    return art;
}

Artifacts dispatch(const RunContext& ctx) {
    if (ctx.command == "depth") return cmd_depth(ctx);
    if (ctx.command == "region") return cmd_region(ctx);
    if (ctx.command == "body") return cmd_body(ctx);
    if (ctx.command == "cramer") return cmd_cramer(ctx);
    if (ctx.command == "inclusion") return cmd_inclusion(ctx);
    if (ctx.command == "nmu") return cmd_nmu(ctx);
    if (ctx.command == "hlo") return cmd_hlo(ctx);
    if (ctx.command == "volume") return cmd_volume(ctx);
    if (ctx.command == "epsnet") return cmd_epsnet(ctx);
    if (ctx.command == "vc") return cmd_vc(ctx);
    throw ConfigError("unknown command: " + ctx.command);
}

}  // namespace

RunOutcome run_config(const nlohmann::json& config) {
    RunOutcome out;
    RunContext ctx = prepare(config);
    Artifacts art = dispatch(ctx);
    fs::create_directories(ctx.out_dir);
    std::string base = (fs::path(ctx.out_dir) / art.stem).string();
    art.report.write(base + ".report.json", base + ".results.csv");
    out.artifacts.push_back(base + ".report.json");
    out.artifacts.push_back(base + ".results.csv");
    if (art.has_body) {
        std::ofstream f(base + ".body.json");
        f << art.body_json.dump(2) << '\n';
        out.artifacts.push_back(base + ".body.json");
    }
    if (art.has_svg) {
        art.svg.write(base + ".svg");
        out.artifacts.push_back(base + ".svg");
    }
    out.exit_code = art.exit_code;
    out.summary = art.summary;
    return out;
}

nlohmann::json apply_overrides(nlohmann::json config, const std::vector<std::string>& overrides) {
    for (const std::string& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value: " + ov);
        std::string path = ov.substr(0, eq);
        std::string raw = ov.substr(eq + 1);
        nlohmann::json value;
        try {
            value = nlohmann::json::parse(raw);
        } catch (...) {
            value = raw;  // plain string
        }
        nlohmann::json* node = &config;
        std::stringstream ss(path);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(ss, part, '.')) parts.push_back(part);
        if (parts.empty()) throw ConfigError("--set: empty key");
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
        (*node)[parts.back()] = value;
    }
    return config;
}

RunOutcome run_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    RunOutcome out;
    try {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config: " + path);
        nlohmann::json config = nlohmann::json::parse(f);  // throws on malformed input
        config = apply_overrides(config, overrides);
        return run_config(config);
    } catch (const nlohmann::json::exception& e) {
        out.exit_code = 1;
        out.summary = std::string("error: malformed config: ") + e.what();
    } catch (const std::exception& e) {
        out.exit_code = 1;
        out.summary = std::string("error: ") + e.what();
    }
    return out;
}

RunOutcome run_sweep(const std::vector<std::string>& config_paths,
                     const std::vector<std::string>& overrides,
                     const std::string& out_dir_override) {
    RunOutcome out;
    if (config_paths.empty()) {
        // An empty sweep still produces an (empty) merged CSV.
        std::string dir = out_dir_override.empty() ? "." : out_dir_override;
        fs::create_directories(dir);
        std::string merged = (fs::path(dir) / "sweep_results.csv").string();
        std::ofstream f(merged);
        f << "\n";
        out.exit_code = 0;
        out.summary = "consistent sweep runs=0";
        out.artifacts.push_back(merged);
        return out;
    }

    // Parse configs up front; the sweep must be homogeneous in command.
    std::vector<nlohmann::json> configs;
    std::string command;
    for (const auto& path : config_paths) {
        std::ifstream f(path);
        if (!f) {
            out.exit_code = 1;
            out.summary = "error: cannot open config: " + path;
            return out;
        }
        nlohmann::json cfg;
        try {
            cfg = nlohmann::json::parse(f);
            cfg = apply_overrides(cfg, overrides);
        } catch (const std::exception& e) {
            out.exit_code = 1;
            out.summary = std::string("error: malformed config ") + path + ": " + e.what();
            return out;
        }
        std::string cmd = cfg.value("command", std::string());
        if (command.empty()) command = cmd;
        if (cmd != command) {
            out.exit_code = 1;
            out.summary = "error: sweep requires a homogeneous command across configs";
            return out;
        }
        configs.push_back(std::move(cfg));
    }

    std::string dir = out_dir_override;
    if (dir.empty()) dir = configs.front().value("out_dir", std::string("."));
    fs::create_directories(dir);

    std::vector<std::string> merged_rows;
    std::vector<std::string> merged_cols;
    nlohmann::json index = nlohmann::json::array();
    int exit_code = 0;
    std::string first_error;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        try {
            RunContext ctx = prepare(configs[ci]);
            Artifacts art = dispatch(ctx);
            fs::create_directories(ctx.out_dir);
            // Index prefix keeps runs distinct when configs share (n, N, seed).
            std::string stem = "run" + std::to_string(ci) + "_" + art.stem;
            std::string base = (fs::path(ctx.out_dir) / stem).string();
            art.report.write(base + ".report.json", base + ".results.csv");
            out.artifacts.push_back(base + ".report.json");
            index.push_back({{"config", config_paths[ci]}, {"stem", stem},
                             {"verdict", art.report.verdict}});
            exit_code = std::max(exit_code, art.exit_code);

            // Merge: config scalars prefixed with cfg_, then the trial row.
            std::vector<std::string> cols;
            for (auto it = configs[ci].begin(); it != configs[ci].end(); ++it)
                if (it.value().is_primitive()) cols.push_back("cfg_" + it.key());
            if (!art.report.trials.empty())
                for (auto it = art.report.trials.front().begin();
                     it != art.report.trials.front().end(); ++it)
                    cols.push_back(it.key());
            std::sort(cols.begin(), cols.end());
            if (merged_cols.empty()) merged_cols = cols;
            for (const auto& trial : art.report.trials) {
                std::string row;
                for (std::size_t c = 0; c < merged_cols.size(); ++c) {
                    if (c) row += ',';
                    const std::string& col = merged_cols[c];
                    if (col.rfind("cfg_", 0) == 0) {
                        std::string key = col.substr(4);
                        if (configs[ci].contains(key) && configs[ci].at(key).is_primitive())
                            row += json_value_to_csv(configs[ci].at(key));
                    } else if (trial.contains(col)) {
                        row += json_value_to_csv(trial.at(col));
                    }
                }
                merged_rows.push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            exit_code = 1;
            first_error = e.what();
            break;  // abort, preserving completed outputs
        }
    }

    std::string merged = (fs::path(dir) / "sweep_results.csv").string();
    {
        std::ofstream f(merged);
        for (std::size_t c = 0; c < merged_cols.size(); ++c) {
            if (c) f << ',';
            f << merged_cols[c];
        }
        f << '\n';
        for (const auto& r : merged_rows) f << r << '\n';
    }
    out.artifacts.push_back(merged);
    {
        std::ofstream f((fs::path(dir) / "sweep_index.json").string());
        f << nlohmann::json{{"completed", index}, {"total", config_paths.size()}}.dump(2) << '\n';
    }
    out.exit_code = exit_code;
    if (exit_code == 1)
        out.summary = "error: sweep aborted: " + first_error;
    else
        out.summary = "sweep runs=" + std::to_string(index.size()) + "/" +
                      std::to_string(config_paths.size());
    return out;
}

}  // namespace depthlab
