#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "depthlab/runner.hpp"

using namespace depthlab;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& tag) {
    std::string d = "/tmp/depthlab_cli_" + tag;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string write_config(const std::string& dir, const std::string& name,
                         const nlohmann::json& j) {
    std::string path = dir + "/" + name;
    std::ofstream f(path);
    f << j.dump(2);
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

nlohmann::json gaussian2() {
    return nlohmann::json{{"family", "gaussian_std"},
                          {"dim", 2},
                          {"params", nlohmann::json::object()},
                          {"affine", nullptr}};
}

}  // namespace

TEST_CASE("depth command prints the gaussian value") {
    std::string dir = fresh_dir("depth");
    nlohmann::json cfg{{"command", "depth"},
                       {"measure", gaussian2()},
                       {"x", {1.0, 0.0}},
                       {"out_dir", dir},
                       {"seed", 1}};
    std::string path = write_config(dir, "cfg.json", cfg);
    RunOutcome out = run_config_file(path, {});
    CHECK(out.exit_code == 0);
    CHECK(out.summary.find("0.158655") != std::string::npos);
    CHECK(fs::exists(dir + "/depth_n2_s1.report.json"));
    CHECK(fs::exists(dir + "/depth_n2_s1.results.csv"));
}

TEST_CASE("vc command reports full shattering of the square") {
    std::string dir = fresh_dir("vc");
    nlohmann::json cfg{{"command", "vc"}, {"n", 2}, {"body", "square"}, {"out_dir", dir},
                       {"random_trials", 20}, {"pattern_grid", 2000}, {"seed", 2}};
    std::string path = write_config(dir, "cfg.json", cfg);
    RunOutcome out = run_config_file(path, {});
    CHECK(out.exit_code == 0);
    nlohmann::json rep = nlohmann::json::parse(slurp(dir + "/vc_n2_s2.report.json"));
    CHECK(rep.at("aggregate").at("constructed_patterns_realized").get<int>() == 4);
    CHECK(rep.at("verdict") == "consistent");
}

TEST_CASE("malformed config: status 1, no partial artifacts") {
    std::string dir = fresh_dir("malformed");
    std::string path = dir + "/bad.json";
    {
        std::ofstream f(path);
        f << "{ this is not json";
    }
    RunOutcome out = run_config_file(path, {});
    CHECK(out.exit_code == 1);
    std::size_t files = 0;
    for (auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);  // only the config itself
}

TEST_CASE("unknown keys are rejected before any compute") {
    std::string dir = fresh_dir("badkey");
    nlohmann::json cfg{{"command", "depth"},
                       {"measure", gaussian2()},
                       {"x", {0.0, 0.0}},
                       {"out_dir", dir},
                       {"tpyo", 1}};
    std::string path = write_config(dir, "cfg.json", cfg);
    RunOutcome out = run_config_file(path, {});
    CHECK(out.exit_code == 1);
    CHECK(out.summary.find("tpyo") != std::string::npos);
}

TEST_CASE("violated verdicts exit with status 2") {
    // A 100x-scaled gaussian honestly breaks the fixed volume regression
    // window (the ratio r(N) is scale-dependent by construction).
    std::string dir = fresh_dir("violated");
    nlohmann::json measure = gaussian2();
    measure["affine"] = {{"A", {{100.0, 0.0}, {0.0, 100.0}}}, {"b", {0.0, 0.0}}};
    nlohmann::json cfg{{"command", "volume"}, {"measure", measure}, {"N_list", {16, 64}},
                       {"trials", 20},        {"out_dir", dir},     {"seed", 11}};
    std::string path = write_config(dir, "cfg.json", cfg);
    RunOutcome out = run_config_file(path, {});
    CHECK(out.exit_code == 2);
    CHECK(out.summary.find("violated") != std::string::npos);
}

TEST_CASE("reruns reproduce results.csv byte-identically") {
    std::string dir1 = fresh_dir("rerun1");
    std::string dir2 = fresh_dir("rerun2");
    nlohmann::json cfg{{"command", "hlo"},
                       {"measure", gaussian2()},
                       {"x", {0.0, 0.0}},
                       {"N", 12},
                       {"trials", 3000},
                       {"seed", 9},
                       {"workers", 2}};
    cfg["out_dir"] = dir1;
    RunOutcome a = run_config_file(write_config(dir1, "cfg.json", cfg), {});
    cfg["out_dir"] = dir2;
    RunOutcome b = run_config_file(write_config(dir2, "cfg.json", cfg), {});
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(slurp(dir1 + "/hlo_n2_N12_s9.results.csv") ==
          slurp(dir2 + "/hlo_n2_N12_s9.results.csv"));
    CHECK(slurp(dir1 + "/hlo_n2_N12_s9.results.csv").size() > 1000);
}

TEST_CASE("--set overrides reach into nested keys") {
    std::string dir = fresh_dir("override");
    nlohmann::json cfg{{"command", "depth"},
                       {"measure", gaussian2()},
                       {"x", {1.0, 0.0}},
                       {"out_dir", dir},
                       {"seed", 1}};
    std::string path = write_config(dir, "cfg.json", cfg);
    RunOutcome out = run_config_file(path, {"x=[0.0,0.0]", "seed=3"});
    CHECK(out.exit_code == 0);
    CHECK(out.summary.find("0.5") != std::string::npos);
    CHECK(fs::exists(dir + "/depth_n2_s3.report.json"));
}

TEST_CASE("region command emits a body and an SVG in the plane") {
    std::string dir = fresh_dir("svg");
    nlohmann::json cfg{{"command", "region"}, {"measure", gaussian2()}, {"p", 2.0},
                       {"grid", 64},          {"out_dir", dir},         {"emit_svg", true},
                       {"seed", 4}};
    RunOutcome out = run_config_file(write_config(dir, "cfg.json", cfg), {});
    CHECK(out.exit_code == 0);
    CHECK(fs::exists(dir + "/region_n2_s4.body.json"));
    std::string svg = slurp(dir + "/region_n2_s4.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
}

TEST_CASE("sweep merges homogeneous runs and rejects mixed commands") {
    std::string dir = fresh_dir("sweep");
    nlohmann::json base{{"command", "vc"}, {"n", 2}, {"body", "square"}, {"out_dir", dir},
                        {"random_trials", 5}, {"pattern_grid", 500}};
    base["seed"] = 1;
    std::string c1 = write_config(dir, "c1.json", base);
    base["seed"] = 2;
    std::string c2 = write_config(dir, "c2.json", base);
    RunOutcome out = run_sweep({c1, c2}, {}, dir);
    CHECK(out.exit_code == 0);
    std::string merged = slurp(dir + "/sweep_results.csv");
    CHECK(merged.find("cfg_seed") != std::string::npos);
    nlohmann::json index = nlohmann::json::parse(slurp(dir + "/sweep_index.json"));
    CHECK(index.at("completed").size() == 2);

    nlohmann::json other{{"command", "depth"}, {"measure", gaussian2()}, {"x", {0.0, 0.0}},
                         {"out_dir", dir}};
    std::string c3 = write_config(dir, "c3.json", other);
    RunOutcome bad = run_sweep({c1, c3}, {}, dir);
    CHECK(bad.exit_code == 1);
    CHECK(bad.summary.find("homogeneous") != std::string::npos);

    // a parameter sweep over configs sharing (kind, n, N, seed) still keeps
    // one report per run
    std::string dirb = fresh_dir("sweep_beta");
    nlohmann::json inc{{"command", "inclusion"}, {"measure", gaussian2()}, {"N", 64},
                       {"trials", 5},            {"out_dir", dirb},        {"seed", 4}};
    inc["beta"] = 0.3;
    std::string b1 = write_config(dirb, "b1.json", inc);
    inc["beta"] = 0.5;
    std::string b2 = write_config(dirb, "b2.json", inc);
    inc["beta"] = 0.7;
    std::string b3 = write_config(dirb, "b3.json", inc);
    RunOutcome sw = run_sweep({b1, b2, b3}, {}, dirb);
    CHECK(sw.exit_code == 0);
    std::size_t reports = 0;
    for (auto& e : fs::directory_iterator(dirb))
        if (e.path().string().find(".report.json") != std::string::npos) ++reports;
    CHECK(reports == 3);

    // empty sweep: header-only CSV
    std::string dir2 = fresh_dir("sweep_empty");
    RunOutcome empty = run_sweep({}, {}, dir2);
    CHECK(empty.exit_code == 0);
    CHECK(fs::exists(dir2 + "/sweep_results.csv"));
}

TEST_CASE("DEPTHLAB_OUT_ROOT provides the default output root") {
    std::string dir = fresh_dir("envroot");
    setenv("DEPTHLAB_OUT_ROOT", dir.c_str(), 1);
    nlohmann::json cfg{{"command", "depth"}, {"measure", gaussian2()}, {"x", {0.0, 0.0}},
                       {"seed", 6}};
    std::string path = write_config(dir, "cfg.json", cfg);
    RunOutcome out = run_config_file(path, {});
    unsetenv("DEPTHLAB_OUT_ROOT");
    CHECK(out.exit_code == 0);
    CHECK(fs::exists(dir + "/depth_n2_s6.report.json"));
}
