#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

// LCSDE_BIN is injected by the build as the path of the lcsde executable.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
    int code = -1;
    std::string out; // stdout + stderr interleaved
};

CmdResult run_cmd(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(LCSDE_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("lcsde_cli_" + tag);
    fs::remove_all(p);
    return p;
}

fs::path write_config(const std::string& tag, const json& cfg) {
    fs::path p = fs::temp_directory_path() / ("lcsde_cfg_" + tag + ".json");
    std::ofstream out(p);
    out << cfg.dump(2);
    return p;
}

json load_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

json small_solve_config(const fs::path& out_dir, std::uint64_t seed = 7) {
    return json{{"schema", 1},
                {"mode", "solve"},
                {"preset", "compounding"},
                {"grid", {{"T", 1.0}, {"M", 16}}},
                {"paths", 10},
                {"seed", seed},
                {"iterations", 4},
                {"output_dir", out_dir.string()}};
}

} // namespace

TEST_CASE("geom expressions") {
    CmdResult r = run_cmd("geom 'hausdorff({(1,1)}+orthant2, orthant2)'");
    CHECK(r.code == 0);
    CHECK(r.out.find("1.414213562") != std::string::npos);

    r = run_cmd("geom 'scale(2, {(1,0),(0,1)}+orthant2)'");
    CHECK(r.code == 0);
    CHECK(r.out.find("[0.0,2.0]") != std::string::npos);
    CHECK(r.out.find("[2.0,0.0]") != std::string::npos);

    // mixing distinct nontrivial cones is a hard error
    r = run_cmd("geom 'sum({(0,0)}+orthant2, {(0,0)}+cone{(1,1)})'");
    CHECK(r.code == 2);
    CHECK(r.out.find("incompatible") != std::string::npos);

    r = run_cmd("geom 'not a real expression ('");
    CHECK(r.code == 2);
}

TEST_CASE("proptest subcommand") {
    CmdResult r = run_cmd("proptest cancellation --cases 20 --seed 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("20 cases passed") != std::string::npos);

    r = run_cmd("proptest no-such-suite");
    CHECK(r.code == 2);
    CHECK(r.out.find("unknown suite") != std::string::npos);

    r = run_cmd("proptest cancellation --cases 0");
    CHECK(r.code == 2);
}

TEST_CASE("solve run writes a report and a manifest") {
    fs::path dir = fresh_dir("solve");
    fs::path cfg = write_config("solve", small_solve_config(dir));
    CmdResult r = run_cmd("run " + cfg.string());
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(dir / "report.json"));
    REQUIRE(fs::exists(dir / "manifest.json"));

    json report = load_json(dir / "report.json");
    for (const char* key : {"grid", "paths", "seed", "M", "iterate_distances", "bounds",
                            "stability"})
        CHECK(report.contains(key));

    json manifest = load_json(dir / "manifest.json");
    CHECK(manifest.at("schema") == 1);
    CHECK(manifest.at("config").at("preset") == "compounding"); // config echo round-trip
    CHECK(manifest.at("outputs").contains("report.json"));

    // export produces the two plotting tables with headers
    CmdResult e = run_cmd("export " + (dir / "report.json").string());
    REQUIRE(e.code == 0);
    std::ifstream rates(dir / "report_rates.csv");
    std::string header;
    std::getline(rates, header);
    CHECK(header == "iteration,node,t,observed,standard_error,bound");
    std::ifstream modulus(dir / "report_modulus.csv");
    std::getline(modulus, header);
    CHECK(header == "s,t,modulus");
}

TEST_CASE("reruns and thread caps are bit-stable") {
    fs::path dir = fresh_dir("det");
    fs::path cfg = write_config("det", small_solve_config(dir, 99));

    REQUIRE(run_cmd("run " + cfg.string()).code == 0);
    json o1 = load_json(dir / "manifest.json").at("outputs");

    REQUIRE(run_cmd("run " + cfg.string()).code == 0);
    json o2 = load_json(dir / "manifest.json").at("outputs");

    REQUIRE(run_cmd("run " + cfg.string(), "LCSDE_THREADS=4").code == 0);
    json o4 = load_json(dir / "manifest.json").at("outputs");

    CHECK(o1 == o2);
    CHECK(o1 == o4); // parallelism must not leak into the artifacts
}

TEST_CASE("invalid configs fail with exit 2 and leave no outputs") {
    fs::path dir = fresh_dir("badmarket");
    json cfg{{"schema", 1},
             {"mode", "finance"},
             {"market",
              {{"lambda", -0.1}, {"mu", 0.1}, {"r", 0.0}, {"b", 0.0}, {"sigma", 0.0},
               {"p", 1.0}, {"x", 1.0}, {"y", 1.0}}},
             {"grid", {{"T", 1.0}, {"M", 8}}},
             {"paths", 2},
             {"seed", 1},
             {"output_dir", dir.string()}};
    CmdResult r = run_cmd("run " + write_config("badmarket", cfg).string());
    CHECK(r.code == 2);
    CHECK(!fs::exists(dir / "manifest.json"));
    bool empty = !fs::exists(dir) || fs::is_empty(dir);
    CHECK(empty);

    json noschema = small_solve_config(fresh_dir("noschema"));
    noschema.erase("schema");
    CHECK(run_cmd("run " + write_config("noschema", noschema).string()).code == 2);

    json badmode = small_solve_config(fresh_dir("badmode"));
    badmode["mode"] = "frobnicate";
    CHECK(run_cmd("run " + write_config("badmode", badmode).string()).code == 2);

    CHECK(run_cmd("run /nonexistent/config.json").code == 2);
}

TEST_CASE("finance preset run") {
    fs::path dir = fresh_dir("finpreset");
    json cfg{{"schema", 1},
             {"mode", "finance"},
             {"preset", "finance-default"},
             {"grid", {{"T", 1.0}, {"M", 32}}},
             {"paths", 2},
             {"seed", 21},
             {"strategies", 3},
             {"output_dir", dir.string()}};
    CmdResult r = run_cmd("run " + write_config("finpreset", cfg).string());
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(dir / "finance.json"));
    json summary = load_json(dir / "finance.json");
    CHECK(summary.at("within_tolerance") == true);
    std::ifstream res(dir / "residuals.csv");
    std::string header;
    std::getline(res, header);
    CHECK(header == "path_id,node,t,residual,tolerance");
}
