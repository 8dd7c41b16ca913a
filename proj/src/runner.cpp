#include "lcsde/runner.hpp"

#include "lcsde/digest.hpp"
#include "lcsde/finance.hpp"
#include "lcsde/geom_expr.hpp"
#include "lcsde/presets.hpp"
#include "lcsde/propsuites.hpp"
#include "lcsde/qp.hpp"
#include "lcsde/rng.hpp"
#include "lcsde/sde.hpp"
#include "lcsde/set_io.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace lcsde {

namespace {

class ValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& context) {
    if (!obj.is_object()) throw ValidationError(context + ": expected a JSON object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ValidationError(context + ": unknown key \"" + key + "\"");
    for (const auto& key : required)
        if (!obj.contains(key))
            throw ValidationError(context + ": missing key \"" + key + "\"");
}

double get_number(const json& obj, const std::string& key) {
    if (!obj.at(key).is_number())
        throw ValidationError("key \"" + key + "\" must be a number");
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& key) {
    if (!obj.at(key).is_number_integer())
        throw ValidationError("key \"" + key + "\" must be an integer");
    return obj.at(key).get<int>();
}

TimeGrid parse_grid(const json& obj) {
    require_keys(obj, {"T", "M"}, {"T", "M"}, "grid");
    double t = get_number(obj, "T");
    int m = get_int(obj, "M");
    if (!(t > 0.0) || m < 1) throw ValidationError("grid: need T > 0 and M >= 1");
    return TimeGrid(t, m);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Tracks written files so a failing run leaves nothing behind.
class OutputSink {
public:
    explicit OutputSink(const fs::path& dir) : dir_(dir) { fs::create_directories(dir); }

    std::ofstream open(const std::string& name) {
        fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        files_.push_back(p);
        return out;
    }

    void write_json(const std::string& name, const json& j) {
        auto out = open(name);
        out << j.dump(2) << "\n";
    }

    void discard_all() {
        std::error_code ec;
        for (const auto& p : files_) fs::remove(p, ec);
        files_.clear();
    }

    const std::vector<fs::path>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<fs::path> files_;
};

// SetPath CSV: one row per (path, node), vertices as a JSON literal,
// cones referenced by first-appearance id resolved in cones.json.
void write_setpaths_csv(OutputSink& sink, const std::string& name,
                        const std::vector<SetPath>& paths, json& cone_table) {
    std::vector<std::string> cone_keys;
    auto cone_id = [&](const ConeSpec& c) {
        std::string key = cone_to_json(c).dump();
        for (std::size_t i = 0; i < cone_keys.size(); ++i)
            if (cone_keys[i] == key) return i;
        cone_keys.push_back(key);
        return cone_keys.size() - 1;
    };
    auto out = sink.open(name);
    out << "path_id,node,t,vertex_json,cone_id\n";
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const SetPath& sp = paths[p];
        for (std::size_t i = 0; i < sp.values.size(); ++i) {
            json verts = json::array();
            for (const auto& v : sp.values[i].vertices()) verts.push_back(vector_to_json(v));
            out << p << "," << i << "," << fmt(sp.grid.node(static_cast<int>(i))) << ",\""
                << verts.dump() << "\"," << cone_id(sp.values[i].cone()) << "\n";
        }
    }
    cone_table = json::array();
    for (const auto& key : cone_keys) cone_table.push_back(json::parse(key));
}

void write_rates_csv(std::ofstream out, const std::vector<IterateDistance>& rows) {
    out << "k,node,t,observed,standard_error,bound\n";
    for (const auto& r : rows)
        out << r.k << "," << r.node << "," << fmt(r.t) << "," << fmt(r.observed) << ","
            << fmt(r.standard_error) << "," << fmt(r.bound) << "\n";
}

void write_modulus_csv(std::ofstream out, const std::vector<ModulusEntry>& rows) {
    out << "s,t,mean_h2,modulus\n";
    for (const auto& r : rows)
        out << fmt(r.s) << "," << fmt(r.t) << "," << fmt(r.mean_h2) << "," << fmt(r.modulus)
            << "\n";
}

// ---- mode handlers ----------------------------------------------------

void run_geom(const json& cfg, OutputSink& sink) {
    require_keys(cfg, {"schema", "mode", "expression", "output_dir"},
                 {"expression"}, "config");
    if (!cfg.at("expression").is_string())
        throw ValidationError("expression must be a string");
    GeomValue value = evaluate_geom_expression(cfg.at("expression").get<std::string>());
    json result;
    result["expression"] = cfg.at("expression");
    result["rendered"] = render_geom_value(value);
    if (std::holds_alternative<double>(value)) {
        result["kind"] = "number";
        result["value"] = std::get<double>(value);
    } else if (std::holds_alternative<Eigen::VectorXd>(value)) {
        result["kind"] = "vector";
        result["value"] = vector_to_json(std::get<Eigen::VectorXd>(value));
    } else {
        result["kind"] = "set";
        result["value"] = set_to_json(std::get<LCSet>(value));
    }
    sink.write_json("result.json", result);
}

void run_proptest_mode(const json& cfg, OutputSink& sink) {
    require_keys(cfg, {"schema", "mode", "suite", "cases", "seed", "output_dir"},
                 {"suite", "cases", "seed"}, "config");
    std::string suite = cfg.at("suite").get<std::string>();
    if (!prop_suite_exists(suite)) throw ValidationError("unknown suite: " + suite);
    PropResult result =
        run_prop_suite(suite, get_int(cfg, "cases"),
                       static_cast<std::uint64_t>(get_int(cfg, "seed")));
    json j;
    j["suite"] = result.suite;
    j["cases"] = result.cases;
    j["passed"] = result.passed;
    if (result.counterexample) {
        j["counterexample"] = {{"case_index", result.counterexample->case_index},
                               {"size", result.counterexample->size},
                               {"description", result.counterexample->description}};
    }
    sink.write_json("proptest.json", j);
}

struct PresetRun {
    Preset preset;
    TimeGrid grid;
};

PresetRun parse_preset_run(const json& cfg) {
    std::string name = cfg.at("preset").get<std::string>();
    if (!preset_exists(name)) throw ValidationError("unknown preset: " + name);
    Preset preset = make_preset(name);
    TimeGrid grid = cfg.contains("grid") ? parse_grid(cfg.at("grid")) : preset.default_grid;
    if (cfg.contains("xi")) {
        LCSet xi = set_from_json(cfg.at("xi"));
        if (xi.dimension() != preset.xi.dimension())
            throw ValidationError("xi dimension does not match the preset");
        preset.xi = xi;
    }
    return PresetRun{std::move(preset), grid};
}

void run_solve(const json& cfg, OutputSink& sink, const json& echo) {
    require_keys(cfg,
                 {"schema", "mode", "preset", "grid", "paths", "seed", "iterations",
                  "tolerance", "vertex_cap", "xi", "output_dir"},
                 {"preset", "paths", "seed", "iterations"}, "config");
    PresetRun run = parse_preset_run(cfg);
    PicardOptions opts;
    opts.paths = get_int(cfg, "paths");
    opts.seed = static_cast<std::uint64_t>(get_int(cfg, "seed"));
    opts.iterations = get_int(cfg, "iterations");
    if (opts.paths < 1 || opts.iterations < 1)
        throw ValidationError("paths and iterations must be positive");
    if (cfg.contains("tolerance")) opts.tol = get_number(cfg, "tolerance");
    if (cfg.contains("vertex_cap")) {
        int cap = get_int(cfg, "vertex_cap");
        if (cap < 4) throw ValidationError("vertex_cap must be at least 4");
        opts.vertex_cap = static_cast<std::size_t>(cap);
    }

    SolveReport report =
        picard_solve(run.preset.xi, run.preset.drift, run.preset.diffusion, run.grid, opts);
    StabilityStats stability = stability_report(report.final_paths, run.preset.xi);

    json j = report_to_json(report);
    j["stability"] = stability_to_json(stability);
    j["preset"] = run.preset.name;
    j["config"] = echo;
    j["version"] = kArtifactVersion;
    sink.write_json("report.json", j);
    write_rates_csv(sink.open("rates.csv"), report.iterate_distances);
    write_modulus_csv(sink.open("modulus.csv"), stability.modulus_table);
    json cones;
    write_setpaths_csv(sink, "paths.csv", report.final_paths, cones);
    sink.write_json("cones.json", cones);
}

void run_integrate(const json& cfg, OutputSink& sink, const json& echo) {
    require_keys(cfg, {"schema", "mode", "preset", "grid", "seed", "xi", "output_dir"},
                 {"preset", "seed"}, "config");
    PresetRun run = parse_preset_run(cfg);
    const TimeGrid& grid = run.grid;
    const double dt = grid.dt();
    BrownianPath path = sample_brownian(grid, run.preset.diffusion.brownian_dim,
                                        static_cast<std::uint64_t>(get_int(cfg, "seed")), 0);

    // One sweep of the fixed-point map starting from the constant path
    // xi: values_i = xi (+) integral of F(., xi) (+) the Ito hull.
    SetPath constant{grid, std::vector<LCSet>(grid.steps + 1, run.preset.xi)};
    auto field_values = evaluate_field_on_path(run.preset.drift.evaluator, constant, path);
    std::vector<std::vector<Eigen::MatrixXd>> family;
    if (!run.preset.diffusion.empty()) {
        family.resize(grid.steps);
        for (int i = 0; i < grid.steps; ++i)
            family[i] = run.preset.diffusion.members(grid.node(i), path, run.preset.xi);
    }
    SetPath out_path{grid, {}};
    out_path.values.reserve(grid.steps + 1);
    for (int i = 0; i <= grid.steps; ++i) {
        LCSet v = run.preset.xi;
        if (i > 0) v = minkowski_sum(v, riemann_set_integral(field_values, 0, i, dt));
        if (!family.empty() && i > 0)
            v = minkowski_sum(v, ito_family_integral(family, path, i));
        out_path.values.push_back(std::move(v));
    }
    json cones;
    write_setpaths_csv(sink, "integrate.csv", {out_path}, cones);
    sink.write_json("cones.json", cones);
    json j;
    j["preset"] = run.preset.name;
    j["config"] = echo;
    j["version"] = kArtifactVersion;
    j["nodes"] = grid.steps + 1;
    sink.write_json("report.json", j);
}

StrategyRates random_strategy(int steps, std::uint64_t seed, std::uint64_t index) {
    // Piecewise-constant over 8 blocks; one-sided with some probability
    // so boundary-hugging strategies are exercised too.
    StrategyRates s;
    s.theta_l.resize(steps);
    s.theta_m.resize(steps);
    int blocks = std::min(8, steps);
    double style = rng::uniform01(seed, 0x73747261ULL, index, 0);
    for (int i = 0; i < steps; ++i) {
        int b = i * blocks / steps;
        double l = 2.0 * rng::uniform01(seed, 0x73747261ULL, index, 100 + b);
        double m = 2.0 * rng::uniform01(seed, 0x73747261ULL, index, 200 + b);
        if (style < 1.0 / 3.0) m = 0.0;
        else if (style < 2.0 / 3.0) l = 0.0;
        s.theta_l[i] = l;
        s.theta_m[i] = m;
    }
    return s;
}

MarketParams parse_market(const json& obj) {
    require_keys(obj, {"lambda", "mu", "r", "b", "sigma", "p", "x", "y", "strategy"},
                 {"lambda", "mu"}, "market");
    MarketParams m = default_market();
    m.lambda = get_number(obj, "lambda");
    m.mu = get_number(obj, "mu");
    if (obj.contains("r")) m.r = constant_rate(get_number(obj, "r"));
    if (obj.contains("b")) m.b = constant_rate(get_number(obj, "b"));
    if (obj.contains("sigma")) m.sigma = constant_rate(get_number(obj, "sigma"));
    if (obj.contains("p")) m.p = get_number(obj, "p");
    if (obj.contains("x")) m.x = get_number(obj, "x");
    if (obj.contains("y")) m.y = get_number(obj, "y");
    m.validate();
    return m;
}

void run_finance(const json& cfg, OutputSink& sink, const json& echo) {
    require_keys(cfg,
                 {"schema", "mode", "preset", "market", "grid", "paths", "seed",
                  "strategies", "tolerance", "output_dir"},
                 {"grid", "paths", "seed"}, "config");
    if (cfg.contains("preset") &&
        cfg.at("preset").get<std::string>() != "finance-default")
        throw ValidationError("finance mode only knows preset \"finance-default\"");
    if (!cfg.contains("preset") && !cfg.contains("market"))
        throw ValidationError("config: missing key \"market\" (or preset \"finance-default\")");
    MarketParams market =
        cfg.contains("market") ? parse_market(cfg.at("market")) : default_market();
    TimeGrid grid = parse_grid(cfg.at("grid"));
    int paths = get_int(cfg, "paths");
    if (paths < 1) throw ValidationError("paths must be positive");
    std::uint64_t seed = static_cast<std::uint64_t>(get_int(cfg, "seed"));
    double c = cfg.contains("tolerance") ? get_number(cfg, "tolerance") : 0.05;
    double tolerance = c * grid.dt();

    std::optional<StrategyRates> fixed;
    int strategies = 1;
    if (cfg.contains("market") && cfg.at("market").contains("strategy")) {
        const json& s = cfg.at("market").at("strategy");
        require_keys(s, {"theta_L", "theta_M"}, {"theta_L", "theta_M"}, "strategy");
        StrategyRates rates;
        rates.theta_l = s.at("theta_L").get<std::vector<double>>();
        rates.theta_m = s.at("theta_M").get<std::vector<double>>();
        rates.validate(grid.steps);
        fixed = std::move(rates);
    } else if (cfg.contains("strategies")) {
        strategies = get_int(cfg, "strategies");
        if (strategies < 1) throw ValidationError("strategies must be positive");
    }

    auto out = sink.open("residuals.csv");
    out << "path_id,node,t,residual,tolerance\n";
    double max_residual = 0.0;
    double sum_residual = 0.0;
    long count = 0;
    int run_id = 0;
    for (int s = 0; s < strategies; ++s) {
        StrategyRates strategy =
            fixed ? *fixed : random_strategy(grid.steps, seed, static_cast<std::uint64_t>(s));
        for (int p = 0; p < paths; ++p, ++run_id) {
            BrownianPath path = sample_brownian(grid, 1, seed, static_cast<std::uint64_t>(p));
            PriceTrajectories prices = simulate_price(market, path);
            auto portfolio = simulate_portfolio(market, strategy, prices, grid, path);
            auto h = unit_portfolio(portfolio, prices);
            std::vector<ConeSpec> cones;
            cones.reserve(grid.steps);
            for (int i = 0; i < grid.steps; ++i)
                cones.push_back(solvency_cone(bid_ask(market, prices.bank[i], prices.stock[i])));
            auto residuals = inclusion_check(h, cones);
            for (std::size_t i = 0; i < residuals.size(); ++i) {
                out << run_id << "," << i << "," << fmt(grid.node(static_cast<int>(i))) << ","
                    << fmt(residuals[i]) << "," << fmt(tolerance) << "\n";
                max_residual = std::max(max_residual, residuals[i]);
                sum_residual += residuals[i];
                ++count;
            }
        }
    }
    json j;
    j["config"] = echo;
    j["version"] = kArtifactVersion;
    j["dt"] = grid.dt();
    j["tolerance"] = tolerance;
    j["max_residual"] = max_residual;
    j["mean_residual"] = count > 0 ? sum_residual / count : 0.0;
    j["runs"] = run_id;
    j["within_tolerance"] = max_residual <= tolerance;
    sink.write_json("finance.json", j);
}

void write_manifest(OutputSink& sink, const json& echo, double wall_seconds) {
    json manifest;
    manifest["schema"] = 1;
    manifest["version"] = kArtifactVersion;
    manifest["config"] = echo;
    if (echo.contains("seed")) manifest["seed"] = echo.at("seed");
    manifest["wall_clock_seconds"] = wall_seconds;
    json digests = json::object();
    for (const auto& p : sink.files())
        digests[p.filename().string()] = sha256_file(p.string());
    manifest["outputs"] = digests;
    sink.write_json("manifest.json", manifest);
}

} // namespace

RunOutcome run_experiment(const std::string& config_path) {
    json cfg;
    {
        std::ifstream in(config_path);
        if (!in) return {kExitValidation, "cannot read config: " + config_path, {}};
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            return {kExitValidation, std::string("config is not valid JSON: ") + e.what(), {}};
        }
    }

    std::unique_ptr<OutputSink> sink;
    try {
        if (!cfg.is_object() || !cfg.contains("schema") || !cfg.contains("mode") ||
            !cfg.contains("output_dir"))
            throw ValidationError("config: need keys schema, mode, output_dir");
        if (!(cfg.at("schema").is_number_integer() && cfg.at("schema").get<int>() == 1))
            throw ValidationError("config: unsupported schema (expected 1)");
        std::string mode = cfg.at("mode").get<std::string>();
        std::string out_dir = cfg.at("output_dir").get<std::string>();
        sink = std::make_unique<OutputSink>(out_dir);

        auto started = std::chrono::steady_clock::now();
        if (mode == "geom") run_geom(cfg, *sink);
        else if (mode == "proptest") run_proptest_mode(cfg, *sink);
        else if (mode == "solve") run_solve(cfg, *sink, cfg);
        else if (mode == "integrate") run_integrate(cfg, *sink, cfg);
        else if (mode == "finance") run_finance(cfg, *sink, cfg);
        else throw ValidationError("config: unknown mode \"" + mode + "\"");
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                          .count();
        write_manifest(*sink, cfg, wall);
        RunOutcome outcome;
        outcome.exit_code = kExitOk;
        outcome.message = "ok";
        for (const auto& p : sink->files()) outcome.outputs.push_back(p.string());
        return outcome;
    } catch (const ValidationError& e) {
        if (sink) sink->discard_all();
        return {kExitValidation, e.what(), {}};
    } catch (const ParseError& e) {
        if (sink) sink->discard_all();
        return {kExitValidation, e.what(), {}};
    } catch (const std::invalid_argument& e) {
        if (sink) sink->discard_all();
        return {kExitValidation, e.what(), {}};
    } catch (const json::exception& e) {
        if (sink) sink->discard_all();
        return {kExitValidation, e.what(), {}};
    } catch (const QPError& e) {
        if (sink) sink->discard_all();
        return {kExitNumerical, e.what(), {}};
    } catch (const std::exception& e) {
        if (sink) sink->discard_all();
        return {kExitNumerical, e.what(), {}};
    }
}

RunOutcome export_report(const std::string& report_path) {
    json report;
    {
        std::ifstream in(report_path);
        if (!in) return {kExitValidation, "cannot read report: " + report_path, {}};
        try {
            in >> report;
        } catch (const json::exception& e) {
            return {kExitValidation, std::string("report is not valid JSON: ") + e.what(), {}};
        }
    }
    fs::path base(report_path);
    fs::path dir = base.parent_path();
    std::string stem = base.stem().string();
    RunOutcome outcome;
    try {
        fs::path rates = dir / (stem + "_rates.csv");
        {
            std::ofstream out(rates, std::ios::binary);
            out << "iteration,node,t,observed,standard_error,bound\n";
            if (report.contains("iterate_distances")) {
                const json& obs = report.at("iterate_distances");
                const json& bounds = report.at("bounds");
                for (std::size_t i = 0; i < obs.size(); ++i) {
                    const json& o = obs[i];
                    double bound = i < bounds.size() ? bounds[i].at("bound").get<double>() : 0.0;
                    out << o.at("k").get<int>() << "," << o.at("node").get<int>() << ","
                        << fmt(o.at("t").get<double>()) << ","
                        << fmt(o.at("observed").get<double>()) << ","
                        << fmt(o.at("standard_error").get<double>()) << "," << fmt(bound)
                        << "\n";
                }
            }
        }
        outcome.outputs.push_back(rates.string());
        fs::path modulus = dir / (stem + "_modulus.csv");
        {
            std::ofstream out(modulus, std::ios::binary);
            out << "s,t,modulus\n";
            if (report.contains("stability") &&
                report.at("stability").contains("modulus_table")) {
                for (const auto& e : report.at("stability").at("modulus_table"))
                    out << fmt(e.at("s").get<double>()) << "," << fmt(e.at("t").get<double>())
                        << "," << fmt(e.at("modulus").get<double>()) << "\n";
            }
        }
        outcome.outputs.push_back(modulus.string());
    } catch (const json::exception& e) {
        return {kExitValidation, std::string("report missing fields: ") + e.what(), {}};
    }
    outcome.exit_code = kExitOk;
    outcome.message = "ok";
    return outcome;
}

} // namespace lcsde
