// Acceptance gate: one criterion per section, one PASS/FAIL line each.
// Frozen constants are pinned inline next to the checks that use them.

#include "lcsde/digest.hpp"
#include "lcsde/finance.hpp"
#include "lcsde/geometry.hpp"
#include "lcsde/integrals.hpp"
#include "lcsde/presets.hpp"
#include "lcsde/propsuites.hpp"
#include "lcsde/qp.hpp"
#include "lcsde/random_sets.hpp"
#include "lcsde/rng.hpp"
#include "lcsde/sde.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lcsde;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void verdict(int num, const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++g_failures;
    std::cout << "criterion " << num << " [" << (ok ? "PASS" : "FAIL") << "] " << name
              << ": " << detail << "\n"
              << std::flush;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------- 1

// Independent Hausdorff oracle: h(A,B) = sup over unit polar directions
// of |sigma_A - sigma_B|. Coarse pass with `dirs` samples, then local
// random search with a shrinking radius so the maximizer is located to
// well under the 1e-4 agreement tolerance. Uses only support-function
// evaluations, never the QP.
struct OracleResult {
    double sampled = 0.0; // raw lower bound from the coarse pass
    double refined = 0.0;
};

OracleResult hausdorff_oracle(const LCSet& a, const LCSet& b, int dirs, std::uint64_t seed) {
    auto gap = [&](const Eigen::VectorXd& u) {
        auto sa = support_function(a, u);
        auto sb = support_function(b, u);
        if (!sa || !sb) return -1.0;
        return std::abs(*sa - *sb);
    };
    auto base = sample_polar_directions(a.cone(), dirs, seed);
    OracleResult out;
    // keep the best handful of sampled directions as refinement starts:
    // the gap is a max of concave pieces, so a single local search can
    // stall on the wrong piece
    const int starts = 6;
    std::vector<std::pair<double, Eigen::VectorXd>> top;
    for (const auto& u : base) {
        double g = gap(u);
        out.sampled = std::max(out.sampled, g);
        top.emplace_back(g, u);
    }
    std::partial_sort(top.begin(), top.begin() + std::min<std::size_t>(starts, top.size()),
                      top.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    out.refined = out.sampled;
    const int d = a.dimension();
    std::uint64_t ctr = 0;
    for (int s = 0; s < starts && s < static_cast<int>(top.size()); ++s) {
        Eigen::VectorXd best_u = top[static_cast<std::size_t>(s)].second;
        double best_g = top[static_cast<std::size_t>(s)].first;
        double radius = 0.25;
        for (int round = 0; round < 110; ++round) {
            for (int trial = 0; trial < 40; ++trial) {
                Eigen::VectorXd u = best_u;
                for (int j = 0; j < d; ++j)
                    u(j) += radius * rng::normal(seed, 0x726566696eULL, ++ctr,
                                                 static_cast<std::uint64_t>(j));
                double norm = u.norm();
                if (norm < 1e-12) continue;
                u /= norm;
                if (!a.cone().in_polar(u, 0.0)) continue;
                double g = gap(u);
                if (g > best_g) { best_g = g; best_u = u; }
            }
            radius *= 0.9;
        }
        out.refined = std::max(out.refined, best_g);
    }
    return out;
}

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    double worst_gap = 0.0, worst_dom = 0.0;
    bool ok = true;
    for (int i = 0; i < 200; ++i) {
        int d = 2 + (i % 2);
        ConeSpec cone = random_cone(d, 101, static_cast<std::uint64_t>(i));
        LCSet a = random_lcset(cone, 6, 2.0, 102, static_cast<std::uint64_t>(i));
        LCSet b = random_lcset(cone, 6, 2.0, 103, static_cast<std::uint64_t>(i));
        double h = hausdorff_distance(a, b);
        OracleResult o = hausdorff_oracle(a, b, 10000, 104 + static_cast<std::uint64_t>(i));
        worst_gap = std::max(worst_gap, std::abs(h - o.refined));
        worst_dom = std::max(worst_dom, o.sampled - h);
        if (std::abs(h - o.refined) > 1e-4 || h < o.sampled - 1e-7) ok = false;
    }
    double secs = elapsed(t0);
    ok = ok && secs <= 60.0;
    verdict(1, "hausdorff vs direction-sampling oracle", ok,
            "200 instances d in {2,3}, |h - oracle| <= 1e-4 (worst " + fmt(worst_gap) +
                "), h >= sampled - 1e-7 (worst deficit " + fmt(worst_dom) + "), " +
                fmt(secs) + " s <= 60 s");
}

// ---------------------------------------------------------------- 2, 3, 5, 6, 11

bool suites_pass(const std::vector<std::string>& names, int cases, std::string& detail) {
    bool ok = true;
    for (const auto& name : names) {
        PropResult r = run_prop_suite(name, cases, 2024);
        if (!r.passed) {
            ok = false;
            detail += name + " FAILED (" + r.counterexample->description + "); ";
        } else {
            detail += name + " " + std::to_string(r.cases) + " ok; ";
        }
    }
    return ok;
}

void criterion_2() {
    std::string detail;
    bool ok = suites_pass({"metric", "subadditivity", "hullsum"}, 100, detail);
    verdict(2, "metric and algebra suites at 1e-9", ok, detail);
}

void criterion_3() {
    std::string detail;
    bool ok = suites_pass({"cancellation"}, 100, detail);
    verdict(3, "cancellation at 1e-9", ok, detail);
}

void criterion_5() {
    std::string detail;
    bool ok = suites_pass({"additivity", "thm43", "cor44"}, 100, detail);

    // constant-field equality case, reproduced exactly: the split
    // integral equals the whole one as canonical representations
    ConeSpec c = ConeSpec::make(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)});
    LCSet a({Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 0)}, c);
    TimeGrid grid(1.0, 16);
    std::vector<LCSet> vals(17, a);
    LCSet whole = riemann_set_integral(vals, 0, 16, grid.dt());
    LCSet split = minkowski_sum(riemann_set_integral(vals, 0, 7, grid.dt()),
                                riemann_set_integral(vals, 7, 16, grid.dt()));
    if (whole == split) {
        detail += "constant-field split equality exact";
    } else {
        ok = false;
        detail += "constant-field split equality FAILED";
    }
    verdict(5, "integral additivity and discrete bounds at 1e-9", ok, detail);
}

void criterion_6() {
    std::string detail;
    bool ok = suites_pass({"continuity"}, 100, detail);

    // contraction of the max adjacent increment under grid doubling on
    // random bounded time-varying fields
    ConeSpec c = ConeSpec::make(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)});
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        LCSet base = random_lcset(c, 4, 2.0, 601, static_cast<std::uint64_t>(trial));
        double phase = rng::uniform01(602, 0, static_cast<std::uint64_t>(trial), 0);
        auto field_at = [&](double t) {
            return scale(1.0 + 0.5 * std::sin(6.283185307179586 * (t + phase)), base);
        };
        double prev = 0.0;
        for (int M : {64, 128}) {
            TimeGrid grid(1.0, M);
            std::vector<LCSet> vals;
            for (int i = 0; i <= M; ++i) vals.push_back(field_at(grid.node(i)));
            double worst_inc = 0.0;
            LCSet acc = riemann_set_integral(vals, 0, 1, grid.dt());
            for (int i = 1; i < M; ++i) {
                LCSet next = minkowski_sum(acc, scale(grid.dt(), vals[static_cast<std::size_t>(i)]));
                worst_inc = std::max(worst_inc, hausdorff_distance(next, acc));
                acc = next;
            }
            if (M == 64) prev = worst_inc;
            else if (prev > 1e-15) worst_ratio = std::max(worst_ratio, worst_inc / prev);
        }
    }
    if (worst_ratio > 0.75) ok = false;
    detail += "doubling contraction worst ratio " + fmt(worst_ratio) + " <= 0.75";
    verdict(6, "integral continuity modulus at 1e-9", ok, detail);
}

void criterion_11() {
    std::string detail;
    bool ok = suites_pass({"cone_equiv"}, 200, detail);
    verdict(11, "solvency cone equivalence at 1e-9", ok, detail);
}

// ---------------------------------------------------------------- 4

void criterion_4() {
    ConeSpec c = ConeSpec::make(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)});
    LCSet a({Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 0)}, c);
    bool ok = true;
    double worst = 0.0;
    for (int M : {7, 64, 1000}) {
        TimeGrid grid(2.0, M);
        std::vector<LCSet> vals(static_cast<std::size_t>(M) + 1, a);
        double h = hausdorff_distance(riemann_set_integral(vals, 0, M, grid.dt()),
                                      scale(2.0, a));
        worst = std::max(worst, h);
        if (h > 1e-10) ok = false;
    }
    std::vector<LCSet> cones(8, LCSet::cone_set(c));
    bool cone_exact = riemann_set_integral(cones, 0, 7, 2.0 / 7.0) == LCSet::cone_set(c);
    ok = ok && cone_exact;
    verdict(4, "constant-field riemann integral", ok,
            "h((t1-t0)A, integral) <= 1e-10 for M in {7,64,1000} (worst " + fmt(worst) +
                "), cone case exact: " + (cone_exact ? "yes" : "no"));
}

// ---------------------------------------------------------------- 7, 9

struct PresetRunResult {
    SolveReport report;
    StabilityStats stability;
};

PresetRunResult solve_preset(const std::string& name, int iterations, int paths,
                             std::uint64_t seed) {
    Preset preset = make_preset(name);
    TimeGrid grid(1.0, 64);
    PicardOptions opt;
    opt.iterations = iterations;
    opt.paths = paths;
    opt.seed = seed;
    opt.vertex_cap = 24; // keeps the march within the runtime budget;
                         // cap_perturbation is checked to stay small
    PresetRunResult out;
    out.report = picard_solve(preset.xi, preset.drift, preset.diffusion, grid, opt);
    out.stability = stability_report(out.report.final_paths, preset.xi);
    return out;
}

void criterion_7_and_9() {
    auto t0 = std::chrono::steady_clock::now();
    PresetRunResult comp = solve_preset("compounding", 8, 1000, 11);
    PresetRunResult bdiff = solve_preset("bounded-diffusion", 8, 1000, 11);
    double secs = elapsed(t0);

    int violations = 0;
    double worst_excess = -1e300;
    for (const auto* run : {&comp, &bdiff}) {
        for (const auto& d : successive_differences(run->report)) {
            if (d.violated) ++violations;
            worst_excess = std::max(worst_excess,
                                    d.observed - (d.bound + 3 * d.standard_error));
        }
    }
    bool ok7 = violations == 0 && secs <= 300.0 && comp.report.cap_perturbation <= 0.05 &&
               bdiff.report.cap_perturbation <= 0.05;
    verdict(7, "picard factorial rate, M=64 P=1000 K=8", ok7,
            std::to_string(violations) + " bound violations, worst excess " +
                fmt(worst_excess) + ", cap perturbation <= 0.05 (" +
                fmt(std::max(comp.report.cap_perturbation, bdiff.report.cap_perturbation)) +
                "), " + fmt(secs) + " s <= 300 s");

    // criterion 9 reuses the terminal path families of both runs.
    // Frozen constants: E[sup h^2] <= 50, modulus table k_hat <= 4.0.
    bool ok9 = true;
    std::string detail9;
    for (const auto* entry : {&comp, &bdiff}) {
        const StabilityStats& st = entry->stability;
        bool finite = std::isfinite(st.mean_sup_h2) && st.mean_sup_h2 <= 50.0;
        bool modulus_ok = st.k_hat <= 4.0;
        if (!finite || !modulus_ok) ok9 = false;
        detail9 += "mean_sup_h2 " + fmt(st.mean_sup_h2) + " <= 50, k_hat " +
                   fmt(st.k_hat) + " <= 4.0; ";
    }
    // linearity in (t - s) on the diffusive preset: smallest-s pair of
    // modulus entries with a doubled gap must agree within 25%. The
    // compounding preset grows exponentially, so its modulus is not
    // linear in the gap and is covered by the frozen bound only.
    double lin_ratio = -1.0;
    const auto& table = bdiff.stability.modulus_table;
    for (std::size_t i = 0; i < table.size() && lin_ratio < 0; ++i)
        for (std::size_t j = 0; j < table.size() && lin_ratio < 0; ++j) {
            if (std::abs(table[j].s - table[i].s) > 1e-12) continue;
            double g1 = table[i].t - table[i].s;
            double g2 = table[j].t - table[j].s;
            if (std::abs(g2 - 2.0 * g1) <= 1e-12 && table[i].modulus > 1e-15)
                lin_ratio = table[j].modulus / table[i].modulus;
        }
    bool lin_ok = lin_ratio > 0 && std::abs(lin_ratio - 1.0) <= 0.25;
    if (!lin_ok) ok9 = false;
    detail9 += "gap-doubling modulus ratio " + fmt(lin_ratio) + " within 25% of 1";
    verdict(9, "stability: frozen sup/modulus bounds and linearity", ok9, detail9);
}

// ---------------------------------------------------------------- 8

void criterion_8() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"compounding", "bounded-diffusion"}) {
        Preset preset = make_preset(name);
        TimeGrid grid(1.0, 64);
        PicardOptions opt;
        opt.iterations = 14;
        opt.paths = 100;
        opt.seed = 29;
        opt.vertex_cap = 24;
        SolveReport from_xi =
            picard_solve(preset.xi, preset.drift, preset.diffusion, grid, opt);
        opt.initial_iterate =
            minkowski_sum(LCSet::cone_set(preset.xi.cone()),
                          LCSet::point(Eigen::Vector2d(0.7, -0.3)));
        SolveReport from_far =
            picard_solve(preset.xi, preset.drift, preset.diffusion, grid, opt);
        double worst = 0.0;
        for (int node : {16, 32, 48, 64}) {
            MeanH2 m = mc_mean_h2(from_xi.final_paths, from_far.final_paths, node);
            worst = std::max(worst, m.mean);
        }
        if (worst > 1e-6) ok = false;
        detail += std::string(name) + " worst E[h^2] " + fmt(worst) + " <= 1e-6; ";
    }
    verdict(8, "uniqueness probe, K=14 P=100 from displaced iterate", ok, detail);
}

// ---------------------------------------------------------------- 10

StrategyRates random_strategy(int steps, std::uint64_t seed, std::uint64_t index) {
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

double max_inclusion_residual(const MarketParams& market, const TimeGrid& grid,
                              int strategies, int paths, std::uint64_t seed) {
    double worst = 0.0;
    for (int s = 0; s < strategies; ++s) {
        StrategyRates strategy =
            random_strategy(grid.steps, seed, static_cast<std::uint64_t>(s));
        for (int p = 0; p < paths; ++p) {
            BrownianPath bp = sample_brownian(grid, 1, seed,
                                              static_cast<std::uint64_t>(s * paths + p));
            PriceTrajectories prices = simulate_price(market, bp);
            auto h = unit_portfolio(simulate_portfolio(market, strategy, prices, grid, bp),
                                    prices);
            std::vector<ConeSpec> cones;
            for (int i = 0; i < grid.steps; ++i)
                cones.push_back(solvency_cone(
                    bid_ask(market, prices.bank[static_cast<std::size_t>(i)],
                            prices.stock[static_cast<std::size_t>(i)])));
            for (double res : inclusion_check(h, cones)) worst = std::max(worst, res);
        }
    }
    return worst;
}

void criterion_10() {
    auto t0 = std::chrono::steady_clock::now();
    const double c = 0.02; // frozen residual constant
    MarketParams market = default_market();
    TimeGrid grid(1.0, 512);
    double worst = max_inclusion_residual(market, grid, 100, 10, 21);
    bool within = worst <= c * grid.dt();

    // halving check on a 20-strategy x 5-path subsample at both grids;
    // one-sided: the max residual must drop to <= 0.6x under dt halving
    double sub512 = max_inclusion_residual(market, grid, 20, 5, 21);
    double sub1024 = max_inclusion_residual(market, TimeGrid(1.0, 1024), 20, 5, 21);
    double ratio = sub512 > 1e-15 ? sub1024 / sub512 : 0.0;
    bool halving = ratio <= 0.6;

    // forged path: wealth appearing in both assets at unit rate must
    // leave the tube by far more than 10 c dt
    BrownianPath bp = sample_brownian(grid, 1, 21, 0);
    PriceTrajectories prices = simulate_price(market, bp);
    std::vector<ConeSpec> cones;
    for (int i = 0; i < grid.steps; ++i)
        cones.push_back(solvency_cone(bid_ask(market, prices.bank[static_cast<std::size_t>(i)],
                                              prices.stock[static_cast<std::size_t>(i)])));
    std::vector<Eigen::Vector2d> forged;
    for (int i = 0; i <= grid.steps; ++i)
        forged.push_back(Eigen::Vector2d(market.x, market.y / market.p) +
                         grid.node(i) * Eigen::Vector2d(1.0, 1.0));
    double forged_res = inclusion_check(forged, cones).back();
    bool control = forged_res > 10.0 * c * grid.dt();

    bool ok = within && halving && control;
    verdict(10, "solvency inclusion, 100 strategies x 10 paths M=512", ok,
            "max residual " + fmt(worst) + " <= c dt = " + fmt(c * grid.dt()) +
                ", halving ratio " + fmt(ratio) + " <= 0.6, forged residual " +
                fmt(forged_res) + " > " + fmt(10.0 * c * grid.dt()) + ", " +
                fmt(elapsed(t0)) + " s");
}

// ---------------------------------------------------------------- 12

#ifndef LCSDE_BIN
#error "LCSDE_BIN must point at the lcsde executable"
#endif

json run_and_load_outputs(const fs::path& cfg_path, const fs::path& dir) {
    std::string cmd = std::string(LCSDE_BIN) + " run " + cfg_path.string() + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return json();
    std::ifstream in(dir / "manifest.json");
    if (!in) return json();
    json manifest;
    in >> manifest;
    return manifest.value("outputs", json());
}

void criterion_12() {
    fs::path base = fs::temp_directory_path() / "lcsde_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    bool ok = true;
    std::string detail;

    json solve_cfg{{"schema", 1},        {"mode", "solve"},
                   {"preset", "compounding"}, {"grid", {{"T", 1.0}, {"M", 16}}},
                   {"paths", 10},        {"seed", 7},
                   {"iterations", 4},    {"output_dir", (base / "solve").string()}};
    json fin_cfg{{"schema", 1},
                 {"mode", "finance"},
                 {"preset", "finance-default"},
                 {"grid", {{"T", 1.0}, {"M", 64}}},
                 {"paths", 2},
                 {"seed", 21},
                 {"strategies", 3},
                 {"output_dir", (base / "finance").string()}};
    struct Case { const char* name; json cfg; fs::path dir; };
    for (auto& [name, cfg, dir] : std::vector<Case>{
             {"solve", solve_cfg, base / "solve"}, {"finance", fin_cfg, base / "finance"}}) {
        fs::path cfg_path = base / (std::string(name) + ".json");
        std::ofstream(cfg_path) << cfg.dump(2);
        json first = run_and_load_outputs(cfg_path, dir);
        json second = run_and_load_outputs(cfg_path, dir);
        bool same = !first.is_null() && !first.empty() && first == second;
        if (!same) ok = false;
        detail += std::string(name) + (same ? " digests identical; " : " digests DIFFER; ");
    }
    verdict(12, "rerun determinism of output digests", ok, detail);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7_and_9();
    criterion_8();
    criterion_10();
    criterion_11();
    criterion_12();
    std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED"
                                  : "ACCEPTANCE FAILED (" + std::to_string(g_failures) +
                                        " criteria)")
              << "\n";
    return g_failures == 0 ? 0 : 1;
}
