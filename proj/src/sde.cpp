#include "lcsde/sde.hpp"

#include "lcsde/parallel.hpp"
#include "lcsde/random_sets.hpp"

#include <cmath>

namespace lcsde {

double DiffusionSpec::alpha_sum() const {
    double s = tail_alpha;
    for (double a : alphas) s += a;
    return s;
}

double DiffusionSpec::alpha_sq_sum() const {
    double s = tail_alpha_sq;
    for (double a : alphas) s += a * a;
    return s;
}

namespace {

double max_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

BrownianPath dummy_context() {
    return sample_brownian(TimeGrid(1.0, 1), 1, 0, 0);
}

LCSet capped(LCSet a, std::size_t cap, double& perturbation) {
    if (a.vertices().size() <= cap) return a;
    auto [reduced, p] = reduce_vertices(a, cap);
    perturbation += p;
    return reduced;
}

} // namespace

void validate_drift(const DriftSpec& drift, const ConeSpec& cone, std::uint64_t seed,
                    int samples) {
    const BrownianPath ctx = dummy_context();
    const LCSet c_set = LCSet::cone_set(cone);
    const double slack = 1e-7;
    for (int i = 0; i < samples; ++i) {
        LCSet a = random_lcset(cone, 4, 3.0, seed, 2 * i);
        LCSet b = random_lcset(cone, 4, 3.0, seed, 2 * i + 1);
        double t = rng::uniform01(seed, 0x74696d65ULL, i, 0);
        LCSet fa = drift.evaluator(t, ctx, a);
        LCSet fb = drift.evaluator(t, ctx, b);
        double ha = hausdorff_distance(a, c_set);
        double hfa = hausdorff_distance(fa, c_set);
        if (hfa * hfa > drift.beta * (1.0 + ha * ha) + slack)
            throw AssumptionError("drift: declared beta violates the growth bound on a sampled set");
        double hab = hausdorff_distance(a, b);
        double hfab = hausdorff_distance(fa, fb);
        if (hfab * hfab > drift.beta * hab * hab + slack)
            throw AssumptionError("drift: declared beta violates the Lipschitz bound on a sampled pair");
    }
}

void validate_diffusion(const DiffusionSpec& diffusion, const ConeSpec& cone,
                        std::uint64_t seed, int samples) {
    if (diffusion.empty()) return;
    const BrownianPath ctx = dummy_context();
    const LCSet c_set = LCSet::cone_set(cone);
    const double slack = 1e-7;
    for (int i = 0; i < samples; ++i) {
        LCSet a = random_lcset(cone, 4, 3.0, seed, 2 * i);
        LCSet b = random_lcset(cone, 4, 3.0, seed, 2 * i + 1);
        double t = rng::uniform01(seed, 0x74696d65ULL, i, 1);
        auto gc = diffusion.members(t, ctx, c_set);
        auto ga = diffusion.members(t, ctx, a);
        auto gb = diffusion.members(t, ctx, b);
        if (gc.size() != diffusion.alphas.size())
            throw AssumptionError("diffusion: member count does not match alpha count");
        double hab = hausdorff_distance(a, b);
        for (std::size_t n = 0; n < gc.size(); ++n) {
            if (max_norm(gc[n]) > diffusion.alphas[n] + slack)
                throw AssumptionError("diffusion: |g^n(C)| exceeds declared alpha_n");
            if (max_norm(ga[n] - gb[n]) > diffusion.alphas[n] * hab + slack)
                throw AssumptionError("diffusion: g^n violates the declared Lipschitz bound");
        }
    }
}

namespace {

struct PathWork {
    std::vector<LCSet> iterate;           // Y^{(k)} at every node
    BrownianPath brownian;
    std::vector<double> h2_at_nodes;      // vs previous iterate, report nodes
    double cap_perturbation = 0.0;
};

// One sweep of Eq-style prefix accumulation:
// Ynew_i = xi (+) sum_{j<i} dt F(t_j, Y_j) (+) co{ sum_{j<i} g^n dB_j }.
std::vector<LCSet> picard_sweep(const LCSet& xi, const DriftSpec& drift,
                                const DiffusionSpec& diffusion, const TimeGrid& grid,
                                const std::vector<LCSet>& y, const BrownianPath& b,
                                std::size_t cap, double& perturbation) {
    const int m_steps = grid.steps;
    const double dt = grid.dt();
    const int d = xi.dimension();
    std::vector<LCSet> out;
    out.reserve(m_steps + 1);

    LCSet prefix = LCSet::cone_set(xi.cone());
    std::size_t n_members = diffusion.empty() ? 0 : diffusion.alphas.size();
    std::vector<Eigen::VectorXd> ito_points(n_members, Eigen::VectorXd::Zero(d));

    for (int i = 0; i <= m_steps; ++i) {
        LCSet value = minkowski_sum(xi, prefix);
        if (n_members > 0) {
            LCSet hull{std::vector<Eigen::VectorXd>(ito_points), ConeSpec(d)};
            value = minkowski_sum(value, hull);
        }
        out.push_back(capped(std::move(value), cap, perturbation));
        if (i == m_steps) break;

        const double t = grid.node(i);
        LCSet f = drift.evaluator(t, b, y[static_cast<std::size_t>(i)]);
        prefix = capped(minkowski_sum(prefix, scale(dt, f)), cap, perturbation);
        if (n_members > 0) {
            auto mats = diffusion.members(t, b, y[static_cast<std::size_t>(i)]);
            const Eigen::VectorXd db = b.increments.row(i).transpose();
            for (std::size_t n = 0; n < n_members; ++n) ito_points[n] += mats[n] * db;
        }
    }
    return out;
}

std::vector<int> default_report_nodes(int m_steps) {
    std::vector<int> nodes;
    int stride = std::max(1, m_steps / 8);
    for (int i = stride; i <= m_steps; i += stride) nodes.push_back(i);
    if (nodes.empty() || nodes.back() != m_steps) nodes.push_back(m_steps);
    return nodes;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

SolveReport picard_solve(const LCSet& xi, const DriftSpec& drift,
                         const DiffusionSpec& diffusion, const TimeGrid& grid,
                         const PicardOptions& options) {
    if (options.iterations < 1) throw std::invalid_argument("picard_solve: K >= 1");
    if (options.paths < 1) throw std::invalid_argument("picard_solve: paths >= 1");
    validate_drift(drift, xi.cone(), options.seed);
    validate_diffusion(diffusion, xi.cone(), options.seed);
    {
        // Cone compatibility of drift output.
        BrownianPath ctx = dummy_context();
        LCSet probe = drift.evaluator(0.0, ctx, xi);
        if (!(probe.cone() == xi.cone()))
            throw ConeMismatchError("picard_solve: drift output cone differs from the cone of xi");
    }

    SolveReport report;
    report.grid = grid;
    report.paths = options.paths;
    report.seed = options.seed;
    report.m_constant = 2.0 * (grid.horizon * drift.beta + diffusion.alpha_sum());
    report.xi_h2 = std::pow(hausdorff_distance(xi, LCSet::cone_set(xi.cone())), 2);

    std::vector<int> nodes = options.report_nodes.empty() ? default_report_nodes(grid.steps)
                                                          : options.report_nodes;

    const LCSet y0 = options.initial_iterate.value_or(xi);
    std::vector<PathWork> work(static_cast<std::size_t>(options.paths));
    for (int p = 0; p < options.paths; ++p) {
        work[p].brownian = sample_brownian(grid, diffusion.brownian_dim, options.seed,
                                           static_cast<std::uint64_t>(p));
        work[p].iterate.assign(static_cast<std::size_t>(grid.steps) + 1, y0);
    }

    for (int k = 0; k < options.iterations; ++k) {
        parallel_for(options.paths, [&](int p) {
            auto& w = work[static_cast<std::size_t>(p)];
            std::vector<LCSet> next = picard_sweep(xi, drift, diffusion, grid, w.iterate,
                                                   w.brownian, options.vertex_cap,
                                                   w.cap_perturbation);
            w.h2_at_nodes.clear();
            for (int node : nodes) {
                double h = hausdorff_distance(next[static_cast<std::size_t>(node)],
                                              w.iterate[static_cast<std::size_t>(node)]);
                w.h2_at_nodes.push_back(h * h);
            }
            w.iterate = std::move(next);
        });

        // Fixed-order reduction.
        double worst_mean = 0.0;
        for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
            double sum = 0.0, sumsq = 0.0;
            for (const auto& w : work) {
                sum += w.h2_at_nodes[ni];
                sumsq += w.h2_at_nodes[ni] * w.h2_at_nodes[ni];
            }
            const double n = static_cast<double>(options.paths);
            IterateDistance dist;
            dist.k = k;
            dist.node = nodes[ni];
            dist.t = grid.node(nodes[ni]);
            dist.observed = sum / n;
            double var = std::max(0.0, sumsq / n - dist.observed * dist.observed);
            dist.standard_error = options.paths > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
            dist.bound = std::pow(report.m_constant, k + 1) * (1.0 + report.xi_h2) *
                         std::pow(dist.t, k + 1) / factorial(k + 1);
            report.iterate_distances.push_back(dist);
            worst_mean = std::max(worst_mean, dist.observed);
        }
        report.iterations_run = k + 1;
        if (options.tol > 0.0 && worst_mean <= options.tol) break;
    }

    report.final_paths.reserve(work.size());
    for (auto& w : work) {
        report.cap_perturbation = std::max(report.cap_perturbation, w.cap_perturbation);
        report.final_paths.push_back(SetPath{grid, std::move(w.iterate)});
    }
    return report;
}

std::vector<SetPath> euler_march(const LCSet& xi, const DriftSpec& drift,
                                 const DiffusionSpec& diffusion, const TimeGrid& grid,
                                 int paths, std::uint64_t seed, std::size_t vertex_cap) {
    validate_drift(drift, xi.cone(), seed);
    validate_diffusion(diffusion, xi.cone(), seed);
    const double dt = grid.dt();
    const int d = xi.dimension();
    std::vector<SetPath> out(static_cast<std::size_t>(paths));
    parallel_for(paths, [&](int p) {
        BrownianPath b = sample_brownian(grid, diffusion.brownian_dim, seed,
                                         static_cast<std::uint64_t>(p));
        double perturbation = 0.0;
        std::vector<LCSet> x;
        x.reserve(grid.steps + 1);
        x.push_back(xi);
        for (int i = 0; i < grid.steps; ++i) {
            const double t = grid.node(i);
            LCSet next = minkowski_sum(x.back(), scale(dt, drift.evaluator(t, b, x.back())));
            if (!diffusion.empty()) {
                auto mats = diffusion.members(t, b, x.back());
                const Eigen::VectorXd db = b.increments.row(i).transpose();
                std::vector<Eigen::VectorXd> pts;
                pts.reserve(mats.size());
                for (const auto& m : mats) pts.push_back(m * db);
                next = minkowski_sum(next, LCSet(std::move(pts), ConeSpec(d)));
            }
            x.push_back(capped(std::move(next), vertex_cap, perturbation));
        }
        out[static_cast<std::size_t>(p)] = SetPath{grid, std::move(x)};
    });
    return out;
}

std::vector<RateComparison> successive_differences(const SolveReport& report) {
    std::vector<RateComparison> out;
    for (const auto& d : report.iterate_distances) {
        if (d.k < 1) continue; // needs a consecutive iterate pair beyond the initial guess
        RateComparison c;
        c.k = d.k;
        c.node = d.node;
        c.t = d.t;
        c.observed = d.observed;
        c.standard_error = d.standard_error;
        c.bound = d.bound;
        c.violated = d.observed > d.bound + 3.0 * d.standard_error;
        out.push_back(c);
    }
    return out;
}

StabilityStats stability_report(const std::vector<SetPath>& final_paths, const LCSet& xi,
                                int stride) {
    if (final_paths.empty()) throw std::invalid_argument("stability_report: no paths");
    const TimeGrid& grid = final_paths.front().grid;
    const LCSet c_set = LCSet::cone_set(xi.cone());
    const double dt = grid.dt();

    std::vector<int> nodes;
    for (int i = 0; i <= grid.steps; i += std::max(1, stride)) nodes.push_back(i);
    if (nodes.back() != grid.steps) nodes.push_back(grid.steps);

    std::vector<double> sups(final_paths.size(), 0.0);
    std::vector<std::vector<double>> h2_cache(final_paths.size());
    parallel_for(static_cast<int>(final_paths.size()), [&](int p) {
        const auto& path = final_paths[static_cast<std::size_t>(p)];
        double sup = 0.0;
        for (const auto& v : path.values) {
            double h = hausdorff_distance(v, c_set);
            sup = std::max(sup, h * h);
        }
        sups[static_cast<std::size_t>(p)] = sup;
        auto& cache = h2_cache[static_cast<std::size_t>(p)];
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (std::size_t b = a + 1; b < nodes.size(); ++b) {
                double gap = grid.node(nodes[b]) - grid.node(nodes[a]);
                if (gap < 4.0 * dt - 1e-12) { cache.push_back(-1.0); continue; }
                double h = hausdorff_distance(path.values[static_cast<std::size_t>(nodes[b])],
                                              path.values[static_cast<std::size_t>(nodes[a])]);
                cache.push_back(h * h);
            }
    });

    StabilityStats stats;
    for (double s : sups) stats.mean_sup_h2 += s;
    stats.mean_sup_h2 /= static_cast<double>(final_paths.size());
    double xi_h2 = std::pow(hausdorff_distance(xi, c_set), 2);
    stats.sup_ratio = stats.mean_sup_h2 / (1.0 + xi_h2);

    std::size_t idx = 0;
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b, ++idx) {
            double gap = grid.node(nodes[b]) - grid.node(nodes[a]);
            if (gap < 4.0 * dt - 1e-12) continue;
            double mean = 0.0;
            for (const auto& cache : h2_cache) mean += cache[idx];
            mean /= static_cast<double>(final_paths.size());
            ModulusEntry e;
            e.s = grid.node(nodes[a]);
            e.t = grid.node(nodes[b]);
            e.mean_h2 = mean;
            e.modulus = mean / gap;
            stats.modulus_table.push_back(e);
            stats.k_hat = std::max(stats.k_hat, e.modulus / (1.0 + xi_h2));
        }
    return stats;
}

nlohmann::json report_to_json(const SolveReport& report) {
    nlohmann::json j;
    j["grid"] = {{"T", report.grid.horizon}, {"M", report.grid.steps}};
    j["paths"] = report.paths;
    j["seed"] = report.seed;
    j["iterations_run"] = report.iterations_run;
    j["M"] = report.m_constant;
    j["xi_h2"] = report.xi_h2;
    j["cap_perturbation"] = report.cap_perturbation;
    j["iterate_distances"] = nlohmann::json::array();
    j["bounds"] = nlohmann::json::array();
    for (const auto& d : report.iterate_distances) {
        j["iterate_distances"].push_back({{"k", d.k},
                                          {"node", d.node},
                                          {"t", d.t},
                                          {"observed", d.observed},
                                          {"standard_error", d.standard_error}});
        j["bounds"].push_back({{"k", d.k}, {"node", d.node}, {"t", d.t}, {"bound", d.bound}});
    }
    return j;
}

nlohmann::json stability_to_json(const StabilityStats& stats) {
    nlohmann::json j;
    j["mean_sup_h2"] = stats.mean_sup_h2;
    j["sup_ratio"] = stats.sup_ratio;
    j["k_hat"] = stats.k_hat;
    j["modulus_table"] = nlohmann::json::array();
    for (const auto& e : stats.modulus_table)
        j["modulus_table"].push_back(
            {{"s", e.s}, {"t", e.t}, {"mean_h2", e.mean_h2}, {"modulus", e.modulus}});
    return j;
}

} // namespace lcsde
