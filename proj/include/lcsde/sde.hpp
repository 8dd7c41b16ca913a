#pragma once

#include "lcsde/integrals.hpp"

#include <json.hpp>

namespace lcsde {

class AssumptionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Drift field F(t, omega, A) -> L_C with shared growth/Lipschitz
// constant beta: h^2(F,C) <= beta(1+h^2(A,C)), h^2(F(A),F(A~)) <= beta h^2(A,A~).
struct DriftSpec {
    SetField evaluator;
    double beta = 1.0;
};

// Truncated diffusion family {g^n, alpha_n}, n = 1..N, evaluated jointly
// so implementations can share per-set work. Declared tails make the
// constant M = 2[T beta + sum alpha_n] computable beyond the truncation.
struct DiffusionSpec {
    std::function<std::vector<Eigen::MatrixXd>(double t, const BrownianPath&, const LCSet&)> members;
    std::vector<double> alphas;
    double tail_alpha = 0.0;    // sum_{n>N} alpha_n
    double tail_alpha_sq = 0.0; // sum_{n>N} alpha_n^2
    int brownian_dim = 1;

    bool empty() const { return alphas.empty(); }
    double alpha_sum() const;
    double alpha_sq_sum() const;
};

// Registration-time spot checks of the declared constants on random sets.
void validate_drift(const DriftSpec& drift, const ConeSpec& cone, std::uint64_t seed,
                    int samples = 16);
void validate_diffusion(const DiffusionSpec& diffusion, const ConeSpec& cone,
                        std::uint64_t seed, int samples = 16);

struct PicardOptions {
    int iterations = 8;
    int paths = 100;
    std::uint64_t seed = 0;
    double tol = 0.0; // early stop on max-node E[h^2(Y^{k+1},Y^k)]; 0 disables
    std::vector<int> report_nodes; // empty -> every M/8-th node plus M
    std::size_t vertex_cap = 64;
    // Optional replacement for Y^(0) = xi (uniqueness probe).
    std::optional<LCSet> initial_iterate;
};

struct IterateDistance {
    int k = 0; // observed E[h^2(Y^{k+1}, Y^k)]
    int node = 0;
    double t = 0.0;
    double observed = 0.0;
    double standard_error = 0.0;
    double bound = 0.0; // M^{k+1}(1 + h^2(xi,C)) t^{k+1} / (k+1)!
};

struct SolveReport {
    TimeGrid grid;
    int paths = 0;
    std::uint64_t seed = 0;
    int iterations_run = 0;
    double m_constant = 0.0;
    double xi_h2 = 0.0; // h^2(xi, C)
    std::vector<IterateDistance> iterate_distances;
    std::vector<SetPath> final_paths;
    double cap_perturbation = 0.0; // worst accumulated vertex-cap Hausdorff perturbation
};

SolveReport picard_solve(const LCSet& xi, const DriftSpec& drift,
                         const DiffusionSpec& diffusion, const TimeGrid& grid,
                         const PicardOptions& options);

std::vector<SetPath> euler_march(const LCSet& xi, const DriftSpec& drift,
                                 const DiffusionSpec& diffusion, const TimeGrid& grid,
                                 int paths, std::uint64_t seed, std::size_t vertex_cap = 64);

struct RateComparison {
    int k = 0;
    int node = 0;
    double t = 0.0;
    double observed = 0.0;
    double standard_error = 0.0;
    double bound = 0.0;
    bool violated = false; // observed > bound + 3 SE
};

std::vector<RateComparison> successive_differences(const SolveReport& report);

struct ModulusEntry {
    double s = 0.0, t = 0.0;
    double mean_h2 = 0.0;
    double modulus = 0.0; // mean_h2 / (t - s)
};

struct StabilityStats {
    double mean_sup_h2 = 0.0; // E[max over nodes of h^2(X, C)]
    double sup_ratio = 0.0;   // mean_sup_h2 / (1 + h^2(xi,C))
    std::vector<ModulusEntry> modulus_table;
    double k_hat = 0.0; // max modulus / (1 + h^2(xi,C))
};

// Modulus table over node pairs from a strided subsample with
// t - s >= 4 dt.
StabilityStats stability_report(const std::vector<SetPath>& final_paths, const LCSet& xi,
                                int stride = 4);

nlohmann::json report_to_json(const SolveReport& report);
nlohmann::json stability_to_json(const StabilityStats& stats);

} // namespace lcsde
