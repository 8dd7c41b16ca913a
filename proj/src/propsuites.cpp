#include "lcsde/propsuites.hpp"

#include "lcsde/finance.hpp"
#include "lcsde/integrals.hpp"
#include "lcsde/presets.hpp"
#include "lcsde/qp.hpp"
#include "lcsde/random_sets.hpp"
#include "lcsde/set_io.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace lcsde {

namespace {

using CaseFn =
    std::function<std::optional<std::string>(std::uint64_t seed, std::uint64_t idx, int size)>;

constexpr std::uint64_t kSuiteStream = 0x70726f70ULL;

double u01(std::uint64_t seed, std::uint64_t idx, std::uint64_t slot) {
    return rng::uniform01(seed, kSuiteStream, idx, slot);
}

int pick_dim(std::uint64_t seed, std::uint64_t idx) {
    return u01(seed, idx, 900) < 0.5 ? 2 : 3;
}

std::string describe(const LCSet& a) { return set_to_json(a).dump(); }

// ---- set_geometry suites ----------------------------------------------

std::optional<std::string> case_metric(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a = random_lcset(cone, size, 3.0, seed, 3 * idx);
    LCSet b = random_lcset(cone, size, 3.0, seed, 3 * idx + 1);
    LCSet dd = random_lcset(cone, size, 3.0, seed, 3 * idx + 2);
    if (hausdorff_distance(a, a) > 1e-12) return "h(A,A) != 0 for A=" + describe(a);
    auto ab = hausdorff(a, b);
    auto ba = hausdorff(b, a);
    if (std::abs(ab.h - ba.h) > 1e-12 || std::abs(ab.forward - ba.backward) > 1e-12)
        return "asymmetric h for A=" + describe(a) + " B=" + describe(b);
    double lhs = hausdorff_distance(a, dd);
    double rhs = ab.h + hausdorff_distance(b, dd);
    if (lhs > rhs + 1e-9) {
        std::ostringstream out;
        out << "triangle inequality violated: h(A,D)=" << lhs << " > " << rhs
            << " for A=" << describe(a) << " B=" << describe(b) << " D=" << describe(dd);
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_subadditivity(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a = random_lcset(cone, size, 3.0, seed, 4 * idx);
    LCSet b = random_lcset(cone, size, 3.0, seed, 4 * idx + 1);
    LCSet dd = random_lcset(cone, size, 3.0, seed, 4 * idx + 2);
    LCSet e = random_lcset(cone, size, 3.0, seed, 4 * idx + 3);
    double lhs = hausdorff_distance(minkowski_sum(a, b), minkowski_sum(dd, e));
    double rhs = hausdorff_distance(a, dd) + hausdorff_distance(b, e);
    if (lhs > rhs + 1e-9) {
        std::ostringstream out;
        out << "h(A+B,D+E)=" << lhs << " > h(A,D)+h(B,E)=" << rhs << " for A=" << describe(a)
            << " B=" << describe(b) << " D=" << describe(dd) << " E=" << describe(e);
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_cancellation(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a = random_lcset(cone, size, 3.0, seed, 3 * idx);
    LCSet dd = random_lcset(cone, size, 3.0, seed, 3 * idx + 1);
    LCSet b = random_lcset(cone, size, 3.0, seed, 3 * idx + 2);
    double with_b = hausdorff_distance(minkowski_sum(a, b), minkowski_sum(dd, b));
    double without = hausdorff_distance(a, dd);
    if (std::abs(with_b - without) > 1e-9) {
        std::ostringstream out;
        out << "cancellation gap |" << with_b << " - " << without << "| for A=" << describe(a)
            << " D=" << describe(dd) << " B=" << describe(b);
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_hullsum(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a1 = random_lcset(cone, size, 3.0, seed, 4 * idx);
    LCSet a2 = random_lcset(cone, size, 3.0, seed, 4 * idx + 1);
    LCSet b1 = random_lcset(cone, size, 3.0, seed, 4 * idx + 2);
    LCSet b2 = random_lcset(cone, size, 3.0, seed, 4 * idx + 3);
    LCSet lhs = minkowski_sum(convex_join({a1, a2}), convex_join({b1, b2}));
    LCSet rhs = convex_join({minkowski_sum(a1, b1), minkowski_sum(a1, b2),
                             minkowski_sum(a2, b1), minkowski_sum(a2, b2)});
    double h = hausdorff_distance(lhs, rhs);
    if (h > 1e-9) {
        std::ostringstream out;
        out << "co(A+B) vs co(A)+co(B) gap " << h << " for A1=" << describe(a1)
            << " A2=" << describe(a2) << " B1=" << describe(b1) << " B2=" << describe(b2);
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_prune(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a = random_lcset(cone, size + 2, 3.0, seed, idx);
    auto again = prune_vertices(a.vertices(), cone);
    if (again.size() != a.vertices().size())
        return "prune not idempotent for A=" + describe(a);
    for (std::size_t i = 0; i < again.size(); ++i)
        if ((again[i] - a.vertices()[i]).norm() != 0.0)
            return "prune not idempotent for A=" + describe(a);
    LCSet rebuilt(a.vertices(), cone);
    if (!(rebuilt == a)) return "canonical rebuild differs for A=" + describe(a);
    return std::nullopt;
}

std::optional<std::string> case_linear(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a = random_lcset(cone, size, 3.0, seed, 2 * idx);
    LCSet b = random_lcset(cone, size, 3.0, seed, 2 * idx + 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            m(r, c) += 0.3 * (2.0 * u01(seed, idx, 100 + 10 * r + c) - 1.0);
    LCSet lhs = linear_image(m, minkowski_sum(a, b));
    LCSet rhs = minkowski_sum(linear_image(m, a), linear_image(m, b));
    double h = hausdorff_distance(lhs, rhs);
    if (h > 1e-9) {
        std::ostringstream out;
        out << "M(A+B) vs MA+MB gap " << h << " for A=" << describe(a) << " B=" << describe(b);
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_duality(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a = random_lcset(cone, size, 3.0, seed, 2 * idx);
    LCSet b = random_lcset(cone, size, 3.0, seed, 2 * idx + 1);
    double h = hausdorff_distance(a, b);
    double sampled = 0.0;
    for (const auto& u : sample_polar_directions(cone, 2000, seed ^ (idx * 977ULL))) {
        auto sa = support_function(a, u);
        auto sb = support_function(b, u);
        if (!sa || !sb) return "support function infinite inside the polar cone";
        sampled = std::max(sampled, std::abs(*sa - *sb));
    }
    if (h < sampled - 1e-7) {
        std::ostringstream out;
        out << "QP h=" << h << " below sampled support sup=" << sampled << " for A=" << describe(a)
            << " B=" << describe(b);
        return out.str();
    }
    return std::nullopt;
}

// ---- qp_core suites ----------------------------------------------------

std::optional<std::string> case_qp_grid(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    int k = 1 + static_cast<int>(u01(seed, idx, 0) * std::min(3, size));
    if (k > 3) k = 3;
    Eigen::MatrixXd w(d, k);
    for (int c = 0; c < k; ++c) w.col(c) = random_vector(d, 2.0, seed, 50 + c, idx);
    Eigen::VectorXd x = random_vector(d, 3.0, seed, 49, idx);
    SimplexConeQP prob;
    prob.target = x;
    prob.polytope_vertices = w;
    prob.cone_generators = Eigen::MatrixXd(d, 0);
    double solved = solve(prob).distance;

    double best = std::numeric_limits<double>::infinity();
    const double step = 1e-3;
    if (k == 1) {
        best = (x - w.col(0)).norm();
    } else if (k == 2) {
        for (double l = 0.0; l <= 1.0 + 1e-12; l += step)
            best = std::min(best, (x - l * w.col(0) - (1.0 - l) * w.col(1)).norm());
    } else {
        for (double l1 = 0.0; l1 <= 1.0 + 1e-12; l1 += step)
            for (double l2 = 0.0; l2 <= 1.0 - l1 + 1e-12; l2 += step)
                best = std::min(best, (x - l1 * w.col(0) - l2 * w.col(1) -
                                       (1.0 - l1 - l2) * w.col(2))
                                          .norm());
    }
    if (std::abs(solved - best) > 2e-3) {
        std::ostringstream out;
        out << "QP distance " << solved << " vs grid search " << best << " (k=" << k
            << ", d=" << d << ")";
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_qp_monotone(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a = random_lcset(cone, size, 2.0, seed, idx);
    Eigen::VectorXd x = random_vector(d, 3.0, seed, 60, idx);
    Eigen::MatrixXd g = cone.generator_matrix();
    double before = distance_to_set(x, a.vertex_matrix(), g);
    Eigen::VectorXd extra = random_vector(d, 1.0, seed, 61, idx);
    if (extra.norm() < 1e-6) extra = Eigen::VectorXd::Unit(d, 0);
    extra.normalize();
    Eigen::MatrixXd g2(d, g.cols() + 1);
    if (g.cols() > 0) g2.leftCols(g.cols()) = g;
    g2.col(g.cols()) = extra;
    double after = distance_to_set(x, a.vertex_matrix(), g2);
    if (after > before + 1e-9) {
        std::ostringstream out;
        out << "distance grew from " << before << " to " << after
            << " after adding generator [" << extra.transpose() << "]";
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_qp_scaling(std::uint64_t seed, std::uint64_t idx, int size) {
    int d = pick_dim(seed, idx);
    ConeSpec cone = random_cone(d, seed, idx);
    LCSet a = random_lcset(cone, size, 2.0, seed, idx);
    Eigen::VectorXd x = random_vector(d, 3.0, seed, 70, idx);
    double c = 0.1 + 9.9 * u01(seed, idx, 71);
    Eigen::MatrixXd g = cone.generator_matrix();
    double base = distance_to_set(x, a.vertex_matrix(), g);
    double scaled = distance_to_set(c * x, c * a.vertex_matrix(), g);
    if (std::abs(scaled - c * base) > 1e-9 * std::max(1.0, c)) {
        std::ostringstream out;
        out << "scaling gap: d(cx,cW,G)=" << scaled << " vs c*d=" << c * base << " (c=" << c
            << ")";
        return out.str();
    }
    return std::nullopt;
}

// ---- stochastic_integrals suites --------------------------------------

std::vector<LCSet> random_field(const ConeSpec& cone, int nodes, int size, std::uint64_t seed,
                                std::uint64_t idx, std::uint64_t salt) {
    std::vector<LCSet> values;
    values.reserve(nodes);
    for (int i = 0; i < nodes; ++i)
        values.push_back(random_lcset(cone, size, 2.0, seed, salt + idx * 64 + i));
    return values;
}

std::optional<std::string> case_additivity(std::uint64_t seed, std::uint64_t idx, int size) {
    ConeSpec cone = random_cone(2, seed, idx);
    const int m = 12;
    TimeGrid grid(1.0, m);
    auto values = random_field(cone, m, size, seed, idx, 1000);
    int i0 = 1 + static_cast<int>(u01(seed, idx, 5) * (m - 2));
    LCSet whole = riemann_set_integral(values, 0, m, grid.dt());
    LCSet split = minkowski_sum(riemann_set_integral(values, 0, i0, grid.dt()),
                                riemann_set_integral(values, i0, m, grid.dt()));
    double h = hausdorff_distance(whole, split);
    if (h > 1e-9) {
        std::ostringstream out;
        out << "interval additivity gap " << h << " at split index " << i0;
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_thm43(std::uint64_t seed, std::uint64_t idx, int size) {
    ConeSpec cone = random_cone(2, seed, idx);
    const int m = 12;
    TimeGrid grid(1.0, m);
    auto f = random_field(cone, m, size, seed, idx, 2000);
    auto ft = random_field(cone, m, size, seed, idx, 3000);
    int i1 = 2 + static_cast<int>(u01(seed, idx, 6) * (m - 2));
    if (i1 > m) i1 = m;
    double lhs = hausdorff_distance(riemann_set_integral(f, 0, i1, grid.dt()),
                                    riemann_set_integral(ft, 0, i1, grid.dt()));
    double rhs = 0.0;
    for (int i = 0; i < i1; ++i) {
        double hi = hausdorff_distance(f[i], ft[i]);
        rhs += grid.dt() * hi * hi;
    }
    rhs *= grid.node(i1);
    if (lhs * lhs > rhs + 1e-9) {
        std::ostringstream out;
        out << "Cauchy-Schwarz integral bound violated: h^2=" << lhs * lhs << " > " << rhs;
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_cor44(std::uint64_t seed, std::uint64_t idx, int size) {
    ConeSpec cone = random_cone(2, seed, idx);
    const int m = 12;
    TimeGrid grid(1.0, m);
    auto f = random_field(cone, m, size, seed, idx, 4000);
    int i1 = 2 + static_cast<int>(u01(seed, idx, 7) * (m - 2));
    if (i1 > m) i1 = m;
    LCSet c_set = LCSet::cone_set(cone);
    double lhs = hausdorff_distance(riemann_set_integral(f, 0, i1, grid.dt()), c_set);
    double rhs = 0.0;
    for (int i = 0; i < i1; ++i) {
        double hi = hausdorff_distance(f[i], c_set);
        rhs += grid.dt() * hi * hi;
    }
    rhs *= grid.node(i1);
    if (lhs * lhs > rhs + 1e-9) {
        std::ostringstream out;
        out << "distance-to-cone integral bound violated: h^2=" << lhs * lhs << " > " << rhs;
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_continuity(std::uint64_t seed, std::uint64_t idx, int size) {
    ConeSpec cone = random_cone(2, seed, idx);
    const int m = 16;
    TimeGrid grid(1.0, m);
    auto f = random_field(cone, m, size, seed, idx, 5000);
    LCSet c_set = LCSet::cone_set(cone);
    int i = 1 + static_cast<int>(u01(seed, idx, 8) * (m - 2));
    int j = i + 1 + static_cast<int>(u01(seed, idx, 9) * (m - i - 1));
    if (j > m) j = m;
    double lhs = hausdorff_distance(riemann_set_integral(f, 0, j, grid.dt()),
                                    riemann_set_integral(f, 0, i, grid.dt()));
    double rhs = 0.0;
    for (int k = i; k < j; ++k) {
        double hk = hausdorff_distance(f[k], c_set);
        rhs += grid.dt() * hk * hk;
    }
    rhs *= grid.node(j) - grid.node(i);
    if (lhs * lhs > rhs + 1e-9) {
        std::ostringstream out;
        out << "path continuity bound violated: h^2(I_j,I_i)=" << lhs * lhs << " > " << rhs
            << " for i=" << i << " j=" << j;
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_ito_monotone(std::uint64_t seed, std::uint64_t idx, int size) {
    const int d = 2, mdim = 2;
    const int n = std::max(1, size);
    TimeGrid grid(1.0, 8);
    BrownianPath path = sample_brownian(grid, mdim, seed ^ 0xabcULL, idx);
    std::vector<Eigen::MatrixXd> mats;
    for (int k = 0; k <= n; ++k) {
        Eigen::MatrixXd g(d, mdim);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < mdim; ++c)
                g(r, c) = 2.0 * u01(seed, idx, 200 + 10 * k + 2 * r + c) - 1.0;
        mats.push_back(g);
    }
    std::vector<std::vector<Eigen::MatrixXd>> fam_n(grid.steps), fam_n1(grid.steps);
    for (int i = 0; i < grid.steps; ++i) {
        fam_n[i].assign(mats.begin(), mats.begin() + n);
        fam_n1[i] = mats;
    }
    LCSet hull_n = ito_family_integral(fam_n, path, grid.steps);
    LCSet hull_n1 = ito_family_integral(fam_n1, path, grid.steps);
    double forward = hausdorff(hull_n, hull_n1).forward;
    if (forward > 1e-10) {
        std::ostringstream out;
        out << "hull_N not inside hull_{N+1}: excess " << forward << " (N=" << n << ")";
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_adapted(std::uint64_t seed, std::uint64_t idx, int size) {
    (void)size;
    Preset preset = make_preset("bounded-diffusion");
    TimeGrid grid(1.0, 8);
    const double dt = grid.dt();
    BrownianPath a = sample_brownian(grid, preset.diffusion.brownian_dim, seed ^ 0x5a5aULL, idx);
    BrownianPath b = a;
    int cut = 1 + static_cast<int>(u01(seed, idx, 10) * (grid.steps - 1));
    for (int i = cut; i < grid.steps; ++i)
        for (int j = 0; j < b.dimension; ++j) b.increments(i, j) += 1.0 + i;

    auto march = [&](const BrownianPath& path) {
        std::vector<LCSet> values;
        values.push_back(preset.xi);
        for (int i = 0; i < grid.steps; ++i) {
            const double t = grid.node(i);
            LCSet next = minkowski_sum(values.back(),
                                       scale(dt, preset.drift.evaluator(t, path, values.back())));
            if (!preset.diffusion.empty()) {
                auto mats = preset.diffusion.members(t, path, values.back());
                std::vector<Eigen::VectorXd> pts;
                for (const auto& g : mats) pts.push_back(g * path.increments.row(i).transpose());
                next = minkowski_sum(next, LCSet(std::move(pts), ConeSpec(2)));
            }
            // Deterministic cap keeps the sweep polynomial; both paths
            // reduce identically, so the prefix comparison stays exact.
            values.push_back(reduce_vertices(next, 24).first);
        }
        return values;
    };
    auto va = march(a);
    auto vb = march(b);
    for (int i = 0; i <= cut; ++i)
        if (!(va[i] == vb[i])) {
            std::ostringstream out;
            out << "node " << i << " depends on increments at or after step " << cut;
            return out.str();
        }
    return std::nullopt;
}

// ---- solvency_finance suites ------------------------------------------

std::optional<std::string> case_cone_equiv(std::uint64_t seed, std::uint64_t idx, int size) {
    (void)size;
    double lambda = 0.05 + 0.45 * u01(seed, idx, 0);
    double mu = 0.05 + 0.45 * u01(seed, idx, 1);
    double bank = 0.5 + 2.0 * u01(seed, idx, 2);
    double stock = 0.5 + 2.0 * u01(seed, idx, 3);
    MarketParams mp;
    mp.lambda = lambda;
    mp.mu = mu;
    ConeSpec k = constant_cone_K(lambda, mu).cone;
    ConeSpec kpi = solvency_cone(bid_ask(mp, bank, stock));

    Eigen::Vector2d z;
    if (u01(seed, idx, 4) < 0.5) {
        // Exact conic combination, guaranteed inside K.
        double a = 3.0 * u01(seed, idx, 5);
        double b = 3.0 * u01(seed, idx, 6);
        z = a * Eigen::Vector2d(1.0 + lambda, -1.0) + b * Eigen::Vector2d(-(1.0 - mu), 1.0);
    } else {
        z = Eigen::Vector2d(4.0 * u01(seed, idx, 7) - 2.0, 4.0 * u01(seed, idx, 8) - 2.0);
    }
    bool in_k = k.distance(z) <= 1e-9;
    bool in_kpi = kpi.distance(Eigen::Vector2d(z(0) / bank, z(1) / stock)) <= 1e-9;
    if (in_k != in_kpi) {
        std::ostringstream out;
        out << "membership mismatch for z=(" << z(0) << "," << z(1) << "), B=" << bank
            << ", S=" << stock << ": K says " << in_k << ", K(Pi) says " << in_kpi;
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_bidask(std::uint64_t seed, std::uint64_t idx, int size) {
    (void)size;
    MarketParams mp;
    mp.lambda = 0.01 + 0.9 * u01(seed, idx, 0);
    mp.mu = 0.01 + 0.9 * u01(seed, idx, 1);
    double bank = 0.1 + 5.0 * u01(seed, idx, 2);
    double stock = 0.1 + 5.0 * u01(seed, idx, 3);
    BidAskMatrix pi = bid_ask(mp, bank, stock);
    double product = pi.pi12 * pi.pi21;
    double expected = (1.0 + mp.lambda) / (1.0 - mp.mu);
    if (std::abs(product - expected) > 1e-12 * expected || !(product > 1.0)) {
        std::ostringstream out;
        out << "pi12*pi21=" << product << " vs (1+lambda)/(1-mu)=" << expected;
        return out.str();
    }
    return std::nullopt;
}

std::optional<std::string> case_zero_strategy(std::uint64_t seed, std::uint64_t idx, int size) {
    (void)size;
    MarketParams mp = default_market();
    mp.lambda = 0.05 + 0.3 * u01(seed, idx, 0);
    mp.mu = 0.05 + 0.3 * u01(seed, idx, 1);
    mp.p = 0.5 + 2.0 * u01(seed, idx, 2);
    mp.x = 2.0 * u01(seed, idx, 3) - 1.0;
    mp.y = 2.0 * u01(seed, idx, 4) - 1.0;
    TimeGrid grid(1.0, 16);
    BrownianPath path = sample_brownian(grid, 1, seed ^ 0xf1aULL, idx);
    PriceTrajectories prices = simulate_price(mp, path);
    StrategyRates zero;
    zero.theta_l.assign(grid.steps, 0.0);
    zero.theta_m.assign(grid.steps, 0.0);
    auto portfolio = simulate_portfolio(mp, zero, prices, grid, path);
    auto h = unit_portfolio(portfolio, prices);
    std::vector<ConeSpec> cones;
    for (int i = 0; i < grid.steps; ++i)
        cones.push_back(solvency_cone(bid_ask(mp, prices.bank[i], prices.stock[i])));
    auto residuals = inclusion_check(h, cones);
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if ((h[i] - h[0]).norm() > 1e-12 || residuals[i] > 1e-12) {
            std::ostringstream out;
            out << "zero strategy not conserved at node " << i << ": drift "
                << (h[i] - h[0]).norm() << ", residual " << residuals[i];
            return out.str();
        }
    }
    return std::nullopt;
}

// ---- driver ------------------------------------------------------------

struct Suite {
    CaseFn fn;
    int default_size;
};

const std::map<std::string, Suite>& suite_table() {
    static const std::map<std::string, Suite> table = {
        {"metric", {case_metric, 5}},
        {"subadditivity", {case_subadditivity, 5}},
        {"cancellation", {case_cancellation, 5}},
        {"hullsum", {case_hullsum, 4}},
        {"prune", {case_prune, 5}},
        {"linear", {case_linear, 4}},
        {"duality", {case_duality, 4}},
        {"qp_grid", {case_qp_grid, 3}},
        {"qp_monotone", {case_qp_monotone, 4}},
        {"qp_scaling", {case_qp_scaling, 4}},
        {"additivity", {case_additivity, 3}},
        {"thm43", {case_thm43, 3}},
        {"cor44", {case_cor44, 3}},
        {"continuity", {case_continuity, 3}},
        {"ito_monotone", {case_ito_monotone, 4}},
        {"adapted", {case_adapted, 1}},
        {"cone_equiv", {case_cone_equiv, 1}},
        {"bidask", {case_bidask, 1}},
        {"zero_strategy", {case_zero_strategy, 1}},
    };
    return table;
}

} // namespace

std::vector<std::string> prop_suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, suite] : suite_table()) names.push_back(name);
    return names;
}

bool prop_suite_exists(const std::string& name) { return suite_table().count(name) != 0; }

PropResult run_prop_suite(const std::string& name, int cases, std::uint64_t seed) {
    auto it = suite_table().find(name);
    if (it == suite_table().end()) throw std::invalid_argument("unknown suite: " + name);
    if (cases < 1) throw std::invalid_argument("cases must be positive");
    const Suite& suite = it->second;
    PropResult result;
    result.suite = name;
    result.cases = cases;
    result.passed = true;
    for (int i = 0; i < cases; ++i) {
        auto failure = suite.fn(seed, static_cast<std::uint64_t>(i), suite.default_size);
        if (!failure) continue;
        // Shrink: smallest complexity level at which this case still fails.
        PropCounterexample ce;
        ce.case_index = static_cast<std::uint64_t>(i);
        ce.size = suite.default_size;
        ce.description = *failure;
        for (int s = 1; s < suite.default_size; ++s) {
            auto shrunk = suite.fn(seed, static_cast<std::uint64_t>(i), s);
            if (shrunk) {
                ce.size = s;
                ce.description = *shrunk;
                break;
            }
        }
        result.passed = false;
        result.counterexample = ce;
        return result;
    }
    return result;
}

} // namespace lcsde
