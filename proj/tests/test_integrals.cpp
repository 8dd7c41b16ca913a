#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcsde/integrals.hpp"
#include "lcsde/presets.hpp"
#include "lcsde/sde.hpp"

#include <cmath>

using namespace lcsde;

namespace {

Eigen::Vector2d v2(double a, double b) { return Eigen::Vector2d(a, b); }

ConeSpec orthant2() { return ConeSpec::make(2, {v2(1, 0), v2(0, 1)}); }

Eigen::VectorXd v1(double a) {
    Eigen::VectorXd v(1);
    v(0) = a;
    return v;
}

} // namespace

TEST_CASE("brownian sampling: determinism, seed separation, variance") {
    TimeGrid grid(1.0, 100);
    BrownianPath p1 = sample_brownian(grid, 2, 42, 0);
    BrownianPath p2 = sample_brownian(grid, 2, 42, 0);
    CHECK((p1.increments - p2.increments).norm() == 0.0);

    BrownianPath q = sample_brownian(grid, 2, 43, 0);
    CHECK((p1.increments - q.increments).norm() > 1e-3);
    BrownianPath r = sample_brownian(grid, 2, 42, 1);
    CHECK((p1.increments - r.increments).norm() > 1e-3);

    // sample variance of increments ~ dt; chi-square 3-SE band with
    // SE ~ dt * sqrt(2/(n-1))
    TimeGrid fine(1.0, 1000);
    const int n_paths = 100; // 1e5 draws per component
    double sum_sq = 0.0;
    std::int64_t n = 0;
    for (int p = 0; p < n_paths; ++p) {
        BrownianPath bp = sample_brownian(fine, 1, 7, static_cast<std::uint64_t>(p));
        sum_sq += bp.increments.squaredNorm();
        n += fine.steps;
    }
    double var = sum_sq / static_cast<double>(n);
    double dt = fine.dt();
    double se = dt * std::sqrt(2.0 / (static_cast<double>(n) - 1));
    CHECK(std::abs(var - dt) <= 3 * se);

    // value_at telescopes the increments
    Eigen::VectorXd b3 = p1.value_at(3);
    Eigen::VectorXd manual = p1.increments.row(0) + p1.increments.row(1) + p1.increments.row(2);
    CHECK((b3 - manual).norm() <= 1e-15);
    CHECK(p1.value_at(0).norm() == 0.0);
}

TEST_CASE("riemann set integral") {
    ConeSpec c = orthant2();
    LCSet a({v2(1, 2), v2(3, 0)}, c);

    // constant field over [0,2]: integral = 2A regardless of resolution
    for (int M : {7, 64, 1000}) {
        TimeGrid grid(2.0, M);
        std::vector<LCSet> vals(static_cast<std::size_t>(M) + 1, a);
        LCSet integ = riemann_set_integral(vals, 0, M, grid.dt());
        CHECK(hausdorff_distance(integ, scale(2.0, a)) <= 1e-10);
    }

    // field identically C: left-endpoint sum of dt*C is C
    TimeGrid grid(1.0, 16);
    std::vector<LCSet> cones(17, LCSet::cone_set(c));
    LCSet ci = riemann_set_integral(cones, 0, 16, grid.dt());
    CHECK(ci == LCSet::cone_set(c));

    // degenerate index ranges are rejected
    CHECK_THROWS(riemann_set_integral(cones, 3, 3, grid.dt()));
    CHECK_THROWS(riemann_set_integral(cones, 5, 3, grid.dt()));

    // subinterval additivity on a varying field, checked against the
    // one-shot sum
    std::vector<LCSet> varying;
    for (int i = 0; i <= 16; ++i)
        varying.push_back(LCSet({v2(i * 0.1, 1.0 - i * 0.05)}, c));
    LCSet whole = riemann_set_integral(varying, 0, 16, grid.dt());
    LCSet split = minkowski_sum(riemann_set_integral(varying, 0, 9, grid.dt()),
                                riemann_set_integral(varying, 9, 16, grid.dt()));
    CHECK(hausdorff_distance(whole, split) <= 1e-12);
}

TEST_CASE("ito family integral") {
    TimeGrid grid(1.0, 64);
    BrownianPath bp = sample_brownian(grid, 1, 5, 0);

    // N = 1, g = 0: integral is the singleton {0}
    std::vector<std::vector<Eigen::MatrixXd>> zeros(
        65, {Eigen::MatrixXd::Zero(2, 1)});
    LCSet z = ito_family_integral(zeros, bp, 64);
    CHECK(z.vertices().size() == 1);
    CHECK(z.vertices()[0].norm() == 0.0);
    CHECK(z.cone().is_trivial());

    // N = 1, g = (1,0)^T constant: telescoping gives {(B_t, 0)}
    Eigen::MatrixXd g1(2, 1);
    g1 << 1, 0;
    std::vector<std::vector<Eigen::MatrixXd>> ones(65, {g1});
    LCSet s = ito_family_integral(ones, bp, 32);
    REQUIRE(s.vertices().size() == 1);
    double b32 = bp.value_at(32)(0);
    CHECK(std::abs(s.vertices()[0](0) - b32) <= 1e-14);
    CHECK(std::abs(s.vertices()[0](1)) <= 1e-14);

    // N = 2, g = +/-(1,0): segment from -|B_t| to +|B_t| along e1
    std::vector<std::vector<Eigen::MatrixXd>> pm(65, {g1, (-g1).eval()});
    LCSet seg = ito_family_integral(pm, bp, 32);
    REQUIRE(seg.vertices().size() == 2);
    double lo = std::min(seg.vertices()[0](0), seg.vertices()[1](0));
    double hi = std::max(seg.vertices()[0](0), seg.vertices()[1](0));
    CHECK(lo == doctest::Approx(-std::abs(b32)).epsilon(1e-12));
    CHECK(hi == doctest::Approx(std::abs(b32)).epsilon(1e-12));

    // to_index = 0 integrates nothing
    LCSet nothing = ito_family_integral(pm, bp, 0);
    CHECK(nothing.vertices().size() == 1);
    CHECK(nothing.vertices()[0].norm() == 0.0);
}

TEST_CASE("field evaluation along a path") {
    ConeSpec c = orthant2();
    TimeGrid grid(1.0, 8);
    BrownianPath bp = sample_brownian(grid, 1, 9, 0);
    SetPath sp;
    sp.grid = grid;
    for (int i = 0; i <= 8; ++i) sp.values.push_back(LCSet({v2(i * 0.5, 0)}, c));
    SetField doubler = [](double, const BrownianPath&, const LCSet& a) {
        return scale(2.0, a);
    };
    auto out = evaluate_field_on_path(doubler, sp, bp);
    REQUIRE(out.size() == 9);
    for (int i = 0; i <= 8; ++i)
        CHECK(hausdorff_distance(out[static_cast<std::size_t>(i)],
                                 LCSet({v2(i * 1.0, 0)}, c)) <= 1e-12);
}

TEST_CASE("monte-carlo mean h^2") {
    ConeSpec c = orthant2();
    TimeGrid grid(1.0, 4);
    auto mkpath = [&](double x) {
        SetPath p;
        p.grid = grid;
        for (int i = 0; i <= 4; ++i) p.values.push_back(LCSet({v2(x, 0)}, c));
        return p;
    };
    std::vector<std::pair<SetPath, SetPath>> same{{mkpath(1), mkpath(1)}, {mkpath(2), mkpath(2)}};
    MeanH2 m0 = mc_mean_h2(same, 2);
    CHECK(m0.mean == 0.0);
    CHECK(m0.standard_error == 0.0);

    std::vector<std::pair<SetPath, SetPath>> one{{mkpath(0), mkpath(1)}};
    MeanH2 m1 = mc_mean_h2(one, 2);
    CHECK(m1.mean == doctest::Approx(1.0).epsilon(1e-12));

    // h values 1 and 3 -> E[h^2] = (1+9)/2 = 5
    std::vector<SetPath> xs{mkpath(0), mkpath(0)};
    std::vector<SetPath> ys{mkpath(1), mkpath(3)};
    MeanH2 m5 = mc_mean_h2(xs, ys, 4);
    CHECK(m5.mean == doctest::Approx(5.0).epsilon(1e-12));
    // sample variance of {1, 9} is 32, so SE = sqrt(32/2) = 4
    CHECK(m5.standard_error == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("picard fixed point: constant drift, no diffusion") {
    // F(A) = C, g = 0: Y_t = xi + t*C, and Y is already the fixed point
    // after one iteration.
    ConeSpec c = orthant2();
    LCSet xi({v2(1, 1)}, c);
    DriftSpec drift;
    drift.beta = 2.0;
    drift.evaluator = [c](double, const BrownianPath&, const LCSet&) {
        return LCSet::cone_set(c);
    };
    DiffusionSpec diff; // empty
    TimeGrid grid(1.0, 16);
    PicardOptions opt;
    opt.iterations = 3;
    opt.paths = 4;
    opt.seed = 11;
    SolveReport rep = picard_solve(xi, drift, diff, grid, opt);
    REQUIRE(!rep.final_paths.empty());
    for (const auto& path : rep.final_paths)
        for (int i = 0; i <= grid.steps; ++i) {
            // t*C + C = C for t > 0, so Y_t = {(1,1)} + C at every node
            CHECK(hausdorff_distance(path.values[static_cast<std::size_t>(i)], xi) <= 1e-12);
        }
    // successive differences vanish from k = 1 on
    for (const auto& d : successive_differences(rep))
        if (d.k >= 1) CHECK(d.observed <= 1e-18);
}

TEST_CASE("scalar compounding march matches the closed form") {
    // d = 1, C = R_+, xi = {1}+C, F(A) = A, g = 0. Euler recursion:
    // Y_{i+1} = Y_i + dt*Y_i = (1+dt) Y_i, so Y_i = {(1+dt)^i} + C.
    ConeSpec ray = ConeSpec::make(1, {v1(1)});
    LCSet xi({v1(1)}, ray);
    DriftSpec drift;
    drift.beta = 2.0;
    drift.evaluator = [](double, const BrownianPath&, const LCSet& a) { return a; };
    DiffusionSpec diff;
    TimeGrid grid(1.0, 32);
    auto paths = euler_march(xi, drift, diff, grid, 2, 17);
    REQUIRE(paths.size() == 2);
    double dt = grid.dt();
    for (const auto& p : paths)
        for (int i = 0; i <= 32; ++i) {
            REQUIRE(p.values[static_cast<std::size_t>(i)].vertices().size() == 1);
            double v = p.values[static_cast<std::size_t>(i)].vertices()[0](0);
            CHECK(v == doctest::Approx(std::pow(1 + dt, i)).epsilon(1e-12));
        }

    // picard limit reproduces the same march once converged; iterate K
    // truncates the binomial expansion of (1+dt)^i at order K, so run
    // well past the grid size's effective support
    PicardOptions opt;
    opt.iterations = 24;
    opt.paths = 2;
    opt.seed = 17;
    SolveReport rep = picard_solve(xi, drift, diff, grid, opt);
    for (const auto& p : rep.final_paths) {
        double v = p.values[32].vertices()[0](0);
        CHECK(v == doctest::Approx(std::pow(1 + dt, 32)).epsilon(1e-9));
    }
}

TEST_CASE("successive differences respect the factorial bound") {
    Preset preset = make_preset("compounding");
    TimeGrid grid(1.0, 32);
    PicardOptions opt;
    opt.iterations = 6;
    opt.paths = 50;
    opt.seed = 3;
    SolveReport rep = picard_solve(preset.xi, preset.drift, preset.diffusion, grid, opt);
    auto diffs = successive_differences(rep);
    CHECK(!diffs.empty());
    for (const auto& d : diffs) {
        CHECK(!d.violated);
        CHECK(d.observed <= d.bound + 3 * d.standard_error);
    }
    // the bound itself matches M^{k+1}(1+h^2(xi,C)) t^{k+1}/(k+1)!
    double M = rep.m_constant;
    for (const auto& d : diffs) {
        double fact = 1.0;
        for (int j = 2; j <= d.k + 1; ++j) fact *= j;
        double expect = std::pow(M, d.k + 1) * (1 + rep.xi_h2) * std::pow(d.t, d.k + 1) / fact;
        CHECK(d.bound == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("stability report") {
    ConeSpec c = orthant2();
    // constant-in-time paths: modulus vanishes, sup statistic is exact
    LCSet a({v2(3, 4)}, c); // h(a, C) = 0 (vertex inside the cone)
    LCSet b({v2(-1, 0)}, c);
    TimeGrid grid(1.0, 16);
    SetPath p;
    p.grid = grid;
    p.values.assign(17, b);
    StabilityStats st = stability_report({p}, b);
    double h2 = hausdorff_distance(b, LCSet::cone_set(c));
    h2 *= h2;
    CHECK(st.mean_sup_h2 == doctest::Approx(h2).epsilon(1e-12));
    CHECK(st.sup_ratio == doctest::Approx(h2 / (1 + h2)).epsilon(1e-12));
    for (const auto& m : st.modulus_table) CHECK(m.mean_h2 <= 1e-18);
    CHECK(st.k_hat <= 1e-18);

    // all nodes on the cone itself: every statistic is zero
    SetPath q;
    q.grid = grid;
    q.values.assign(17, LCSet::cone_set(c));
    StabilityStats z = stability_report({q}, LCSet::cone_set(c));
    CHECK(z.mean_sup_h2 == 0.0);
    CHECK(z.k_hat == 0.0);
}

TEST_CASE("picard-euler consistency under grid refinement") {
    // On the deterministic compounding dynamics the iterate distance at
    // the horizon is grid-independent, but the march against the exact
    // exponential contracts as dt shrinks. Track max-node E[h^2] between
    // the numeric terminal value and e^t and require monotone decay with
    // ratio <= 0.75 per doubling.
    ConeSpec ray = ConeSpec::make(1, {v1(1)});
    LCSet xi({v1(1)}, ray);
    DriftSpec drift;
    drift.beta = 2.0;
    drift.evaluator = [](double, const BrownianPath&, const LCSet& a) { return a; };
    DiffusionSpec diff;
    double prev = std::numeric_limits<double>::infinity();
    for (int M : {32, 64, 128, 256}) {
        TimeGrid grid(1.0, M);
        auto paths = euler_march(xi, drift, diff, grid, 1, 1);
        double worst = 0.0;
        for (int i = 0; i <= M; ++i) {
            double v = paths[0].values[static_cast<std::size_t>(i)].vertices()[0](0);
            double err = v - std::exp(grid.node(i));
            worst = std::max(worst, err * err);
        }
        if (prev < std::numeric_limits<double>::infinity() && prev > 1e-20)
            CHECK(worst <= 0.75 * prev);
        prev = worst;
    }
}
