#include "lcsde/presets.hpp"

#include <cmath>

namespace lcsde {

namespace {

ConeSpec orthant2() {
    return ConeSpec::make(2, {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)});
}

LCSet xi_default(const ConeSpec& cone) {
    return LCSet({Eigen::Vector2d(1.0, 1.0)}, cone);
}

Preset cone_constant() {
    ConeSpec cone = orthant2();
    Preset p("cone-constant", xi_default(cone));
    p.drift.beta = 0.5;
    p.drift.evaluator = [cone](double, const BrownianPath&, const LCSet&) {
        return LCSet::cone_set(cone);
    };
    return p;
}

Preset compounding() {
    Preset p("compounding", xi_default(orthant2()));
    p.drift.beta = 1.0;
    p.drift.evaluator = [](double, const BrownianPath&, const LCSet& a) { return a; };
    return p;
}

Preset bounded_diffusion() {
    ConeSpec cone = orthant2();
    Preset p("bounded-diffusion", xi_default(cone));
    p.drift.beta = 0.05;
    p.drift.evaluator = [](double, const BrownianPath&, const LCSet& a) {
        return scale(0.05, a);
    };

    const int n_members = 8;
    const double a0 = 0.8;
    std::vector<double> alphas;
    std::vector<Eigen::MatrixXd> dirs; // unit max-norm 2x1 matrices
    for (int n = 1; n <= n_members; ++n) {
        alphas.push_back(a0 / (n * n));
        double phi = 0.35 + 0.7 * n;
        Eigen::MatrixXd u(2, 1);
        u << std::cos(phi), std::sin(phi);
        u /= u.cwiseAbs().maxCoeff();
        dirs.push_back(u);
    }
    double tail = 0.0, tail_sq = 0.0;
    for (int n = n_members + 1; n <= 2000000; ++n) {
        double a = a0 / (static_cast<double>(n) * n);
        tail += a;
        tail_sq += a * a;
    }
    DiffusionSpec g;
    g.alphas = alphas;
    g.tail_alpha = tail;
    g.tail_alpha_sq = tail_sq;
    g.brownian_dim = 1;
    LCSet c_set = LCSet::cone_set(cone);
    g.members = [alphas, dirs, c_set](double, const BrownianPath&, const LCSet& a) {
        // One h(A,C) evaluation shared across the family.
        double s = std::tanh(hausdorff_distance(a, c_set));
        std::vector<Eigen::MatrixXd> out;
        out.reserve(alphas.size());
        for (std::size_t n = 0; n < alphas.size(); ++n) out.push_back(alphas[n] * s * dirs[n]);
        return out;
    };
    p.diffusion = std::move(g);
    return p;
}

} // namespace

bool preset_exists(const std::string& name) {
    return name == "cone-constant" || name == "compounding" || name == "bounded-diffusion";
}

Preset make_preset(const std::string& name) {
    if (name == "cone-constant") return cone_constant();
    if (name == "compounding") return compounding();
    if (name == "bounded-diffusion") return bounded_diffusion();
    throw std::invalid_argument("unknown preset: " + name);
}

MarketParams default_market() {
    MarketParams m;
    m.lambda = 0.15;
    m.mu = 0.15;
    m.r = constant_rate(0.05);
    // Drift/vol gap kept small so the cross-time bid-ask products
    // pi12(s) * pi21(t) stay above 1 and the accumulated cone stays
    // pointed over the whole horizon.
    m.b = constant_rate(0.15);
    m.sigma = constant_rate(0.02);
    m.p = 1.0;
    m.x = 1.0;
    m.y = 1.0;
    return m;
}

} // namespace lcsde
