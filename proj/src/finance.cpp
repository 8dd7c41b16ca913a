#include "lcsde/finance.hpp"

#include <cmath>

namespace lcsde {

void MarketParams::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("market: lambda must lie in (0,1)");
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("market: mu must lie in (0,1)");
    if (!(p > 0.0))
        throw std::invalid_argument("market: initial price must be positive");
}

BidAskMatrix::BidAskMatrix(double pi12_, double pi21_) : pi12(pi12_), pi21(pi21_) {
    if (!(pi12 > 0.0) || !(pi21 > 0.0) || !(pi12 * pi21 > 1.0))
        throw std::invalid_argument("bid-ask: need pi12 > 0, pi21 > 0 and pi12*pi21 > 1");
}

void StrategyRates::validate(int steps) const {
    if (static_cast<int>(theta_l.size()) < steps || static_cast<int>(theta_m.size()) < steps)
        throw std::invalid_argument("strategy: need a rate for every grid step");
    for (int i = 0; i < steps; ++i)
        if (theta_l[i] < 0.0 || theta_m[i] < 0.0)
            throw std::invalid_argument("strategy: rates must be nonnegative");
}

PriceTrajectories simulate_price(const MarketParams& params, const BrownianPath& path) {
    if (path.dimension != 1)
        throw std::invalid_argument("simulate_price: one-dimensional driving noise expected");
    params.validate();
    const TimeGrid& grid = path.grid;
    const double dt = grid.dt();
    PriceTrajectories out;
    out.bank.assign(grid.steps + 1, 1.0);
    out.stock.assign(grid.steps + 1, params.p);
    for (int i = 0; i < grid.steps; ++i) {
        const double t = grid.node(i);
        const double sig = params.sigma(t);
        out.bank[i + 1] = out.bank[i] * std::exp(params.r(t) * dt);
        out.stock[i + 1] =
            out.stock[i] * std::exp((params.b(t) - 0.5 * sig * sig) * dt + sig * path.increments(i, 0));
        if (!(out.bank[i + 1] > 0.0) || !(out.stock[i + 1] > 0.0) ||
            !std::isfinite(out.bank[i + 1]) || !std::isfinite(out.stock[i + 1]))
            throw std::runtime_error("simulate_price: nonpositive or non-finite price");
    }
    return out;
}

BidAskMatrix bid_ask(const MarketParams& params, double bank, double stock) {
    if (!(bank > 0.0 && stock > 0.0))
        throw std::invalid_argument("bid_ask: prices must be positive");
    return BidAskMatrix((1.0 + params.lambda) * stock / bank,
                        bank / ((1.0 - params.mu) * stock));
}

ConeSpec solvency_cone(const BidAskMatrix& pi) {
    std::vector<Eigen::VectorXd> gens;
    gens.push_back(Eigen::Vector2d(1.0, 0.0));
    gens.push_back(Eigen::Vector2d(0.0, 1.0));
    gens.push_back(Eigen::Vector2d(pi.pi12, -1.0));
    gens.push_back(Eigen::Vector2d(-1.0, pi.pi21));
    return ConeSpec::make(2, gens);
}

ConstantCone constant_cone_K(double lambda, double mu) {
    if (lambda < 0.0 || lambda >= 1.0 || mu < 0.0 || mu >= 1.0)
        throw std::invalid_argument("constant_cone_K: need lambda, mu in [0,1)");
    std::vector<Eigen::VectorXd> gens;
    gens.push_back(Eigen::Vector2d(1.0 + lambda, -1.0));
    gens.push_back(Eigen::Vector2d(-(1.0 - mu), 1.0));
    ConstantCone out{ConeSpec::make(2, gens), lambda == 0.0 && mu == 0.0};
    return out;
}

PortfolioTrajectories simulate_portfolio(const MarketParams& params,
                                         const StrategyRates& strategy,
                                         const PriceTrajectories& prices,
                                         const TimeGrid& grid,
                                         const BrownianPath& path) {
    (void)path; // the stock noise enters through the realized S factors
    strategy.validate(grid.steps);
    if (static_cast<int>(prices.bank.size()) != grid.steps + 1)
        throw std::invalid_argument("simulate_portfolio: price grid mismatch");
    const double dt = grid.dt();
    PortfolioTrajectories out;
    out.bank_value.assign(grid.steps + 1, params.x);
    out.stock_value.assign(grid.steps + 1, params.y);
    // Holdings ride the realized per-step price growth factors, so a
    // zero strategy keeps the unit portfolio X/B, Y/S exactly constant.
    for (int i = 0; i < grid.steps; ++i) {
        const double dl = strategy.theta_l[i] * dt;
        const double dm = strategy.theta_m[i] * dt;
        out.bank_value[i + 1] = out.bank_value[i] * (prices.bank[i + 1] / prices.bank[i]) -
                                (1.0 + params.lambda) * dl + (1.0 - params.mu) * dm;
        out.stock_value[i + 1] =
            out.stock_value[i] * (prices.stock[i + 1] / prices.stock[i]) + dl - dm;
    }
    return out;
}

std::vector<Eigen::Vector2d> unit_portfolio(const PortfolioTrajectories& portfolio,
                                            const PriceTrajectories& prices) {
    if (portfolio.bank_value.size() != prices.bank.size())
        throw std::invalid_argument("unit_portfolio: grid mismatch");
    std::vector<Eigen::Vector2d> h;
    h.reserve(prices.bank.size());
    for (std::size_t i = 0; i < prices.bank.size(); ++i) {
        if (!(prices.bank[i] > 0.0 && prices.stock[i] > 0.0))
            throw std::invalid_argument("unit_portfolio: prices must be positive");
        h.emplace_back(portfolio.bank_value[i] / prices.bank[i],
                       portfolio.stock_value[i] / prices.stock[i]);
    }
    return h;
}

ConeSpec riemann_cone_integral(const std::vector<ConeSpec>& cones, int to_index) {
    if (to_index < 1 || to_index > static_cast<int>(cones.size()))
        throw std::invalid_argument("riemann_cone_integral: bad index");
    std::vector<Eigen::VectorXd> gens;
    for (int i = 0; i < to_index; ++i)
        for (const auto& g : cones[i].generators()) gens.push_back(g);
    return ConeSpec::make(cones.front().dimension(), gens);
}

std::vector<double> inclusion_check(const std::vector<Eigen::Vector2d>& unit_path,
                                    const std::vector<ConeSpec>& solvency_cones) {
    if (unit_path.size() != solvency_cones.size() + 1 && unit_path.size() != solvency_cones.size())
        throw std::invalid_argument("inclusion_check: grids not aligned");
    std::vector<double> residuals;
    residuals.reserve(unit_path.size());
    residuals.push_back(0.0);
    const Eigen::Vector2d h0 = unit_path.front();

    // Prefix conic hull of -K(Pi_j), j < i, grown incrementally.
    std::vector<Eigen::VectorXd> gens;
    ConeSpec acc(2);
    for (std::size_t i = 1; i < unit_path.size(); ++i) {
        bool grew = false;
        for (const auto& g : solvency_cones[i - 1].generators()) {
            Eigen::VectorXd neg = -g;
            if (!acc.contains(neg, 1e-12)) { gens.push_back(neg); grew = true; }
        }
        if (grew) acc = ConeSpec::make(2, gens);
        Eigen::VectorXd diff = unit_path[i] - h0;
        residuals.push_back(acc.distance(diff));
    }
    return residuals;
}

DriftSpec affine_lift(std::function<Eigen::MatrixXd(double)> matrix, const LCSet& shift,
                      double matrix_norm_bound) {
    if (!(matrix_norm_bound >= 0.0) || !std::isfinite(matrix_norm_bound))
        throw std::invalid_argument("affine_lift: matrix norm bound must be finite");
    double shift_h = hausdorff_distance(shift, LCSet::cone_set(shift.cone()));
    DriftSpec spec;
    spec.beta = 2.0 * (matrix_norm_bound * matrix_norm_bound + shift_h * shift_h + 1.0);
    spec.evaluator = [matrix = std::move(matrix), shift](double t, const BrownianPath&,
                                                         const LCSet& a) {
        return minkowski_sum(linear_image(matrix(t), a), shift);
    };
    return spec;
}

std::vector<double> sdi_selector_check(const std::vector<Eigen::VectorXd>& point_path,
                                       const DriftSpec& drift,
                                       const DiffusionSpec& diffusion,
                                       const TimeGrid& grid, const BrownianPath& path) {
    if (static_cast<int>(point_path.size()) != grid.steps + 1)
        throw std::invalid_argument("sdi_selector_check: path length must match the grid");
    const double dt = grid.dt();
    const int d = static_cast<int>(point_path.front().size());
    std::vector<double> residuals;
    residuals.reserve(point_path.size());
    residuals.push_back(0.0);

    std::optional<LCSet> tube; // prefix Riemann sum of dt * F(t_j, {x_j})
    std::size_t n_members = diffusion.empty() ? 0 : diffusion.alphas.size();
    std::vector<Eigen::VectorXd> ito_points(n_members, Eigen::VectorXd::Zero(d));

    for (int i = 1; i <= grid.steps; ++i) {
        const double t = grid.node(i - 1);
        const LCSet x_prev = LCSet::point(point_path[i - 1]);
        LCSet f = scale(dt, drift.evaluator(t, path, x_prev));
        tube = tube ? minkowski_sum(*tube, f) : f;
        if (n_members > 0) {
            auto mats = diffusion.members(t, path, x_prev);
            const Eigen::VectorXd db = path.increments.row(i - 1).transpose();
            for (std::size_t n = 0; n < n_members; ++n) ito_points[n] += mats[n] * db;
        }
        LCSet total = *tube;
        if (n_members > 0)
            total = minkowski_sum(total,
                                  LCSet(std::vector<Eigen::VectorXd>(ito_points), ConeSpec(d)));
        residuals.push_back(point_distance(point_path[i] - point_path.front(), total));
    }
    return residuals;
}

} // namespace lcsde
