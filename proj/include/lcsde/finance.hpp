#pragma once

#include "lcsde/sde.hpp"

#include <functional>

namespace lcsde {

using RateFn = std::function<double(double)>;

inline RateFn constant_rate(double v) {
    return [v](double) { return v; };
}

// Two-asset market with proportional transaction costs: lambda on
// transfers bank -> stock, mu on stock -> bank.
struct MarketParams {
    double lambda = 0.1;
    double mu = 0.1;
    RateFn r = constant_rate(0.0);
    RateFn b = constant_rate(0.0);
    RateFn sigma = constant_rate(0.0);
    double p = 1.0; // initial stock price
    double x = 0.0; // initial bank holding
    double y = 0.0; // initial stock holding

    void validate() const;
};

struct PriceTrajectories {
    std::vector<double> bank;  // B_{t_i}, B_0 = 1
    std::vector<double> stock; // S_{t_i}, S_0 = p
};

struct BidAskMatrix {
    double pi12 = 0.0; // units of B per share of S, costs included
    double pi21 = 0.0; // shares of S per unit of B, costs included

    BidAskMatrix(double pi12_, double pi21_);
};

struct StrategyRates {
    std::vector<double> theta_l; // per-node transfer rate B -> S, >= 0
    std::vector<double> theta_m; // per-node transfer rate S -> B, >= 0

    void validate(int steps) const;
};

// B by exact exponential of the integrated rate, S by log-Euler (exact
// GBM for constant b, sigma). Requires a 1-dimensional driving path.
PriceTrajectories simulate_price(const MarketParams& params, const BrownianPath& path);

BidAskMatrix bid_ask(const MarketParams& params, double bank, double stock);

// K(Pi) = cone{e1, e2, pi12 e1 - e2, -e1 + pi21 e2}; canonicalization
// reduces this to the two extreme generators.
ConeSpec solvency_cone(const BidAskMatrix& pi);

struct ConstantCone {
    ConeSpec cone;
    bool frictionless_degenerate = false; // lambda = mu = 0 collapses K to a line
};

// K = {((1+lambda)a - (1-mu)b, b - a) : a,b >= 0}.
ConstantCone constant_cone_K(double lambda, double mu);

struct PortfolioTrajectories {
    std::vector<double> bank_value;  // X_{t_i}
    std::vector<double> stock_value; // Y_{t_i}
};

// Euler recursion with dL = theta_l dt, dM = theta_m dt; Y rides the
// same Brownian increments as S.
PortfolioTrajectories simulate_portfolio(const MarketParams& params,
                                         const StrategyRates& strategy,
                                         const PriceTrajectories& prices,
                                         const TimeGrid& grid,
                                         const BrownianPath& path);

// Unit portfolio h_t = (X/B, Y/S).
std::vector<Eigen::Vector2d> unit_portfolio(const PortfolioTrajectories& portfolio,
                                            const PriceTrajectories& prices);

// Riemann integral of a cone-valued step process: cones are
// scale-invariant, so this is the conic hull of the node generators.
ConeSpec riemann_cone_integral(const std::vector<ConeSpec>& cones, int to_index);

// Distance of h_{t_i} - h_0 to the accumulated tube 0 + int_0^t [-K(Pi_s)] ds.
std::vector<double> inclusion_check(const std::vector<Eigen::Vector2d>& unit_path,
                                    const std::vector<ConeSpec>& solvency_cones);

// Affine drift lift F(t,A) = M_t A (+) shift, exact for affine pointwise
// fields; beta derived from the declared matrix norm bound.
DriftSpec affine_lift(std::function<Eigen::MatrixXd(double)> matrix, const LCSet& shift,
                      double matrix_norm_bound);

// Residuals of the stochastic differential inclusion
// x_t - x_0 in int_0^t F(s, x_s) ds (+) int_0^t (G o x) dB.
std::vector<double> sdi_selector_check(const std::vector<Eigen::VectorXd>& point_path,
                                       const DriftSpec& drift,
                                       const DiffusionSpec& diffusion,
                                       const TimeGrid& grid, const BrownianPath& path);

} // namespace lcsde
