#pragma once

#include "lcsde/geometry.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace lcsde {

// Uniform partition of [0,T].
struct TimeGrid {
    double horizon = 1.0;
    int steps = 1;

    TimeGrid() = default;
    TimeGrid(double T, int M) : horizon(T), steps(M) {
        if (!(T > 0.0) || M < 1) throw std::invalid_argument("grid: need T > 0 and M >= 1");
    }
    double dt() const { return horizon / steps; }
    double node(int i) const { return horizon * i / steps; }
};

// m-dimensional Gaussian increment path; increment (i,j) is a pure
// function of (seed, path_index, i, j), so paths are reproducible in
// isolation under any scheduling.
struct BrownianPath {
    TimeGrid grid;
    int dimension = 1;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    Eigen::MatrixXd increments; // steps x m

    // B_{t_i} = sum of increments < i.
    Eigen::VectorXd value_at(int node) const {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(dimension);
        for (int i = 0; i < node; ++i) b += increments.row(i).transpose();
        return b;
    }
};

BrownianPath sample_brownian(const TimeGrid& grid, int m, std::uint64_t seed,
                             std::uint64_t path_index = 0);

struct SetPath {
    TimeGrid grid;
    std::vector<LCSet> values; // steps + 1 entries sharing one cone
};

// Left-endpoint Riemann-Minkowski sum of dt * F_{t_i} over [i0, i1).
LCSet riemann_set_integral(const std::vector<LCSet>& values, int from_index,
                           int to_index, double dt);

// Pathwise truncation of the Aumann-Ito integral: the N selector
// integrals sum_{i<i1} g^n(t_i) dB_i hulled as a compact polytope.
// family_values[i] holds the N d-by-m matrices at node i.
LCSet ito_family_integral(const std::vector<std::vector<Eigen::MatrixXd>>& family_values,
                          const BrownianPath& path, int to_index);

using SetField = std::function<LCSet(double t, const BrownianPath& context, const LCSet& a)>;

std::vector<LCSet> evaluate_field_on_path(const SetField& field, const SetPath& path_values,
                                          const BrownianPath& context);

struct MeanH2 {
    double mean = 0.0;
    double standard_error = 0.0;
};

// Monte-Carlo E[h^2(X_node, Y_node)] over paired path families,
// accumulated in fixed path-index order.
MeanH2 mc_mean_h2(const std::vector<std::pair<SetPath, SetPath>>& paths, int node);
MeanH2 mc_mean_h2(const std::vector<SetPath>& xs, const std::vector<SetPath>& ys, int node);

} // namespace lcsde
