#include "lcsde/integrals.hpp"

#include "lcsde/rng.hpp"

#include <cmath>

namespace lcsde {

BrownianPath sample_brownian(const TimeGrid& grid, int m, std::uint64_t seed,
                             std::uint64_t path_index) {
    if (m < 1) throw std::invalid_argument("sample_brownian: m >= 1");
    BrownianPath p;
    p.grid = grid;
    p.dimension = m;
    p.seed = seed;
    p.path_index = path_index;
    p.increments.resize(grid.steps, m);
    const double sd = std::sqrt(grid.dt());
    for (int i = 0; i < grid.steps; ++i)
        for (int j = 0; j < m; ++j)
            p.increments(i, j) =
                sd * rng::normal(seed, path_index,
                                 static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
    return p;
}

LCSet riemann_set_integral(const std::vector<LCSet>& values, int from_index,
                           int to_index, double dt) {
    if (from_index >= to_index)
        throw std::invalid_argument("riemann_set_integral: need from_index < to_index");
    if (to_index > static_cast<int>(values.size()))
        throw std::invalid_argument("riemann_set_integral: index past end of values");
    LCSet sum = scale(dt, values[from_index]);
    for (int i = from_index + 1; i < to_index; ++i)
        sum = minkowski_sum(sum, scale(dt, values[i]));
    return sum;
}

LCSet ito_family_integral(const std::vector<std::vector<Eigen::MatrixXd>>& family_values,
                          const BrownianPath& path, int to_index) {
    if (family_values.empty() || family_values.front().empty())
        throw std::invalid_argument("ito_family_integral: need N >= 1 family members");
    const std::size_t n = family_values.front().size();
    const int d = static_cast<int>(family_values.front().front().rows());
    std::vector<Eigen::VectorXd> points(n, Eigen::VectorXd::Zero(d));
    for (int i = 0; i < to_index; ++i) {
        const Eigen::VectorXd db = path.increments.row(i).transpose();
        for (std::size_t k = 0; k < n; ++k) points[k] += family_values[i][k] * db;
    }
    return LCSet(std::move(points), ConeSpec(d));
}

std::vector<LCSet> evaluate_field_on_path(const SetField& field, const SetPath& path_values,
                                          const BrownianPath& context) {
    std::vector<LCSet> out;
    out.reserve(path_values.values.size());
    const ConeSpec* cone = nullptr;
    for (std::size_t i = 0; i < path_values.values.size(); ++i) {
        LCSet v = field(path_values.grid.node(static_cast<int>(i)), context, path_values.values[i]);
        if (cone == nullptr)
            cone = &path_values.values[i].cone();
        out.push_back(std::move(v));
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i].cone() == out[0].cone()))
            throw ConeMismatchError("evaluate_field_on_path: field output cone varies along the path");
    return out;
}

MeanH2 mc_mean_h2(const std::vector<std::pair<SetPath, SetPath>>& paths, int node) {
    if (paths.empty()) throw std::invalid_argument("mc_mean_h2: no path pairs");
    double sum = 0.0, sumsq = 0.0;
    for (const auto& [x, y] : paths) {
        double h = hausdorff_distance(x.values.at(node), y.values.at(node));
        sum += h * h;
        sumsq += h * h * h * h;
    }
    const double n = static_cast<double>(paths.size());
    MeanH2 r;
    r.mean = sum / n;
    double var = std::max(0.0, sumsq / n - r.mean * r.mean);
    r.standard_error = paths.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    return r;
}

MeanH2 mc_mean_h2(const std::vector<SetPath>& xs, const std::vector<SetPath>& ys, int node) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("mc_mean_h2: mismatched path families");
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t p = 0; p < xs.size(); ++p) {
        double h = hausdorff_distance(xs[p].values.at(node), ys[p].values.at(node));
        sum += h * h;
        sumsq += h * h * h * h;
    }
    const double n = static_cast<double>(xs.size());
    MeanH2 r;
    r.mean = sum / n;
    double var = std::max(0.0, sumsq / n - r.mean * r.mean);
    r.standard_error = xs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    return r;
}

} // namespace lcsde
