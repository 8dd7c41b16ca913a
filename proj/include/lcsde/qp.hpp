#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace lcsde {

class ConeSpec;

// min_{lambda in simplex, mu >= 0} | target - W*lambda - G*mu |^2
//
// W holds polytope vertices as columns (k >= 1), G cone generators as
// columns (may be empty). This is the distance-to-(polytope + cone)
// problem underneath every metric computation.
struct SimplexConeQP {
    Eigen::VectorXd target;
    Eigen::MatrixXd polytope_vertices; // d x k
    Eigen::MatrixXd cone_generators;   // d x g, unit columns
    double tolerance = 1e-13;
    int max_iters = 20000;
};

struct QPSolution {
    Eigen::VectorXd lambda;
    Eigen::VectorXd mu;
    double distance = 0.0;
    int iterations = 0;
    bool converged = false;
};

class QPError : public std::runtime_error {
public:
    QPError(const std::string& msg, QPSolution best)
        : std::runtime_error(msg), best_iterate(std::move(best)) {}
    QPSolution best_iterate;
};

// Deterministic active-set solve; KKT residual <= tolerance on success.
QPSolution solve(const SimplexConeQP& problem);

// Convenience wrapper: Euclidean distance from x to conv(W) + cone(G).
double distance_to_set(const Eigen::VectorXd& x,
                       const Eigen::MatrixXd& W,
                       const Eigen::MatrixXd& G,
                       double tolerance = 1e-13);

// Deterministic unit vectors in the polar cone C°, by rejection sampling
// from the sphere against the half-space description of C°.
std::vector<Eigen::VectorXd> sample_polar_directions(const ConeSpec& cone,
                                                     int count,
                                                     std::uint64_t seed);

} // namespace lcsde
