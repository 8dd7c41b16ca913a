#include "lcsde/qp.hpp"

#include "lcsde/geometry.hpp"
#include "lcsde/rng.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace lcsde {

namespace {

QPSolution extract(const Eigen::VectorXd& z, int k, int g,
                   const Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                   int iters, bool converged) {
    QPSolution sol;
    sol.lambda = z.head(k);
    sol.mu = z.tail(g);
    sol.distance = (x - A * z).norm();
    sol.iterations = iters;
    sol.converged = converged;
    return sol;
}

} // namespace

QPSolution solve(const SimplexConeQP& problem) {
    const Eigen::MatrixXd& W = problem.polytope_vertices;
    const Eigen::MatrixXd& G = problem.cone_generators;
    const int k = static_cast<int>(W.cols());
    const int g = static_cast<int>(G.cols());
    const int d = static_cast<int>(problem.target.size());
    if (k < 1) throw std::invalid_argument("qp: polytope needs at least one vertex");
    if (W.rows() != d || (g > 0 && G.rows() != d))
        throw std::invalid_argument("qp: dimension mismatch");

    const int n = k + g;
    Eigen::MatrixXd A(d, n);
    A.leftCols(k) = W;
    if (g > 0) A.rightCols(g) = G;
    const Eigen::VectorXd& x = problem.target;

    const double scale = std::max(1.0, x.norm() + W.colwise().norm().maxCoeff());
    const double kkt_tol = problem.tolerance * scale;

    // Start at the nearest single vertex.
    int start = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        double dist = (x - W.col(i)).norm();
        if (dist < best - 1e-15) { best = dist; start = i; }
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    z(start) = 1.0;
    std::vector<bool> free_var(n, false);
    free_var[start] = true;

    // Degenerate pivots can cycle: a noise-level violation adds a variable,
    // the rank-deficient solve sends it negative, and a zero-length ratio
    // step drops it again. Ban such variables until the objective moves.
    std::vector<bool> banned(n, false);
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_z = z;
    // Longer cycles exist too (nonzero pivot steps orbiting at the noise
    // floor of the subproblem solve); after a full sweep of iterations
    // with no objective progress the best feasible iterate is optimal to
    // working precision, so return it.
    int stalled = 0;
    const int stall_limit = 2 * n + 8;

    int iters = 0;
    while (iters < problem.max_iters) {
        ++iters;
        std::vector<int> F;
        for (int i = 0; i < n; ++i)
            if (free_var[i]) F.push_back(static_cast<int>(i));
        const int f = static_cast<int>(F.size());

        // Equality-constrained least squares on the free set. The simplex
        // constraint is eliminated by writing the first free simplex weight
        // as one minus the rest, so the subproblem is a plain least squares
        // and never squares the (often terrible) conditioning of AF.
        int pivot = -1;
        for (int j = 0; j < f && pivot < 0; ++j)
            if (F[j] < k) pivot = j;
        Eigen::MatrixXd R(d, f - 1);
        Eigen::VectorXd b = x - A.col(F[pivot]);
        {
            Eigen::Index col = 0;
            for (int j = 0; j < f; ++j) {
                if (j == pivot) continue;
                R.col(col) = F[j] < k ? (A.col(F[j]) - A.col(F[pivot])).eval()
                                      : A.col(F[j]).eval();
                ++col;
            }
        }
        Eigen::VectorXd w = f > 1
            ? R.completeOrthogonalDecomposition().solve(b).eval()
            : Eigen::VectorXd(0);
        Eigen::VectorXd y(f);
        {
            double simplex_rest = 0.0;
            Eigen::Index col = 0;
            for (int j = 0; j < f; ++j) {
                if (j == pivot) continue;
                y(j) = w(col++);
                if (F[j] < k) simplex_rest += y(j);
            }
            y(pivot) = 1.0 - simplex_rest;
        }

        double ymin = y.minCoeff();
        if (ymin >= -1e-12) {
            Eigen::VectorXd znew = Eigen::VectorXd::Zero(n);
            for (int j = 0; j < f; ++j) znew(F[j]) = std::max(0.0, y(j));
            z = znew;

            // KKT check over the bound-active variables. The equality
            // multiplier is read off the free simplex gradients directly:
            // the nu returned by the saddle solve inherits the (often bad)
            // conditioning of AF and is too noisy to threshold against.
            Eigen::VectorXd grad = 2.0 * A.transpose() * (A * z - x);
            double obj = (x - A * z).norm();
            if (obj < best_obj - 1e-15 * scale) {
                best_obj = obj;
                best_z = z;
                stalled = 0;
                std::fill(banned.begin(), banned.end(), false);
            } else if (++stalled > stall_limit) {
                return extract(best_z, k, g, x, A, iters, true);
            }
            if (obj < best_obj) { best_obj = obj; best_z = z; }
            double free_grad_min = std::numeric_limits<double>::infinity();
            for (int i = 0; i < k; ++i)
                if (free_var[i]) free_grad_min = std::min(free_grad_min, grad(i));
            int worst = -1;
            double worst_viol = kkt_tol;
            for (int i = 0; i < n; ++i) {
                if (free_var[i] || banned[i]) continue;
                double viol = i < k ? free_grad_min - grad(i) : -grad(i);
                if (viol > worst_viol) { worst_viol = viol; worst = i; }
            }
            if (worst < 0)
                return extract(z, k, g, x, A, iters, true);
            free_var[worst] = true;
            continue;
        }

        // Ratio test: step toward y until the first free variable hits 0.
        double alpha = 1.0;
        int blocking = -1;
        for (int j = 0; j < f; ++j) {
            if (y(j) < -1e-12) {
                double a = z(F[j]) / (z(F[j]) - y(j));
                if (a < alpha - 1e-15) { alpha = a; blocking = F[j]; }
            }
        }
        for (int j = 0; j < f; ++j)
            z(F[j]) = std::max(0.0, z(F[j]) + alpha * (y(j) - z(F[j])));
        if (blocking >= 0) {
            z(blocking) = 0.0;
            free_var[blocking] = false;
            if (alpha < 1e-12) banned[blocking] = true;
        }
    }

    throw QPError("qp: max_iters exceeded without KKT closure",
                  extract(z, k, g, x, A, iters, false));
}

double distance_to_set(const Eigen::VectorXd& x, const Eigen::MatrixXd& W,
                       const Eigen::MatrixXd& G, double tolerance) {
    SimplexConeQP p;
    p.target = x;
    p.polytope_vertices = W;
    p.cone_generators = G;
    p.tolerance = tolerance;
    return solve(p).distance;
}

std::vector<Eigen::VectorXd> sample_polar_directions(const ConeSpec& cone,
                                                     int count,
                                                     std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_polar_directions: count >= 1");
    if (cone.spans_space())
        throw GeometryError("sample_polar_directions: polar cone is {0}");

    const int d = cone.dimension();
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    std::uint64_t attempt = 0;
    const std::uint64_t max_attempts = 200000ULL * static_cast<std::uint64_t>(count);
    while (static_cast<int>(out.size()) < count) {
        if (attempt >= max_attempts)
            throw GeometryError("sample_polar_directions: polar cone too thin for rejection sampling");
        Eigen::VectorXd u(d);
        for (int j = 0; j < d; ++j)
            u(j) = rng::normal(seed, 0x706f6c6172ULL, attempt, static_cast<std::uint64_t>(j));
        ++attempt;
        double norm = u.norm();
        if (norm < 1e-12) continue;
        u /= norm;
        if (cone.in_polar(u, 0.0)) out.push_back(std::move(u));
    }
    return out;
}

} // namespace lcsde
