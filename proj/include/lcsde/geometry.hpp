#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lcsde {

// Tolerance policy: representation/membership 1e-10, metric assertions
// 1e-9, sampling-limited oracle cross-checks 1e-4.
inline constexpr double kMembershipTol = 1e-10;
inline constexpr double kMetricTol = 1e-9;
inline constexpr double kCanonicalRound = 1e-12;

class GeometryError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ConeMismatchError : public GeometryError {
    using GeometryError::GeometryError;
};

// Finitely generated closed convex cone. Generators are unit-norm,
// minimal (none is a conic combination of the others) and
// lexicographically ordered, so equal cones have equal representations.
class ConeSpec {
public:
    // Trivial cone {0}.
    explicit ConeSpec(int dimension);

    static ConeSpec make(int dimension, const std::vector<Eigen::VectorXd>& raw_generators);

    int dimension() const { return dim_; }
    bool is_trivial() const { return gens_.empty(); }
    const std::vector<Eigen::VectorXd>& generators() const { return gens_; }
    Eigen::MatrixXd generator_matrix() const; // d x g

    // Euclidean distance from v to the cone.
    double distance(const Eigen::VectorXd& v) const;
    bool contains(const Eigen::VectorXd& v, double tol = kMembershipTol) const;

    // u lies in the polar cone C° = {u : <u,c> <= 0 for all c in C}.
    // The generators double as the half-space normals of C°.
    bool in_polar(const Eigen::VectorXd& u, double tol = 1e-12) const;

    // C = R^d, i.e. polar cone reduced to {0}. Such a cone is not a
    // valid generating cone for L_C sets.
    bool spans_space() const;

    bool operator==(const ConeSpec& other) const;
    bool operator!=(const ConeSpec& other) const { return !(*this == other); }

private:
    int dim_;
    std::vector<Eigen::VectorXd> gens_;
    // Cached for fast membership when the generators are linearly
    // independent: y = solve(G, v), v in C iff residual ~ 0 and y >= 0.
    bool independent_ = false;
    Eigen::MatrixXd solver_; // pseudoinverse of G when independent_
    void finalize();
};

// Element of L_C as a Motzkin decomposition conv(V) + C. Vertices are
// pruned (no vertex lies in conv(V \ {v}) + C) and canonically ordered.
// Immutable after construction.
class LCSet {
public:
    LCSet(std::vector<Eigen::VectorXd> vertices, ConeSpec cone);

    // Compact singleton {v} with the trivial cone.
    static LCSet point(const Eigen::VectorXd& v);
    // The cone itself, {0} + C.
    static LCSet cone_set(const ConeSpec& cone);

    int dimension() const { return cone_.dimension(); }
    const std::vector<Eigen::VectorXd>& vertices() const { return verts_; }
    const ConeSpec& cone() const { return cone_; }
    Eigen::MatrixXd vertex_matrix() const; // d x k

    bool operator==(const LCSet& other) const;

private:
    ConeSpec cone_;
    std::vector<Eigen::VectorXd> verts_;
};

struct HausdorffResult {
    double forward = 0.0;  // h̄(A,B)
    double backward = 0.0; // h̄(B,A)
    double h = 0.0;
};

LCSet minkowski_sum(const LCSet& a, const LCSet& b);
LCSet scale(double alpha, const LCSet& a);
LCSet linear_image(const Eigen::MatrixXd& m, const LCSet& a);

// Support function sup_{x in A} <x,u>; nullopt encodes +infinity
// (u outside the polar cone).
std::optional<double> support_function(const LCSet& a, const Eigen::VectorXd& u);

double point_distance(const Eigen::VectorXd& x, const LCSet& a);

HausdorffResult hausdorff(const LCSet& a, const LCSet& b);
inline double hausdorff_distance(const LCSet& a, const LCSet& b) { return hausdorff(a, b).h; }

// Closed convex hull of the union; all sets must share one cone.
LCSet convex_join(const std::vector<LCSet>& sets);

const ConeSpec& recession_cone(const LCSet& a);

// Canonical vertex pruning used by LCSet; exposed for the prune
// idempotence property and the vertex-cap reduction.
std::vector<Eigen::VectorXd> prune_vertices(std::vector<Eigen::VectorXd> pts,
                                            const ConeSpec& cone);

// Greedy vertex-count reduction: removes vertices whose removal perturbs
// the set least (in Hausdorff) until at most cap remain. Returns the
// reduced set and the accumulated perturbation bound.
std::pair<LCSet, double> reduce_vertices(const LCSet& a, std::size_t cap);

// Lexicographic comparison after rounding to kCanonicalRound.
bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

} // namespace lcsde
