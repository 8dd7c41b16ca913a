#include "lcsde/geometry.hpp"

#include "lcsde/qp.hpp"

#include <algorithm>
#include <cmath>

namespace lcsde {

namespace {

double rounded(double x) {
    return std::round(x / kCanonicalRound) * kCanonicalRound;
}

Eigen::MatrixXd zero_column(int d) {
    return Eigen::MatrixXd::Zero(d, 1);
}

Eigen::MatrixXd columns(const std::vector<Eigen::VectorXd>& vs, int d) {
    Eigen::MatrixXd m(d, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
    return m;
}

// Distance from v to cone(gens) without a ConeSpec (used during
// canonicalization, before the cone exists).
double raw_cone_distance(const Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& gens) {
    if (gens.empty()) return v.norm();
    return distance_to_set(v, zero_column(static_cast<int>(v.size())),
                           columns(gens, static_cast<int>(v.size())));
}

} // namespace

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double x = rounded(a(i)), y = rounded(b(i));
        if (x < y) return true;
        if (x > y) return false;
    }
    return false;
}

// ---------------------------------------------------------------------------
// ConeSpec

ConeSpec::ConeSpec(int dimension) : dim_(dimension) {
    if (dimension < 1) throw GeometryError("cone: dimension must be positive");
}

ConeSpec ConeSpec::make(int dimension, const std::vector<Eigen::VectorXd>& raw_generators) {
    ConeSpec c(dimension);
    std::vector<Eigen::VectorXd> gens;
    gens.reserve(raw_generators.size());
    for (const auto& v : raw_generators) {
        if (v.size() != dimension) throw GeometryError("cone: generator dimension mismatch");
        double n = v.norm();
        if (n < 1e-12) throw GeometryError("cone: zero vector among generators");
        gens.push_back(v / n);
    }
    std::sort(gens.begin(), gens.end(), lex_less);
    gens.erase(std::unique(gens.begin(), gens.end(),
                           [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                               return (a - b).norm() <= 1e-10;
                           }),
               gens.end());

    // Minimality: drop any generator that is a conic combination of the
    // others (distance-to-cone = 0 test).
    bool changed = true;
    while (changed && gens.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            std::vector<Eigen::VectorXd> others;
            others.reserve(gens.size() - 1);
            for (std::size_t j = 0; j < gens.size(); ++j)
                if (j != i) others.push_back(gens[j]);
            if (raw_cone_distance(gens[i], others) <= kMembershipTol) {
                gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }

    c.gens_ = std::move(gens);
    c.finalize();
    return c;
}

void ConeSpec::finalize() {
    independent_ = false;
    if (gens_.empty()) return;
    Eigen::MatrixXd G = generator_matrix();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
    if (qr.rank() == G.cols()) {
        independent_ = true;
        solver_ = (G.transpose() * G).ldlt().solve(G.transpose()); // g x d
    }
}

Eigen::MatrixXd ConeSpec::generator_matrix() const {
    Eigen::MatrixXd m(dim_, static_cast<Eigen::Index>(gens_.size()));
    for (std::size_t i = 0; i < gens_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = gens_[i];
    return m;
}

double ConeSpec::distance(const Eigen::VectorXd& v) const {
    if (gens_.empty()) return v.norm();
    return distance_to_set(v, zero_column(dim_), generator_matrix());
}

bool ConeSpec::contains(const Eigen::VectorXd& v, double tol) const {
    double n = v.norm();
    if (n <= tol) return true;
    if (gens_.empty()) return false;
    if (independent_) {
        Eigen::VectorXd y = solver_ * v;
        if (y.minCoeff() < -1e-9 * std::max(1.0, n)) return false;
        double resid = (generator_matrix() * y - v).norm();
        if (resid > tol * std::max(1.0, n)) return false;
        // Near-boundary coefficients get the exact test below.
        if (y.minCoeff() >= 0.0) return true;
    }
    return distance(v) <= tol;
}

bool ConeSpec::in_polar(const Eigen::VectorXd& u, double tol) const {
    for (const auto& g : gens_)
        if (u.dot(g) > tol) return false;
    return true;
}

bool ConeSpec::spans_space() const {
    if (static_cast<int>(gens_.size()) <= dim_) return false;
    for (int i = 0; i < dim_; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim_);
        e(i) = 1.0;
        if (!contains(e) || !contains(-e)) return false;
    }
    return true;
}

bool ConeSpec::operator==(const ConeSpec& other) const {
    if (dim_ != other.dim_ || gens_.size() != other.gens_.size()) return false;
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if ((gens_[i] - other.gens_[i]).norm() > 1e-9) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Pruning

std::vector<Eigen::VectorXd> prune_vertices(std::vector<Eigen::VectorXd> pts,
                                            const ConeSpec& cone) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                              return (a - b).norm() <= 1e-10;
                          }),
              pts.end());
    if (pts.size() <= 1) return pts;

    // Pairwise domination: v goes if v = w + c for another kept w, c in C.
    if (!cone.is_trivial()) {
        std::vector<bool> dead(pts.size(), false);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (dead[i]) continue;
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (i == j || dead[j]) continue;
                if (cone.contains(pts[i] - pts[j])) {
                    // Mutual domination (cone contains a line): keep the
                    // lexicographically smaller representative.
                    if (j > i && cone.contains(pts[j] - pts[i])) continue;
                    dead[i] = true;
                    break;
                }
            }
        }
        std::vector<Eigen::VectorXd> kept;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (!dead[i]) kept.push_back(std::move(pts[i]));
        pts = std::move(kept);
    }

    // Convex domination: v goes if it lies in conv(rest) + C.
    const int d = cone.dimension();
    Eigen::MatrixXd G = cone.is_trivial() ? Eigen::MatrixXd(d, 0) : cone.generator_matrix();
    std::size_t i = 0;
    while (i < pts.size() && pts.size() > 1) {
        Eigen::MatrixXd W(d, static_cast<Eigen::Index>(pts.size() - 1));
        Eigen::Index col = 0;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i) W.col(col++) = pts[j];
        if (distance_to_set(pts[i], W, G) <= kMembershipTol)
            pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return pts;
}

// ---------------------------------------------------------------------------
// LCSet

LCSet::LCSet(std::vector<Eigen::VectorXd> vertices, ConeSpec cone)
    : cone_(std::move(cone)) {
    if (vertices.empty())
        throw GeometryError("set: empty vertex set (the empty set is not in L_C)");
    for (const auto& v : vertices)
        if (v.size() != cone_.dimension())
            throw GeometryError("set: vertex dimension mismatch");
    if (cone_.spans_space())
        throw GeometryError("set: generating cone equals the whole space");
    verts_ = prune_vertices(std::move(vertices), cone_);
}

LCSet LCSet::point(const Eigen::VectorXd& v) {
    return LCSet({v}, ConeSpec(static_cast<int>(v.size())));
}

LCSet LCSet::cone_set(const ConeSpec& cone) {
    return LCSet({Eigen::VectorXd::Zero(cone.dimension())}, cone);
}

Eigen::MatrixXd LCSet::vertex_matrix() const {
    Eigen::MatrixXd m(cone_.dimension(), static_cast<Eigen::Index>(verts_.size()));
    for (std::size_t i = 0; i < verts_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = verts_[i];
    return m;
}

bool LCSet::operator==(const LCSet& other) const {
    if (!(cone_ == other.cone_) || verts_.size() != other.verts_.size()) return false;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        if ((verts_[i] - other.verts_[i]).norm() > kMetricTol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

const ConeSpec& result_cone(const LCSet& a, const LCSet& b, const char* op) {
    if (a.cone() == b.cone()) return a.cone();
    if (a.cone().is_trivial()) return b.cone();
    if (b.cone().is_trivial()) return a.cone();
    throw ConeMismatchError(std::string(op) +
                            ": incompatible generating cones; Hausdorff distance would be infinite");
}

} // namespace

LCSet minkowski_sum(const LCSet& a, const LCSet& b) {
    const ConeSpec& cone = result_cone(a, b, "minkowski_sum");
    std::vector<Eigen::VectorXd> sums;
    sums.reserve(a.vertices().size() * b.vertices().size());
    for (const auto& va : a.vertices())
        for (const auto& vb : b.vertices()) sums.push_back(va + vb);
    return LCSet(std::move(sums), cone);
}

LCSet scale(double alpha, const LCSet& a) {
    if (!(alpha > 0.0))
        throw GeometryError("scale: alpha must be positive (alpha=0 leaves L_C, alpha<0 flips the cone)");
    std::vector<Eigen::VectorXd> verts;
    verts.reserve(a.vertices().size());
    for (const auto& v : a.vertices()) verts.push_back(alpha * v);
    return LCSet(std::move(verts), a.cone());
}

LCSet linear_image(const Eigen::MatrixXd& m, const LCSet& a) {
    if (m.cols() != a.dimension()) throw GeometryError("linear_image: matrix dimension mismatch");
    std::vector<Eigen::VectorXd> verts;
    verts.reserve(a.vertices().size());
    for (const auto& v : a.vertices()) verts.push_back(m * v);
    std::vector<Eigen::VectorXd> gens;
    for (const auto& g : a.cone().generators()) {
        Eigen::VectorXd img = m * g;
        if (img.norm() > 1e-12) gens.push_back(std::move(img));
    }
    return LCSet(std::move(verts), ConeSpec::make(static_cast<int>(m.rows()), gens));
}

std::optional<double> support_function(const LCSet& a, const Eigen::VectorXd& u) {
    if (!a.cone().in_polar(u)) return std::nullopt;
    double best = a.vertices().front().dot(u);
    for (const auto& v : a.vertices()) best = std::max(best, v.dot(u));
    return best;
}

double point_distance(const Eigen::VectorXd& x, const LCSet& a) {
    for (const auto& v : a.vertices())
        if (a.cone().contains(x - v)) return 0.0;
    Eigen::MatrixXd G = a.cone().is_trivial() ? Eigen::MatrixXd(a.dimension(), 0)
                                              : a.cone().generator_matrix();
    return distance_to_set(x, a.vertex_matrix(), G);
}

HausdorffResult hausdorff(const LCSet& a, const LCSet& b) {
    if (!(a.cone() == b.cone()))
        throw ConeMismatchError("hausdorff: distinct generating cones give infinite distance");
    HausdorffResult r;
    // sup_{x in A} d(x,B) is attained at a vertex of the compact
    // component: d(.,B) is convex and decreases along C.
    for (const auto& v : a.vertices()) r.forward = std::max(r.forward, point_distance(v, b));
    for (const auto& v : b.vertices()) r.backward = std::max(r.backward, point_distance(v, a));
    r.h = std::max(r.forward, r.backward);
    return r;
}

LCSet convex_join(const std::vector<LCSet>& sets) {
    if (sets.empty()) throw GeometryError("convex_join: no sets");
    const ConeSpec& cone = sets.front().cone();
    std::vector<Eigen::VectorXd> verts;
    for (const auto& s : sets) {
        if (!(s.cone() == cone))
            throw ConeMismatchError("convex_join: all sets must share one generating cone");
        verts.insert(verts.end(), s.vertices().begin(), s.vertices().end());
    }
    return LCSet(std::move(verts), cone);
}

const ConeSpec& recession_cone(const LCSet& a) { return a.cone(); }

std::pair<LCSet, double> reduce_vertices(const LCSet& a, std::size_t cap) {
    if (cap < 1) return {a, 0.0};
    std::vector<Eigen::VectorXd> pts = a.vertices();
    const int d = a.dimension();
    Eigen::MatrixXd G = a.cone().is_trivial() ? Eigen::MatrixXd(d, 0)
                                              : a.cone().generator_matrix();
    double perturbation = 0.0;

    double span = 1.0;
    for (const auto& p : pts) span = std::max(span, p.lpNorm<Eigen::Infinity>());
    const double coarse = 1e-6 * span;

    // Vertex clusters tighter than the working precision seed barely-extreme
    // points in later Minkowski sums, and those compound across time steps.
    // Since capping is lossy anyway, collapse such clusters up front.
    std::vector<Eigen::VectorXd> reps;
    reps.reserve(pts.size());
    for (const auto& p : pts) {
        bool absorbed = false;
        for (const auto& q : reps) {
            double gap = (p - q).norm();
            if (gap <= coarse) {
                perturbation += gap;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) reps.push_back(p);
    }
    pts = std::move(reps);

    // Same precision argument for vertices sitting essentially on the hull of
    // the others: dropping them perturbs the set by less than the cap will.
    for (std::size_t i = 0; i < pts.size() && pts.size() > 1;) {
        Eigen::MatrixXd W(d, static_cast<Eigen::Index>(pts.size() - 1));
        Eigen::Index col = 0;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i) W.col(col++) = pts[j];
        double dist = distance_to_set(pts[i], W, G);
        if (dist <= coarse) {
            perturbation += dist;
            pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }

    while (pts.size() > cap) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Eigen::MatrixXd W(d, static_cast<Eigen::Index>(pts.size() - 1));
            Eigen::Index col = 0;
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (j != i) W.col(col++) = pts[j];
            double dist = distance_to_set(pts[i], W, G);
            if (dist < best) { best = dist; best_i = i; }
        }
        perturbation += best;
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(best_i));
    }
    return {LCSet(std::move(pts), a.cone()), perturbation};
}

} // namespace lcsde
