#pragma once

#include "lcsde/geometry.hpp"
#include "lcsde/rng.hpp"

#include <cstdint>

namespace lcsde {

// Deterministic random instances for spot checks and property suites.

inline Eigen::VectorXd random_vector(int d, double box, std::uint64_t seed,
                                     std::uint64_t stream, std::uint64_t idx) {
    Eigen::VectorXd v(d);
    for (int j = 0; j < d; ++j)
        v(j) = box * (2.0 * rng::uniform01(seed, stream, idx, static_cast<std::uint64_t>(j)) - 1.0);
    return v;
}

inline LCSet random_lcset(const ConeSpec& cone, int max_vertices, double box,
                          std::uint64_t seed, std::uint64_t idx) {
    int d = cone.dimension();
    int k = 1 + static_cast<int>(rng::uniform01(seed, 0x76657274ULL, idx, 0) * max_vertices);
    if (k > max_vertices) k = max_vertices;
    std::vector<Eigen::VectorXd> verts;
    verts.reserve(k);
    for (int i = 0; i < k; ++i)
        verts.push_back(random_vector(d, box, seed, 0x76657274ULL + 1 + i, idx));
    return LCSet(std::move(verts), cone);
}

// Random nontrivial generating cone in dimension d (1..d generators,
// never the whole space by construction).
inline ConeSpec random_cone(int d, std::uint64_t seed, std::uint64_t idx) {
    int g = 1 + static_cast<int>(rng::uniform01(seed, 0x636f6e65ULL, idx, 0) * d);
    if (g > d) g = d;
    std::vector<Eigen::VectorXd> gens;
    for (int i = 0; i < g; ++i) {
        Eigen::VectorXd v(d);
        for (int j = 0; j < d; ++j) {
            // Tilted into the positive orthant so the cone stays pointed.
            double u = rng::uniform01(seed, 0x636f6e65ULL + 1 + i, idx, static_cast<std::uint64_t>(j));
            v(j) = 0.15 + u;
        }
        gens.push_back(v);
    }
    return ConeSpec::make(d, gens);
}

} // namespace lcsde
