#pragma once

#include <array>

#include "atiyah4/explorer.hpp"
#include "atiyah4/relation.hpp"
#include "atiyah4/rng.hpp"

namespace atiyah4::testing {

inline Configuration make_config(const std::array<std::array<double, 3>, 4>& coords,
                                 const Tolerances& tol = {}) {
    std::array<BallPoint, 4> pts;
    for (int k = 0; k < 4; ++k)
        pts[static_cast<std::size_t>(k)] =
            BallPoint(coords[static_cast<std::size_t>(k)][0], coords[static_cast<std::size_t>(k)][1],
                      coords[static_cast<std::size_t>(k)][2]);
    return Configuration::make(pts, tol);
}

// Regular tetrahedron at the given circumradius.
inline Configuration tetrahedron(double radius = 0.5) {
    const double s = radius / std::sqrt(3.0);
    return make_config({{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}});
}

// Four points on the z-axis diameter; endpoints map to t = 0 and t = infinity.
inline Configuration collinear_z(double s1 = -0.6, double s2 = -0.2, double s3 = 0.2,
                                 double s4 = 0.6) {
    return make_config({{{0, 0, s1}, {0, 0, s2}, {0, 0, s3}, {0, 0, s4}}});
}

inline BallPoint random_ball_point(Rng& rng, double r_max = 0.9) {
    while (true) {
        const Vec3 v(rng.uniform(-r_max, r_max), rng.uniform(-r_max, r_max),
                     rng.uniform(-r_max, r_max));
        if (v.norm() <= r_max) return BallPoint(v);
    }
}

inline Configuration random_non_coplanar(Rng& rng, double r_max = 0.85, double min_sep = 0.05) {
    const SampleSpec spec{rng.next_u64(), 1, SampleCase::non_coplanar, r_max, min_sep};
    return sample(spec, 0);
}

inline ProjPoint random_proj_point(Rng& rng) {
    while (true) {
        const Complex u(rng.normal(), rng.normal());
        const Complex v(rng.normal(), rng.normal());
        if (std::abs(u) + std::abs(v) > 1e-3) return ProjPoint(u, v);
    }
}

inline RelationVector random_relation(Rng& rng) {
    Vec4c raw;
    for (int k = 0; k < 4; ++k) raw(k) = Complex(rng.normal(), rng.normal());
    return make_relation(raw);
}

// Root system whose four triplets all satisfy the relation c: two random
// roots per triplet, the third solved by complete_triplet.
inline RootSystem plant_system(const RelationVector& c, Rng& rng) {
    RootSystem rs;
    for (int i = 0; i < 4; ++i) {
        for (int tries = 0;; ++tries) {
            const ProjPoint w1 = random_proj_point(rng);
            const ProjPoint w2 = random_proj_point(rng);
            ProjPoint w3;
            try {
                w3 = complete_triplet(c, w1, w2);
            } catch (const DegenerateInputError&) {
                if (tries > 100) throw;
                continue;
            }
            const std::array<ProjPoint, 3> trip = {w1, w2, w3};
            int n = 0;
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                rs.set(i, j, trip[static_cast<std::size_t>(n)],
                       inverse_stereographic(trip[static_cast<std::size_t>(n)]));
                ++n;
            }
            break;
        }
    }
    return rs;
}

// Standard relation vectors of the three scenarios.
inline RelationVector standard_a() {
    Vec4c raw;
    raw << Complex(0), Complex(1.0 / 3.0), Complex(0), Complex(-1);
    return make_relation(raw);
}
inline RelationVector standard_b() {
    Vec4c raw;
    raw << Complex(0), Complex(0), Complex(1.0 / 3.0), Complex(-1);
    return make_relation(raw);
}
inline RelationVector standard_c() {
    Vec4c raw;
    raw << Complex(1), Complex(0), Complex(0), Complex(0);
    return make_relation(raw);
}

inline MobiusMap random_mobius(Rng& rng) {
    while (true) {
        const Complex a(rng.normal(), rng.normal()), b(rng.normal(), rng.normal()),
            c(rng.normal(), rng.normal()), d(rng.normal(), rng.normal());
        try {
            return MobiusMap(a, b, c, d);
        } catch (const Error&) {
        }
    }
}

}  // namespace atiyah4::testing
