#include "atiyah4/relation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace atiyah4 {

namespace {

// Unit-norm scaling with the first significant entry rotated positive real.
// Returns the normalized vector; *scale_out is the factor applied.
Vec4c normalize_coeffs(const Vec4c& raw, Complex* scale_out) {
    const double nrm = raw.norm();
    const double maxabs = raw.cwiseAbs().maxCoeff();
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw DegenerateInputError("normalize_coeffs: zero or non-finite vector");
    int pivot = 0;
    for (int k = 0; k < 4; ++k) {
        if (std::abs(raw(k)) > 1e-12 * maxabs) {
            pivot = k;
            break;
        }
    }
    const Complex phase = raw(pivot) / std::abs(raw(pivot));
    const Complex s = std::conj(phase) / nrm;
    if (scale_out) *scale_out = s;
    return raw * s;
}

Vec4c raw_atiyah_polynomial(int i, const RootSystem& rs) {
    const auto t = rs.triplet(i);
    const auto s = sym_elem(t[0], t[1], t[2]);
    Vec4c raw;
    raw << s[0], -s[1], s[2], -s[3];
    return raw;
}

// Binary forms as coefficient arrays indexed by the power of u.
template <std::size_t M, std::size_t N>
std::array<Complex, M + N - 1> conv(const std::array<Complex, M>& a, const std::array<Complex, N>& b) {
    std::array<Complex, M + N - 1> out{};
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < N; ++j) out[i + j] += a[i] * b[j];
    return out;
}

Complex eval_cubic(const std::array<Complex, 4>& q, Complex u, Complex v) {
    return q[0] * v * v * v + q[1] * v * v * u + q[2] * v * u * u + q[3] * u * u * u;
}

struct Clusters {
    std::array<int, 3> label;  // cluster id per root
    std::array<int, 3> size;   // cluster size per root
    int count;
};

Clusters cluster_roots(const std::array<ProjPoint, 3>& roots, double tol) {
    std::array<int, 3> parent = {0, 1, 2};
    const auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (proj_distance(roots[static_cast<std::size_t>(i)], roots[static_cast<std::size_t>(j)]) < tol)
                parent[static_cast<std::size_t>(find(j))] = find(i);

    Clusters cl{};
    for (int i = 0; i < 3; ++i) cl.label[static_cast<std::size_t>(i)] = find(i);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (cl.label[static_cast<std::size_t>(i)] == cl.label[static_cast<std::size_t>(j)])
                ++cl.size[static_cast<std::size_t>(i)];
    cl.count = 0;
    for (int i = 0; i < 3; ++i)
        if (cl.label[static_cast<std::size_t>(i)] == i) ++cl.count;
    return cl;
}

// Descending lexicographic order of the unit-sphere preimage (z, x, y); the
// standard root sets then meet their normal-form targets in identity order.
// Coordinates are compared on a 1e-9 grid first so coordinate-level noise
// cannot flip the order, with the raw values as the final tiebreak.
std::array<ProjPoint, 3> canonical_root_order(const std::array<ProjPoint, 3>& roots) {
    std::array<ProjPoint, 3> out = roots;
    const auto key = [](const ProjPoint& p) {
        const Vec3 s = inverse_stereographic(p).coords();
        const auto q = [](double v) { return std::round(v * 1e9); };
        return std::array<double, 6>{q(s.z()), q(s.x()), q(s.y()), s.z(), s.x(), s.y()};
    };
    std::sort(out.begin(), out.end(),
              [&](const ProjPoint& a, const ProjPoint& b) { return key(a) > key(b); });
    return out;
}

const std::array<ProjPoint, 6>& reference_points() {
    static const std::array<ProjPoint, 6> refs = {
        ProjPoint::from_affine(0.0),  ProjPoint::from_affine(-1.0), ProjPoint::from_affine(Complex(0, 1)),
        ProjPoint::from_affine(Complex(0, -1)), ProjPoint::from_affine(2.0), ProjPoint::infinity()};
    return refs;
}

const std::array<ProjPoint, 6>& reference_points_c() {
    static const std::array<ProjPoint, 6> refs = {
        ProjPoint::infinity(), ProjPoint::from_affine(1.0), ProjPoint::from_affine(-1.0),
        ProjPoint::from_affine(Complex(0, 1)), ProjPoint::from_affine(Complex(0, -1)),
        ProjPoint::from_affine(2.0)};
    return refs;
}

}  // namespace

std::array<Complex, 4> sym_elem(const ProjPoint& w1, const ProjPoint& w2, const ProjPoint& w3) {
    const Complex u1 = w1.u(), v1 = w1.v();
    const Complex u2 = w2.u(), v2 = w2.v();
    const Complex u3 = w3.u(), v3 = w3.v();
    return {u1 * u2 * u3,
            v1 * u2 * u3 + u1 * v2 * u3 + u1 * u2 * v3,
            v1 * v2 * u3 + v1 * u2 * v3 + u1 * v2 * v3,
            v1 * v2 * v3};
}

Vec4c atiyah_polynomial(int i, const RootSystem& rs) {
    return normalize_coeffs(raw_atiyah_polynomial(i, rs), nullptr);
}

AtiyahMatrix atiyah_matrix(const RootSystem& rs) {
    AtiyahMatrix out;
    for (int j = 0; j < 4; ++j) {
        Complex s;
        out.m.col(j) = normalize_coeffs(raw_atiyah_polynomial(j, rs), &s);
        out.column_scales[static_cast<std::size_t>(j)] = s;
    }
    return out;
}

AtiyahMatrix atiyah_matrix(const Configuration& config, const Tolerances& tol) {
    return atiyah_matrix(root_system(config, tol));
}

double independence_measure(const AtiyahMatrix& m) {
    return std::abs(m.m.determinant());
}

RelationVector make_relation(const Vec4c& raw) {
    return RelationVector{normalize_coeffs(raw, nullptr)};
}

NullvectorResult relation_nullvector(const AtiyahMatrix& m) {
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m.m, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double residual = sv(0) < 1e-300 ? 0.0 : sv(3) / sv(0);
    // ell^T M ~ 0 for ell = conj of the last left-singular column; re-index
    // into the relation's coefficient order.
    const Vec4c ell = svd.matrixU().col(3).conjugate();
    Vec4c raw;
    raw << -ell(3), ell(2), -ell(1), ell(0);
    return {make_relation(raw), residual};
}

Complex evaluate_relation(const RelationVector& c, const ProjPoint& w1, const ProjPoint& w2,
                          const ProjPoint& w3) {
    const auto s = sym_elem(w1, w2, w3);
    return c.c(0) * s[3] + c.c(1) * s[2] + c.c(2) * s[1] + c.c(3) * s[0];
}

ProjPoint complete_triplet(const RelationVector& c, const ProjPoint& w1, const ProjPoint& w2) {
    const Complex vv = w1.v() * w2.v();
    const Complex mixed = w1.v() * w2.u() + w1.u() * w2.v();
    const Complex uu = w1.u() * w2.u();
    const Complex a = c.c(0) * vv + c.c(1) * mixed + c.c(2) * uu;  // coefficient of v3
    const Complex b = c.c(1) * vv + c.c(2) * mixed + c.c(3) * uu;  // coefficient of u3
    const double scale = c.c.cwiseAbs().maxCoeff();
    if (std::max(std::abs(a), std::abs(b)) <= 1e-14 * scale)
        throw DegenerateInputError("complete_triplet: relation indeterminate in the third point");
    return ProjPoint(a, -b);
}

Complex RelationCubic::eval(const ProjPoint& w) const {
    return eval_cubic(coeffs, w.u(), w.v());
}

std::array<ProjPoint, 3> cubic_roots(const std::array<Complex, 4>& q) {
    const double qmax = std::max(std::max(std::abs(q[0]), std::abs(q[1])),
                                 std::max(std::abs(q[2]), std::abs(q[3])));
    if (!(qmax > 0.0)) throw InvalidInputError("cubic_roots: zero cubic");

    // Unitary chart twists (u, v) = A (u', v'); the winner maximizes the
    // twisted leading coefficient g(A e_v), so no root sits near infinity in
    // the solve chart.
    struct Twist {
        Complex alpha, beta, gamma, delta;
    };
    static const std::array<Twist, 6> twists = [] {
        std::array<Twist, 6> t;
        t[0] = {1.0, 0.0, 0.0, 1.0};
        t[1] = {0.0, 1.0, 1.0, 0.0};
        const double angles[4][2] = {{0.7, 0.4}, {1.1, 2.1}, {0.5, -1.3}, {1.3, 0.9}};
        for (int k = 0; k < 4; ++k) {
            const double th = angles[k][0], ph = angles[k][1];
            const Complex e = std::polar(1.0, ph);
            t[static_cast<std::size_t>(k + 2)] = {std::cos(th), -std::sin(th) * e,
                                                  std::sin(th) * std::conj(e), std::cos(th)};
        }
        return t;
    }();

    int best = 0;
    double best_score = -1.0;
    for (int k = 0; k < 6; ++k) {
        const auto& tw = twists[static_cast<std::size_t>(k)];
        const double score = std::abs(eval_cubic(q, tw.beta, tw.delta));
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }
    const auto& tw = twists[static_cast<std::size_t>(best)];

    const std::array<Complex, 2> lu = {tw.beta, tw.alpha};
    const std::array<Complex, 2> lv = {tw.delta, tw.gamma};
    const auto lv2 = conv(lv, lv);
    const auto lu2 = conv(lu, lu);
    std::array<Complex, 4> h{};
    const auto t0 = conv(lv2, lv);
    const auto t1 = conv(lv2, lu);
    const auto t2 = conv(lv, lu2);
    const auto t3 = conv(lu2, lu);
    for (std::size_t k = 0; k < 4; ++k)
        h[k] = q[0] * t0[k] + q[1] * t1[k] + q[2] * t2[k] + q[3] * t3[k];

    Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(0, 2) = -h[3] / h[0];
    companion(1, 2) = -h[2] / h[0];
    companion(2, 2) = -h[1] / h[0];
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(companion, false);

    std::array<ProjPoint, 3> roots;
    for (int k = 0; k < 3; ++k) {
        const Complex t = es.eigenvalues()(k);
        roots[static_cast<std::size_t>(k)] =
            ProjPoint(tw.alpha + tw.beta * t, tw.gamma + tw.delta * t);
    }
    return roots;
}

namespace {

// Eigenvalue solvers smear a double root by ~sqrt(eps) and a triple root by
// ~cbrt(eps), so raw separations cannot witness multiplicities at the default
// clustering tolerance. Exact multiplicities leave first-order traces in the
// coefficients instead: a triple root kills the Hessian covariant, a double
// root is the double root of the Hessian and leaves a tiny refit residual.
// Snapping uses those with a noise ceiling of 1e-13; a root_cluster tolerance
// below 1e-10 asks for more resolution than the doubles carry and disables
// snapping (classification then sees the raw separations).
std::array<Complex, 4> cubic_normalized(const std::array<Complex, 4>& q) {
    Vec4c v;
    for (int k = 0; k < 4; ++k) v(k) = q[static_cast<std::size_t>(k)];
    v = normalize_coeffs(v, nullptr);
    return {v(0), v(1), v(2), v(3)};
}

double cubic_refit_residual(const std::array<Complex, 4>& q, const std::array<ProjPoint, 3>& roots) {
    std::array<Complex, 2> f0 = {roots[0].u(), -roots[0].v()};
    std::array<Complex, 2> f1 = {roots[1].u(), -roots[1].v()};
    std::array<Complex, 2> f2 = {roots[2].u(), -roots[2].v()};
    const auto refit = cubic_normalized(conv(conv(f0, f1), f2));
    const auto base = cubic_normalized(q);
    double r2 = 0.0;
    for (int k = 0; k < 4; ++k) r2 += std::norm(refit[static_cast<std::size_t>(k)] - base[static_cast<std::size_t>(k)]);
    return std::sqrt(r2);
}

void refine_cubic_roots(const std::array<Complex, 4>& q, double root_cluster,
                        std::array<ProjPoint, 3>& roots) {
    constexpr double kSnapMinTol = 1e-10;
    constexpr double kTripleNoise = 1e-13;  // Hessian residual of an exact cube
    constexpr double kDoubleNoise = 3e-11;  // refit residual of an exact double (conditioning tail)
    if (root_cluster < kSnapMinTol) return;
    const double triple_thresh = std::max(0.5 * root_cluster * root_cluster, kTripleNoise);
    const double fit_thresh = std::max(0.5 * root_cluster * root_cluster, kDoubleNoise);

    const double qmax = std::max(std::max(std::abs(q[0]), std::abs(q[1])),
                                 std::max(std::abs(q[2]), std::abs(q[3])));
    const Complex h0 = q[1] * q[1] - 3.0 * q[0] * q[2];
    const Complex h1 = q[1] * q[2] - 9.0 * q[0] * q[3];
    const Complex h2 = q[2] * q[2] - 3.0 * q[1] * q[3];
    const double h_rel = std::max(std::max(std::abs(h0), std::abs(h1)), std::abs(h2)) / (qmax * qmax);

    if (h_rel <= triple_thresh) {  // perfect cube
        const ProjPoint triple = std::abs(q[0]) >= std::abs(q[3]) ? ProjPoint(3.0 * q[0], -q[1])
                                                                  : ProjPoint(q[2], -3.0 * q[3]);
        roots = {triple, triple, triple};
        return;
    }

    // Double-root candidate: the Hessian's double root plus the companion
    // root farthest from it; accepted when the refit reproduces q.
    const ProjPoint rhat =
        std::abs(h0) >= std::abs(h2) ? ProjPoint(2.0 * h0, -h1) : ProjPoint(-h1, 2.0 * h2);
    int far = 0;
    double fd = -1.0;
    for (int k = 0; k < 3; ++k) {
        const double d = proj_distance(roots[static_cast<std::size_t>(k)], rhat);
        if (d > fd) {
            fd = d;
            far = k;
        }
    }
    const std::array<ProjPoint, 3> snapped = {rhat, rhat, roots[static_cast<std::size_t>(far)]};
    if (cubic_refit_residual(q, snapped) <= fit_thresh) roots = snapped;
}

}  // namespace

RelationCubic polarize(const RelationVector& c, const Tolerances& tol) {
    if (!(c.c.norm() > 0.0)) throw InvalidInputError("polarize: zero relation vector");
    RelationCubic g;
    g.coeffs = {c.c(0), 3.0 * c.c(1), 3.0 * c.c(2), c.c(3)};
    g.roots = cubic_roots(g.coeffs);
    refine_cubic_roots(g.coeffs, tol.root_cluster, g.roots);
    g.multiplicity = cluster_roots(g.roots, tol.root_cluster).size;
    return g;
}

const char* to_string(ScenarioTag tag) {
    switch (tag) {
        case ScenarioTag::three_distinct: return "three_distinct";
        case ScenarioTag::double_root: return "double_root";
        case ScenarioTag::triple_root: return "triple_root";
    }
    return "unknown";
}

Scenario classify_scenario(const RelationVector& c, const Tolerances& tol) {
    if (!(c.c.cwiseAbs().maxCoeff() > 0.0))
        throw InvalidInputError("classify_scenario: zero relation vector");
    RelationCubic g = polarize(c, tol);
    const Complex a = g.coeffs[0], b = g.coeffs[1], cc = g.coeffs[2], d = g.coeffs[3];
    const Complex disc = 18.0 * a * b * cc * d - 4.0 * b * b * b * d + b * b * cc * cc -
                         4.0 * a * cc * cc * cc - 27.0 * a * a * d * d;
    const double qmax = std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(cc), std::abs(d)));
    const double rel_disc = std::abs(disc) / (qmax * qmax * qmax * qmax);

    const Clusters cl = cluster_roots(g.roots, tol.root_cluster);

    // The refined cluster count decides. A discriminant above tol.scenario
    // always comes with three separated clusters (snapping engages only when
    // the discriminant is tiny), so this agrees with the discriminant gate at
    // the default tolerances; the relative discriminant is kept in the result.
    ScenarioTag tag;
    if (cl.count == 3)
        tag = ScenarioTag::three_distinct;
    else if (cl.count == 2)
        tag = ScenarioTag::double_root;
    else
        tag = ScenarioTag::triple_root;

    // Reference points fill the leftover correspondence slots; the separation
    // guard keeps the three-point solve non-degenerate.
    const double ref_sep = std::max(10.0 * tol.root_cluster, 1e-6);
    const auto pick_refs = [&](const std::array<ProjPoint, 6>& cands,
                               const std::vector<ProjPoint>& avoid, int need) {
        std::array<ProjPoint, 2> out;
        int found = 0;
        for (const auto& cand : cands) {
            bool ok = true;
            for (const auto& av : avoid)
                if (proj_distance(cand, av) < ref_sep) ok = false;
            if (!ok) continue;
            out[static_cast<std::size_t>(found++)] = cand;
            if (found == need) break;
        }
        if (found < need)
            throw DegenerateInputError("classify_scenario: no usable reference point");
        return out;
    };

    MobiusMap normalizer;
    const double verify = 1e-8;
    if (tag == ScenarioTag::three_distinct) {
        const auto ordered = canonical_root_order(g.roots);
        // The solve loses accuracy as roots approach each other; scale the
        // verification allowance with the observed separations.
        double sep = 1.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                sep = std::min(sep, proj_distance(ordered[static_cast<std::size_t>(i)],
                                                  ordered[static_cast<std::size_t>(j)]));
        const double vt = std::min(1e3, std::max(verify, 1e-14 / std::max(sep * sep, 1e-300)));
        normalizer = mobius_from_three_points(ordered[0], ordered[1], ordered[2],
                                              ProjPoint::infinity(), ProjPoint::from_affine(1.0),
                                              ProjPoint::from_affine(-1.0), vt);
    } else if (tag == ScenarioTag::double_root) {
        ProjPoint dbl, simple;
        for (int k = 0; k < 3; ++k) {
            if (cl.size[static_cast<std::size_t>(k)] == 2 &&
                cl.label[static_cast<std::size_t>(k)] == k)
                dbl = g.roots[static_cast<std::size_t>(k)];
            if (cl.size[static_cast<std::size_t>(k)] == 1)
                simple = g.roots[static_cast<std::size_t>(k)];
        }
        const auto ref = pick_refs(reference_points(), {dbl, simple}, 1);
        normalizer = mobius_from_three_points(dbl, simple, ref[0], ProjPoint::infinity(),
                                              ProjPoint::from_affine(1.0), ProjPoint::from_affine(0.0),
                                              verify);
    } else {
        const ProjPoint triple = g.roots[0];
        const auto ref = pick_refs(reference_points_c(), {triple}, 2);
        normalizer = mobius_from_three_points(triple, ref[0], ref[1], ProjPoint::from_affine(0.0),
                                              ProjPoint::infinity(), ProjPoint::from_affine(1.0),
                                              verify);
    }
    return Scenario{tag, normalizer, g, rel_disc};
}

NormalizedRelation normalize_relation(const RelationVector& c, const Tolerances& tol) {
    Scenario scenario = classify_scenario(c, tol);
    RelationVector standard = transport_relation(c, scenario.normalizer, tol);
    return {std::move(scenario), standard};
}

RelationVector relation_from_roots(const std::array<ProjPoint, 3>& roots) {
    std::array<Complex, 2> f0 = {roots[0].u(), -roots[0].v()};
    std::array<Complex, 2> f1 = {roots[1].u(), -roots[1].v()};
    std::array<Complex, 2> f2 = {roots[2].u(), -roots[2].v()};
    const auto q = conv(conv(f0, f1), f2);
    Vec4c raw;
    raw << q[0], q[1] / 3.0, q[2] / 3.0, q[3];
    return make_relation(raw);
}

RelationVector transport_relation(const RelationVector& c, const MobiusMap& m, const Tolerances& tol) {
    const RelationCubic g = polarize(c, tol);
    std::array<ProjPoint, 3> moved;
    for (int k = 0; k < 3; ++k)
        moved[static_cast<std::size_t>(k)] = apply_mobius(m, g.roots[static_cast<std::size_t>(k)]);
    return relation_from_roots(moved);
}

}  // namespace atiyah4
