#include "atiyah4/sphere.hpp"

#include <cmath>

namespace atiyah4 {

namespace {

Complex cross2(const ProjPoint& p, const ProjPoint& q) {
    return p.u() * q.v() - q.u() * p.v();
}

}  // namespace

ProjPoint::ProjPoint(Complex u, Complex v) : u_(u), v_(v) {
    const double m = std::max(std::abs(u_), std::abs(v_));
    if (!(m > 0.0) || !std::isfinite(m))
        throw InvalidInputError("ProjPoint: (u, v) must be a finite nonzero pair");
    u_ /= m;
    v_ /= m;
}

double proj_distance(const ProjPoint& p, const ProjPoint& q) {
    const double mp = std::max(std::abs(p.u()), std::abs(p.v()));
    const double mq = std::max(std::abs(q.u()), std::abs(q.v()));
    return std::abs(cross2(p, q)) / (mp * mq);
}

bool proj_equal(const ProjPoint& p, const ProjPoint& q, double tol) {
    return proj_distance(p, q) < tol;
}

MobiusMap::MobiusMap(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
    const double scale = std::max(std::max(std::abs(a), std::abs(b)),
                                  std::max(std::abs(c), std::abs(d)));
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw InvalidInputError("MobiusMap: entries must be finite and not all zero");
    const Complex det = a_ * d_ - b_ * c_;
    if (std::abs(det) < 1e-12 * scale * scale)
        throw DegenerateInputError("MobiusMap: determinant too small");
    const Complex s = std::sqrt(det);
    a_ /= s;
    b_ /= s;
    c_ /= s;
    d_ /= s;
}

MobiusMap operator*(const MobiusMap& m1, const MobiusMap& m2) {
    return MobiusMap(m1.a() * m2.a() + m1.b() * m2.c(), m1.a() * m2.b() + m1.b() * m2.d(),
                     m1.c() * m2.a() + m1.d() * m2.c(), m1.c() * m2.b() + m1.d() * m2.d());
}

bool mobius_equal(const MobiusMap& m1, const MobiusMap& m2, double tol) {
    const auto dist = [&](double sign) {
        return std::abs(m1.a() - sign * m2.a()) + std::abs(m1.b() - sign * m2.b()) +
               std::abs(m1.c() - sign * m2.c()) + std::abs(m1.d() - sign * m2.d());
    };
    return std::min(dist(1.0), dist(-1.0)) < tol;
}

ProjPoint apply_mobius(const MobiusMap& m, const ProjPoint& p) {
    // Homogeneous action matching t -> (a t + b)/(c t + d).
    return ProjPoint(m.d() * p.u() + m.c() * p.v(), m.b() * p.u() + m.a() * p.v());
}

ProjPoint stereographic(const IdealPoint& p) {
    const double x = p.coords().x(), y = p.coords().y(), z = p.coords().z();
    // (1-z, x+iy) ~ (x-iy, 1+z); pick the branch away from its singular pole.
    if (z <= 0.0) return ProjPoint(Complex(1.0 - z, 0.0), Complex(x, y));
    return ProjPoint(Complex(x, -y), Complex(1.0 + z, 0.0));
}

IdealPoint inverse_stereographic(const ProjPoint& p) {
    const double nu = std::norm(p.u());
    const double nv = std::norm(p.v());
    const Complex w = p.v() * std::conj(p.u());
    const double denom = nu + nv;
    return IdealPoint(Vec3(2.0 * w.real() / denom, 2.0 * w.imag() / denom, (nv - nu) / denom));
}

MobiusMap mobius_from_three_points(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3,
                                   const ProjPoint& q1, const ProjPoint& q2, const ProjPoint& q3,
                                   double verify_tol) {
    // Rows annihilate h3 and h1 respectively; the scales balance N h2 ~ (1,1).
    const auto standardize = [](const ProjPoint& h1, const ProjPoint& h2, const ProjPoint& h3) {
        const Complex lam = cross2(h2, h1);
        const Complex mu = cross2(h2, h3);
        if (std::abs(lam) < 1e-12 || std::abs(mu) < 1e-12)
            throw DegenerateInputError("mobius_from_three_points: coincident points");
        Eigen::Matrix2cd n;
        n << lam * h3.v(), -lam * h3.u(), mu * h1.v(), -mu * h1.u();
        return n;
    };
    const Eigen::Matrix2cd ns = standardize(p1, p2, p3);
    const Eigen::Matrix2cd nt = standardize(q1, q2, q3);
    const Eigen::Matrix2cd n = nt.inverse() * ns;

    // Our homogeneous action uses N = [[d, c], [b, a]].
    const MobiusMap m(n(1, 1), n(1, 0), n(0, 1), n(0, 0));

    const ProjPoint srcs[3] = {p1, p2, p3};
    const ProjPoint tgts[3] = {q1, q2, q3};
    for (int k = 0; k < 3; ++k) {
        if (proj_distance(apply_mobius(m, srcs[k]), tgts[k]) > verify_tol)
            throw ConsistencyError("mobius_from_three_points: verification failed");
    }
    return m;
}

MobiusMap boundary_action(const BallIsometry& g) {
    const std::array<IdealPoint, 4> primary = {IdealPoint(1, 0, 0), IdealPoint(0, 1, 0),
                                               IdealPoint(0, 0, 1),
                                               IdealPoint(Vec3(1, 1, 1).normalized())};
    const std::array<IdealPoint, 4> fallback = {IdealPoint(-1, 0, 0), IdealPoint(0, 0, -1),
                                                IdealPoint(0, -1, 0),
                                                IdealPoint(Vec3(-1, 1, 1).normalized())};

    for (const auto& refs : {primary, fallback}) {
        MobiusMap m;
        try {
            m = mobius_from_three_points(stereographic(refs[0]), stereographic(refs[1]),
                                         stereographic(refs[2]), stereographic(g(refs[0])),
                                         stereographic(g(refs[1])), stereographic(g(refs[2])));
        } catch (const Error&) {
            continue;
        }
        if (proj_distance(apply_mobius(m, stereographic(refs[3])), stereographic(g(refs[3]))) < 1e-9)
            return m;
    }
    throw ConsistencyError("boundary_action: transported map failed verification");
}

std::size_t RootSystem::idx(int i, int j) {
    if (i < 0 || i > 3 || j < 0 || j > 3 || i == j)
        throw InvalidInputError("RootSystem: index out of range or on the diagonal");
    return static_cast<std::size_t>(4 * i + j);
}

std::array<ProjPoint, 3> RootSystem::triplet(int i) const {
    std::array<ProjPoint, 3> t;
    int n = 0;
    for (int j = 0; j < 4; ++j)
        if (j != i) t[static_cast<std::size_t>(n++)] = root(i, j);
    return t;
}

RootSystem root_system(const Configuration& config, const Tolerances& tol) {
    RootSystem rs;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            const IdealPoint e = ideal_endpoint(config.point(i), config.point(j), tol);
            rs.set(i, j, stereographic(e), e);
        }
    }
    return rs;
}

RootSystem transform(const RootSystem& rs, const MobiusMap& m) {
    RootSystem out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            const ProjPoint p = apply_mobius(m, rs.root(i, j));
            out.set(i, j, p, inverse_stereographic(p));
        }
    }
    return out;
}

}  // namespace atiyah4
