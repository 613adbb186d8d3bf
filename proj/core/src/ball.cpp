#include "atiyah4/ball.hpp"

#include <cmath>

namespace atiyah4 {

namespace {

// Orthonormal basis completion: two unit vectors spanning the plane
// orthogonal to unit vector n.
void orthonormal_complement(const Vec3& n, Vec3& b1, Vec3& b2) {
    const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    b1 = (seed - seed.dot(n) * n).normalized();
    b2 = n.cross(b1);
}

}  // namespace

BallPoint::BallPoint(const Vec3& c) : c_(c) {
    if (!c.allFinite()) throw InvalidInputError("BallPoint: non-finite coordinates");
    if (c.norm() > 1.0 - 1e-12) throw InvalidInputError("BallPoint: norm must stay below 1");
}

IdealPoint::IdealPoint(const Vec3& c) {
    if (!c.allFinite()) throw InvalidInputError("IdealPoint: non-finite coordinates");
    const double n = c.norm();
    if (std::abs(n - 1.0) > 1e-6) throw InvalidInputError("IdealPoint: norm must be 1 within 1e-6");
    c_ = c / n;
}

Vec3 mobius_translate(const Vec3& a, const Vec3& x) {
    const double a2 = a.squaredNorm();
    const double x2 = x.squaredNorm();
    const Vec3 xa = x - a;
    const double denom = 1.0 - 2.0 * a.dot(x) + a2 * x2;
    if (denom < 1e-300) throw DegenerateInputError("mobius_translate: vanishing denominator");
    return ((1.0 - a2) * xa - xa.squaredNorm() * a) / denom;
}

BallPoint mobius_translate(const BallPoint& a, const BallPoint& x) {
    Vec3 y = mobius_translate(a.coords(), x.coords());
    // phi_a maps the open ball to itself; clamp rounding spill at the rim.
    const double n = y.norm();
    if (n > 1.0 - 1e-12) y *= (1.0 - 1e-12) / n;
    return BallPoint(y);
}

IdealPoint mobius_translate(const BallPoint& a, const IdealPoint& x) {
    return IdealPoint(mobius_translate(a.coords(), x.coords()));
}

BallIsometry::BallIsometry(const Eigen::Matrix3d& rotation, const BallPoint& translation_center)
    : rot_(rotation), center_(translation_center) {
    const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).norm();
    if (ortho > 1e-12) throw InvalidInputError("BallIsometry: rotation is not orthogonal");
    if (rotation.determinant() < 0.0) throw InvalidInputError("BallIsometry: rotation must have det +1");
}

BallPoint BallIsometry::operator()(const BallPoint& x) const {
    return mobius_translate(center_, BallPoint(rot_ * x.coords()));
}

IdealPoint BallIsometry::operator()(const IdealPoint& x) const {
    return mobius_translate(center_, IdealPoint(rot_ * x.coords()));
}

Configuration Configuration::make(const std::array<BallPoint, 4>& points, const Tolerances& tol) {
    for (const auto& p : points) {
        if (p.norm() > tol.r_max)
            throw InvalidInputError("Configuration: point norm exceeds r_max");
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (hyperbolic_distance(points[static_cast<std::size_t>(i)],
                                    points[static_cast<std::size_t>(j)]) < tol.min_sep)
                throw InvalidInputError("Configuration: points closer than min_sep");
        }
    }
    return Configuration(points);
}

double hyperbolic_distance(const BallPoint& x, const BallPoint& y) {
    const double num = (x.coords() - y.coords()).squaredNorm();
    const double den = (1.0 - x.coords().squaredNorm()) * (1.0 - y.coords().squaredNorm());
    // arcosh(1 + 2u^2) = 2 asinh(u)
    return 2.0 * std::asinh(std::sqrt(num / den));
}

IdealPoint ideal_endpoint(const BallPoint& xi, const BallPoint& xj, const Tolerances& tol) {
    if (hyperbolic_distance(xi, xj) < tol.min_sep)
        throw InvalidInputError("ideal_endpoint: points must be distinct");
    const Vec3 y = mobius_translate(xi.coords(), xj.coords());
    const double n = y.norm();
    if (n < 1e-300) throw InvalidInputError("ideal_endpoint: coincident points");
    return IdealPoint(mobius_translate(-xi.coords(), Vec3(y / n)));
}

IdealPoint endpoint_oracle(const BallPoint& xi, const BallPoint& xj, const Tolerances& tol) {
    if (hyperbolic_distance(xi, xj) < tol.min_sep)
        throw InvalidInputError("endpoint_oracle: points must be distinct");
    const Vec3& a = xi.coords();
    const Vec3& b = xj.coords();
    const Vec3 d = b - a;

    // Straight-line branch: geodesic is a diameter when x_i, x_j, 0 are
    // collinear (includes either point at the origin).
    if (a.cross(b).norm() <= 1e-12 * std::max(1.0, a.norm() * b.norm()))
        return IdealPoint(Vec3(d / d.norm()));

    // In-plane orthonormal frame; solving in it keeps the conditioning of the
    // circle-center solve linear in 1/sin(angle between a and b).
    const Vec3 e1 = a / a.norm();
    Vec3 e2 = b - b.dot(e1) * e1;
    e2 /= e2.norm();

    // <x, c> = (|x|^2 + 1)/2 for x in {a, b}, c = c1 e1 + c2 e2.
    const double ra = (a.squaredNorm() + 1.0) / 2.0;
    const double rb = (b.squaredNorm() + 1.0) / 2.0;
    const double c1 = ra / a.norm();
    const double qb = b.dot(e2);
    const double c2 = (rb - b.dot(e1) * c1) / qb;

    const double c_norm2 = c1 * c1 + c2 * c2;
    if (c_norm2 <= 1.0) throw DegenerateInputError("endpoint_oracle: no orthogonal circle");
    const double c_norm = std::sqrt(c_norm2);

    // Unit-sphere intersections: p = (1/|c|) c_hat +- sqrt(1 - 1/|c|^2) c_perp.
    const double u1 = c1 / c_norm, u2 = c2 / c_norm;  // c_hat (in-plane)
    const double h = 1.0 / c_norm;
    const double s = std::sqrt(std::max(0.0, 1.0 - h * h));
    const Vec2 cand[2] = {Vec2(h * u1 - s * u2, h * u2 + s * u1),
                          Vec2(h * u1 + s * u2, h * u2 - s * u1)};

    // Angles around the circle center, measured from the far point (the arc
    // through the ball never crosses it), increase monotonically along the
    // in-ball arc.
    const double r = std::sqrt(c_norm2 - 1.0);
    const auto arc_angle = [&](const Vec2& p) {
        const Vec2 rel = p - Vec2(c1, c2);
        double ang = std::atan2(rel.y(), rel.x()) - std::atan2(u2, u1);
        while (ang <= 0.0) ang += 2.0 * M_PI;
        while (ang > 2.0 * M_PI) ang -= 2.0 * M_PI;
        return ang;
    };
    (void)r;
    const double psi_i = arc_angle(Vec2(a.dot(e1), a.dot(e2)));
    const double psi_j = arc_angle(Vec2(b.dot(e1), b.dot(e2)));
    const double psi_0 = arc_angle(cand[0]);
    const double psi_1 = arc_angle(cand[1]);

    Vec2 pick;
    if (psi_j > psi_i)
        pick = (psi_0 > psi_1) ? cand[0] : cand[1];
    else
        pick = (psi_0 < psi_1) ? cand[0] : cand[1];

    return IdealPoint(Vec3(pick.x() * e1 + pick.y() * e2));
}

CoplanarityResult coplanarity_test(const Configuration& config, const Tolerances& tol) {
    Eigen::Matrix3d m;
    for (int k = 0; k < 3; ++k)
        m.row(k) = mobius_translate(config.point(0).coords(), config.point(k + 1).coords());
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
    const double smax = svd.singularValues()(0);
    const double residual = smax < 1e-300 ? 0.0 : svd.singularValues()(2) / smax;
    return {residual < tol.coplanar, residual};
}

std::array<Vec2, 4> coplanar_chart(const Configuration& config, const Tolerances& tol) {
    const auto cop = coplanarity_test(config, tol);
    if (!cop.is_coplanar)
        throw InvalidInputError("coplanar_chart: configuration is not coplanar");

    Eigen::Matrix3d m;
    for (int k = 0; k < 3; ++k)
        m.row(k) = mobius_translate(config.point(0).coords(), config.point(k + 1).coords());
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullV);
    const Vec3 n = svd.matrixV().col(2);
    Vec3 b1, b2;
    orthonormal_complement(n, b1, b2);

    std::array<Vec2, 4> chart;
    chart[0] = Vec2::Zero();
    for (int k = 0; k < 3; ++k) {
        const Vec3 y = m.row(k);
        chart[static_cast<std::size_t>(k + 1)] = Vec2(b1.dot(y), b2.dot(y));
    }
    return chart;
}

std::optional<int> hull_membership(const Configuration& config, const Tolerances& tol) {
    const auto chart = coplanar_chart(config, tol);  // throws if not coplanar

    std::array<Vec2, 4> klein;
    for (int k = 0; k < 4; ++k)
        klein[static_cast<std::size_t>(k)] = poincare_to_klein(chart[static_cast<std::size_t>(k)]);

    const auto cross2 = [](const Vec2& p, const Vec2& q) { return p.x() * q.y() - p.y() * q.x(); };

    for (int i = 0; i < 4; ++i) {
        std::array<Vec2, 3> tri;
        int n = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) tri[static_cast<std::size_t>(n++)] = klein[static_cast<std::size_t>(j)];
        const Vec2 p = klein[static_cast<std::size_t>(i)];

        const double orient = cross2(tri[1] - tri[0], tri[2] - tri[0]);
        const double sign = orient < 0.0 ? -1.0 : 1.0;
        const double s0 = sign * cross2(tri[1] - tri[0], p - tri[0]);
        const double s1 = sign * cross2(tri[2] - tri[1], p - tri[1]);
        const double s2 = sign * cross2(tri[0] - tri[2], p - tri[2]);
        // Closed condition: boundary points count as inside.
        if (s0 >= -tol.hull && s1 >= -tol.hull && s2 >= -tol.hull) return i;
    }
    return std::nullopt;
}

}  // namespace atiyah4
