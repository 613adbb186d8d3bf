#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>

#include "atiyah4/errors.hpp"

namespace atiyah4 {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

// Tolerance knobs shared across the library. Every verdict-producing routine
// takes these explicitly so the CLI can override them and echo the effective
// values into its output.
struct Tolerances {
    double min_sep = 1e-6;            // minimum pairwise hyperbolic distance in a configuration
    double r_max = 0.999;             // maximum Euclidean norm of a configuration point
    double coplanar = 1e-9;           // singular-value ratio below which a configuration is coplanar
    double hull = 1e-12;              // signed-area slack for point-in-triangle tests (Klein chart)
    double proj = 1e-10;              // projective equality threshold on CP^1
    double scenario = 1e-8;           // relative discriminant threshold for three distinct roots
    double root_cluster = 1e-8;       // projective distance merging roots of the relation cubic
    double geo = 1e-10;               // planar geometry margin (hull separation, domain slack)
    double on_circle = 1e-8;          // face-circle membership margin
    double singular_residual = 1e-10; // a matrix counts as singular only below this residual ...
    double singular_measure = 1e-12;  // ... and below this |det|
};

// Point of hyperbolic 3-space in Poincare open-ball coordinates, |x| < 1.
class BallPoint {
  public:
    BallPoint() : c_(Vec3::Zero()) {}
    explicit BallPoint(const Vec3& c);
    BallPoint(double x, double y, double z) : BallPoint(Vec3(x, y, z)) {}

    const Vec3& coords() const { return c_; }
    double norm() const { return c_.norm(); }

  private:
    Vec3 c_;
};

// Point of the sphere at infinity. Renormalized to unit length on
// construction; inputs more than 1e-6 away from the sphere are rejected.
class IdealPoint {
  public:
    IdealPoint() : c_(Vec3::UnitZ()) {}
    explicit IdealPoint(const Vec3& c);
    IdealPoint(double x, double y, double z) : IdealPoint(Vec3(x, y, z)) {}

    const Vec3& coords() const { return c_; }

  private:
    Vec3 c_;
};

// phi_a: the Mobius ball translation
//   phi_a(x) = ((1 - |a|^2)(x - a) - |x - a|^2 a) / (1 - 2<a,x> + |a|^2 |x|^2).
// Maps ball to ball and sphere to sphere; phi_a(a) = 0; phi_{-a} is the
// inverse. The raw overload does not validate |x|.
Vec3 mobius_translate(const Vec3& a, const Vec3& x);
BallPoint mobius_translate(const BallPoint& a, const BallPoint& x);
IdealPoint mobius_translate(const BallPoint& a, const IdealPoint& x);

// Orientation-preserving isometry of H^3: x -> phi_a(R x) with R a rotation
// and a = translation_center. Extends continuously to ideal points.
class BallIsometry {
  public:
    BallIsometry() : rot_(Eigen::Matrix3d::Identity()), center_() {}
    BallIsometry(const Eigen::Matrix3d& rotation, const BallPoint& translation_center);

    const Eigen::Matrix3d& rotation() const { return rot_; }
    const BallPoint& translation_center() const { return center_; }

    BallPoint operator()(const BallPoint& x) const;
    IdealPoint operator()(const IdealPoint& x) const;

  private:
    Eigen::Matrix3d rot_;
    BallPoint center_;
};

// Four distinct points of H^3. `make` enforces pairwise hyperbolic distance
// >= tol.min_sep and Euclidean norms <= tol.r_max.
class Configuration {
  public:
    static Configuration make(const std::array<BallPoint, 4>& points, const Tolerances& tol = {});

    const BallPoint& point(int i) const { return pts_[static_cast<std::size_t>(i)]; }
    const std::array<BallPoint, 4>& points() const { return pts_; }

  private:
    explicit Configuration(const std::array<BallPoint, 4>& p) : pts_(p) {}
    std::array<BallPoint, 4> pts_;
};

// d(x,y) = arcosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))), computed via asinh
// for small-distance stability.
double hyperbolic_distance(const BallPoint& x, const BallPoint& y);

// Limit point on the sphere at infinity of the hyperbolic ray based at x_i
// and passing through x_j: translate x_i to the origin, radially normalize
// the image of x_j, translate back.
IdealPoint ideal_endpoint(const BallPoint& xi, const BallPoint& xj, const Tolerances& tol = {});

// Independent endpoint construction: fit the Euclidean circle through x_i and
// x_j orthogonal to the unit sphere (center c with <x,c> = (|x|^2+1)/2 in the
// geodesic's plane), intersect it with the sphere, and pick the intersection
// on the x_j side of x_i along the in-ball arc. Straight-line branch when
// x_i, x_j and the origin are collinear.
IdealPoint endpoint_oracle(const BallPoint& xi, const BallPoint& xj, const Tolerances& tol = {});

struct CoplanarityResult {
    bool is_coplanar;
    double residual;  // smallest/largest singular value after translating x1 to the origin
};
CoplanarityResult coplanarity_test(const Configuration& config, const Tolerances& tol = {});

// Poincare disk <-> Klein disk (2-D charts of a hyperbolic plane). Hyperbolic
// convex hulls are Euclidean in the Klein chart.
inline Vec2 poincare_to_klein(const Vec2& p) { return 2.0 * p / (1.0 + p.squaredNorm()); }
inline Vec2 klein_to_poincare(const Vec2& k) {
    return k / (1.0 + std::sqrt(std::max(0.0, 1.0 - k.squaredNorm())));
}

// 2-D chart of the common hyperbolic plane of a coplanar configuration:
// translate x1 to the origin, rotate the plane onto z = 0, drop z.
// Precondition: coplanarity_test passed.
std::array<Vec2, 4> coplanar_chart(const Configuration& config, const Tolerances& tol = {});

// Index of a point lying in the hyperbolic convex hull of the other three,
// or nullopt. Evaluated in the Klein chart; points on a triangle boundary
// count as inside (signed-area slack tol.hull). Precondition: coplanar.
std::optional<int> hull_membership(const Configuration& config, const Tolerances& tol = {});

}  // namespace atiyah4
