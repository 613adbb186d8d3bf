#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "atiyah4/errors.hpp"

namespace atiyah4 {

using Cplx = std::complex<double>;

// Convex hull as a CCW vertex list; degenerates to a segment (2 vertices) or
// a point (1) are first-class values, not errors.
struct ConvexPolygon {
    std::vector<Cplx> vertices;
};

ConvexPolygon convex_hull(std::vector<Cplx> points);

// Distance from z to the hull, negative when z is strictly inside.
double signed_distance(const ConvexPolygon& hull, Cplx z);
inline bool hull_contains(const ConvexPolygon& hull, Cplx z, double slack) {
    return signed_distance(hull, z) <= slack;
}

// Closed-hull disjointness by separating axes (edge normals, edge directions
// and the centroid direction, covering degenerate hulls); disjoint only when
// some axis shows a gap larger than margin.
bool hulls_disjoint(const ConvexPolygon& a, const ConvexPolygon& b, double margin);

// Line {z : <z, (cos theta, sin theta)> = offset}.
struct Line {
    double theta;
    double offset;
};

// A line meeting every hull: swept over 4096 normal directions with two local
// bisection refinements. nullopt means none-within-resolution, never a proof
// of absence.
std::optional<Line> line_stabs_all(const std::vector<ConvexPolygon>& hulls, double margin);

struct Disk {
    Cplx center;
    double radius;
};

// Welzl-style minimal enclosing disk (deterministic, no shuffle).
Disk smallest_enclosing_disk(const std::vector<Cplx>& points);

// Closed circular domain of the Riemann sphere restricted to the plane
// picture. Infinity belongs to disk complements; half-planes are accepted as
// limits of disks and do not contain infinity here (closed in C).
struct CircularDomain {
    enum class Kind { disk, half_plane, disk_complement, whole_plane, point };
    Kind kind = Kind::whole_plane;
    Cplx center{};      // disk / disk_complement / point
    double radius = 0;  // disk / disk_complement
    Cplx normal{};      // half_plane: {z : <z, normal> >= offset}, |normal| = 1
    double offset = 0;

    bool contains(Cplx z, double slack) const;
    bool contains_infinity() const { return kind == Kind::disk_complement || kind == Kind::whole_plane; }
};

struct DomainWitness {
    std::array<int, 3> triplet_index;
    std::array<CircularDomain, 3> domains;
};

// Three of the four triplets separated by pairwise disjoint circular domains
// (minimal disks first, then half-planes from hull-separation data).
std::optional<DomainWitness> three_disjoint_domains(const std::array<std::vector<Cplx>, 4>& triplets,
                                                    double margin);

struct GaussLucasResult {
    bool ok;
    double margin;  // signed distance of the farthest derivative root to the hull
};

// Derivative roots of prod (t - root) against the convex hull of the roots.
GaussLucasResult gauss_lucas_check(const std::vector<Cplx>& roots, double tol_geo);

// An n-th root of prod z_i lying in the domain; exists whenever all z_i do
// (domain restricted to closed disks and half-planes).
std::optional<Cplx> geometric_mean_witness(const std::vector<Cplx>& zs, const CircularDomain& domain,
                                           double slack);

// Polynomial helpers; coefficients ascending (c[0] + c[1] t + ...).
std::vector<Cplx> poly_from_roots(const std::vector<Cplx>& roots);
std::vector<Cplx> poly_derivative(const std::vector<Cplx>& coeffs);
std::vector<Cplx> poly_roots(const std::vector<Cplx>& coeffs);

}  // namespace atiyah4
