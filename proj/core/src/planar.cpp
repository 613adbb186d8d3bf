#include "atiyah4/planar.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace atiyah4 {

namespace {

double cross(Cplx o, Cplx a, Cplx b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

double dot(Cplx z, Cplx n) { return z.real() * n.real() + z.imag() * n.imag(); }

double point_segment_distance(Cplx z, Cplx a, Cplx b) {
    const Cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 < 1e-300) return std::abs(z - a);
    const double s = std::clamp(dot(z - a, ab) / len2, 0.0, 1.0);
    return std::abs(z - (a + s * ab));
}

struct Interval {
    double lo, hi;
};

Interval project(const ConvexPolygon& poly, Cplx axis) {
    Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Cplx& v : poly.vertices) {
        const double p = dot(v, axis);
        iv.lo = std::min(iv.lo, p);
        iv.hi = std::max(iv.hi, p);
    }
    return iv;
}

Cplx centroid(const ConvexPolygon& poly) {
    Cplx c = 0;
    for (const Cplx& v : poly.vertices) c += v;
    return c / static_cast<double>(poly.vertices.size());
}

bool disk_contains_all(const Disk& d, const std::vector<Cplx>& pts, double eps) {
    for (const Cplx& p : pts)
        if (std::abs(p - d.center) > d.radius + eps) return false;
    return true;
}

std::optional<Disk> circumdisk(Cplx a, Cplx b, Cplx c) {
    const double det = 2.0 * cross(a, b, c);
    if (std::abs(det) < 1e-14 * (std::abs(b - a) * std::abs(c - a) + 1e-300)) return std::nullopt;
    const double a2 = std::norm(a), b2 = std::norm(b), c2 = std::norm(c);
    const double ux = (a2 * (b.imag() - c.imag()) + b2 * (c.imag() - a.imag()) +
                       c2 * (a.imag() - b.imag())) / det;
    const double uy = (a2 * (c.real() - b.real()) + b2 * (a.real() - c.real()) +
                       c2 * (b.real() - a.real())) / det;
    const Cplx center(ux, uy);
    return Disk{center, std::abs(a - center)};
}

bool domains_disjoint(const CircularDomain& x, const CircularDomain& y, double margin) {
    using K = CircularDomain::Kind;
    if (x.kind == K::disk && y.kind == K::disk)
        return std::abs(x.center - y.center) > x.radius + y.radius + margin;
    if (x.kind == K::disk && y.kind == K::half_plane)
        return dot(x.center, y.normal) + x.radius < y.offset - margin;
    if (x.kind == K::half_plane && y.kind == K::disk) return domains_disjoint(y, x, margin);
    if (x.kind == K::half_plane && y.kind == K::half_plane) {
        // Two closed half-planes are disjoint only when antiparallel with a gap.
        if (std::abs(x.normal + y.normal) > 1e-9) return false;
        return x.offset + y.offset > margin;
    }
    return false;
}

bool domain_contains_all(const CircularDomain& d, const std::vector<Cplx>& pts, double slack) {
    for (const Cplx& p : pts)
        if (!d.contains(p, slack)) return false;
    return true;
}

}  // namespace

ConvexPolygon convex_hull(std::vector<Cplx> points) {
    std::sort(points.begin(), points.end(), [](Cplx a, Cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points.size();
    if (n <= 2) return ConvexPolygon{std::move(points)};

    std::vector<Cplx> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(h[k - 2], h[k - 1], points[i]) <= 0.0) --k;
        h[k++] = points[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
        while (k >= t && cross(h[k - 2], h[k - 1], points[i]) <= 0.0) --k;
        h[k++] = points[i];
    }
    h.resize(k - 1);
    if (h.size() < 3) {  // all collinear: keep the two extremes
        ConvexPolygon out;
        out.vertices = {points.front(), points.back()};
        return out;
    }
    return ConvexPolygon{std::move(h)};
}

double signed_distance(const ConvexPolygon& hull, Cplx z) {
    const auto& v = hull.vertices;
    if (v.empty()) return std::numeric_limits<double>::infinity();
    if (v.size() == 1) return std::abs(z - v[0]);
    if (v.size() == 2) return point_segment_distance(z, v[0], v[1]);

    bool inside = true;
    double boundary = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Cplx a = v[i], b = v[(i + 1) % v.size()];
        if (cross(a, b, z) < 0.0) inside = false;
        boundary = std::min(boundary, point_segment_distance(z, a, b));
    }
    return inside ? -boundary : boundary;
}

bool hulls_disjoint(const ConvexPolygon& a, const ConvexPolygon& b, double margin) {
    if (a.vertices.empty() || b.vertices.empty()) return true;
    std::vector<Cplx> axes;
    const auto add_axes = [&](const ConvexPolygon& poly) {
        const auto& v = poly.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Cplx e = v[(i + 1) % v.size()] - v[i];
            const double len = std::abs(e);
            if (len < 1e-300) continue;
            axes.push_back(e / len);
            axes.push_back(Cplx(-e.imag(), e.real()) / len);
        }
    };
    add_axes(a);
    add_axes(b);
    const Cplx dc = centroid(b) - centroid(a);
    if (std::abs(dc) > 1e-300) axes.push_back(dc / std::abs(dc));

    for (const Cplx& axis : axes) {
        const Interval ia = project(a, axis);
        const Interval ib = project(b, axis);
        if (ib.lo - ia.hi > margin || ia.lo - ib.hi > margin) return true;
    }
    return false;
}

std::optional<Line> line_stabs_all(const std::vector<ConvexPolygon>& hulls, double margin) {
    if (hulls.empty()) return Line{0.0, 0.0};
    const auto feasibility = [&](double theta) {
        const Cplx n(std::cos(theta), std::sin(theta));
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& h : hulls) {
            const Interval iv = project(h, n);
            lo = std::max(lo, iv.lo);
            hi = std::min(hi, iv.hi);
        }
        return std::pair<double, double>(hi - lo, (lo + hi) / 2.0);
    };

    constexpr int kGrid = 4096;
    double best_theta = 0.0, best_feas = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double theta = M_PI * static_cast<double>(i) / kGrid;
        const double f = feasibility(theta).first;
        if (f > best_feas) {
            best_feas = f;
            best_theta = theta;
        }
    }
    // Two bisection refinements around the best grid cell.
    double step = M_PI / kGrid;
    for (int round = 0; round < 2; ++round) {
        const double center = best_theta;
        for (int i = -32; i <= 32; ++i) {
            const double theta = center + step * static_cast<double>(i) / 32.0;
            const double f = feasibility(theta).first;
            if (f > best_feas) {
                best_feas = f;
                best_theta = theta;
            }
        }
        step /= 32.0;
    }

    if (best_feas < 0.0) return std::nullopt;  // none within resolution
    const double offset = feasibility(best_theta).second;
    // Re-verify the witness interval test on every hull.
    const Cplx n(std::cos(best_theta), std::sin(best_theta));
    for (const auto& h : hulls) {
        const Interval iv = project(h, n);
        if (offset < iv.lo - margin || offset > iv.hi + margin) return std::nullopt;
    }
    return Line{best_theta, offset};
}

Disk smallest_enclosing_disk(const std::vector<Cplx>& points) {
    if (points.empty()) throw InvalidInputError("smallest_enclosing_disk: empty set");
    double scale = 0.0;
    for (const Cplx& p : points) scale = std::max(scale, std::abs(p));
    const double eps = 1e-12 * std::max(1.0, scale);

    Disk best{points[0], std::numeric_limits<double>::infinity()};
    if (points.size() == 1) return Disk{points[0], 0.0};

    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const Disk d{(points[i] + points[j]) / 2.0, std::abs(points[i] - points[j]) / 2.0};
            if (d.radius < best.radius && disk_contains_all(d, points, eps)) best = d;
            for (std::size_t k = j + 1; k < points.size(); ++k) {
                const auto cd = circumdisk(points[i], points[j], points[k]);
                if (cd && cd->radius < best.radius && disk_contains_all(*cd, points, eps)) best = *cd;
            }
        }
    }
    return best;
}

bool CircularDomain::contains(Cplx z, double slack) const {
    switch (kind) {
        case Kind::disk: return std::abs(z - center) <= radius + slack;
        case Kind::half_plane: return dot(z, normal) >= offset - slack;
        case Kind::disk_complement: return std::abs(z - center) >= radius - slack;
        case Kind::whole_plane: return true;
        case Kind::point: return std::abs(z - center) <= slack;
    }
    return false;
}

std::optional<DomainWitness> three_disjoint_domains(const std::array<std::vector<Cplx>, 4>& triplets,
                                                    double margin) {
    std::array<Disk, 4> disks;
    std::array<ConvexPolygon, 4> hulls;
    for (int i = 0; i < 4; ++i) {
        disks[static_cast<std::size_t>(i)] = smallest_enclosing_disk(triplets[static_cast<std::size_t>(i)]);
        hulls[static_cast<std::size_t>(i)] = convex_hull(triplets[static_cast<std::size_t>(i)]);
    }

    // Half-plane candidates from pairwise hull separation. Both sides of a
    // separated pair are built from the same axis, so the two normals are
    // exactly antiparallel and the pair is disjoint by construction. Two
    // reach fractions per side: greedy (45% of the gap) and conservative
    // (5%, leaving room for a neighbor's disk).
    std::array<std::array<std::vector<CircularDomain>, 4>, 4> half;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const ConvexPolygon& hi = hulls[static_cast<std::size_t>(i)];
            const ConvexPolygon& hj = hulls[static_cast<std::size_t>(j)];
            std::vector<Cplx> axes;
            for (const auto* poly : {&hi, &hj}) {
                const auto& v = poly->vertices;
                for (std::size_t k = 0; k < v.size(); ++k) {
                    const Cplx e = v[(k + 1) % v.size()] - v[k];
                    if (std::abs(e) < 1e-300) continue;
                    axes.push_back(e / std::abs(e));
                    axes.push_back(Cplx(-e.imag(), e.real()) / std::abs(e));
                }
            }
            const Cplx dc = centroid(hj) - centroid(hi);
            if (std::abs(dc) > 1e-300) axes.push_back(dc / std::abs(dc));

            double best_gap = -std::numeric_limits<double>::infinity();
            Cplx best_axis;
            Interval best_i{}, best_j{};
            for (Cplx axis : axes) {
                Interval ia = project(hi, axis);
                Interval ib = project(hj, axis);
                if (ib.lo - ia.hi < ia.lo - ib.hi) {  // flip so i sits below j
                    axis = -axis;
                    ia = {-ia.hi, -ia.lo};
                    ib = {-ib.hi, -ib.lo};
                }
                const double gap = ib.lo - ia.hi;
                if (gap > best_gap) {
                    best_gap = gap;
                    best_axis = axis;
                    best_i = ia;
                    best_j = ib;
                }
            }
            if (best_gap > margin) {
                for (const double reach : {0.45, 0.05}) {
                    CircularDomain lo_side;
                    lo_side.kind = CircularDomain::Kind::half_plane;
                    lo_side.normal = -best_axis;
                    lo_side.offset = -(best_i.hi + reach * best_gap);
                    CircularDomain hi_side;
                    hi_side.kind = CircularDomain::Kind::half_plane;
                    hi_side.normal = best_axis;
                    hi_side.offset = best_j.lo - reach * best_gap;
                    half[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(lo_side);
                    half[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].push_back(hi_side);
                }
            }
        }
    }

    for (int skip = 3; skip >= 0; --skip) {  // prefer skipping the last triplet only by convention
        std::array<int, 3> sel{};
        int n = 0;
        for (int i = 0; i < 4; ++i)
            if (i != skip) sel[static_cast<std::size_t>(n++)] = i;

        // Candidate domains per selected triplet: minimal disk first, then
        // its half-planes against the other two selected triplets.
        std::array<std::vector<CircularDomain>, 3> cands;
        for (int a = 0; a < 3; ++a) {
            const int i = sel[static_cast<std::size_t>(a)];
            CircularDomain d;
            d.kind = CircularDomain::Kind::disk;
            d.center = disks[static_cast<std::size_t>(i)].center;
            d.radius = disks[static_cast<std::size_t>(i)].radius;
            cands[static_cast<std::size_t>(a)].push_back(d);
            for (int b = 0; b < 3; ++b) {
                if (a == b) continue;
                const int j = sel[static_cast<std::size_t>(b)];
                for (const auto& h : half[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    cands[static_cast<std::size_t>(a)].push_back(h);
            }
        }

        for (const auto& d0 : cands[0]) {
            for (const auto& d1 : cands[1]) {
                for (const auto& d2 : cands[2]) {
                    const std::array<CircularDomain, 3> ds = {d0, d1, d2};
                    bool ok = domains_disjoint(d0, d1, margin) && domains_disjoint(d0, d2, margin) &&
                              domains_disjoint(d1, d2, margin);
                    for (int a = 0; ok && a < 3; ++a)
                        ok = domain_contains_all(ds[static_cast<std::size_t>(a)],
                                                 triplets[static_cast<std::size_t>(sel[static_cast<std::size_t>(a)])],
                                                 margin);
                    if (ok) return DomainWitness{sel, ds};
                }
            }
        }
    }
    return std::nullopt;
}

GaussLucasResult gauss_lucas_check(const std::vector<Cplx>& roots, double tol_geo) {
    if (roots.size() < 2) throw InvalidInputError("gauss_lucas_check: need at least 2 roots");
    const auto p = poly_from_roots(roots);
    const auto droots = poly_roots(poly_derivative(p));
    const ConvexPolygon hull = convex_hull(roots);
    double margin = -std::numeric_limits<double>::infinity();
    for (const Cplx& d : droots) margin = std::max(margin, signed_distance(hull, d));
    return {margin <= tol_geo, margin};
}

std::optional<Cplx> geometric_mean_witness(const std::vector<Cplx>& zs, const CircularDomain& domain,
                                           double slack) {
    if (domain.kind != CircularDomain::Kind::disk && domain.kind != CircularDomain::Kind::half_plane)
        throw InvalidInputError("geometric_mean_witness: domain must be a closed disk or half-plane");
    if (zs.empty()) throw InvalidInputError("geometric_mean_witness: empty sample");
    Cplx prod = 1.0;
    for (const Cplx& z : zs) prod *= z;
    const double n = static_cast<double>(zs.size());
    const double r = std::pow(std::abs(prod), 1.0 / n);
    const double phi = std::arg(prod);
    for (std::size_t k = 0; k < zs.size(); ++k) {
        const Cplx cand = std::polar(r, (phi + 2.0 * M_PI * static_cast<double>(k)) / n);
        if (domain.contains(cand, slack * std::max(1.0, r))) return cand;
    }
    return std::nullopt;
}

std::vector<Cplx> poly_from_roots(const std::vector<Cplx>& roots) {
    std::vector<Cplx> c = {1.0};
    for (const Cplx& r : roots) {
        std::vector<Cplx> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

std::vector<Cplx> poly_derivative(const std::vector<Cplx>& coeffs) {
    std::vector<Cplx> d;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        d.push_back(static_cast<double>(k) * coeffs[k]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

std::vector<Cplx> poly_roots(const std::vector<Cplx>& coeffs) {
    double maxabs = 0.0;
    for (const Cplx& c : coeffs) maxabs = std::max(maxabs, std::abs(c));
    if (!(maxabs > 0.0)) throw InvalidInputError("poly_roots: zero polynomial");
    std::size_t deg = coeffs.size() - 1;
    while (deg > 0 && std::abs(coeffs[deg]) <= 1e-14 * maxabs) --deg;
    if (deg == 0) return {};
    if (deg == 1) return {-coeffs[0] / coeffs[1]};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<long>(deg), static_cast<long>(deg));
    for (std::size_t i = 1; i < deg; ++i) companion(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i)
        companion(static_cast<long>(i), static_cast<long>(deg - 1)) = -coeffs[i] / coeffs[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    std::vector<Cplx> roots(deg);
    for (std::size_t i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(static_cast<long>(i));
    return roots;
}

}  // namespace atiyah4
