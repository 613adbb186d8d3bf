#include "atiyah4/certificates.hpp"

#include <algorithm>
#include <cmath>

namespace atiyah4 {

namespace {

constexpr double kAffineCap = 1e6;  // beyond this the affine chart is treated as unusable

Eigen::Vector4d chart_row(const ProjPoint& p) {
    const Complex w = p.v() * std::conj(p.u());
    return Eigen::Vector4d(std::norm(p.v()), 2.0 * w.real(), -2.0 * w.imag(), std::norm(p.u()));
}

// Signed side of a ball point against the circle's carrier: positive inside
// the orthogonal sphere (equivalently on the <x,m> > h side).
double ball_side(const FaceCircle& fc, const Vec3& x) {
    return fc.axis.dot(x) - fc.height * (x.squaredNorm() + 1.0) / 2.0;
}

struct AffineTriplets {
    std::array<std::vector<Cplx>, 4> pts;
    std::array<bool, 4> finite;
    bool all_finite;
};

AffineTriplets affine_triplets(const RootSystem& rs) {
    AffineTriplets out;
    out.all_finite = true;
    for (int i = 0; i < 4; ++i) {
        bool fin = true;
        for (const ProjPoint& w : rs.triplet(i)) {
            if (!w.finite_affine(kAffineCap)) {
                fin = false;
                continue;
            }
            out.pts[static_cast<std::size_t>(i)].push_back(w.affine());
        }
        out.finite[static_cast<std::size_t>(i)] = fin;
        out.all_finite = out.all_finite && fin;
    }
    return out;
}

std::array<int, 3> face_of_opposite(int l) {
    std::array<int, 3> f{};
    int n = 0;
    for (int k = 0; k < 4; ++k)
        if (k != l) f[static_cast<std::size_t>(n++)] = k;
    return f;
}

}  // namespace

double FaceCircle::chart_margin(const ProjPoint& p) const { return chart.dot(chart_row(p)); }

FaceCircle face_circle(const Configuration& config, const std::array<int, 3>& face,
                       const Tolerances& tol) {
    return face_circle(config, root_system(config, tol), face, tol);
}

FaceCircle face_circle(const Configuration& config, const RootSystem& rs,
                       const std::array<int, 3>& face, const Tolerances&) {
    const Vec3 xa = config.point(face[0]).coords();
    const Vec3 xb = config.point(face[1]).coords();
    const Vec3 xc = config.point(face[2]).coords();

    // Collinear faces span no hyperbolic plane.
    const Vec3 yb = mobius_translate(xa, xb);
    const Vec3 yc = mobius_translate(xa, xc);
    if (yb.cross(yc).norm() <= 1e-12 * std::max(1.0, yb.norm() * yc.norm()))
        throw DegenerateInputError("face_circle: collinear face");

    FaceCircle fc;
    fc.face = face;

    Eigen::Matrix3d a;
    a.row(0) = xa;
    a.row(1) = xb;
    a.row(2) = xc;
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    if (smax < 1e-300 || svd.singularValues()(2) / smax < 1e-10) {
        // Plane through the origin: normal = null direction, pivot-positive.
        Vec3 n = svd.matrixV().col(2);
        for (int k = 0; k < 3; ++k) {
            if (std::abs(n(k)) > 1e-6) {
                if (n(k) < 0.0) n = -n;
                break;
            }
        }
        fc.plane_form = true;
        fc.axis = n;
        fc.height = 0.0;
    } else {
        const Vec3 b((xa.squaredNorm() + 1.0) / 2.0, (xb.squaredNorm() + 1.0) / 2.0,
                     (xc.squaredNorm() + 1.0) / 2.0);
        const Vec3 center = a.colPivHouseholderQr().solve(b);
        const double c2 = center.squaredNorm();
        if (c2 <= 1.0 + 1e-12) throw DegenerateInputError("face_circle: no orthogonal sphere");
        fc.plane_form = false;
        fc.axis = center / std::sqrt(c2);
        fc.height = 1.0 / std::sqrt(c2);
    }

    // Chart form fitted through the stereographic images of t_ab, t_bc, t_ca.
    Eigen::Matrix<double, 3, 4> rows;
    rows.row(0) = chart_row(rs.root(face[0], face[1]));
    rows.row(1) = chart_row(rs.root(face[1], face[2]));
    rows.row(2) = chart_row(rs.root(face[2], face[0]));
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> csvd(rows, Eigen::ComputeFullV);
    Eigen::Vector4d chart = csvd.matrixV().col(3);
    for (int k = 0; k < 4; ++k) {
        if (std::abs(chart(k)) > 1e-6) {
            if (chart(k) < 0.0) chart = -chart;
            break;
        }
    }
    fc.chart = chart;

    fc.max_root_margin_sphere = 0.0;
    fc.max_root_margin_chart = 0.0;
    for (int i : face) {
        for (int j : face) {
            if (i == j) continue;
            fc.max_root_margin_sphere =
                std::max(fc.max_root_margin_sphere, std::abs(fc.sphere_margin(rs.ideal(i, j))));
            fc.max_root_margin_chart =
                std::max(fc.max_root_margin_chart, std::abs(fc.chart_margin(rs.root(i, j))));
        }
    }
    return fc;
}

IncidenceReport incidence_audit(const Configuration& config, const Tolerances& tol) {
    IncidenceReport report;
    const auto cop = coplanarity_test(config, tol);
    if (cop.is_coplanar) {
        report.applicable = false;
        report.note = "coplanar configuration: all four face circles coincide";
        return report;
    }
    report.applicable = true;

    const RootSystem rs = root_system(config, tol);

    std::array<FaceCircle, 4> circles;
    for (int l = 0; l < 4; ++l) {
        const auto face = face_of_opposite(l);
        circles[static_cast<std::size_t>(l)] = face_circle(config, rs, face, tol);
        FaceAudit& audit = report.faces[static_cast<std::size_t>(l)];
        audit.circle = circles[static_cast<std::size_t>(l)];
        audit.opposite_vertex = l;

        // Interior = closed cap on the opposite-vertex side.
        const double orient =
            ball_side(audit.circle, config.point(l).coords()) >= 0.0 ? 1.0 : -1.0;

        audit.side_counts = {0, 0, 0};
        audit.marginal_roots = 0;
        audit.six_designated_on = true;
        audit.max_designated_margin = 0.0;

        std::array<bool, 4> in_interior_closure = {true, true, true, true};
        std::array<bool, 4> in_exterior_closure = {true, true, true, true};
        std::array<int, 4> on_count_per_triplet = {0, 0, 0, 0};

        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                const double mu = orient * audit.circle.sphere_margin(rs.ideal(i, j));
                const bool designated = (i != l) && (j != l);
                if (designated) {
                    audit.max_designated_margin =
                        std::max(audit.max_designated_margin, std::abs(mu));
                    if (std::abs(mu) > tol.on_circle) audit.six_designated_on = false;
                }
                if (std::abs(mu) <= tol.on_circle) {
                    ++audit.side_counts[0];
                    ++on_count_per_triplet[static_cast<std::size_t>(i)];
                } else {
                    if (std::abs(mu) <= 100.0 * tol.on_circle) ++audit.marginal_roots;
                    if (mu > 0.0) {
                        ++audit.side_counts[1];
                        in_exterior_closure[static_cast<std::size_t>(i)] = false;
                    } else {
                        ++audit.side_counts[2];
                        in_interior_closure[static_cast<std::size_t>(i)] = false;
                    }
                }
            }
        }

        // Pattern: the three face triplets (two roots on the circle each)
        // share one closure, the opposite triplet fills the other.
        int n_int = 0, n_ext = 0;
        bool two_on_ok = true;
        for (int i = 0; i < 4; ++i) {
            if (in_interior_closure[static_cast<std::size_t>(i)]) ++n_int;
            if (in_exterior_closure[static_cast<std::size_t>(i)]) ++n_ext;
            if (i != l && on_count_per_triplet[static_cast<std::size_t>(i)] != 2) two_on_ok = false;
        }
        const bool interior_pattern =
            two_on_ok && n_int >= 3 && in_exterior_closure[static_cast<std::size_t>(l)] &&
            !in_interior_closure[static_cast<std::size_t>(l)];
        const bool exterior_pattern =
            two_on_ok && n_ext >= 3 && in_interior_closure[static_cast<std::size_t>(l)] &&
            !in_exterior_closure[static_cast<std::size_t>(l)];
        audit.pattern_ok = interior_pattern || exterior_pattern;
        audit.orientation_bit = interior_pattern ? 1 : (exterior_pattern ? -1 : 0);

        report.max_designated_margin =
            std::max(report.max_designated_margin, audit.max_designated_margin);
        report.marginal_count += audit.marginal_roots;
    }

    // Every root must sit on exactly the two circles of the faces sharing its
    // edge.
    report.edges_on_two_circles = true;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            for (int l = 0; l < 4; ++l) {
                const double mu =
                    circles[static_cast<std::size_t>(l)].sphere_margin(rs.ideal(i, j));
                const bool should_be_on = (i != l) && (j != l);
                if (should_be_on != (std::abs(mu) <= tol.on_circle))
                    report.edges_on_two_circles = false;
            }
        }
    }

    // Independent pairwise circle intersections against the root set.
    report.intersections_match = true;
    report.max_intersection_mismatch = 0.0;
    for (int l1 = 0; l1 < 4; ++l1) {
        for (int l2 = l1 + 1; l2 < 4; ++l2) {
            const FaceCircle& f1 = circles[static_cast<std::size_t>(l1)];
            const FaceCircle& f2 = circles[static_cast<std::size_t>(l2)];
            const double g = f1.axis.dot(f2.axis);
            const double det = 1.0 - g * g;
            if (det < 1e-14) {
                report.intersections_match = false;
                continue;
            }
            const double alpha = (f1.height - f2.height * g) / det;
            const double beta = (f2.height - f1.height * g) / det;
            const double w2 = 1.0 - (alpha * alpha + beta * beta + 2.0 * alpha * beta * g);
            if (w2 < 0.0) {
                report.intersections_match = false;
                continue;
            }
            const double gamma = std::sqrt(w2 / det);
            const Vec3 base = alpha * f1.axis + beta * f2.axis;
            const Vec3 perp = f1.axis.cross(f2.axis);

            // The two faces share the edge {i, j} complementary to {l1, l2}.
            std::array<int, 2> edge{};
            int n = 0;
            for (int k = 0; k < 4; ++k)
                if (k != l1 && k != l2) edge[static_cast<std::size_t>(n++)] = k;
            const Vec3 r1 = rs.ideal(edge[0], edge[1]).coords();
            const Vec3 r2 = rs.ideal(edge[1], edge[0]).coords();

            for (const double s : {1.0, -1.0}) {
                const Vec3 x = base + s * gamma * perp;
                const double d = std::min((x - r1).norm(), (x - r2).norm());
                report.max_intersection_mismatch = std::max(report.max_intersection_mismatch, d);
                if (d > 1e-7) report.intersections_match = false;
            }
        }
    }

    bool patterns = true;
    for (const auto& f : report.faces) patterns = patterns && f.pattern_ok;
    report.all_ok = report.edges_on_two_circles && report.intersections_match && patterns;
    return report;
}

TypeSignature type_signature(const Configuration& config, const Tolerances& tol) {
    TypeSignature sig;
    const IncidenceReport audit = incidence_audit(config, tol);
    if (!audit.applicable) return sig;
    sig.applicable = true;

    std::array<std::array<int, 3>, 4> table{};
    for (int l = 0; l < 4; ++l) {
        sig.bits[static_cast<std::size_t>(l)] =
            audit.faces[static_cast<std::size_t>(l)].orientation_bit;
        table[static_cast<std::size_t>(l)] = audit.faces[static_cast<std::size_t>(l)].side_counts;
    }
    sig.bits_sorted = sig.bits;
    std::sort(sig.bits_sorted.begin(), sig.bits_sorted.end());
    sig.count_table_sorted = table;
    std::sort(sig.count_table_sorted.begin(), sig.count_table_sorted.end());

    // Minimal-disk disjointness in the stereographic chart; recenter away
    // from infinity first when any root leaves the affine range.
    const RootSystem rs = root_system(config, tol);
    std::array<std::vector<Cplx>, 4> pts;
    bool need_twist = false;
    for (int i = 0; i < 4; ++i)
        for (const ProjPoint& w : rs.triplet(i))
            if (!w.finite_affine(kAffineCap)) need_twist = true;

    if (need_twist) {
        Cplx centroid = 0.0;
        int n = 0;
        for (int i = 0; i < 4; ++i)
            for (const ProjPoint& w : rs.triplet(i))
                if (w.finite_affine(kAffineCap)) {
                    centroid += w.affine();
                    ++n;
                }
        if (n > 0) centroid /= static_cast<double>(n);
        double spread = 0.0;
        for (int i = 0; i < 4; ++i)
            for (const ProjPoint& w : rs.triplet(i))
                if (w.finite_affine(kAffineCap))
                    spread = std::max(spread, std::abs(w.affine() - centroid));
        // Anchor at least distance 1 from every finite root; sends infinity
        // to 0 under t -> 1/(t - anchor).
        const Cplx anchor = centroid + Cplx(1.0 + spread, 1.0 + spread);
        sig.used_pretwist = true;
        sig.pretwist_anchor = anchor;
        for (int i = 0; i < 4; ++i)
            for (const ProjPoint& w : rs.triplet(i)) {
                const ProjPoint tw(w.v() - anchor * w.u(), w.u());
                pts[static_cast<std::size_t>(i)].push_back(tw.affine());
            }
    } else {
        for (int i = 0; i < 4; ++i)
            for (const ProjPoint& w : rs.triplet(i))
                pts[static_cast<std::size_t>(i)].push_back(w.affine());
    }

    std::array<Disk, 4> disks;
    for (int i = 0; i < 4; ++i)
        disks[static_cast<std::size_t>(i)] = smallest_enclosing_disk(pts[static_cast<std::size_t>(i)]);
    sig.disjoint_disk_pairs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(disks[static_cast<std::size_t>(i)].center -
                         disks[static_cast<std::size_t>(j)].center) >
                disks[static_cast<std::size_t>(i)].radius +
                    disks[static_cast<std::size_t>(j)].radius + tol.geo)
                ++sig.disjoint_disk_pairs;

    int n_plus = 0;
    for (int b : sig.bits)
        if (b == 1) ++n_plus;
    sig.label = (n_plus >= 2 ? "A" : "B") + std::string(sig.disjoint_disk_pairs == 6 ? "1" : "2");
    return sig;
}

ScenarioAReport scenario_a_checker(const RelationVector& c, const RootSystem& rs,
                                   const Tolerances& tol) {
    ScenarioAReport report{};
    report.scenario = classify_scenario(c, tol);
    if (report.scenario.tag != ScenarioTag::three_distinct)
        throw InvalidInputError("scenario_a_checker: relation cubic does not have three distinct roots");

    const RootSystem rsn = transform(rs, report.scenario.normalizer);
    const AffineTriplets at = affine_triplets(rsn);

    report.identities_ok = true;
    std::vector<ConvexPolygon> hulls;
    for (int i = 0; i < 4; ++i) {
        ScenarioATriplet& t = report.triplets[static_cast<std::size_t>(i)];
        const auto trip = rsn.triplet(i);
        const auto s = sym_elem(trip[0], trip[1], trip[2]);
        const double scale = std::abs(s[0]) + std::abs(s[1]) + std::abs(s[2]) + std::abs(s[3]);
        t.s2_residual = std::abs(s[2] - 3.0 * s[0]) / std::max(scale, 1e-300);
        t.applicable = at.finite[static_cast<std::size_t>(i)];
        if (!t.applicable) {
            report.identities_ok = false;
            continue;
        }
        const Cplx s1 = s[1] / s[0];
        const Cplx q = s1 / 3.0;
        const Cplx disc = std::sqrt(q * q - 1.0);
        t.r1 = q + disc;
        t.r2 = q - disc;
        t.r_product_error = std::abs(t.r1 * t.r2 - 1.0);

        const ConvexPolygon hull = convex_hull(at.pts[static_cast<std::size_t>(i)]);
        hulls.push_back(hull);
        t.gauss_lucas_margin = std::max(signed_distance(hull, t.r1), signed_distance(hull, t.r2));
        t.roots_in_hull = t.gauss_lucas_margin <= std::max(tol.geo, 1e-9);
        t.segment_meets_real_axis = t.r1.imag() * t.r2.imag() <= tol.geo;

        if (t.s2_residual > 1e-8 || t.r_product_error > 1e-10 || !t.roots_in_hull ||
            !t.segment_meets_real_axis)
            report.identities_ok = false;
    }

    if (hulls.size() == 4) {
        report.real_axis_stabs_all = true;
        for (const auto& h : hulls) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const Cplx& v : h.vertices) {
                lo = std::min(lo, v.imag());
                hi = std::max(hi, v.imag());
            }
            if (0.0 < lo - tol.geo || 0.0 > hi + tol.geo) report.real_axis_stabs_all = false;
        }
        report.stabbing_line = line_stabs_all(hulls, tol.geo);
        report.no_transversal_within_resolution = !report.stabbing_line.has_value();

        report.domains = three_disjoint_domains(at.pts, tol.geo);
        report.domains_contain_pm1 = false;
        if (report.domains) {
            report.domains_contain_pm1 = true;
            for (const auto& d : report.domains->domains)
                if (!d.contains(Cplx(1.0, 0.0), tol.geo) && !d.contains(Cplx(-1.0, 0.0), tol.geo))
                    report.domains_contain_pm1 = false;
        }
    } else {
        report.real_axis_stabs_all = false;
        report.no_transversal_within_resolution = false;
        report.domains_contain_pm1 = false;
    }
    return report;
}

ScenarioBReport scenario_b_checker(const RelationVector& c, const RootSystem& rs,
                                   const Tolerances& tol) {
    ScenarioBReport report{};
    report.scenario = classify_scenario(c, tol);
    if (report.scenario.tag != ScenarioTag::double_root)
        throw InvalidInputError("scenario_b_checker: relation cubic does not have a double root");

    const RootSystem rsn = transform(rs, report.scenario.normalizer);
    const AffineTriplets at = affine_triplets(rsn);

    report.identities_ok = true;
    std::array<ConvexPolygon, 4> hulls;
    bool all_contain_one = true;
    for (int i = 0; i < 4; ++i) {
        ScenarioBTriplet& t = report.triplets[static_cast<std::size_t>(i)];
        const auto trip = rsn.triplet(i);
        const auto s = sym_elem(trip[0], trip[1], trip[2]);
        const double scale = std::abs(s[0]) + std::abs(s[1]) + std::abs(s[2]) + std::abs(s[3]);
        t.s1_residual = std::abs(s[1] - 3.0 * s[0]) / std::max(scale, 1e-300);
        t.applicable = at.finite[static_cast<std::size_t>(i)];
        if (!t.applicable) {
            report.identities_ok = false;
            all_contain_one = false;
            continue;
        }
        t.mean = s[1] / s[0] / 3.0;
        hulls[static_cast<std::size_t>(i)] = convex_hull(at.pts[static_cast<std::size_t>(i)]);
        t.one_margin = signed_distance(hulls[static_cast<std::size_t>(i)], Cplx(1.0, 0.0));
        t.contains_one = t.one_margin <= tol.geo;
        all_contain_one = all_contain_one && t.contains_one;
        if (t.s1_residual > 1e-8 || !t.contains_one) report.identities_ok = false;
    }

    report.disjoint_hull_pairs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (at.finite[static_cast<std::size_t>(i)] && at.finite[static_cast<std::size_t>(j)] &&
                hulls_disjoint(hulls[static_cast<std::size_t>(i)], hulls[static_cast<std::size_t>(j)],
                               tol.geo))
                ++report.disjoint_hull_pairs;

    report.contradiction_found = all_contain_one && report.disjoint_hull_pairs >= 1;
    return report;
}

ScenarioCReport scenario_c_checker(const Configuration& config, const RootSystem& rs,
                                   const ProjPoint& p, const Tolerances& tol) {
    ScenarioCReport report{};
    const double inc_tol = std::max(tol.proj, 1e-8);
    const IdealPoint p_ideal = inverse_stereographic(p);

    report.chain_consistent = true;
    for (int i = 0; i < 4; ++i) {
        bool avoids = true;
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            const bool cp1_incident = proj_distance(rs.root(i, j), p) < inc_tol;

            // Ball-model cross-check: x_j lies on the ray from x_i toward p
            // iff the translated image of x_j points along the translated p.
            const Vec3 y = mobius_translate(config.point(i).coords(), config.point(j).coords());
            const Vec3 dir = mobius_translate(config.point(i).coords(), p_ideal.coords());
            const bool ray_incident = (y / y.norm() - dir).norm() < inc_tol * 20.0;

            if (cp1_incident != ray_incident) report.chain_consistent = false;
            if (cp1_incident) {
                report.incidences.emplace_back(i, j);
                avoids = false;
            }
        }
        report.triplet_avoids_p[static_cast<std::size_t>(i)] = avoids;
    }
    report.avoiding_count = 0;
    for (bool a : report.triplet_avoids_p)
        if (a) ++report.avoiding_count;
    report.not_all_vanish = report.avoiding_count > 0;
    if (report.avoiding_count == 1) {
        for (int i = 0; i < 4; ++i)
            if (report.triplet_avoids_p[static_cast<std::size_t>(i)]) report.chain_end = i;
    }
    return report;
}

CertificateReport certify(const Configuration& config, const Tolerances& tol,
                          const std::optional<RelationVector>& planted) {
    CertificateReport report;
    report.coplanarity = coplanarity_test(config, tol);
    if (report.coplanarity.is_coplanar) {
        report.hull_index = hull_membership(config, tol);
        report.covered_case = report.hull_index.has_value();
        report.incidence.applicable = false;
        report.incidence.note = "coplanar configuration: all four face circles coincide";
    } else {
        report.covered_case = true;
        report.incidence = incidence_audit(config, tol);
        report.signature = type_signature(config, tol);
    }

    const RootSystem rs = root_system(config, tol);
    const AtiyahMatrix m = atiyah_matrix(rs);
    report.measure = independence_measure(m);
    const NullvectorResult nv = relation_nullvector(m);
    report.residual = nv.residual;
    report.singular = nv.residual < tol.singular_residual && report.measure < tol.singular_measure;

    if (planted) {
        report.relation = *planted;
        report.relation_planted = true;
    } else {
        report.relation = nv.c;
    }

    const Scenario scenario = classify_scenario(report.relation, tol);
    report.scenario_tag = scenario.tag;
    switch (scenario.tag) {
        case ScenarioTag::three_distinct:
            report.scenario_a = scenario_a_checker(report.relation, rs, tol);
            break;
        case ScenarioTag::double_root:
            report.scenario_b = scenario_b_checker(report.relation, rs, tol);
            break;
        case ScenarioTag::triple_root:
            report.scenario_c = scenario_c_checker(config, rs, scenario.cubic.roots[0], tol);
            break;
    }
    return report;
}

}  // namespace atiyah4
