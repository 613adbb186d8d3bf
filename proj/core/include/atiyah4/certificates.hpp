#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atiyah4/planar.hpp"
#include "atiyah4/relation.hpp"

namespace atiyah4 {

// Circle at infinity of the hyperbolic plane through a face of the
// tetrahedron. On the sphere it is {x : <x, axis> = height}; height > 0
// encodes the orthogonal-sphere form (center axis/height, radius
// sqrt(1/height^2 - 1)), height = 0 the plane-through-origin form. The chart
// form is the generalized circle A|t|^2 + B t + conj(B t) + C = 0 stored as
// the unit 4-vector (A, Re B, Im B, C); a vanishing A is a line and contains
// the point at infinity.
struct FaceCircle {
    std::array<int, 3> face;
    bool plane_form;
    Vec3 axis;
    double height;
    Eigen::Vector4d chart;

    Vec3 sphere_center() const { return axis / height; }
    double sphere_radius() const { return std::sqrt(1.0 / (height * height) - 1.0); }

    // <x, axis> - height: zero on the circle.
    double sphere_margin(const IdealPoint& x) const { return axis.dot(x.coords()) - height; }
    // Generalized-circle residual of a CP^1 point (inputs max-normalized).
    double chart_margin(const ProjPoint& p) const;

    double max_root_margin_sphere;  // over the six designated roots
    double max_root_margin_chart;
};

FaceCircle face_circle(const Configuration& config, const std::array<int, 3>& face,
                       const Tolerances& tol = {});
FaceCircle face_circle(const Configuration& config, const RootSystem& rs,
                       const std::array<int, 3>& face, const Tolerances& tol = {});

struct FaceAudit {
    FaceCircle circle;
    int opposite_vertex;
    int orientation_bit;  // +1: the three two-on-circle triplets fill the closed interior cap; -1 the
                          // exterior pattern; 0: pattern violated
    std::array<int, 3> side_counts;  // (on, interior, exterior) over the twelve roots
    bool six_designated_on;
    double max_designated_margin;
    bool pattern_ok;
    int marginal_roots;  // roots in the ambiguous band around the circle
};

struct IncidenceReport {
    bool applicable = false;  // coplanar configurations collapse all four circles
    std::string note;
    std::array<FaceAudit, 4> faces{};  // indexed by opposite vertex
    bool edges_on_two_circles = false;
    double max_designated_margin = 0.0;
    bool intersections_match = false;
    double max_intersection_mismatch = 0.0;
    int marginal_count = 0;
    bool all_ok = false;
};

// Verifies that each root lies on exactly the two circles of the faces
// sharing its edge, that independently computed pairwise circle
// intersections reproduce the root set, and that every circle shows the
// three-triplets-inside / one-outside closure pattern (or its mirror).
// Failures are report entries, not exceptions.
IncidenceReport incidence_audit(const Configuration& config, const Tolerances& tol = {});

struct TypeSignature {
    bool applicable = false;
    std::array<int, 4> bits{};         // per face, indexed by opposite vertex
    std::array<int, 4> bits_sorted{};  // relabeling-invariant part ...
    std::array<std::array<int, 3>, 4> count_table_sorted{};  // ... with the per-circle count rows
    int disjoint_disk_pairs = 0;  // pairs of triplet minimal disks disjoint in the chart
    bool used_pretwist = false;   // chart recentered away from infinity before disk work
    Cplx pretwist_anchor{};
    std::string label;  // provisional A1/A2/B1/B2 naming; see README
    bool provisional = true;
};

TypeSignature type_signature(const Configuration& config, const Tolerances& tol = {});

// Scenario checkers replay the per-case argument on one root system. They
// expect rs to satisfy (or nearly satisfy) the relation c; on real
// configurations the recorded residuals quantify how far the relation is
// from holding.

struct ScenarioATriplet {
    bool applicable;         // normalized triplet stayed inside the affine chart
    double s2_residual;      // |sigma2 - 3 sigma0| / sum |sigma|
    Cplx r1, r2;             // roots of t^2 - (2/3) s1 t + 1
    double r_product_error;  // |r1 r2 - 1|
    double gauss_lucas_margin;
    bool roots_in_hull;
    bool segment_meets_real_axis;
};

struct ScenarioAReport {
    Scenario scenario;
    std::array<ScenarioATriplet, 4> triplets;
    bool identities_ok;
    bool real_axis_stabs_all;           // the real axis as the canonical transversal candidate
    std::optional<Line> stabbing_line;  // generic sweep
    bool no_transversal_within_resolution;
    std::optional<DomainWitness> domains;
    bool domains_contain_pm1;  // every witness domain contains 1 or -1
};

ScenarioAReport scenario_a_checker(const RelationVector& c, const RootSystem& rs,
                                   const Tolerances& tol = {});

struct ScenarioBTriplet {
    bool applicable;
    double s1_residual;  // |sigma1 - 3 sigma0| / sum |sigma|
    Cplx mean;
    double one_margin;  // signed distance of 1 to the hull
    bool contains_one;
};

struct ScenarioBReport {
    Scenario scenario;
    std::array<ScenarioBTriplet, 4> triplets;
    bool identities_ok;
    int disjoint_hull_pairs;
    bool contradiction_found;  // disjoint hulls although every hull must contain 1
};

ScenarioBReport scenario_b_checker(const RelationVector& c, const RootSystem& rs,
                                   const Tolerances& tol = {});

struct ScenarioCReport {
    std::vector<std::pair<int, int>> incidences;  // E(p) = {(i,j) : t_ij = p}
    bool chain_consistent;  // CP^1 incidences match the ball-model ray test
    std::array<bool, 4> triplet_avoids_p;
    int avoiding_count;
    bool not_all_vanish;
    std::optional<int> chain_end;  // the avoiding index when it is unique
};

ScenarioCReport scenario_c_checker(const Configuration& config, const RootSystem& rs,
                                   const ProjPoint& p, const Tolerances& tol = {});

struct CertificateReport {
    CoplanarityResult coplanarity{};
    std::optional<int> hull_index;
    bool covered_case = false;  // non-coplanar, or coplanar with a hull point
    IncidenceReport incidence;
    std::optional<TypeSignature> signature;
    double measure = 0.0;
    double residual = 0.0;
    bool singular = false;
    RelationVector relation{};
    bool relation_planted = false;
    ScenarioTag scenario_tag = ScenarioTag::three_distinct;
    std::optional<ScenarioAReport> scenario_a;
    std::optional<ScenarioBReport> scenario_b;
    std::optional<ScenarioCReport> scenario_c;
};

// Full per-configuration record: case gating, incidence audit, type
// signature, null direction (or the planted relation) and the matching
// scenario replay.
CertificateReport certify(const Configuration& config, const Tolerances& tol = {},
                          const std::optional<RelationVector>& planted = std::nullopt);

}  // namespace atiyah4
