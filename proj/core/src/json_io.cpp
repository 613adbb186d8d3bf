#include "atiyah4/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace atiyah4 {

namespace {

Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json optional_int_1based(const std::optional<int>& v) {
    if (v) return *v + 1;
    return nullptr;
}

}  // namespace

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

void to_json(Json& j, const BallPoint& p) { j = vec3_json(p.coords()); }
void to_json(Json& j, const IdealPoint& p) { j = vec3_json(p.coords()); }

void to_json(Json& j, const ProjPoint& p) {
    j = Json{{"u", complex_json(p.u())}, {"v", complex_json(p.v())}};
}

void to_json(Json& j, const MobiusMap& m) {
    j = Json{{"a", complex_json(m.a())},
             {"b", complex_json(m.b())},
             {"c", complex_json(m.c())},
             {"d", complex_json(m.d())}};
}

void to_json(Json& j, const Configuration& c) {
    Json pts = Json::array();
    for (const auto& p : c.points()) pts.push_back(vec3_json(p.coords()));
    j = Json{{"points", pts}};
}

void to_json(Json& j, const Tolerances& t) {
    j = Json{{"min_sep", t.min_sep},
             {"r_max", t.r_max},
             {"coplanar", t.coplanar},
             {"hull", t.hull},
             {"proj", t.proj},
             {"scenario", t.scenario},
             {"root_cluster", t.root_cluster},
             {"geo", t.geo},
             {"on_circle", t.on_circle},
             {"singular_residual", t.singular_residual},
             {"singular_measure", t.singular_measure}};
}

void to_json(Json& j, const CoplanarityResult& r) {
    j = Json{{"is_coplanar", r.is_coplanar}, {"residual", r.residual}};
}

void to_json(Json& j, const AtiyahMatrix& m) {
    Json entries = Json::array();
    for (int row = 0; row < 4; ++row) {
        Json r = Json::array();
        for (int col = 0; col < 4; ++col) r.push_back(complex_json(m.m(row, col)));
        entries.push_back(r);
    }
    Json scales = Json::array();
    for (const Complex& s : m.column_scales) scales.push_back(complex_json(s));
    j = Json{{"entries", entries}, {"column_scales", scales}};
}

void to_json(Json& j, const RelationVector& c) {
    Json arr = Json::array();
    for (int k = 0; k < 4; ++k) arr.push_back(complex_json(c.c(k)));
    j = arr;
}

void to_json(Json& j, const RelationCubic& g) {
    Json coeffs = Json::array();
    for (const Complex& q : g.coeffs) coeffs.push_back(complex_json(q));
    Json roots = Json::array();
    for (int k = 0; k < 3; ++k) {
        Json r;
        to_json(r, g.roots[static_cast<std::size_t>(k)]);
        r["multiplicity"] = g.multiplicity[static_cast<std::size_t>(k)];
        roots.push_back(r);
    }
    j = Json{{"coeffs", coeffs}, {"roots", roots}};
}

void to_json(Json& j, const Scenario& s) {
    j = Json{{"tag", to_string(s.tag)},
             {"normalizer", s.normalizer},
             {"cubic", s.cubic},
             {"discriminant", s.discriminant}};
}

void to_json(Json& j, const Line& l) { j = Json{{"theta", l.theta}, {"offset", l.offset}}; }

void to_json(Json& j, const Disk& d) {
    j = Json{{"center", complex_json(d.center)}, {"radius", d.radius}};
}

void to_json(Json& j, const CircularDomain& d) {
    switch (d.kind) {
        case CircularDomain::Kind::disk:
            j = Json{{"kind", "disk"}, {"center", complex_json(d.center)}, {"radius", d.radius}};
            break;
        case CircularDomain::Kind::half_plane:
            j = Json{{"kind", "half_plane"},
                     {"normal", complex_json(d.normal)},
                     {"offset", d.offset}};
            break;
        case CircularDomain::Kind::disk_complement:
            j = Json{{"kind", "disk_complement"},
                     {"center", complex_json(d.center)},
                     {"radius", d.radius}};
            break;
        case CircularDomain::Kind::whole_plane: j = Json{{"kind", "whole_plane"}}; break;
        case CircularDomain::Kind::point:
            j = Json{{"kind", "point"}, {"center", complex_json(d.center)}};
            break;
    }
}

void to_json(Json& j, const DomainWitness& w) {
    Json idx = Json::array();
    for (int i : w.triplet_index) idx.push_back(i + 1);
    Json doms = Json::array();
    for (const auto& d : w.domains) doms.push_back(d);
    j = Json{{"triplets", idx}, {"domains", doms}};
}

void to_json(Json& j, const FaceCircle& f) {
    Json face = Json::array();
    for (int i : f.face) face.push_back(i + 1);
    j = Json{{"face", face},
             {"form", f.plane_form ? "plane" : "sphere"},
             {"axis", vec3_json(f.axis)},
             {"height", f.height},
             {"chart", Json::array({f.chart(0), f.chart(1), f.chart(2), f.chart(3)})},
             {"max_root_margin_sphere", f.max_root_margin_sphere},
             {"max_root_margin_chart", f.max_root_margin_chart}};
    if (!f.plane_form) {
        j["center"] = vec3_json(f.sphere_center());
        j["radius"] = f.sphere_radius();
    }
}

void to_json(Json& j, const FaceAudit& f) {
    j = Json{{"circle", f.circle},
             {"opposite_vertex", f.opposite_vertex + 1},
             {"orientation_bit", f.orientation_bit},
             {"side_counts",
              Json{{"on", f.side_counts[0]}, {"interior", f.side_counts[1]}, {"exterior", f.side_counts[2]}}},
             {"six_designated_on", f.six_designated_on},
             {"max_designated_margin", f.max_designated_margin},
             {"pattern_ok", f.pattern_ok},
             {"marginal_roots", f.marginal_roots}};
}

void to_json(Json& j, const IncidenceReport& r) {
    if (!r.applicable) {
        j = Json{{"applicable", false}, {"note", r.note}};
        return;
    }
    Json faces = Json::array();
    for (const auto& f : r.faces) faces.push_back(f);
    j = Json{{"applicable", true},
             {"faces", faces},
             {"edges_on_two_circles", r.edges_on_two_circles},
             {"max_designated_margin", r.max_designated_margin},
             {"intersections_match", r.intersections_match},
             {"max_intersection_mismatch", r.max_intersection_mismatch},
             {"marginal_count", r.marginal_count},
             {"all_ok", r.all_ok}};
}

void to_json(Json& j, const TypeSignature& s) {
    if (!s.applicable) {
        j = Json{{"applicable", false}};
        return;
    }
    Json table = Json::array();
    for (const auto& row : s.count_table_sorted)
        table.push_back(Json::array({row[0], row[1], row[2]}));
    j = Json{{"applicable", true},
             {"bits", Json::array({s.bits[0], s.bits[1], s.bits[2], s.bits[3]})},
             {"bits_sorted", Json::array({s.bits_sorted[0], s.bits_sorted[1], s.bits_sorted[2], s.bits_sorted[3]})},
             {"count_table_sorted", table},
             {"disjoint_disk_pairs", s.disjoint_disk_pairs},
             {"used_pretwist", s.used_pretwist},
             {"label", s.label},
             {"provisional", s.provisional}};
    if (s.used_pretwist) j["pretwist_anchor"] = complex_json(s.pretwist_anchor);
}

void to_json(Json& j, const ScenarioATriplet& t) {
    j = Json{{"applicable", t.applicable}, {"s2_residual", t.s2_residual}};
    if (t.applicable) {
        j["r1"] = complex_json(t.r1);
        j["r2"] = complex_json(t.r2);
        j["r_product_error"] = t.r_product_error;
        j["gauss_lucas_margin"] = t.gauss_lucas_margin;
        j["roots_in_hull"] = t.roots_in_hull;
        j["segment_meets_real_axis"] = t.segment_meets_real_axis;
    }
}

void to_json(Json& j, const ScenarioAReport& r) {
    Json triplets = Json::array();
    for (const auto& t : r.triplets) triplets.push_back(t);
    j = Json{{"scenario", r.scenario},
             {"triplets", triplets},
             {"identities_ok", r.identities_ok},
             {"real_axis_stabs_all", r.real_axis_stabs_all},
             {"no_transversal_within_resolution", r.no_transversal_within_resolution},
             {"domains_contain_pm1", r.domains_contain_pm1}};
    j["stabbing_line"] = r.stabbing_line ? Json(*r.stabbing_line) : Json(nullptr);
    j["domains"] = r.domains ? Json(*r.domains) : Json(nullptr);
}

void to_json(Json& j, const ScenarioBTriplet& t) {
    j = Json{{"applicable", t.applicable}, {"s1_residual", t.s1_residual}};
    if (t.applicable) {
        j["mean"] = complex_json(t.mean);
        j["one_margin"] = t.one_margin;
        j["contains_one"] = t.contains_one;
    }
}

void to_json(Json& j, const ScenarioBReport& r) {
    Json triplets = Json::array();
    for (const auto& t : r.triplets) triplets.push_back(t);
    j = Json{{"scenario", r.scenario},
             {"triplets", triplets},
             {"identities_ok", r.identities_ok},
             {"disjoint_hull_pairs", r.disjoint_hull_pairs},
             {"contradiction_found", r.contradiction_found}};
}

void to_json(Json& j, const ScenarioCReport& r) {
    Json inc = Json::array();
    for (const auto& [i, jj] : r.incidences) inc.push_back(Json::array({i + 1, jj + 1}));
    j = Json{{"incidences", inc},
             {"chain_consistent", r.chain_consistent},
             {"triplet_avoids_p",
              Json::array({r.triplet_avoids_p[0], r.triplet_avoids_p[1], r.triplet_avoids_p[2],
                           r.triplet_avoids_p[3]})},
             {"avoiding_count", r.avoiding_count},
             {"not_all_vanish", r.not_all_vanish}};
    j["chain_end"] = optional_int_1based(r.chain_end);
}

void to_json(Json& j, const CertificateReport& r) {
    j = Json{{"coplanarity", r.coplanarity},
             {"hull_index", optional_int_1based(r.hull_index)},
             {"covered_case", r.covered_case},
             {"incidence", r.incidence},
             {"measure", r.measure},
             {"residual", r.residual},
             {"singular", r.singular},
             {"relation", r.relation},
             {"relation_planted", r.relation_planted},
             {"scenario", to_string(r.scenario_tag)}};
    j["signature"] = r.signature ? Json(*r.signature) : Json(nullptr);
    j["scenario_a"] = r.scenario_a ? Json(*r.scenario_a) : Json(nullptr);
    j["scenario_b"] = r.scenario_b ? Json(*r.scenario_b) : Json(nullptr);
    j["scenario_c"] = r.scenario_c ? Json(*r.scenario_c) : Json(nullptr);
}

void to_json(Json& j, const SampleRecord& r) {
    Json pts = Json::array();
    for (const auto& p : r.config.points()) pts.push_back(vec3_json(p.coords()));
    j = Json{{"index", r.index},
             {"points", pts},
             {"measure", r.measure},
             {"residual", r.residual},
             {"scenario", to_string(r.scenario)},
             {"singular", r.singular}};
    j["certificates"] = r.certificate ? Json(*r.certificate) : Json(nullptr);
}

void to_json(Json& j, const BatchSummary& s) {
    j = Json{{"count", s.count},
             {"min_measure", s.min_measure},
             {"argmin_index", s.argmin_index},
             {"mean_measure", s.mean_measure},
             {"min_residual", s.min_residual},
             {"scenario_counts",
              Json{{"three_distinct", s.scenario_counts[0]},
                   {"double_root", s.scenario_counts[1]},
                   {"triple_root", s.scenario_counts[2]}}},
             {"failures", s.failures},
             {"incidence_failures", s.incidence_failures},
             {"histogram_edges", s.histogram_edges},
             {"histogram", s.histogram}};
}

void to_json(Json& j, const SearchResult& r) {
    Json pts = Json::array();
    for (const auto& p : r.best.points()) pts.push_back(vec3_json(p.coords()));
    j = Json{{"best_points", pts},
             {"best_measure", r.best_measure},
             {"best_restart", r.best_restart},
             {"restarts", r.restarts},
             {"evaluations", r.evaluations},
             {"trace", r.trace}};
}

Configuration read_configuration(const Json& j, const Tolerances& tol) {
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array() ||
        j["points"].size() != 4)
        throw InvalidInputError("configuration JSON must be {\"points\": [[x,y,z] x4]}");
    std::array<BallPoint, 4> pts;
    for (int k = 0; k < 4; ++k) {
        const Json& p = j["points"][static_cast<std::size_t>(k)];
        if (!p.is_array() || p.size() != 3)
            throw InvalidInputError("configuration point must be a 3-vector");
        Vec3 v;
        for (int d = 0; d < 3; ++d) {
            if (!p[static_cast<std::size_t>(d)].is_number())
                throw InvalidInputError("configuration coordinates must be numbers");
            v(d) = p[static_cast<std::size_t>(d)].get<double>();
        }
        if (!v.allFinite() || v.norm() >= 1.0)
            throw InvalidInputError("configuration point norms must be finite and below 1");
        pts[static_cast<std::size_t>(k)] = BallPoint(v);
    }
    return Configuration::make(pts, tol);
}

Configuration read_configuration_source(const std::string& source, const Tolerances& tol) {
    Json j;
    try {
        if (!source.empty() && source.front() == '{') {
            j = Json::parse(source);
        } else if (source == "-") {
            std::stringstream buf;
            buf << std::cin.rdbuf();
            j = Json::parse(buf.str());
        } else {
            std::ifstream in(source);
            if (!in) throw InvalidInputError("cannot open input file: " + source);
            j = Json::parse(in);
        }
    } catch (const Json::parse_error& e) {
        throw InvalidInputError(std::string("input is not valid JSON: ") + e.what());
    }
    return read_configuration(j, tol);
}

RelationVector read_relation(const Json& j) {
    if (!j.is_array() || j.size() != 4)
        throw InvalidInputError("relation JSON must be [[re,im] x4]");
    Vec4c raw;
    for (int k = 0; k < 4; ++k) {
        const Json& e = j[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw InvalidInputError("relation entries must be [re, im]");
        raw(k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return make_relation(raw);
}

bool json_all_finite(const Json& j) {
    if (j.is_number_float()) return std::isfinite(j.get<double>());
    if (j.is_array() || j.is_object()) {
        for (const auto& item : j)
            if (!json_all_finite(item)) return false;
    }
    return true;
}

}  // namespace atiyah4
