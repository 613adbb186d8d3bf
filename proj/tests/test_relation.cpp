#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

using namespace atiyah4;
namespace tt = atiyah4::testing;

namespace {

double angular_error(const RelationVector& a, const RelationVector& b) {
    const double ip = std::abs(a.c.dot(b.c));  // |a^H b|, unit vectors
    return std::acos(std::min(1.0, ip));
}

}  // namespace

TEST_CASE("multihomogeneous symmetric polynomials") {
    const ProjPoint z = ProjPoint::from_affine(0.0);
    const auto s0 = sym_elem(z, z, z);
    CHECK(std::abs(s0[0] - 1.0) < 1e-15);
    CHECK(std::abs(s0[1]) + std::abs(s0[2]) + std::abs(s0[3]) < 1e-15);

    const ProjPoint one = ProjPoint::from_affine(1.0);
    const auto s1 = sym_elem(one, one, one);
    CHECK(std::abs(s1[0] - 1.0) < 1e-15);
    CHECK(std::abs(s1[1] - 3.0) < 1e-15);
    CHECK(std::abs(s1[2] - 3.0) < 1e-15);
    CHECK(std::abs(s1[3] - 1.0) < 1e-15);

    // A root at infinity agrees with the large-t limit directionally.
    const ProjPoint t2 = ProjPoint::from_affine(Complex(2.0, 1.0));
    const ProjPoint t3 = ProjPoint::from_affine(Complex(-0.5, 0.3));
    const auto lim = sym_elem(ProjPoint::infinity(), t2, t3);
    const auto big = sym_elem(ProjPoint::from_affine(1e9), t2, t3);
    Vec4c a, b;
    for (int k = 0; k < 4; ++k) {
        a(k) = lim[static_cast<std::size_t>(k)];
        b(k) = big[static_cast<std::size_t>(k)];
    }
    a.normalize();
    b.normalize();
    const Complex lambda = a.dot(b);  // aligns a with b
    CHECK((a * lambda - b).norm() < 1e-7);
}

TEST_CASE("atiyah polynomial coefficient vectors") {
    RootSystem rs;
    const auto fill = [&](int i, const std::array<ProjPoint, 3>& trip) {
        int n = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) rs.set(i, j, trip[static_cast<std::size_t>(n++)], IdealPoint());
    };
    const ProjPoint zero = ProjPoint::from_affine(0.0);
    const ProjPoint one = ProjPoint::from_affine(1.0);
    const ProjPoint inf = ProjPoint::infinity();

    fill(0, {zero, zero, zero});
    Vec4c p = atiyah_polynomial(0, rs);
    CHECK((p - Vec4c(1, 0, 0, 0)).norm() < 1e-15);

    fill(0, {inf, inf, inf});
    p = atiyah_polynomial(0, rs);
    CHECK((p - Vec4c(0, 0, 0, 1)).norm() < 1e-15);

    fill(0, {zero, one, inf});
    p = atiyah_polynomial(0, rs);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK((p - Vec4c(0, s, -s, 0)).norm() < 1e-14);
}

TEST_CASE("collinear configuration gives the anti-diagonal matrix") {
    const AtiyahMatrix m = atiyah_matrix(tt::collinear_z());
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col)
            CHECK(std::abs(std::abs(m.m(row, col)) - (row + col == 3 ? 1.0 : 0.0)) < 1e-12);
    CHECK(std::abs(independence_measure(m) - 1.0) < 1e-12);
}

TEST_CASE("columns have unit norm") {
    Rng rng(31);
    for (int k = 0; k < 50; ++k) {
        const AtiyahMatrix m = atiyah_matrix(tt::random_non_coplanar(rng));
        for (int col = 0; col < 4; ++col) CHECK(std::abs(m.m.col(col).norm() - 1.0) < 1e-13);
    }
}

TEST_CASE("independence measure basics") {
    AtiyahMatrix ident{Eigen::Matrix4cd::Identity(), {1.0, 1.0, 1.0, 1.0}};
    CHECK(independence_measure(ident) == doctest::Approx(1.0));
    const auto nv = relation_nullvector(ident);
    CHECK(nv.residual == doctest::Approx(1.0));

    AtiyahMatrix repeated = ident;
    repeated.m.col(3) = repeated.m.col(0);
    CHECK(independence_measure(repeated) == doctest::Approx(0.0));
    CHECK(relation_nullvector(repeated).residual < 1e-15);
}

TEST_CASE("planted null vectors are recovered") {
    Rng rng(32);
    for (int k = 0; k < 100; ++k) {
        const RelationVector c = tt::random_relation(rng);
        const RootSystem rs = tt::plant_system(c, rng);
        const AtiyahMatrix m = atiyah_matrix(rs);
        const auto nv = relation_nullvector(m);
        CHECK(nv.residual < 1e-10);
        CHECK(angular_error(nv.c, c) < 1e-6);
    }
}

TEST_CASE("generic configurations are far from singular") {
    Rng rng(33);
    for (int k = 0; k < 100; ++k) {
        const auto nv = relation_nullvector(atiyah_matrix(tt::random_non_coplanar(rng)));
        CHECK(nv.residual > 1e-6);
    }
}

TEST_CASE("relation evaluation matches the normal forms") {
    const ProjPoint one = ProjPoint::from_affine(1.0);
    // s2 = 3 at (1, 1, 1).
    CHECK(std::abs(evaluate_relation(tt::standard_a(), one, one, one)) < 1e-14);
    // s1 = 3 at (0, 1, 2).
    CHECK(std::abs(evaluate_relation(tt::standard_b(), ProjPoint::from_affine(0.0), one,
                                     ProjPoint::from_affine(2.0))) < 1e-14);
    // s3 = 0 whenever a root is 0.
    CHECK(std::abs(evaluate_relation(tt::standard_c(), ProjPoint::from_affine(0.0),
                                     ProjPoint::from_affine(Complex(2, 3)),
                                     ProjPoint::from_affine(Complex(-1, 1)))) < 1e-14);
}

TEST_CASE("complete triplet") {
    Rng rng(34);
    const ProjPoint t3a = complete_triplet(tt::standard_c(), tt::random_proj_point(rng),
                                           tt::random_proj_point(rng));
    CHECK(proj_equal(t3a, ProjPoint::from_affine(0.0), 1e-12));

    const ProjPoint t3b = complete_triplet(tt::standard_b(), ProjPoint::from_affine(0.0),
                                           ProjPoint::from_affine(1.0));
    CHECK(proj_equal(t3b, ProjPoint::from_affine(2.0), 1e-12));

    for (int k = 0; k < 2000; ++k) {
        const RelationVector c = tt::random_relation(rng);
        const ProjPoint w1 = tt::random_proj_point(rng);
        const ProjPoint w2 = tt::random_proj_point(rng);
        ProjPoint w3;
        try {
            w3 = complete_triplet(c, w1, w2);
        } catch (const DegenerateInputError&) {
            continue;
        }
        CHECK(std::abs(evaluate_relation(c, w1, w2, w3)) < 1e-12);
    }

    // sigma0-only relation with a root at infinity leaves the third point free.
    Vec4c raw;
    raw << Complex(0), Complex(0), Complex(0), Complex(1);
    CHECK_THROWS_AS(
        complete_triplet(make_relation(raw), ProjPoint::infinity(), ProjPoint::from_affine(1.0)),
        DegenerateInputError);
}

TEST_CASE("polarization reproduces the scenario normal forms") {
    const RelationCubic ga = polarize(tt::standard_a());
    int hits = 0;
    for (const auto& target :
         {ProjPoint::infinity(), ProjPoint::from_affine(1.0), ProjPoint::from_affine(-1.0)})
        for (const auto& r : ga.roots)
            if (proj_equal(r, target, 1e-7)) {
                ++hits;
                break;
            }
    CHECK(hits == 3);

    const RelationCubic gb = polarize(tt::standard_b());
    int inf_mult = 0;
    bool has_one = false;
    for (int k = 0; k < 3; ++k) {
        if (proj_equal(gb.roots[static_cast<std::size_t>(k)], ProjPoint::infinity(), 1e-7))
            inf_mult = gb.multiplicity[static_cast<std::size_t>(k)];
        if (proj_equal(gb.roots[static_cast<std::size_t>(k)], ProjPoint::from_affine(1.0), 1e-7))
            has_one = true;
    }
    CHECK(inf_mult == 2);
    CHECK(has_one);

    const RelationCubic gc = polarize(tt::standard_c());
    for (int k = 0; k < 3; ++k) {
        CHECK(proj_equal(gc.roots[static_cast<std::size_t>(k)], ProjPoint::from_affine(0.0), 1e-7));
        CHECK(gc.multiplicity[static_cast<std::size_t>(k)] == 3);
    }
}

TEST_CASE("polarization identity and symmetry") {
    Rng rng(35);
    for (int k = 0; k < 10000; ++k) {
        const RelationVector c = tt::random_relation(rng);
        const ProjPoint w = tt::random_proj_point(rng);
        const RelationCubic g = polarize(c);
        const Complex lhs = trilinear_eval(c, w, w, w);
        const Complex rhs = g.eval(w);
        CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(rhs)));
    }
    for (int k = 0; k < 1000; ++k) {
        const RelationVector c = tt::random_relation(rng);
        const ProjPoint w1 = tt::random_proj_point(rng);
        const ProjPoint w2 = tt::random_proj_point(rng);
        const ProjPoint w3 = tt::random_proj_point(rng);
        const Complex base = trilinear_eval(c, w1, w2, w3);
        const double scale = std::max(1.0, std::abs(base));
        CHECK(std::abs(trilinear_eval(c, w1, w3, w2) - base) < 1e-14 * scale);
        CHECK(std::abs(trilinear_eval(c, w2, w1, w3) - base) < 1e-14 * scale);
        CHECK(std::abs(trilinear_eval(c, w2, w3, w1) - base) < 1e-14 * scale);
        CHECK(std::abs(trilinear_eval(c, w3, w1, w2) - base) < 1e-14 * scale);
        CHECK(std::abs(trilinear_eval(c, w3, w2, w1) - base) < 1e-14 * scale);
    }
}

TEST_CASE("scenario classification") {
    const Scenario sa = classify_scenario(tt::standard_a());
    CHECK(sa.tag == ScenarioTag::three_distinct);
    CHECK(mobius_equal(sa.normalizer, MobiusMap(), 1e-7));

    const Scenario sb = classify_scenario(tt::standard_b());
    CHECK(sb.tag == ScenarioTag::double_root);
    CHECK(mobius_equal(sb.normalizer, MobiusMap(), 1e-7));

    const Scenario sc = classify_scenario(tt::standard_c());
    CHECK(sc.tag == ScenarioTag::triple_root);
    CHECK(mobius_equal(sc.normalizer, MobiusMap(), 1e-7));

    Vec4c zero = Vec4c::Zero();
    CHECK_THROWS_AS(classify_scenario(RelationVector{zero}), InvalidInputError);
}

TEST_CASE("perturbed double root honors the clustering tolerance") {
    const double eps = 1e-12;
    const RelationVector c = relation_from_roots({ProjPoint::infinity(),
                                                  ProjPoint::from_affine(1.0 + eps),
                                                  ProjPoint::from_affine(1.0 - eps)});
    CHECK(classify_scenario(c).tag == ScenarioTag::double_root);  // default tol 1e-8

    Tolerances sharp;
    sharp.root_cluster = 1e-14;
    CHECK(classify_scenario(c, sharp).tag == ScenarioTag::three_distinct);
}

TEST_CASE("bridge between matrix rows and the relation") {
    Rng rng(36);
    for (int k = 0; k < 50; ++k) {
        const RootSystem rs = root_system(tt::random_non_coplanar(rng));
        const AtiyahMatrix m = atiyah_matrix(rs);
        const RelationVector c = tt::random_relation(rng);
        Vec4c ell;
        ell << c.c(3), -c.c(2), c.c(1), -c.c(0);
        for (int j = 0; j < 4; ++j) {
            const auto trip = rs.triplet(j);
            const Complex via_matrix = (ell.transpose() * m.m)(j);
            const Complex via_relation =
                m.column_scales[static_cast<std::size_t>(j)] *
                evaluate_relation(c, trip[0], trip[1], trip[2]);
            CHECK(std::abs(via_matrix - via_relation) <=
                  1e-12 * std::max(1.0, std::abs(via_matrix)));
        }
    }
}

TEST_CASE("independence measure is invariant under relabeling") {
    Rng rng(37);
    const Configuration config = tt::random_non_coplanar(rng);
    const double base = independence_measure(atiyah_matrix(config));
    std::array<int, 4> perm = {0, 1, 2, 3};
    std::sort(perm.begin(), perm.end());
    do {
        std::array<BallPoint, 4> pts;
        for (int i = 0; i < 4; ++i)
            pts[static_cast<std::size_t>(i)] = config.point(perm[static_cast<std::size_t>(i)]);
        const double permuted = independence_measure(atiyah_matrix(Configuration::make(pts)));
        CHECK(std::abs(permuted - base) < 1e-12);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("rank classification is mobius invariant") {
    Rng rng(38);
    for (int k = 0; k < 20; ++k) {
        const Configuration config = tt::random_non_coplanar(rng);
        const RootSystem rs = root_system(config);
        const MobiusMap m = tt::random_mobius(rng);
        const double r1 = relation_nullvector(atiyah_matrix(rs)).residual;
        const double r2 = relation_nullvector(atiyah_matrix(transform(rs, m))).residual;
        CHECK((r1 < 1e-10) == (r2 < 1e-10));
    }
    // Planted singular systems stay singular under transport.
    for (int k = 0; k < 20; ++k) {
        const RootSystem rs = tt::plant_system(tt::random_relation(rng), rng);
        const RootSystem moved = transform(rs, tt::random_mobius(rng));
        CHECK(relation_nullvector(atiyah_matrix(moved)).residual < 1e-7);
    }
}

TEST_CASE("normalize_relation reaches the standard forms") {
    Rng rng(40);
    const RelationVector standards[3] = {tt::standard_a(), tt::standard_b(), tt::standard_c()};
    for (int k = 0; k < 50; ++k) {
        const MobiusMap m = tt::random_mobius(rng);
        for (const RelationVector& std_c : standards) {
            const NormalizedRelation nr = normalize_relation(transport_relation(std_c, m));
            const double ip = std::abs(nr.standard.c.dot(std_c.c));
            CHECK(std::acos(std::min(1.0, ip)) < 1e-6);
        }
    }
}

TEST_CASE("scenario classification is transport equivariant") {
    Rng rng(39);
    for (int k = 0; k < 100; ++k) {
        const MobiusMap m = tt::random_mobius(rng);
        for (const RelationVector& c : {tt::standard_a(), tt::standard_b(), tt::standard_c(),
                                        tt::random_relation(rng)}) {
            const ScenarioTag before = classify_scenario(c).tag;
            const ScenarioTag after = classify_scenario(transport_relation(c, m)).tag;
            CHECK(before == after);
        }
    }
}
