#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

using namespace atiyah4;

namespace {

bool same_configuration(const Configuration& a, const Configuration& b) {
    for (int i = 0; i < 4; ++i)
        if (a.point(i).coords() != b.point(i).coords()) return false;
    return true;
}

}  // namespace

TEST_CASE("sampling is deterministic in (seed, index)") {
    for (const SampleCase kind :
         {SampleCase::non_coplanar, SampleCase::coplanar_hull, SampleCase::collinear}) {
        const SampleSpec spec{99, 10, kind, 0.9, 1e-3};
        for (std::uint64_t i = 0; i < 5; ++i)
            CHECK(same_configuration(sample(spec, i), sample(spec, i)));
        CHECK_FALSE(same_configuration(sample(spec, 0), sample(spec, 1)));
    }
}

TEST_CASE("non-coplanar samples satisfy their case") {
    const SampleSpec spec{7, 200, SampleCase::non_coplanar, 0.9, 0.05};
    Tolerances tol;
    tol.r_max = spec.r_max;
    tol.min_sep = spec.min_sep;
    for (std::uint64_t i = 0; i < spec.count; ++i) {
        const Configuration c = sample(spec, i);
        CHECK_FALSE(coplanarity_test(c).is_coplanar);
        for (int a = 0; a < 4; ++a) {
            CHECK(c.point(a).norm() <= spec.r_max + 1e-12);
            for (int b = a + 1; b < 4; ++b)
                CHECK(hyperbolic_distance(c.point(a), c.point(b)) >= spec.min_sep - 1e-12);
        }
    }
}

TEST_CASE("coplanar-hull samples satisfy their case") {
    const SampleSpec spec{8, 200, SampleCase::coplanar_hull, 0.9, 1e-4};
    for (std::uint64_t i = 0; i < spec.count; ++i) {
        const Configuration c = sample(spec, i);
        CHECK(coplanarity_test(c).is_coplanar);
        CHECK(hull_membership(c) == std::optional<int>(3));
    }
}

TEST_CASE("collinear samples share a geodesic") {
    const SampleSpec spec{9, 100, SampleCase::collinear, 0.9, 1e-3};
    for (std::uint64_t i = 0; i < spec.count; ++i) {
        const Configuration c = sample(spec, i);
        const RootSystem rs = root_system(c);
        std::vector<ProjPoint> distinct;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                if (a == b) continue;
                bool seen = false;
                for (const auto& d : distinct)
                    if (proj_equal(rs.root(a, b), d, 1e-6)) seen = true;
                if (!seen) distinct.push_back(rs.root(a, b));
            }
        CHECK(distinct.size() == 2);
    }
}

TEST_CASE("any case cycles through the three kinds") {
    const SampleSpec spec{10, 9, SampleCase::any, 0.9, 1e-4};
    CHECK_FALSE(coplanarity_test(sample(spec, 0)).is_coplanar);
    CHECK(coplanarity_test(sample(spec, 1)).is_coplanar);
    CHECK(hull_membership(sample(spec, 1)) == std::optional<int>(3));
    CHECK(coplanarity_test(sample(spec, 2)).is_coplanar);  // collinear is coplanar too
}

TEST_CASE("batch verification of both covered cases") {
    const SampleSpec nc{21, 1000, SampleCase::non_coplanar, 0.9, 0.05};
    const BatchResult r1 = batch_verify(nc, BatchOptions{false, 1});
    CHECK(r1.summary.count == 1000);
    CHECK(r1.summary.failures.empty());
    CHECK(r1.summary.min_measure > 1e-9);
    CHECK(r1.records.size() == 1000);

    const SampleSpec ch{22, 1000, SampleCase::coplanar_hull, 0.9, 1e-4};
    const BatchResult r2 = batch_verify(ch, BatchOptions{false, 1});
    CHECK(r2.summary.failures.empty());
    CHECK(r2.summary.min_measure > 1e-9);

    std::uint64_t hist_total = 0;
    for (const auto v : r2.summary.histogram) hist_total += v;
    CHECK(hist_total == r2.summary.count);
}

TEST_CASE("batch minima are monotone in the count") {
    const SampleSpec small{23, 200, SampleCase::non_coplanar, 0.9, 0.05};
    SampleSpec big = small;
    big.count = 400;
    const double min_small = batch_verify(small, BatchOptions{false, 1}).summary.min_measure;
    const double min_big = batch_verify(big, BatchOptions{false, 1}).summary.min_measure;
    CHECK(min_big <= min_small);
}

TEST_CASE("parallel batches reproduce the serial result") {
    const SampleSpec spec{24, 200, SampleCase::non_coplanar, 0.9, 0.05};
    const BatchResult serial = batch_verify(spec, BatchOptions{true, 1});
    const BatchResult parallel = batch_verify(spec, BatchOptions{true, 4});
    CHECK(serial.summary.min_measure == parallel.summary.min_measure);
    CHECK(serial.summary.mean_measure == parallel.summary.mean_measure);
    REQUIRE(serial.records.size() == parallel.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
        CHECK(serial.records[i].measure == parallel.records[i].measure);
        CHECK(serial.records[i].residual == parallel.records[i].residual);
        CHECK(same_configuration(serial.records[i].config, parallel.records[i].config));
    }
}

TEST_CASE("batch with certificates populates summaries") {
    const SampleSpec spec{25, 50, SampleCase::non_coplanar, 0.9, 0.05};
    const BatchResult r = batch_verify(spec, BatchOptions{true, 1});
    CHECK(r.summary.incidence_failures == 0);
    for (const auto& rec : r.records) {
        REQUIRE(rec.certificate.has_value());
        CHECK(rec.certificate->covered_case);
    }
}

TEST_CASE("minimize is deterministic and respects constraints") {
    const SearchOptions opts{31, 4, 60, 1};
    const SearchResult a = minimize(opts);
    const SearchResult b = minimize(opts);
    CHECK(a.best_measure == b.best_measure);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) CHECK(a.trace[k] == b.trace[k]);
    CHECK(same_configuration(a.best, b.best));

    // Trace of best objective values is non-increasing.
    for (std::size_t k = 1; k < a.trace.size(); ++k) CHECK(a.trace[k] <= a.trace[k - 1] + 1e-15);

    // The reported best is valid and its measure recomputes identically.
    Tolerances tol;
    for (int i = 0; i < 4; ++i) {
        CHECK(a.best.point(i).norm() <= tol.r_max);
        for (int j = i + 1; j < 4; ++j)
            CHECK(hyperbolic_distance(a.best.point(i), a.best.point(j)) >= tol.min_sep);
    }
    CHECK(independence_measure(atiyah_matrix(a.best)) == a.best_measure);

    const SearchResult par = minimize(SearchOptions{31, 4, 60, 4});
    CHECK(par.best_measure == a.best_measure);

    CHECK_THROWS_AS(minimize(SearchOptions{1, 0, 10, 1}), InvalidInputError);
}
