#include <benchmark/benchmark.h>

#include "atiyah4/certificates.hpp"
#include "atiyah4/explorer.hpp"

namespace {

using namespace atiyah4;

Configuration bench_config(std::uint64_t index) {
    return sample(SampleSpec{17, 1, SampleCase::non_coplanar, 0.9, 0.05}, index);
}

void bm_ideal_endpoint(benchmark::State& state) {
    const Configuration config = bench_config(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(ideal_endpoint(config.point(0), config.point(1)));
}
BENCHMARK(bm_ideal_endpoint);

void bm_endpoint_oracle(benchmark::State& state) {
    const Configuration config = bench_config(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(endpoint_oracle(config.point(0), config.point(1)));
}
BENCHMARK(bm_endpoint_oracle);

void bm_root_system(benchmark::State& state) {
    const Configuration config = bench_config(1);
    for (auto _ : state) benchmark::DoNotOptimize(root_system(config));
}
BENCHMARK(bm_root_system);

void bm_matrix_and_nullvector(benchmark::State& state) {
    const RootSystem rs = root_system(bench_config(2));
    for (auto _ : state) {
        const AtiyahMatrix m = atiyah_matrix(rs);
        benchmark::DoNotOptimize(independence_measure(m));
        benchmark::DoNotOptimize(relation_nullvector(m));
    }
}
BENCHMARK(bm_matrix_and_nullvector);

void bm_classify_scenario(benchmark::State& state) {
    const auto nv = relation_nullvector(atiyah_matrix(bench_config(3), Tolerances{}));
    for (auto _ : state) benchmark::DoNotOptimize(classify_scenario(nv.c));
}
BENCHMARK(bm_classify_scenario);

void bm_sample_non_coplanar(benchmark::State& state) {
    const SampleSpec spec{23, 1, SampleCase::non_coplanar, 0.9, 0.05};
    std::uint64_t index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample(spec, index++));
}
BENCHMARK(bm_sample_non_coplanar);

void bm_sample_coplanar_hull(benchmark::State& state) {
    const SampleSpec spec{23, 1, SampleCase::coplanar_hull, 0.9, 1e-4};
    std::uint64_t index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample(spec, index++));
}
BENCHMARK(bm_sample_coplanar_hull);

void bm_incidence_audit(benchmark::State& state) {
    const Configuration config = bench_config(4);
    for (auto _ : state) benchmark::DoNotOptimize(incidence_audit(config));
}
BENCHMARK(bm_incidence_audit);

void bm_certify(benchmark::State& state) {
    const Configuration config = bench_config(5);
    for (auto _ : state) benchmark::DoNotOptimize(certify(config));
}
BENCHMARK(bm_certify);

void bm_minimize_restart(benchmark::State& state) {
    Tolerances tol;
    tol.r_max = 0.9;
    tol.min_sep = 0.05;
    for (auto _ : state)
        benchmark::DoNotOptimize(minimize(SearchOptions{11, 1, 100, 1}, tol));
}
BENCHMARK(bm_minimize_restart);

}  // namespace

BENCHMARK_MAIN();
