#include <benchmark/benchmark.h>

#include "finsler/classify.hpp"
#include "finsler/curvature.hpp"
#include "finsler/dsl.hpp"
#include "finsler/transport.hpp"

using namespace finsler;

namespace {

const MetricDefinition& bergman2() {
    static const MetricDefinition metric = make_bergman_ball(2, -4.0);
    return metric;
}

PointState fixed_sample() {
    static const PointState p = draw_samples(bergman2(), {1, 42}).front();
    return p;
}

void bm_partial_table_order4(benchmark::State& state) {
    const auto p = fixed_sample();
    for (auto _ : state) {
        PartialTable table(bergman2(), p);
        const int dirs[4] = {RealDir::base(0), RealDir::fiber(1, 2), RealDir::fiber(1, 2),
                             RealDir::fiber(2, 2)};
        benchmark::DoNotOptimize(table.real_partial(std::span<const int>(dirs, 4)));
    }
}
BENCHMARK(bm_partial_table_order4);

void bm_full_connection_tables(benchmark::State& state) {
    const auto p = fixed_sample();
    for (auto _ : state) {
        PointEvaluation eval(bergman2(), p);
        eval.berwald();
        eval.chern();
        eval.n_coeffs();
        benchmark::DoNotOptimize(eval.cartan().horizontal.max_abs());
    }
}
BENCHMARK(bm_full_connection_tables);

void bm_hsc(benchmark::State& state) {
    const auto p = fixed_sample();
    for (auto _ : state) {
        PointEvaluation eval(bergman2(), p);
        benchmark::DoNotOptimize(hsc(eval));
    }
}
BENCHMARK(bm_hsc);

void bm_classify_point(benchmark::State& state) {
    const auto p = fixed_sample();
    for (auto _ : state) {
        PointEvaluation eval(bergman2(), p);
        benchmark::DoNotOptimize(residual_kahler_finsler(eval));
        benchmark::DoNotOptimize(residual_J_horizontal(eval));
        benchmark::DoNotOptimize(residual_connection_coincidence(eval).max());
    }
}
BENCHMARK(bm_classify_point);

void bm_geodesic_step(benchmark::State& state) {
    const auto p = fixed_sample();
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_geodesic(bergman2(), p.x, p.y, 0.01, 10));
    }
}
BENCHMARK(bm_geodesic_step);

void bm_dsl_parse_eval(benchmark::State& state) {
    const auto metric =
        dsl::compile(dsl::parse("norm2v + 0.5*sqrt(pow(abs2(v[1]),2) + pow(abs2(v[2]),2))", 2));
    const auto p = fixed_sample();
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_f2(metric, p.z, p.v));
    }
}
BENCHMARK(bm_dsl_parse_eval);

} // namespace

BENCHMARK_MAIN();
