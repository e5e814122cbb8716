#include <doctest.h>

#include "finsler/classify.hpp"
#include "finsler/transport.hpp"

using namespace finsler;

namespace {

Verdict verdict_of(const ClassificationReport& report, const char* name) {
    const auto* p = report.find(name);
    REQUIRE(p != nullptr);
    return p->verdict;
}

} // namespace

TEST_SUITE_BEGIN("classify");

TEST_CASE("bergman ball: kahler-berwald with hermitian-quadratic tensor") {
    const auto report = classify(make_bergman_ball(2, -4.0), {16, 42}, Tolerances{});
    CHECK(verdict_of(report, "kahler_finsler") == Verdict::holds);
    CHECK(verdict_of(report, "complex_berwald") == Verdict::holds);
    CHECK(verdict_of(report, "kahler_berwald") == Verdict::holds);
    CHECK(verdict_of(report, "hermitian_quadratic") == Verdict::holds);
    CHECK(verdict_of(report, "landsberg") == Verdict::holds);
    CHECK(verdict_of(report, "J_horizontal_parallel") == Verdict::holds);
    CHECK(verdict_of(report, "J_vertical_parallel") == Verdict::holds);
    CHECK(report.skipped_samples == 0);
    for (const auto& implication : report.implications) CHECK(implication.consistent);
}

TEST_CASE("minkowski: flat non-hermitian-quadratic kahler-berwald") {
    const auto report = classify(make_minkowski_tk(2, 0.5, 2), {16, 42}, Tolerances{});
    CHECK(verdict_of(report, "complex_berwald") == Verdict::holds);
    CHECK(verdict_of(report, "locally_minkowski") == Verdict::holds);
    CHECK(verdict_of(report, "kahler_finsler") == Verdict::holds);
    CHECK(verdict_of(report, "hermitian_quadratic") == Verdict::fails);
    CHECK(report.find("kahler_finsler")->max_residual <= 1e-9);
    CHECK(report.find("complex_berwald")->max_residual <= 1e-9);
    for (const auto& implication : report.implications) CHECK(implication.consistent);
}

TEST_CASE("hermitian nonkahler: kahler predicates fail with the closed-form residual") {
    const auto metric = make_hermitian_nonkahler();
    const auto report = classify(metric, {16, 42}, Tolerances{});
    CHECK(verdict_of(report, "kahler_finsler") == Verdict::fails);
    CHECK(verdict_of(report, "kahler_berwald") == Verdict::fails);
    CHECK(verdict_of(report, "hermitian_quadratic") == Verdict::holds);
    CHECK(verdict_of(report, "J_horizontal_parallel") == Verdict::fails);
    for (const auto& implication : report.implications) CHECK(implication.consistent);

    // Gamma^1_{1;2} - Gamma^1_{2;1} = zbar^2/(1+|z^2|^2) at z=(0, 0.5): 0.4.
    PointEvaluation stressed(metric,
                             PointState::from_complex((ComplexVector(2) << 0.0, 0.5).finished(),
                                                      (ComplexVector(2) << 1.0, 1.0).finished()));
    CHECK(residual_kahler_finsler(stressed) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(residual_J_horizontal(stressed) >= 1e-3);
}

TEST_CASE("polydisk stress case classifies as kahler-berwald") {
    const auto report = classify(make_polydisk_tk(2, 0.5, 2), {8, 42}, Tolerances{});
    CHECK(verdict_of(report, "kahler_finsler") == Verdict::holds);
    CHECK(verdict_of(report, "complex_berwald") == Verdict::holds);
    CHECK(verdict_of(report, "hermitian_quadratic") == Verdict::fails);
    CHECK(verdict_of(report, "J_horizontal_parallel") == Verdict::holds);
    for (const auto& implication : report.implications) CHECK(implication.consistent);
}

TEST_CASE("J residual examples") {
    PointEvaluation euclid(make_euclidean(2),
                           PointState::from_complex((ComplexVector(2) << 0.3, 0.1).finished(),
                                                    (ComplexVector(2) << 1.0, 0.5).finished()));
    CHECK(residual_J_horizontal(euclid) == 0.0);
    CHECK(residual_J_vertical(euclid) == 0.0);
    CHECK(residual_H_J_invariance(euclid) == 0.0);

    const auto bergman = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(bergman, {8, 1})) {
        PointEvaluation ev(bergman, p);
        CHECK(residual_J_horizontal(ev) <= 1e-8);
        CHECK(residual_J_vertical(ev) <= 1e-8);
        CHECK(residual_H_J_invariance(ev) <= 1e-9);
        const auto coincidence = residual_connection_coincidence(ev);
        CHECK(coincidence.max() <= 1e-8);
    }
}

TEST_CASE("implication: horizontal parallelism bounds the nonlinear invariance") {
    // Contraction of the horizontal relation with y gives the nonlinear one.
    for (const char* id : {"bergman_ball", "minkowski_tk", "hermitian_nonkahler", "polydisk_tk"}) {
        const auto metric = make_catalog_metric(id, {.n = 2});
        for (const PointState& p : draw_samples(metric, {4, 7})) {
            PointEvaluation ev(metric, p);
            const double tol = 1e-7;
            if (residual_J_horizontal(ev) <= tol)
                CHECK(residual_H_J_invariance(ev) <= tol * (1.0 + 2 * p.y.lpNorm<1>()));
        }
    }
}

TEST_CASE("determinism: identical plans give identical reports") {
    const auto metric = make_minkowski_tk(2, 0.5, 2);
    const auto a = classify(metric, {8, 42}, Tolerances{});
    const auto b = classify(metric, {8, 42}, Tolerances{});
    REQUIRE(a.predicates.size() == b.predicates.size());
    for (std::size_t i = 0; i < a.predicates.size(); ++i) {
        CHECK(a.predicates[i].per_sample == b.predicates[i].per_sample);
        CHECK(a.predicates[i].max_residual == b.predicates[i].max_residual);
    }
}

TEST_CASE("monotone sampling: enlarging the plan never flips fails to holds") {
    const auto metric = make_hermitian_nonkahler();
    const auto small = classify(metric, {8, 42}, Tolerances{});
    const auto large = classify(metric, {24, 42}, Tolerances{});
    for (std::size_t i = 0; i < small.predicates.size(); ++i) {
        CHECK(large.predicates[i].max_residual >= small.predicates[i].max_residual - 1e-15);
        if (small.predicates[i].verdict == Verdict::fails)
            CHECK(large.predicates[i].verdict == Verdict::fails);
    }
}

TEST_CASE("verdicts near tolerance are indeterminate") {
    CHECK(verdict_for(0.5e-7, 1e-7) == Verdict::holds);
    CHECK(verdict_for(1e-7, 1e-7) == Verdict::holds);
    CHECK(verdict_for(5e-7, 1e-7) == Verdict::indeterminate);
    CHECK(verdict_for(1.1e-6, 1e-7) == Verdict::fails);
}

TEST_CASE("equivalence verifier: consistent across the catalog") {
    EquivalenceOptions options;
    options.transport_steps = 120;
    options.transport_probes = 1;

    const auto bergman = verify_equivalences(make_bergman_ball(2, -4.0), {6, 42}, Tolerances{},
                                             DerivativeMode::jet, options);
    CHECK(bergman.all_consistent);
    for (const auto& check : bergman.checks)
        for (const auto& leg : check.legs)
            if (leg.applicable) CHECK(leg.value);

    const auto nonkahler = verify_equivalences(make_hermitian_nonkahler(), {6, 42}, Tolerances{},
                                               DerivativeMode::jet, options);
    CHECK(nonkahler.all_consistent); // legs all false or hypothesis skipped

    const auto minkowski = verify_equivalences(make_minkowski_tk(2, 0.5, 2), {6, 42}, Tolerances{},
                                               DerivativeMode::jet, options);
    CHECK(minkowski.all_consistent);
    for (const auto& check : minkowski.checks)
        if (check.name == "kahler_berwald_transport")
            for (const auto& leg : check.legs)
                if (leg.applicable) CHECK(leg.value);
}

TEST_SUITE_END();
