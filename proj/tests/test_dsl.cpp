#include <doctest.h>

#include <fstream>

#include "finsler/catalog.hpp"
#include "finsler/classify.hpp"
#include "finsler/derivatives.hpp"
#include "finsler/dsl.hpp"
#include "finsler/rng.hpp"

using namespace finsler;

TEST_SUITE_BEGIN("dsl");

TEST_CASE("norm2v compiles to the euclidean metric") {
    const auto ast = dsl::parse("norm2v", 2);
    const auto metric = dsl::compile(ast);
    const auto euclid = make_euclidean(2);
    for (const PointState& p : draw_samples(euclid, {16, 3})) {
        CHECK(evaluate_f2(metric, p.z, p.v) ==
              doctest::Approx(evaluate_f2(euclid, p.z, p.v)).epsilon(1e-14));
    }
    CHECK(validate(metric, {8, 3}).admissible);
}

TEST_CASE("DSL minkowski twin agrees with the native catalog evaluator") {
    const auto ast =
        dsl::parse("norm2v + 0.5*sqrt(pow(abs2(v[1]),2) + pow(abs2(v[2]),2))", 2);
    const auto metric = dsl::compile(ast);
    const auto native = make_minkowski_tk(2, 0.5, 2);
    for (const PointState& p : draw_samples(native, {100, 11})) {
        CHECK(std::abs(evaluate_f2(metric, p.z, p.v) - evaluate_f2(native, p.z, p.v)) <= 1e-12);
    }
}

TEST_CASE("DSL twin matches native derivatives to order 4") {
    const auto metric =
        dsl::compile(dsl::parse("norm2v + 0.5*sqrt(pow(abs2(v[1]),2) + pow(abs2(v[2]),2))", 2));
    const auto native = make_minkowski_tk(2, 0.5, 2);
    std::mt19937_64 gen(77);
    for (const PointState& p : draw_samples(native, {100, 12})) {
        PartialTable dsl_table(metric, p);
        PartialTable native_table(native, p);
        for (int order = 1; order <= 4; ++order) {
            std::vector<int> dirs(order);
            for (int& d : dirs) d = RealDir::fiber(static_cast<int>(gen() % 4), 2);
            const double a = dsl_table.real_partial(std::span<const int>(dirs));
            const double b = native_table.real_partial(std::span<const int>(dirs));
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("DSL twin classifies identically to the native metric") {
    const auto metric =
        dsl::compile(dsl::parse("norm2v + 0.5*sqrt(pow(abs2(v[1]),2) + pow(abs2(v[2]),2))", 2));
    const auto native = make_minkowski_tk(2, 0.5, 2);
    const Tolerances tolerances;
    const auto a = classify(metric, {8, 42}, tolerances);
    const auto b = classify(native, {8, 42}, tolerances);
    REQUIRE(a.predicates.size() == b.predicates.size());
    for (std::size_t i = 0; i < a.predicates.size(); ++i) {
        CHECK(a.predicates[i].name == b.predicates[i].name);
        CHECK(a.predicates[i].verdict == b.predicates[i].verdict);
    }
}

TEST_CASE("sum_i and herm builtins") {
    const auto bergman_like = dsl::parse("sum_i(abs2(v[i])) + abs2(herm)", 2);
    const auto metric = dsl::compile(bergman_like);
    ComplexVector z(2), v(2);
    z << std::complex<double>(0.2, 0.1), std::complex<double>(-0.3, 0.4);
    v << std::complex<double>(1.0, -0.5), std::complex<double>(0.7, 0.2);
    std::complex<double> herm = z[0] * std::conj(v[0]) + z[1] * std::conj(v[1]);
    CHECK(evaluate_f2(metric, z, v) ==
          doctest::Approx(v.squaredNorm() + std::norm(herm)).epsilon(1e-14));
}

TEST_CASE("index errors carry the offending position") {
    CHECK_THROWS_AS(dsl::parse("v[3]", 2), IndexError);
    CHECK_THROWS_AS(dsl::parse("z[0]", 2), IndexError);
    try {
        dsl::parse("norm2v + v[3]", 2);
        FAIL("expected IndexError");
    } catch (const IndexError& e) {
        CHECK(e.line == 1);
        CHECK(e.column == 12);
    }
    // the sum index only binds inside sum_i
    CHECK_THROWS_AS(dsl::parse("abs2(v[i])", 2), IndexError);
}

TEST_CASE("syntax and arity errors") {
    CHECK_THROWS_AS(dsl::parse("norm2v +", 2), SyntaxError);
    CHECK_THROWS_AS(dsl::parse("sqrt(norm2v", 2), SyntaxError);
    CHECK_THROWS_AS(dsl::parse("norm2v norm2z", 2), SyntaxError);
    CHECK_THROWS_AS(dsl::parse("pow(norm2v)", 2), ArityError);
    CHECK_THROWS_AS(dsl::parse("sqrt(norm2v, 2)", 2), ArityError);
    CHECK_THROWS_AS(dsl::parse("pow(norm2v, v[1])", 2), SyntaxError);
    CHECK_THROWS_AS(dsl::parse("frob(v[1])", 2), SyntaxError);
}

TEST_CASE("print-reparse idempotence") {
    const char* sources[] = {
        "norm2v + 0.5*sqrt(pow(abs2(v[1]),2) + pow(abs2(v[2]),2))",
        "sum_i(abs2(v[i]) / pow(1 - abs2(z[i]), 2))",
        "-re(conj(v[1])*v[2]) + im(z[1]) + abs2(herm)",
        "pow(norm2v, 3/2) / sqrt(1 + norm2z)",
    };
    for (const char* source : sources) {
        const auto ast = dsl::parse(source, 2);
        const std::string printed = dsl::print(ast);
        const auto reparsed = dsl::parse(printed, 2);
        CHECK(dsl::structurally_equal(ast, reparsed));
        CHECK(dsl::print(reparsed) == printed);
    }
}

TEST_CASE("non-real expressions are flagged by validation, not at parse time") {
    const auto metric = dsl::compile(dsl::parse("v[1]", 2));
    const auto report = validate(metric, {4, 5});
    CHECK_FALSE(report.admissible);
}

TEST_CASE("file loading honors the header and powers the classify pipeline") {
    const std::string path = "/tmp/finsler_dsl_test.dsl";
    {
        std::ofstream out(path);
        out << "# n = 2\n";
        out << "norm2v + 0.5*sqrt(pow(abs2(v[1]),2) + pow(abs2(v[2]),2))\n";
    }
    const auto metric = dsl::compile_file(path);
    CHECK(metric.n == 2);
    const auto native = make_minkowski_tk(2, 0.5, 2);
    const auto p = draw_samples(native, {1, 9}).front();
    CHECK(evaluate_f2(metric, p.z, p.v) ==
          doctest::Approx(evaluate_f2(native, p.z, p.v)).epsilon(1e-13));

    const std::string bad = "/tmp/finsler_dsl_bad.dsl";
    {
        std::ofstream out(bad);
        out << "norm2v\n";
    }
    CHECK_THROWS_AS(dsl::compile_file(bad), ParamError);
}

TEST_SUITE_END();
