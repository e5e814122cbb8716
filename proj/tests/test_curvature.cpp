#include <doctest.h>

#include "finsler/curvature.hpp"

using namespace finsler;

namespace {

ComplexVector cvec1(std::complex<double> a) {
    ComplexVector v(1);
    v << a;
    return v;
}

} // namespace

TEST_SUITE_BEGIN("curvature");

TEST_CASE("bergman and fubini-study have the advertised constant curvature") {
    const auto bergman = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(bergman, {16, 42})) {
        PointEvaluation ev(bergman, p);
        CHECK(std::abs(hsc(ev) + 4.0) <= 1e-6);
    }
    const auto fs = make_fubini_study(2, 4.0);
    for (const PointState& p : draw_samples(fs, {16, 42})) {
        PointEvaluation ev(fs, p);
        CHECK(std::abs(hsc(ev) - 4.0) <= 1e-6);
    }
}

TEST_CASE("minkowski metrics are flat") {
    const auto metric = make_minkowski_tk(2, 0.5, 2);
    for (const PointState& p : draw_samples(metric, {8, 42})) {
        PointEvaluation ev(metric, p);
        CHECK(std::abs(hsc(ev)) <= 1e-10);
    }
}

TEST_CASE("hsc is invariant under complex scaling of the fiber") {
    const auto metric = make_bergman_ball(2, -2.5);
    const auto p = draw_samples(metric, {1, 5}).front();
    PointEvaluation base(metric, p);
    const double reference = hsc(base);
    const std::complex<double> lambda(0.6, -1.1);
    PointEvaluation scaled(metric, PointState::from_complex(p.z, ComplexVector(lambda * p.v)));
    CHECK(std::abs(hsc(scaled) - reference) <= 1e-9);
    CHECK(std::abs(hsc_contraction(base).imag()) <= 1e-10);
}

TEST_CASE("a-tensor fixtures") {
    PointEvaluation euclid(make_euclidean(2),
                           PointState::from_complex((ComplexVector(2) << 0.2, 0.0).finished(),
                                                    (ComplexVector(2) << 1.0, 0.4).finished()));
    CHECK(a_tensor(euclid).max_abs() == 0.0);

    // A^1_{1;1 1bar} = -d/dzbar [2 zbar/(1-|z|^2)] = -2/(1-|z|^2)^2, so -2 at z=0.
    const auto poincare = make_bergman_ball(1, -4.0);
    PointEvaluation pv(poincare, PointState::from_complex(cvec1(0.0), cvec1(1.0)));
    const auto A = a_tensor(pv);
    CHECK(std::abs(A(0, 0, 0, 0) - std::complex<double>(-2.0, 0.0)) < 1e-10);
}

TEST_CASE("a-tensor symmetry and contraction on a kahler-berwald metric") {
    const auto bergman = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(bergman, {8, 6})) {
        PointEvaluation ev(bergman, p);
        const auto A = a_tensor(ev);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int m = 0; m < 2; ++m)
                    for (int nu = 0; nu < 2; ++nu)
                        CHECK(std::abs(A(a, b, m, nu) - A(a, m, b, nu)) <= 1e-8);

        // 2 A^a_{b;m nubar} v^b v^m conj(v^nu) = c G v^a with c = -4.
        const double G = ev.fundamental_complex().f2;
        for (int a = 0; a < 2; ++a) {
            std::complex<double> acc = 0.0;
            for (int b = 0; b < 2; ++b)
                for (int m = 0; m < 2; ++m)
                    for (int nu = 0; nu < 2; ++nu)
                        acc += A(a, b, m, nu) * p.v[b] * p.v[m] * std::conj(p.v[nu]);
            CHECK(std::abs(2.0 * acc - (-4.0) * G * p.v[a]) <= 1e-6);
        }
    }
}

TEST_CASE("ricci and the kahler-einstein relation") {
    // n=1 at the origin: Ric_11 = -2, G_11 = 1, factor 4/(c(n+1)) = -1/2.
    const auto poincare = make_bergman_ball(1, -4.0);
    PointEvaluation pv(poincare, PointState::from_complex(cvec1(0.0), cvec1(1.0)));
    const auto result = ricci_and_ke_residual(pv, -4.0);
    CHECK(std::abs(result.ricci(0, 0) - std::complex<double>(-2.0, 0.0)) < 1e-10);
    CHECK(result.ke_residual < 1e-10);
    CHECK_THROWS_AS(ricci_and_ke_residual(pv, 0.0), ParamError);

    const auto bergman = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(bergman, {8, 7})) {
        PointEvaluation ev(bergman, p);
        CHECK(ricci_and_ke_residual(ev, -4.0).ke_residual <= 1e-6);
    }
    const auto fs = make_fubini_study(2, 4.0);
    for (const PointState& p : draw_samples(fs, {8, 7})) {
        PointEvaluation ev(fs, p);
        CHECK(ricci_and_ke_residual(ev, 4.0).ke_residual <= 1e-6);
    }
}

TEST_CASE("constant-curvature scans") {
    const auto bergman_scan = constant_hsc_scan(make_bergman_ball(2, -4.0), {64, 42}, 1e-6);
    CHECK(bergman_scan.constant);
    CHECK(bergman_scan.mean == doctest::Approx(-4.0).epsilon(1e-9));
    CHECK(bergman_scan.max - bergman_scan.min <= 1e-6);
    CHECK(bergman_scan.skipped == 0);

    const auto euclid_scan = constant_hsc_scan(make_euclidean(2), {16, 42}, 1e-6);
    CHECK(euclid_scan.constant);
    CHECK(euclid_scan.mean == doctest::Approx(0.0));

    const auto warped_scan = constant_hsc_scan(make_hermitian_nonkahler(), {64, 42}, 1e-6);
    CHECK_FALSE(warped_scan.constant);
    CHECK(warped_scan.max - warped_scan.min > 0.1);
}

TEST_CASE("fd-oracle mode reproduces the curvature within its tolerance") {
    const auto metric = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(metric, {4, 8})) {
        PointEvaluation ev(metric, p, DerivativeMode::fd_oracle);
        CHECK(std::abs(hsc(ev) + 4.0) <= 1e-3);
    }
}

TEST_SUITE_END();
