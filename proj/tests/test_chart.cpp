#include <doctest.h>

#include <random>

#include "finsler/chart.hpp"
#include "finsler/derivatives.hpp"

using namespace finsler;

TEST_SUITE_BEGIN("chart");

TEST_CASE("forward, inverse, and jacobian of the built-in maps") {
    const auto quadratic = Biholomorphism::quadratic_perturbation(2, 0.05, 9, 10.0);
    ComplexVector z(2);
    z << std::complex<double>(0.3, -0.2), std::complex<double>(0.1, 0.4);
    const ComplexVector w = quadratic.forward(z);
    CHECK((quadratic.inverse(w) - z).norm() <= 1e-10);

    // Jacobian against a finite difference of the forward map.
    const double h = 1e-7;
    const auto J = quadratic.jacobian(z);
    for (int m = 0; m < 2; ++m) {
        ComplexVector zp = z, zm = z;
        zp[m] += h;
        zm[m] -= h;
        const ComplexVector column = (quadratic.forward(zp) - quadratic.forward(zm)) / (2 * h);
        for (int b = 0; b < 2; ++b) CHECK(std::abs(J(b, m) - column[b]) <= 1e-6);
    }
}

TEST_CASE("pushforward by the identity is pointwise equal") {
    const auto metric = make_bergman_ball(2, -4.0);
    const auto pushed = pushforward_metric(metric, Biholomorphism::identity(2));
    for (const PointState& p : draw_samples(metric, {8, 3})) {
        CHECK(evaluate_f2(pushed, p.z, p.v) ==
              doctest::Approx(evaluate_f2(metric, p.z, p.v)).epsilon(1e-12));
    }
}

TEST_CASE("pushforward by w = 2z rescales the euclidean metric") {
    const auto metric = make_euclidean(2);
    const auto doubled =
        pushforward_metric(metric, Biholomorphism::linear_map(2.0 * Eigen::MatrixXcd::Identity(2, 2)));
    ComplexVector w(2), u(2);
    w << std::complex<double>(0.2, 0.1), std::complex<double>(-0.4, 0.0);
    u << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 2.0);
    CHECK(evaluate_f2(doubled, w, u) == doctest::Approx(u.squaredNorm() / 4.0).epsilon(1e-12));
}

TEST_CASE("pushforward of bergman under a quadratic perturbation stays admissible") {
    const auto metric = make_bergman_ball(2, -4.0);
    const auto phi = Biholomorphism::quadratic_perturbation(2, 0.05, 41, 10.0);
    auto pushed = pushforward_metric(metric, phi);
    pushed.sample_domain.radius = 0.5; // safely inside the warped ball
    const auto report = validate(pushed, {8, 42});
    CHECK(report.admissible);
}

TEST_CASE("derivatives of the pushforward evaluator are exact") {
    // The jet-level Newton inversion must deliver derivatives, not just
    // values: compare fourth-order partials against finite differences.
    const auto metric = make_bergman_ball(2, -4.0);
    const auto phi = Biholomorphism::quadratic_perturbation(2, 0.05, 43, 10.0);
    const auto pushed = pushforward_metric(metric, phi);
    const auto p = draw_samples(metric, {1, 44}).front();
    PartialTable table(pushed, p);
    std::mt19937_64 gen(4);
    for (int order = 1; order <= 4; ++order) {
        std::vector<int> dirs(order);
        int base_budget = 2;
        for (int& d : dirs) {
            const int idx = static_cast<int>(gen() % 4);
            if (base_budget > 0 && (gen() & 1u)) {
                d = RealDir::base(idx);
                --base_budget;
            } else {
                d = RealDir::fiber(idx, 2);
            }
        }
        const double jet_value = table.real_partial(std::span<const int>(dirs));
        const double fd_value = fd_partial(pushed, p, std::span<const int>(dirs));
        CHECK(std::abs(jet_value - fd_value) <=
              1e-5 * std::max({1.0, std::abs(jet_value), std::abs(fd_value)}));
    }
}

TEST_CASE("transformation laws: euclidean under a linear map are exactly zero") {
    const auto metric = make_euclidean(2);
    Eigen::MatrixXcd A(2, 2);
    A << std::complex<double>(1.0, 0.5), std::complex<double>(0.25, 0.0),
        std::complex<double>(0.0, -0.3), std::complex<double>(2.0, 0.0);
    const auto p = draw_samples(metric, {1, 11}).front();
    const auto residuals = transform_residuals(metric, Biholomorphism::linear_map(A), p, Tolerances{});
    CHECK(residuals.max() <= 1e-10);
}

TEST_CASE("transformation laws on the bergman ball") {
    const auto metric = make_bergman_ball(2, -4.0);
    Eigen::MatrixXcd A(2, 2);
    A << std::complex<double>(0.9, 0.1), std::complex<double>(0.2, -0.1),
        std::complex<double>(-0.15, 0.05), std::complex<double>(1.1, 0.2);
    const auto linear = Biholomorphism::linear_map(A);
    const auto quadratic = Biholomorphism::quadratic_perturbation(2, 0.05, 47, 10.0);
    for (const PointState& p : draw_samples(metric, {8, 13})) {
        CHECK(transform_residuals(metric, linear, p, Tolerances{}).max() <= 1e-7);
        CHECK(transform_residuals(metric, quadratic, p, Tolerances{}).max() <= 1e-6);
    }
}

TEST_CASE("vertical law is purely tensorial: hessian perturbations do not move it") {
    const auto metric = make_bergman_ball(2, -4.0);
    const auto p = draw_samples(metric, {1, 17}).front();
    for (std::uint64_t seed : {101u, 202u, 303u}) {
        const auto phi = Biholomorphism::quadratic_perturbation(2, 0.08, seed, 10.0);
        const auto residuals = transform_residuals(metric, phi, p, Tolerances{});
        CHECK(residuals.vertical <= 1e-7);
        // while a forged hessian term in the vertical law would not cancel:
        double forged = 0.0;
        for (int b = 0; b < 2; ++b)
            for (int m = 0; m < 2; ++m)
                for (int nu = 0; nu < 2; ++nu) forged = std::max(forged, std::abs(phi.quadratic(b, m, nu)));
        CHECK(forged > 1e-3);
    }
}

TEST_CASE("nonlinear law is the v-contraction of the horizontal law") {
    const auto metric = make_bergman_ball(2, -4.0);
    const auto phi = Biholomorphism::quadratic_perturbation(2, 0.05, 59, 10.0);
    const auto p = draw_samples(metric, {1, 19}).front();

    PointEvaluation eval_a(metric, p);
    const auto& na = eval_a.n_coeffs();
    const Eigen::MatrixXcd Jab = phi.jacobian(p.z);
    const Eigen::MatrixXcd Jba = Jab.inverse();
    const ComplexVector vb = Jab * p.v;

    // Contract the transformed horizontal coefficients with v_B and compare
    // against the directly transformed nonlinear coefficients.
    for (int b = 0; b < 2; ++b)
        for (int g = 0; g < 2; ++g) {
            std::complex<double> contracted = 0.0;
            for (int a = 0; a < 2; ++a) {
                std::complex<double> law = 0.0;
                for (int m = 0; m < 2; ++m)
                    for (int nu = 0; nu < 2; ++nu) {
                        std::complex<double> push = 0.0;
                        for (int dd = 0; dd < 2; ++dd) push += na.horizontal(dd, m, nu) * Jab(b, dd);
                        law += Jba(m, a) * Jba(nu, g) * (push - 2.0 * phi.quadratic(b, m, nu));
                    }
                contracted += law * vb[a];
            }
            std::complex<double> direct = 0.0;
            for (int nu = 0; nu < 2; ++nu) {
                std::complex<double> push = 0.0;
                for (int dd = 0; dd < 2; ++dd) push += na.nonlinear(dd, nu) * Jab(b, dd);
                std::complex<double> hessian = 0.0;
                for (int m = 0; m < 2; ++m) hessian += 2.0 * phi.quadratic(b, m, nu) * p.v[m];
                direct += Jba(nu, g) * (push - hessian);
            }
            CHECK(std::abs(contracted - direct) <= 1e-8);
        }
}

TEST_CASE("hypothesis guard: non-parallel metrics reject the law") {
    const auto metric = make_hermitian_nonkahler();
    const auto p = PointState::from_complex((ComplexVector(2) << 0.0, 0.5).finished(),
                                            (ComplexVector(2) << 1.0, 1.0).finished());
    const auto phi = Biholomorphism::quadratic_perturbation(2, 0.05, 61, 10.0);
    CHECK_THROWS_AS(transform_residuals(metric, phi, p, Tolerances{}), HypothesisError);
}

TEST_SUITE_END();
