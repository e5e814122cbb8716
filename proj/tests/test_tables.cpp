#include <doctest.h>

#include <cmath>

#include "finsler/catalog.hpp"
#include "finsler/rng.hpp"
#include "finsler/tables.hpp"

using namespace finsler;

namespace {

ComplexVector cvec2(std::complex<double> a, std::complex<double> b) {
    ComplexVector v(2);
    v << a, b;
    return v;
}

ComplexVector cvec1(std::complex<double> a) {
    ComplexVector v(1);
    v << a;
    return v;
}

} // namespace

TEST_SUITE_BEGIN("tables");

TEST_CASE("fundamental tensors on fixtures") {
    const auto euclid = make_euclidean(2);
    PointEvaluation ev(euclid, PointState::from_complex(cvec2(0, 0), cvec2(1, 0.5)));
    CHECK((ev.fundamental_real().g - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
    CHECK((ev.fundamental_complex().G - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);

    const auto bergman = make_bergman_ball(1, -4.0);
    PointEvaluation bv(bergman, PointState::from_complex(cvec1(0.5), cvec1(1.0)));
    CHECK(std::abs(bv.fundamental_complex().G(0, 0) - 16.0 / 9.0) < 1e-12);

    const auto mink = make_minkowski_tk(2, 1.0, 2);
    PointEvaluation mv(mink, PointState::from_complex(cvec2(0, 0), cvec2(1, 0)));
    CHECK(std::abs(mv.fundamental_complex().G(0, 0) - 2.0) < 1e-12);
    CHECK(std::abs(mv.fundamental_complex().G(1, 1) - 1.0) < 1e-12);
    CHECK(std::abs(mv.fundamental_complex().G(0, 1)) < 1e-12);
}

TEST_CASE("singular metric raises with diagnostics") {
    MetricDefinition degenerate = make_euclidean(2);
    degenerate.evaluate = [](std::span<const ComplexJet>, std::span<const ComplexJet> v) {
        return ComplexJet(abs2(v[0]));
    };
    PointEvaluation ev(degenerate, PointState::from_complex(cvec2(0, 0), cvec2(1, 1)));
    CHECK_THROWS_AS(ev.fundamental_complex(), SingularMetricError);
}

TEST_CASE("spray vanishes for fiber-only metrics and scales quadratically") {
    for (const char* id : {"euclidean", "minkowski_tk"}) {
        const auto metric = make_catalog_metric(id, {.n = 2});
        for (const PointState& p : draw_samples(metric, {4, 21})) {
            PointEvaluation ev(metric, p);
            CHECK(ev.spray().spray.cwiseAbs().maxCoeff() < 1e-12);
            CHECK(ev.spray().nonlinear.cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    const auto bergman = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(bergman, {4, 22})) {
        PointEvaluation ev(bergman, p);
        PointEvaluation scaled(bergman, PointState::from_complex(p.z, ComplexVector(2.0 * p.v)));
        const double deviation =
            (scaled.spray().spray - 4.0 * ev.spray().spray).cwiseAbs().maxCoeff();
        CHECK(deviation / std::max(1.0, ev.spray().spray.cwiseAbs().maxCoeff()) < 1e-10);
    }
}

TEST_CASE("poincare spray matches the tanh geodesic oracle") {
    // x(t) = tanh(t) solves xddot = -2 Ghat^1 with xdot = 1 - x^2, so
    // Ghat^1(x; 1-x^2) = x (1-x^2).
    const auto poincare = make_bergman_ball(1, -4.0);
    const double x = 0.3;
    const double u = 1.0 - x * x;
    PointEvaluation ev(poincare, PointState::from_complex(cvec1(x), cvec1(u)));
    CHECK(ev.spray().spray[0] == doctest::Approx(x * u).epsilon(1e-12));
    CHECK(std::abs(ev.spray().spray[1]) < 1e-14);
}

TEST_CASE("nonlinear connection contracts the spray (Euler)") {
    const auto bergman = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(bergman, {8, 23})) {
        PointEvaluation ev(bergman, p);
        const Eigen::VectorXd contraction = ev.spray().nonlinear * p.y;
        CHECK((contraction - 2.0 * ev.spray().spray).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("cartan tables: euclidean zero, symmetry, contraction identities") {
    const auto euclid = make_euclidean(2);
    PointEvaluation zero(euclid, PointState::from_complex(cvec2(0.1, 0.2), cvec2(1, 0.5)));
    CHECK(zero.cartan().horizontal.max_abs() < 1e-13);
    CHECK(zero.cartan().vertical.max_abs() < 1e-13);

    const auto bergman = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(bergman, {8, 24})) {
        PointEvaluation ev(bergman, p);
        const auto& cart = ev.cartan();
        const auto& nl = ev.spray().nonlinear;
        const int d = 4;
        double hcp = 0.0, vertical_contraction = 0.0, symmetry = 0.0;
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) {
                double ch = 0.0, cv = 0.0;
                for (int l = 0; l < d; ++l) {
                    ch += cart.horizontal(k, l, j) * p.y[l];
                    cv += cart.vertical(k, l, j) * p.y[l];
                    symmetry = std::max(symmetry,
                                        std::abs(cart.horizontal(k, j, l) - cart.horizontal(k, l, j)));
                }
                hcp = std::max(hcp, std::abs(ch - nl(k, j)));
                vertical_contraction = std::max(vertical_contraction, std::abs(cv));
            }
        CHECK(hcp < 1e-9);
        CHECK(vertical_contraction < 1e-9);
        CHECK(symmetry < 1e-10);
    }
}

TEST_CASE("minkowski cartan: horizontal zero, vertical nonzero") {
    const auto mink = make_minkowski_tk(2, 1.0, 2);
    PointEvaluation ev(mink, PointState::from_complex(cvec2(0, 0), cvec2(1, 1)));
    CHECK(ev.cartan().horizontal.max_abs() < 1e-12);
    CHECK(ev.cartan().vertical.max_abs() > 1e-3);
}

TEST_CASE("chern fixtures on the poincare disk") {
    const auto poincare = make_bergman_ball(1, -4.0);
    PointEvaluation ev(poincare, PointState::from_complex(cvec1(0.5), cvec1(1.0)));
    CHECK(std::abs(ev.chern().nonlinear(0, 0) - 4.0 / 3.0) < 1e-12);
    CHECK(std::abs(ev.chern().horizontal(0, 0, 0) - 4.0 / 3.0) < 1e-12);
    // N-table coincidence at a horizontally parallel metric.
    CHECK(std::abs(ev.n_coeffs().nonlinear(0, 0) - std::complex<double>(4.0 / 3.0, 0.0)) < 1e-10);
}

TEST_CASE("chern fixtures on the hermitian non-kahler metric") {
    const auto metric = make_hermitian_nonkahler();
    PointEvaluation ev(metric, PointState::from_complex(cvec2(0.0, 0.5), cvec2(1, 1)));
    CHECK(std::abs(ev.chern().horizontal(0, 0, 1) - std::complex<double>(0.4, 0.0)) < 1e-12);
    CHECK(std::abs(ev.chern().horizontal(0, 1, 0)) < 1e-12);
}

TEST_CASE("chern coefficients vanish for fiber-only metrics") {
    const auto mink = make_minkowski_tk(2, 0.5, 2);
    for (const PointState& p : draw_samples(mink, {4, 25})) {
        PointEvaluation ev(mink, p);
        CHECK(ev.chern().nonlinear.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(ev.chern().horizontal.max_abs() < 1e-12);
    }
}

TEST_CASE("chern horizontal contracts to the nonlinear coefficients") {
    for (const char* id : {"bergman_ball", "fubini_study", "hermitian_nonkahler", "polydisk_tk"}) {
        const auto metric = make_catalog_metric(id, {.n = 2});
        for (const PointState& p : draw_samples(metric, {8, 26})) {
            PointEvaluation ev(metric, p);
            const auto& ch = ev.chern();
            for (int a = 0; a < 2; ++a)
                for (int m = 0; m < 2; ++m) {
                    std::complex<double> acc = 0.0;
                    for (int b = 0; b < 2; ++b) acc += ch.horizontal(a, b, m) * p.v[b];
                    CHECK(std::abs(acc - ch.nonlinear(a, m)) < 1e-9);
                }
        }
    }
}

TEST_CASE("berwald: euclidean and minkowski vanish, bergman is landsberg") {
    PointEvaluation flat(make_minkowski_tk(2, 1.0, 2),
                         PointState::from_complex(cvec2(0, 0), cvec2(1, 0.3)));
    CHECK(flat.berwald().coefficients.max_abs() < 1e-12);

    const auto bergman = make_bergman_ball(2, -4.0);
    for (const PointState& p : draw_samples(bergman, {8, 27})) {
        PointEvaluation ev(bergman, p);
        CHECK(ev.berwald().landsberg.max_abs() < 1e-8);
    }
}

TEST_CASE("n-coefficient symmetry across the catalog") {
    for (const char* id : {"bergman_ball", "minkowski_tk", "polydisk_tk", "hermitian_nonkahler"}) {
        const auto metric = make_catalog_metric(id, {.n = 2});
        for (const PointState& p : draw_samples(metric, {4, 28})) {
            PointEvaluation ev(metric, p);
            const auto& t = ev.n_coeffs();
            for (int b = 0; b < 2; ++b)
                for (int a = 0; a < 2; ++a)
                    for (int g = 0; g < 2; ++g) {
                        CHECK(std::abs(t.horizontal(b, a, g) - t.horizontal(b, g, a)) < 1e-10);
                        CHECK(std::abs(t.vertical(b, a, g) - t.vertical(b, g, a)) < 1e-10);
                    }
        }
    }
}

TEST_CASE("homogeneity degrees of the coefficient tables") {
    const auto bergman = make_bergman_ball(2, -4.0);
    const auto p = draw_samples(bergman, {1, 29}).front();
    const double lambda = 1.7;
    PointEvaluation ev(bergman, p);
    PointEvaluation scaled(bergman, PointState::from_complex(p.z, ComplexVector(lambda * p.v)));

    // spray: degree 2; nonlinear: 1; horizontal Cartan: 0; vertical Cartan: -1.
    CHECK((scaled.spray().spray - lambda * lambda * ev.spray().spray).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((scaled.spray().nonlinear - lambda * ev.spray().nonlinear).cwiseAbs().maxCoeff() < 1e-9);
    double horizontal_dev = 0.0, vertical_dev = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j)
            for (int l = 0; l < 4; ++l) {
                horizontal_dev = std::max(horizontal_dev,
                                          std::abs(scaled.cartan().horizontal(k, j, l) -
                                                   ev.cartan().horizontal(k, j, l)));
                vertical_dev = std::max(vertical_dev,
                                        std::abs(scaled.cartan().vertical(k, j, l) -
                                                 ev.cartan().vertical(k, j, l) / lambda));
            }
    CHECK(horizontal_dev < 1e-9);
    CHECK(vertical_dev < 1e-9);
}

TEST_CASE("inner product identities at random vertical pairs") {
    Rng rng(31);
    for (const char* id : {"bergman_ball", "minkowski_tk", "fubini_study", "polydisk_tk"}) {
        const auto metric = make_catalog_metric(id, {.n = 2});
        for (const PointState& p : draw_samples(metric, {4, 32})) {
            PointEvaluation ev(metric, p);
            for (int trial = 0; trial < 8; ++trial) {
                ComplexVector V(2), W(2);
                for (int a = 0; a < 2; ++a) {
                    V[a] = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
                    W[a] = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
                }
                CHECK(lemma_inner_residual(ev, V, W) < 1e-9);
                CHECK(symmetric_pairing_residual(ev, V, W) < 1e-9);
            }
        }
    }
}

TEST_CASE("chern derivative helper agrees with finite differences in zbar") {
    const auto bergman = make_bergman_ball(2, -4.0);
    const auto p = draw_samples(bergman, {1, 33}).front();
    PointEvaluation ev(bergman, p);
    const double h = 1e-5;
    for (int nu = 0; nu < 2; ++nu) {
        // Displace z along dzbar^nu: z^nu +-> z^nu + h and z^nu +-> z^nu + ih
        // combine into the Wirtinger derivative (f(x+h) - f(x-h))/2h parts.
        ComplexVector zp = p.z, zm = p.z, zpi = p.z, zmi = p.z;
        zp[nu] += h;
        zm[nu] -= h;
        zpi[nu] += std::complex<double>(0, h);
        zmi[nu] -= std::complex<double>(0, h);
        PointEvaluation evp(bergman, PointState::from_complex(zp, p.v));
        PointEvaluation evm(bergman, PointState::from_complex(zm, p.v));
        PointEvaluation evpi(bergman, PointState::from_complex(zpi, p.v));
        PointEvaluation evmi(bergman, PointState::from_complex(zmi, p.v));
        const auto analytic = ev.chern_horizontal_derivative(d_zbar(nu));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int m = 0; m < 2; ++m) {
                    const auto dx = (evp.chern().horizontal(a, b, m) -
                                     evm.chern().horizontal(a, b, m)) /
                                    (2 * h);
                    const auto dy = (evpi.chern().horizontal(a, b, m) -
                                     evmi.chern().horizontal(a, b, m)) /
                                    (2 * h);
                    const auto fd = 0.5 * (dx + std::complex<double>(0, 1) * dy);
                    CHECK(std::abs(analytic(a, b, m) - fd) < 1e-4);
                }
    }
}

TEST_SUITE_END();
