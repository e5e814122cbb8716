#include "finsler/tables.hpp"

#include <Eigen/Eigenvalues>

namespace finsler {

namespace {

const std::complex<double> kI(0.0, 1.0);

/// Eigen-decomposition based inverse with the condition guard shared by both
/// fundamental tensors.
template <typename Matrix>
Matrix guarded_inverse(const Matrix& m, const char* what, double* min_eig, double* condition) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const auto& lambda = es.eigenvalues();
    const double lo = lambda.minCoeff();
    const double hi = lambda.cwiseAbs().maxCoeff();
    const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    *min_eig = lo;
    *condition = cond;
    if (!(lo > 0.0) || cond > kConditionLimit)
        throw SingularMetricError(std::string(what) + ": fundamental tensor not safely invertible", lo,
                                  cond);
    return es.eigenvectors() * lambda.cwiseInverse().asDiagonal() *
           es.eigenvectors().adjoint();
}

} // namespace

PointEvaluation::PointEvaluation(const MetricDefinition& metric, const PointState& p,
                                 DerivativeMode mode, FdOptions fd)
    : partials_(metric, p, mode, fd) {}

const FundamentalReal& PointEvaluation::fundamental_real() {
    if (fundamental_real_) return *fundamental_real_;
    const int n = this->n();
    const int d = 2 * n;
    FundamentalReal f;
    f.g.resize(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            const double value =
                0.5 * partials_.real_partial({RealDir::fiber(j, n), RealDir::fiber(k, n)});
            f.g(j, k) = value;
            f.g(k, j) = value;
        }
    f.g_inv = guarded_inverse(f.g, "fundamental_real", &f.min_eigenvalue, &f.condition);
    fundamental_real_ = std::move(f);
    return *fundamental_real_;
}

const FundamentalComplex& PointEvaluation::fundamental_complex() {
    if (fundamental_complex_) return *fundamental_complex_;
    const int n = this->n();
    FundamentalComplex f;
    f.f2 = partials_.f2();
    f.G.resize(n, n);
    f.G_sym.resize(n, n);
    f.G_v.resize(n);
    for (int a = 0; a < n; ++a) {
        f.G_v[a] = partials_.wirtinger({d_v(a)});
        for (int b = 0; b < n; ++b) {
            f.G(a, b) = partials_.wirtinger({d_v(a), d_vbar(b)});
            f.G_sym(a, b) = partials_.wirtinger({d_v(a), d_v(b)});
        }
    }
    f.G = 0.5 * (f.G + f.G.adjoint().eval());
    // G_upper(a,t) = G^{\bar t a} must satisfy sum_t G_upper(a,t) G(b,t) = delta_ab,
    // i.e. G_upper = (G^T)^{-1} = conj(G^{-1}) for Hermitian G.
    const Eigen::MatrixXcd inv =
        guarded_inverse(f.G, "fundamental_complex", &f.min_eigenvalue, &f.condition);
    f.G_upper = inv.transpose();
    fundamental_complex_ = std::move(f);
    return *fundamental_complex_;
}

const SprayTable& PointEvaluation::spray() {
    if (spray_) return *spray_;
    const int n = this->n();
    const int d = 2 * n;
    const auto& fr = fundamental_real();
    const auto& y = point().y;

    // H_l = d2F2/dx^a dy^l y^a - dF2/dx^l and its first fiber derivatives.
    Eigen::VectorXd H(d);
    Eigen::MatrixXd dH(d, d); // (l, j) = dH_l/dy^j
    for (int l = 0; l < d; ++l) {
        double h = -partials_.real_partial({RealDir::base(l)});
        for (int a = 0; a < d; ++a)
            h += partials_.real_partial({RealDir::base(a), RealDir::fiber(l, n)}) * y[a];
        H[l] = h;
        for (int j = 0; j < d; ++j) {
            double dh = partials_.real_partial({RealDir::base(j), RealDir::fiber(l, n)}) -
                        partials_.real_partial({RealDir::base(l), RealDir::fiber(j, n)});
            for (int a = 0; a < d; ++a)
                dh += partials_.real_partial({RealDir::base(a), RealDir::fiber(l, n),
                                              RealDir::fiber(j, n)}) *
                      y[a];
            dH(l, j) = dh;
        }
    }

    SprayTable s;
    s.spray = 0.25 * fr.g_inv * H;

    // dg^{kl}/dy^j = -(g^{-1} dg/dy^j g^{-1}); dg_{st}/dy^j = T3(s,t,j)/2.
    s.nonlinear.resize(d, d);
    for (int j = 0; j < d; ++j) {
        Eigen::MatrixXd dg(d, d);
        for (int ss = 0; ss < d; ++ss)
            for (int t = ss; t < d; ++t) {
                const double value = 0.5 * partials_.real_partial({RealDir::fiber(ss, n),
                                                                   RealDir::fiber(t, n),
                                                                   RealDir::fiber(j, n)});
                dg(ss, t) = value;
                dg(t, ss) = value;
            }
        const Eigen::MatrixXd dginv = -fr.g_inv * dg * fr.g_inv;
        const Eigen::VectorXd column = 0.25 * (dginv * H + fr.g_inv * dH.col(j));
        for (int k = 0; k < d; ++k) s.nonlinear(k, j) = column[k];
    }

    s.complex_spray.resize(n);
    for (int a = 0; a < n; ++a) s.complex_spray[a] = s.spray[a] + kI * s.spray[a + n];
    spray_ = std::move(s);
    return *spray_;
}

Eigen::VectorXcd PointEvaluation::chern_spray_diagnostic() {
    const int n = this->n();
    const auto& ch = chern();
    Eigen::VectorXcd result(n);
    for (int a = 0; a < n; ++a) {
        std::complex<double> acc = 0.0;
        for (int m = 0; m < n; ++m) acc += ch.nonlinear(a, m) * point().v[m];
        result[a] = 0.5 * acc;
    }
    return result;
}

const CartanTable& PointEvaluation::cartan() {
    if (cartan_) return *cartan_;
    const int n = this->n();
    const int d = 2 * n;
    const auto& fr = fundamental_real();
    const auto& nl = spray().nonlinear;

    // delta g_{st} / delta x^l  =  dg_{st}/dx^l - Gammahat_l^m dg_{st}/dy^m.
    Tensor3d delta_g(d, d, d); // (l, s, t)
    for (int s = 0; s < d; ++s)
        for (int t = s; t < d; ++t) {
            std::vector<double> fiber_derivative(d);
            for (int m = 0; m < d; ++m)
                fiber_derivative[m] = 0.5 * partials_.real_partial({RealDir::fiber(s, n),
                                                                    RealDir::fiber(t, n),
                                                                    RealDir::fiber(m, n)});
            for (int l = 0; l < d; ++l) {
                double value = 0.5 * partials_.real_partial({RealDir::base(l), RealDir::fiber(s, n),
                                                             RealDir::fiber(t, n)});
                for (int m = 0; m < d; ++m) value -= nl(m, l) * fiber_derivative[m];
                delta_g(l, s, t) = value;
                delta_g(l, t, s) = value;
            }
        }

    CartanTable c;
    c.horizontal = Tensor3d(d, d, d);
    c.vertical = Tensor3d(d, d, d);
    for (int j = 0; j < d; ++j)
        for (int l = j; l < d; ++l) {
            for (int k = 0; k < d; ++k) {
                double h = 0.0;
                double v = 0.0;
                for (int s = 0; s < d; ++s) {
                    h += fr.g_inv(k, s) *
                         (delta_g(l, s, j) - delta_g(s, j, l) + delta_g(j, l, s));
                    v += fr.g_inv(k, s) * partials_.real_partial({RealDir::fiber(j, n),
                                                                  RealDir::fiber(l, n),
                                                                  RealDir::fiber(s, n)});
                }
                c.horizontal(k, j, l) = 0.5 * h;
                c.horizontal(k, l, j) = 0.5 * h;
                c.vertical(k, j, l) = 0.25 * v;
                c.vertical(k, l, j) = 0.25 * v;
            }
        }
    cartan_ = std::move(c);
    return *cartan_;
}

const BerwaldTable& PointEvaluation::berwald() {
    if (berwald_) return *berwald_;
    const int n = this->n();
    const int d = 2 * n;
    const auto& fr = fundamental_real();
    const auto& y = point().y;
    const auto& cart = cartan();

    Eigen::VectorXd H(d);
    Eigen::MatrixXd dH(d, d);
    Tensor3d d2H(d, d, d); // (l, j, m)
    for (int l = 0; l < d; ++l) {
        double h = -partials_.real_partial({RealDir::base(l)});
        for (int a = 0; a < d; ++a)
            h += partials_.real_partial({RealDir::base(a), RealDir::fiber(l, n)}) * y[a];
        H[l] = h;
        for (int j = 0; j < d; ++j) {
            double dh = partials_.real_partial({RealDir::base(j), RealDir::fiber(l, n)}) -
                        partials_.real_partial({RealDir::base(l), RealDir::fiber(j, n)});
            for (int a = 0; a < d; ++a)
                dh += partials_.real_partial({RealDir::base(a), RealDir::fiber(l, n),
                                              RealDir::fiber(j, n)}) *
                      y[a];
            dH(l, j) = dh;
            for (int m = j; m < d; ++m) {
                double d2h = partials_.real_partial({RealDir::base(m), RealDir::fiber(l, n),
                                                     RealDir::fiber(j, n)}) +
                             partials_.real_partial({RealDir::base(j), RealDir::fiber(l, n),
                                                     RealDir::fiber(m, n)}) -
                             partials_.real_partial({RealDir::base(l), RealDir::fiber(j, n),
                                                     RealDir::fiber(m, n)});
                for (int a = 0; a < d; ++a)
                    d2h += partials_.real_partial({RealDir::base(a), RealDir::fiber(l, n),
                                                   RealDir::fiber(j, n), RealDir::fiber(m, n)}) *
                           y[a];
                d2H(l, j, m) = d2h;
                d2H(l, m, j) = d2h;
            }
        }
    }

    // First and second fiber derivatives of g and of its inverse.
    std::vector<Eigen::MatrixXd> dg(d), dginv(d);
    for (int j = 0; j < d; ++j) {
        dg[j].resize(d, d);
        for (int s = 0; s < d; ++s)
            for (int t = s; t < d; ++t) {
                const double value = 0.5 * partials_.real_partial({RealDir::fiber(s, n),
                                                                   RealDir::fiber(t, n),
                                                                   RealDir::fiber(j, n)});
                dg[j](s, t) = value;
                dg[j](t, s) = value;
            }
        dginv[j] = -fr.g_inv * dg[j] * fr.g_inv;
    }

    BerwaldTable b;
    b.coefficients = Tensor3d(d, d, d);
    b.landsberg = Tensor3d(d, d, d);
    for (int j = 0; j < d; ++j)
        for (int m = j; m < d; ++m) {
            Eigen::MatrixXd d2g(d, d);
            for (int s = 0; s < d; ++s)
                for (int t = s; t < d; ++t) {
                    const double value =
                        0.5 * partials_.real_partial({RealDir::fiber(s, n), RealDir::fiber(t, n),
                                                      RealDir::fiber(j, n), RealDir::fiber(m, n)});
                    d2g(s, t) = value;
                    d2g(t, s) = value;
                }
            const Eigen::MatrixXd d2ginv = -(dginv[m] * dg[j] * fr.g_inv + fr.g_inv * d2g * fr.g_inv +
                                             fr.g_inv * dg[j] * dginv[m]);
            Eigen::VectorXd d2Hjm(d);
            for (int l = 0; l < d; ++l) d2Hjm[l] = d2H(l, j, m);
            const Eigen::VectorXd column = 0.25 * (d2ginv * H + dginv[j] * dH.col(m) +
                                                   dginv[m] * dH.col(j) + fr.g_inv * d2Hjm);
            for (int k = 0; k < d; ++k) {
                b.coefficients(k, j, m) = column[k];
                b.coefficients(k, m, j) = column[k];
                const double deviation = column[k] - cart.horizontal(k, j, m);
                b.landsberg(k, j, m) = deviation;
                b.landsberg(k, m, j) = deviation;
            }
        }
    berwald_ = std::move(b);
    return *berwald_;
}

const ChernTable& PointEvaluation::chern() {
    if (chern_) return *chern_;
    const int n = this->n();
    const auto& fc = fundamental_complex();

    ChernTable c;
    c.nonlinear.resize(n, n);
    Eigen::MatrixXcd B(n, n); // (m, t) = d2F2/dz^m dvbar^t
    for (int m = 0; m < n; ++m)
        for (int t = 0; t < n; ++t) B(m, t) = partials_.wirtinger({d_z(m), d_vbar(t)});
    for (int a = 0; a < n; ++a)
        for (int m = 0; m < n; ++m) {
            std::complex<double> acc = 0.0;
            for (int t = 0; t < n; ++t) acc += fc.G_upper(a, t) * B(m, t);
            c.nonlinear(a, m) = acc;
        }

    c.horizontal = Tensor3c(n, n, n);
    c.vertical = Tensor3c(n, n, n);
    for (int b = 0; b < n; ++b)
        for (int t = 0; t < n; ++t) {
            std::vector<std::complex<double>> dG_dv(n);
            for (int g = 0; g < n; ++g) dG_dv[g] = partials_.wirtinger({d_v(g), d_v(b), d_vbar(t)});
            for (int m = 0; m < n; ++m) {
                // delta_m(G_{b tbar}) = dG/dz^m - Gamma^g_{;m} dG/dv^g.
                std::complex<double> delta = partials_.wirtinger({d_z(m), d_v(b), d_vbar(t)});
                for (int g = 0; g < n; ++g) delta -= c.nonlinear(g, m) * dG_dv[g];
                for (int a = 0; a < n; ++a) {
                    c.horizontal(a, b, m) += fc.G_upper(a, t) * delta;
                    c.vertical(a, b, m) += fc.G_upper(a, t) * dG_dv[m];
                }
            }
        }
    chern_ = std::move(c);
    return *chern_;
}

const NTable& PointEvaluation::n_coeffs() {
    if (n_coeffs_) return *n_coeffs_;
    const int n = this->n();
    const auto& nl = spray().nonlinear;
    const auto& cart = cartan();

    NTable t;
    t.nonlinear.resize(n, n);
    t.horizontal = Tensor3c(n, n, n);
    t.vertical = Tensor3c(n, n, n);
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
            t.nonlinear(b, a) = nl(b, a) + kI * nl(b + n, a);
            for (int g = 0; g < n; ++g) {
                t.horizontal(b, a, g) = cart.horizontal(b, a, g) + kI * cart.horizontal(b + n, a, g);
                t.vertical(b, a, g) = cart.vertical(b, a, g) + kI * cart.vertical(b + n, a, g);
            }
        }
    n_coeffs_ = std::move(t);
    return *n_coeffs_;
}

Eigen::MatrixXcd PointEvaluation::chern_nonlinear_derivative(WDir w) {
    const int n = this->n();
    const auto& fc = fundamental_complex();

    Eigen::MatrixXcd B(n, n), dB(n, n), dM(n, n);
    for (int m = 0; m < n; ++m)
        for (int t = 0; t < n; ++t) {
            B(m, t) = partials_.wirtinger({d_z(m), d_vbar(t)});
            dB(m, t) = partials_.wirtinger({d_z(m), d_vbar(t), w});
            dM(m, t) = partials_.wirtinger({d_v(m), d_vbar(t), w});
        }
    // d(G_upper) from G_upper * G^T = I.
    const Eigen::MatrixXcd dUpper = -fc.G_upper * dM.transpose() * fc.G_upper;
    return dUpper * B.transpose() + fc.G_upper * dB.transpose();
}

Tensor3c PointEvaluation::chern_horizontal_derivative(WDir w) {
    const int n = this->n();
    const auto& fc = fundamental_complex();
    const auto& ch = chern();

    Eigen::MatrixXcd dM(n, n);
    for (int m = 0; m < n; ++m)
        for (int t = 0; t < n; ++t) dM(m, t) = partials_.wirtinger({d_v(m), d_vbar(t), w});
    const Eigen::MatrixXcd dUpper = -fc.G_upper * dM.transpose() * fc.G_upper;
    const Eigen::MatrixXcd dNl = chern_nonlinear_derivative(w);

    Tensor3c result(n, n, n);
    for (int b = 0; b < n; ++b)
        for (int t = 0; t < n; ++t) {
            std::vector<std::complex<double>> dG_dv(n), dG_dv_w(n);
            for (int g = 0; g < n; ++g) {
                dG_dv[g] = partials_.wirtinger({d_v(g), d_v(b), d_vbar(t)});
                dG_dv_w[g] = partials_.wirtinger({d_v(g), d_v(b), d_vbar(t), w});
            }
            for (int m = 0; m < n; ++m) {
                std::complex<double> delta = partials_.wirtinger({d_z(m), d_v(b), d_vbar(t)});
                std::complex<double> ddelta = partials_.wirtinger({d_z(m), d_v(b), d_vbar(t), w});
                for (int g = 0; g < n; ++g) {
                    delta -= ch.nonlinear(g, m) * dG_dv[g];
                    ddelta -= dNl(g, m) * dG_dv[g] + ch.nonlinear(g, m) * dG_dv_w[g];
                }
                for (int a = 0; a < n; ++a)
                    result(a, b, m) += dUpper(a, t) * delta + fc.G_upper(a, t) * ddelta;
            }
        }
    return result;
}

std::complex<double> hermitian_inner(PointEvaluation& eval, const ComplexVector& V,
                                     const ComplexVector& W) {
    const auto& G = eval.fundamental_complex().G;
    std::complex<double> acc = 0.0;
    for (int a = 0; a < G.rows(); ++a)
        for (int b = 0; b < G.cols(); ++b) acc += G(a, b) * V[a] * std::conj(W[b]);
    return acc;
}

std::complex<double> symmetric_inner(PointEvaluation& eval, const ComplexVector& V,
                                     const ComplexVector& W) {
    const auto& S = eval.fundamental_complex().G_sym;
    std::complex<double> acc = 0.0;
    for (int a = 0; a < S.rows(); ++a)
        for (int b = 0; b < S.cols(); ++b) acc += S(a, b) * V[a] * W[b];
    return acc;
}

std::complex<double> bilinear_inner(PointEvaluation& eval, const ComplexifiedVector& u,
                                    const ComplexifiedVector& w) {
    const auto& g = eval.fundamental_real().g;
    std::complex<double> acc = 0.0;
    for (int j = 0; j < g.rows(); ++j)
        for (int k = 0; k < g.cols(); ++k) acc += g(j, k) * u[j] * w[k];
    return acc;
}

double real_inner(PointEvaluation& eval, const RealVector& u, const RealVector& w) {
    return u.dot(eval.fundamental_real().g * w);
}

double lemma_inner_residual(PointEvaluation& eval, const ComplexVector& V, const ComplexVector& W) {
    const auto lhs = hermitian_inner(eval, V, W);
    const auto rhs = 2.0 * bilinear_inner(eval, embed_type10(V), embed_type01(ComplexVector(W.conjugate())));
    return std::abs(lhs - rhs);
}

double symmetric_pairing_residual(PointEvaluation& eval, const ComplexVector& V,
                                  const ComplexVector& W) {
    const double lhs = real_inner(eval, realify(V), realify(W));
    const auto rhs = hermitian_inner(eval, V, W) + symmetric_inner(eval, V, W);
    return std::abs(lhs - rhs.real());
}

} // namespace finsler
