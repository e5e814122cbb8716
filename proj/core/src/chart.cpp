#include "finsler/chart.hpp"

#include <cmath>

#include "finsler/rng.hpp"

namespace finsler {

namespace {

using JetVector = std::vector<ComplexJet>;
using JetMatrix = std::vector<std::vector<ComplexJet>>;

/// Gaussian elimination with partial (value-magnitude) pivoting over the
/// commutative jet ring.
JetVector jet_linear_solve(JetMatrix A, JetVector b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(A[col][col].value());
        for (int row = col + 1; row < n; ++row) {
            const double candidate = std::abs(A[row][col].value());
            if (candidate > best) {
                best = candidate;
                pivot = row;
            }
        }
        if (best < kBranchFloor)
            throw SingularMetricError("chart change: singular jet-valued Jacobian", 0.0,
                                      std::numeric_limits<double>::infinity());
        std::swap(A[col], A[pivot]);
        std::swap(b[col], b[pivot]);
        const ComplexJet inv = reciprocal(A[col][col]);
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            const ComplexJet factor = A[row][col] * inv;
            for (int k = col; k < n; ++k) A[row][k] -= factor * A[col][k];
            b[row] -= factor * b[col];
        }
    }
    JetVector x(n);
    for (int i = 0; i < n; ++i) x[i] = b[i] * reciprocal(A[i][i]);
    return x;
}

} // namespace

ComplexVector Biholomorphism::forward(const ComplexVector& z) const {
    ComplexVector w = linear * z;
    for (int b = 0; b < n; ++b)
        for (int m = 0; m < n; ++m)
            for (int nu = 0; nu < n; ++nu) w[b] += quadratic(b, m, nu) * z[m] * z[nu];
    return w;
}

Eigen::MatrixXcd Biholomorphism::jacobian(const ComplexVector& z) const {
    Eigen::MatrixXcd J = linear;
    for (int b = 0; b < n; ++b)
        for (int m = 0; m < n; ++m)
            for (int nu = 0; nu < n; ++nu) J(b, m) += 2.0 * quadratic(b, m, nu) * z[nu];
    return J;
}

ComplexVector Biholomorphism::inverse(const ComplexVector& w) const {
    ComplexVector z = linear.partialPivLu().solve(w);
    for (int iteration = 0; iteration < 64; ++iteration) {
        const ComplexVector residual = forward(z) - w;
        if (residual.norm() < 1e-14) return z;
        z -= jacobian(z).partialPivLu().solve(residual);
    }
    throw DomainError("chart inverse did not converge (outside the validity domain?)");
}

std::vector<ComplexJet> Biholomorphism::forward_jets(std::span<const ComplexJet> z) const {
    JetVector w(n);
    for (int b = 0; b < n; ++b) {
        ComplexJet acc;
        for (int m = 0; m < n; ++m) {
            acc += ComplexJet(linear(b, m)) * z[m];
            for (int nu = 0; nu < n; ++nu) acc += ComplexJet(quadratic(b, m, nu)) * (z[m] * z[nu]);
        }
        w[b] = acc;
    }
    return w;
}

Biholomorphism Biholomorphism::identity(int n) {
    Biholomorphism phi;
    phi.n = n;
    phi.linear = Eigen::MatrixXcd::Identity(n, n);
    phi.quadratic = Tensor3c(n, n, n);
    return phi;
}

Biholomorphism Biholomorphism::linear_map(const Eigen::MatrixXcd& A, double radius) {
    Biholomorphism phi;
    phi.n = static_cast<int>(A.rows());
    phi.linear = A;
    phi.quadratic = Tensor3c(phi.n, phi.n, phi.n);
    phi.domain_radius = radius;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
    if (!(cond < 1e8)) throw ParamError("linear chart change is numerically singular");
    return phi;
}

Biholomorphism Biholomorphism::quadratic_perturbation(int n, double eps, std::uint64_t seed,
                                                      double radius) {
    Biholomorphism phi;
    phi.n = n;
    phi.linear = Eigen::MatrixXcd::Identity(n, n);
    phi.quadratic = Tensor3c(n, n, n);
    Rng rng(seed);
    double magnitude = 0.0;
    for (int b = 0; b < n; ++b)
        for (int m = 0; m < n; ++m)
            for (int nu = m; nu < n; ++nu) {
                const std::complex<double> q(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
                phi.quadratic(b, m, nu) = 0.5 * eps * q;
                phi.quadratic(b, nu, m) = 0.5 * eps * q;
                magnitude += std::norm(eps * q);
            }
    magnitude = std::sqrt(magnitude);
    // Keep || 2 Q z || < 1/2 on the domain so the Jacobian stays invertible.
    phi.domain_radius = std::min(radius, 0.25 / std::max(magnitude, 1e-12));
    return phi;
}

MetricDefinition pushforward_metric(const MetricDefinition& metric, const Biholomorphism& phi) {
    if (metric.n != phi.n) throw DimensionError("chart change dimension mismatch");
    MetricDefinition pushed;
    pushed.n = metric.n;
    pushed.label = metric.label + "|pushforward";
    pushed.params = metric.params;
    pushed.sample_domain = metric.sample_domain;

    // Capture by value: the pushed metric owns its chart and source metric.
    const MetricDefinition source = metric;
    const Biholomorphism map = phi;

    pushed.in_domain = [source, map](const ComplexVector& w) {
        try {
            const ComplexVector z = map.inverse(w);
            return z.norm() < map.domain_radius && source.contains(z);
        } catch (const Error&) {
            return false;
        }
    };

    pushed.evaluate = [source, map](std::span<const ComplexJet> w, std::span<const ComplexJet> u) {
        const int n = map.n;
        // Value-level seed, then Newton in the jet ring: each step clears one
        // more nilpotent order, four steps cover the order-4 truncation.
        ComplexVector w0(n);
        for (int b = 0; b < n; ++b) w0[b] = w[b].value();
        const ComplexVector z0 = map.inverse(w0);
        if (z0.norm() >= map.domain_radius)
            throw DomainError("pushforward metric: point outside the chart validity domain");

        JetVector Z(n);
        for (int a = 0; a < n; ++a) Z[a] = ComplexJet(z0[a]);
        for (int iteration = 0; iteration < 4; ++iteration) {
            const JetVector FZ = map.forward_jets(Z);
            JetVector residual(n);
            for (int b = 0; b < n; ++b) residual[b] = FZ[b] - w[b];
            JetMatrix J(n, JetVector(n));
            for (int b = 0; b < n; ++b)
                for (int m = 0; m < n; ++m) {
                    ComplexJet entry(map.linear(b, m));
                    for (int nu = 0; nu < n; ++nu)
                        entry += ComplexJet(2.0 * map.quadratic(b, m, nu)) * Z[nu];
                    J[b][m] = entry;
                }
            const JetVector delta = jet_linear_solve(J, residual);
            for (int a = 0; a < n; ++a) Z[a] -= delta[a];
        }

        // Fiber map: solve D phi(Z) V = U.
        JetMatrix J(n, JetVector(n));
        for (int b = 0; b < n; ++b)
            for (int m = 0; m < n; ++m) {
                ComplexJet entry(map.linear(b, m));
                for (int nu = 0; nu < n; ++nu)
                    entry += ComplexJet(2.0 * map.quadratic(b, m, nu)) * Z[nu];
                J[b][m] = entry;
            }
        JetVector U(u.begin(), u.end());
        const JetVector V = jet_linear_solve(J, U);
        return source.evaluate(Z, V);
    };
    return pushed;
}

TransformResiduals transform_residuals(const MetricDefinition& metric, const Biholomorphism& phi,
                                       const PointState& p, const Tolerances& tolerances,
                                       DerivativeMode mode) {
    const int n = metric.n;
    PointEvaluation eval_a(metric, p, mode);
    const double tol = tolerances.residual(mode);
    const double j_residual = std::max(residual_J_horizontal(eval_a), residual_J_vertical(eval_a));
    if (j_residual > tol)
        throw HypothesisError("transformation law not asserted: nabla J residual " +
                              std::to_string(j_residual) + " exceeds tolerance at this point");

    const auto& na = eval_a.n_coeffs();

    // Matched point in the target chart.
    const Eigen::MatrixXcd Jab = phi.jacobian(p.z); // (b, m) = dz_B^b / dz_A^m
    const Eigen::MatrixXcd Jba = Jab.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
    const ComplexVector zb = phi.forward(p.z);
    const ComplexVector vb = Jab * p.v;

    const MetricDefinition pushed = pushforward_metric(metric, phi);
    PointEvaluation eval_b(pushed, PointState::from_complex(zb, vb), mode);
    const auto& nb = eval_b.n_coeffs();

    // Hessian of the chart change: d2 z_B^b / dz_A^m dz_A^nu = 2 Q(b, m, nu).
    TransformResiduals residuals;
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
            for (int g = 0; g < n; ++g) {
                std::complex<double> horizontal = 0.0;
                std::complex<double> vertical = 0.0;
                for (int m = 0; m < n; ++m)
                    for (int nu = 0; nu < n; ++nu) {
                        std::complex<double> push_h = 0.0;
                        std::complex<double> push_v = 0.0;
                        for (int dd = 0; dd < n; ++dd) {
                            push_h += na.horizontal(dd, m, nu) * Jab(b, dd);
                            push_v += na.vertical(dd, m, nu) * Jab(b, dd);
                        }
                        horizontal += Jba(m, a) * Jba(nu, g) *
                                      (push_h - 2.0 * phi.quadratic(b, m, nu));
                        vertical += Jba(m, a) * Jba(nu, g) * push_v;
                    }
                residuals.horizontal =
                    std::max(residuals.horizontal, std::abs(nb.horizontal(b, a, g) - horizontal));
                residuals.vertical =
                    std::max(residuals.vertical, std::abs(nb.vertical(b, a, g) - vertical));
            }

    for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) {
            std::complex<double> nonlinear = 0.0;
            for (int nu = 0; nu < n; ++nu) {
                std::complex<double> push = 0.0;
                for (int dd = 0; dd < n; ++dd) push += na.nonlinear(dd, nu) * Jab(b, dd);
                std::complex<double> hessian = 0.0;
                for (int m = 0; m < n; ++m) hessian += 2.0 * phi.quadratic(b, m, nu) * p.v[m];
                nonlinear += Jba(nu, g) * (push - hessian);
            }
            residuals.nonlinear =
                std::max(residuals.nonlinear, std::abs(nb.nonlinear(b, g) - nonlinear));
        }
    return residuals;
}

} // namespace finsler
