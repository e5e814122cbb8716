#pragma once

#include "finsler/classify.hpp"
#include "finsler/tables.hpp"

namespace finsler {

/// Globally invertible polynomial chart change of degree <= 2:
/// w^b = A^b_m z^m + Q^b_{m nu} z^m z^nu with Q symmetric in (m, nu).
/// Exact Jacobian and Hessian; inverse by Newton iteration.
struct Biholomorphism {
    int n = 0;
    Eigen::MatrixXcd linear;   // A
    Tensor3c quadratic;        // Q(b, m, nu)
    double domain_radius = 1e6; // validity |z| < radius in the source chart

    ComplexVector forward(const ComplexVector& z) const;
    Eigen::MatrixXcd jacobian(const ComplexVector& z) const; // (b, m) = dw^b / dz^m
    ComplexVector inverse(const ComplexVector& w) const;

    /// Jet-level forward map and Jacobian application, for pushforward
    /// metric evaluators.
    std::vector<ComplexJet> forward_jets(std::span<const ComplexJet> z) const;

    static Biholomorphism identity(int n);
    static Biholomorphism linear_map(const Eigen::MatrixXcd& A, double radius = 1e6);

    /// w = z + eps q(z) with random quadratic q; the radius is shrunk until
    /// the map is a diffeomorphism with margin on the sampled region.
    static Biholomorphism quadratic_perturbation(int n, double eps, std::uint64_t seed,
                                                 double radius);
};

/// F^2_B(w; u) = F^2_A(phi^-1(w), (d phi^-1)(w) u), evaluated over jets by
/// Newton-solving phi(Z) = W and the linear stage D phi(Z) V = U in the jet
/// ring.
MetricDefinition pushforward_metric(const MetricDefinition& metric, const Biholomorphism& phi);

/// Residuals of the three transformation laws for the complexified Cartan
/// coefficient tables under phi at a point where nabla J = 0 holds.
struct TransformResiduals {
    double horizontal = 0.0; // N^b_{a;g} law (Jacobian + Hessian terms)
    double nonlinear = 0.0;  // N^b_{;g} law (its v-contraction)
    double vertical = 0.0;   // N^b_{ag} law (purely tensorial)

    double max() const { return std::max({horizontal, nonlinear, vertical}); }
};

TransformResiduals transform_residuals(const MetricDefinition& metric, const Biholomorphism& phi,
                                       const PointState& p, const Tolerances& tolerances,
                                       DerivativeMode mode = DerivativeMode::jet);

} // namespace finsler
