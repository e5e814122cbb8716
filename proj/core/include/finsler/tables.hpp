#pragma once

#include <memory>
#include <optional>

#include "finsler/derivatives.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// Inversions abort once the fundamental tensor's condition number exceeds
/// this: fourth-derivative pipelines amplify ill-conditioning.
inline constexpr double kConditionLimit = 1e12;

/// g_jk = (1/2) d2F2/dy^j dy^k and its inverse.
struct FundamentalReal {
    Eigen::MatrixXd g;     // 2n x 2n
    Eigen::MatrixXd g_inv; // 2n x 2n
    double min_eigenvalue = 0.0;
    double condition = 0.0;
};

/// G_ab = d2F2/dv^a dvbar^b with the inverse indexed so that G_upper(a,t) G(b,t) sums to delta_ab.
struct FundamentalComplex {
    Eigen::MatrixXcd G;       // G(a,b) = G_{a \bar b}
    Eigen::MatrixXcd G_upper; // G_upper(a,t) = G^{\bar t a}; sum_t G_upper(a,t) G(b,t) = delta_ab
    Eigen::VectorXcd G_v;     // G_a = dF2/dv^a
    Eigen::MatrixXcd G_sym;   // G_{ab} = d2F2/dv^a dv^b (inner-product identity only)
    double f2 = 0.0;
    double min_eigenvalue = 0.0;
    double condition = 0.0;
};

struct SprayTable {
    Eigen::VectorXd spray;          // Ghat^k
    Eigen::MatrixXd nonlinear;      // (k, j) = Gammahat_j^k = dGhat^k/dy^j
    Eigen::VectorXcd complex_spray; // Ghat^a + i Ghat^(a+n)
};

struct CartanTable {
    Tensor3d horizontal; // (k, j, l) = Gammahat^k_{j;l}
    Tensor3d vertical;   // (k, j, l) = Gammahat^k_{jl}
};

struct BerwaldTable {
    Tensor3d coefficients; // (k, j, l) = d2 Ghat^k / dy^j dy^l
    Tensor3d landsberg;    // (k, j, l) = coefficients - Cartan horizontal
};

struct ChernTable {
    Eigen::MatrixXcd nonlinear; // (a, m) = Gamma^a_{;m}
    Tensor3c horizontal;        // (a, b, m) = Gamma^a_{b;m}
    Tensor3c vertical;          // (a, b, g) = Gamma^a_{bg}
};

/// Complexified Cartan tables N^b_{.} = Gammahat^b_{.} + i Gammahat^(b+n)_{.}.
struct NTable {
    Eigen::MatrixXcd nonlinear; // (b, a) = N^b_{;a}
    Tensor3c horizontal;        // (b, a, g) = N^b_{a;g}
    Tensor3c vertical;          // (b, a, g) = N^b_{ag}
};

/// Every coefficient array the workbench uses at one point state, computed
/// lazily from a single shared table of F^2 partials.
class PointEvaluation {
public:
    PointEvaluation(const MetricDefinition& metric, const PointState& p,
                    DerivativeMode mode = DerivativeMode::jet, FdOptions fd = {});

    int n() const { return partials_.n(); }
    const PointState& point() const { return partials_.point(); }
    const MetricDefinition& metric() const { return partials_.metric(); }
    PartialTable& partials() { return partials_; }

    const FundamentalReal& fundamental_real();
    const FundamentalComplex& fundamental_complex();
    const SprayTable& spray();
    const CartanTable& cartan();
    const BerwaldTable& berwald();
    const ChernTable& chern();
    const NTable& n_coeffs();

    /// (1/2) Gamma^a_{;m} v^m. For weakly Kaehler metrics this equals the
    /// complex spray; elsewhere the difference from complex_spray is a
    /// diagnostic, not an invariant.
    Eigen::VectorXcd chern_spray_diagnostic();

    /// d Gamma^a_{;m} / dw for one Wirtinger direction w (plain partial at
    /// fixed (z, v) in the chart).
    Eigen::MatrixXcd chern_nonlinear_derivative(WDir w);

    /// d Gamma^a_{b;m} / dw.
    Tensor3c chern_horizontal_derivative(WDir w);

private:
    PartialTable partials_;
    std::optional<FundamentalReal> fundamental_real_;
    std::optional<FundamentalComplex> fundamental_complex_;
    std::optional<SprayTable> spray_;
    std::optional<CartanTable> cartan_;
    std::optional<BerwaldTable> berwald_;
    std::optional<ChernTable> chern_;
    std::optional<NTable> n_coeffs_;
};

/// <V, W> = G_ab V^a conj(W^b) on (1,0) vertical vectors.
std::complex<double> hermitian_inner(PointEvaluation& eval, const ComplexVector& V,
                                     const ComplexVector& W);

/// <<V, W>> = G_{ab} V^a W^b, the symmetric product.
std::complex<double> symmetric_inner(PointEvaluation& eval, const ComplexVector& V,
                                     const ComplexVector& W);

/// g extended complex-bilinearly to complexified vertical vectors.
std::complex<double> bilinear_inner(PointEvaluation& eval, const ComplexifiedVector& u,
                                    const ComplexifiedVector& w);

/// g on real vertical vectors.
double real_inner(PointEvaluation& eval, const RealVector& u, const RealVector& w);

/// | <V,W> - 2 <V | conj(W)> | for the complex-bilinear extension.
double lemma_inner_residual(PointEvaluation& eval, const ComplexVector& V, const ComplexVector& W);

/// | <V^o | W^o> - Re(<V,W> + <<V,W>>) |.
double symmetric_pairing_residual(PointEvaluation& eval, const ComplexVector& V,
                                  const ComplexVector& W);

} // namespace finsler
