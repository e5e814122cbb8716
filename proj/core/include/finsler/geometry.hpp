#pragma once

#include <Eigen/Dense>
#include <complex>

#include "finsler/errors.hpp"

namespace finsler {

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexifiedVector = Eigen::VectorXcd; // 2n components over the real frame

/// Norm floor defining the slit bundle numerically: F is smooth only off the
/// zero section.
inline constexpr double kVMin = 1e-8;

/// The star involution j <-> j+n on 1-based...0-based real indices: indices
/// 0..n-1 pair with n..2n-1.
inline int star_index(int j, int n) { return j < n ? j + n : j - n; }

/// Base point with a nonzero tangent vector, kept simultaneously in real
/// coordinates (x; y) in R^2n x R^2n and holomorphic coordinates (z; v) in
/// C^n x C^n with z^a = x^a + i x^(a+n), v^a = y^a + i y^(a+n).
struct PointState {
    int n = 0;
    RealVector x; // 2n
    RealVector y; // 2n
    ComplexVector z; // n
    ComplexVector v; // n

    static PointState from_real(const RealVector& x, const RealVector& y);
    static PointState from_complex(const ComplexVector& z, const ComplexVector& v);
};

/// Canonical complex structure, acting block-identically on the base (d/dx)
/// and fiber (d/dy) frames: (u^a, u^(a*)) -> (-u^(a*), u^a).
RealVector apply_J(const RealVector& u);

/// J extended complex-linearly to complexified vectors.
ComplexifiedVector apply_J(const ComplexifiedVector& u);

/// (1,0)-part coefficients of a complexified vector in the d/dv (or d/dz)
/// frame: c^a = u^a + i u^(a+n).
ComplexVector type10_part(const ComplexifiedVector& u);

/// (0,1)-part coefficients in the conjugate frame: c^a = u^a - i u^(a+n).
ComplexVector type01_part(const ComplexifiedVector& u);

/// The `_o` map u -> (u - i J u)/2 followed by the frame identification, for
/// real input vectors; returns ((1,0) coefficients, (0,1) coefficients).
std::pair<ComplexVector, ComplexVector> decompose_type(const RealVector& u);

/// The `^o` map V -> V + conj(V): real coordinates of a (1,0) vector.
RealVector realify(const ComplexVector& V);

/// Embeds a (1,0) vector into the complexified real frame (2n complex
/// components): d/dv^a = (d/dy^a - i d/dy^(a+n))/2.
ComplexifiedVector embed_type10(const ComplexVector& V);

/// Embeds a (0,1) vector (coefficients on the conjugate frame).
ComplexifiedVector embed_type01(const ComplexVector& V);

} // namespace finsler
