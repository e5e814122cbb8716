#include "finsler/geometry.hpp"

namespace finsler {

namespace {
const std::complex<double> kI(0.0, 1.0);
}

PointState PointState::from_real(const RealVector& x, const RealVector& y) {
    if (x.size() != y.size() || x.size() % 2 != 0 || x.size() == 0)
        throw DimensionError("PointState expects matching even-sized x and y");
    PointState p;
    p.n = static_cast<int>(x.size()) / 2;
    p.x = x;
    p.y = y;
    p.z.resize(p.n);
    p.v.resize(p.n);
    for (int a = 0; a < p.n; ++a) {
        p.z[a] = std::complex<double>(x[a], x[a + p.n]);
        p.v[a] = std::complex<double>(y[a], y[a + p.n]);
    }
    if (p.y.norm() < kVMin) throw DomainError("tangent vector below the slit-bundle floor");
    return p;
}

PointState PointState::from_complex(const ComplexVector& z, const ComplexVector& v) {
    if (z.size() != v.size() || z.size() == 0)
        throw DimensionError("PointState expects matching nonempty z and v");
    const int n = static_cast<int>(z.size());
    RealVector x(2 * n), y(2 * n);
    for (int a = 0; a < n; ++a) {
        x[a] = z[a].real();
        x[a + n] = z[a].imag();
        y[a] = v[a].real();
        y[a + n] = v[a].imag();
    }
    return from_real(x, y);
}

RealVector apply_J(const RealVector& u) {
    const int size = static_cast<int>(u.size());
    if (size % 2 != 0 || size == 0) throw DimensionError("apply_J expects 2n components");
    const int n = size / 2;
    RealVector r(size);
    for (int a = 0; a < n; ++a) {
        r[a] = -u[a + n];
        r[a + n] = u[a];
    }
    return r;
}

ComplexifiedVector apply_J(const ComplexifiedVector& u) {
    const int size = static_cast<int>(u.size());
    if (size % 2 != 0 || size == 0) throw DimensionError("apply_J expects 2n components");
    const int n = size / 2;
    ComplexifiedVector r(size);
    for (int a = 0; a < n; ++a) {
        r[a] = -u[a + n];
        r[a + n] = u[a];
    }
    return r;
}

ComplexVector type10_part(const ComplexifiedVector& u) {
    const int n = static_cast<int>(u.size()) / 2;
    ComplexVector c(n);
    for (int a = 0; a < n; ++a) c[a] = u[a] + kI * u[a + n];
    return c;
}

ComplexVector type01_part(const ComplexifiedVector& u) {
    const int n = static_cast<int>(u.size()) / 2;
    ComplexVector c(n);
    for (int a = 0; a < n; ++a) c[a] = u[a] - kI * u[a + n];
    return c;
}

std::pair<ComplexVector, ComplexVector> decompose_type(const RealVector& u) {
    ComplexifiedVector cu = u.cast<std::complex<double>>();
    return {type10_part(cu), type01_part(cu)};
}

RealVector realify(const ComplexVector& V) {
    const int n = static_cast<int>(V.size());
    RealVector u(2 * n);
    for (int a = 0; a < n; ++a) {
        u[a] = V[a].real();
        u[a + n] = V[a].imag();
    }
    return u;
}

ComplexifiedVector embed_type10(const ComplexVector& V) {
    const int n = static_cast<int>(V.size());
    ComplexifiedVector u(2 * n);
    for (int a = 0; a < n; ++a) {
        u[a] = 0.5 * V[a];
        u[a + n] = -0.5 * kI * V[a];
    }
    return u;
}

ComplexifiedVector embed_type01(const ComplexVector& V) {
    const int n = static_cast<int>(V.size());
    ComplexifiedVector u(2 * n);
    for (int a = 0; a < n; ++a) {
        u[a] = 0.5 * V[a];
        u[a + n] = 0.5 * kI * V[a];
    }
    return u;
}

} // namespace finsler
