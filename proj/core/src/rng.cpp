#include "finsler/rng.hpp"

#include <cmath>

namespace finsler {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 1e-300);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
}

RealVector Rng::sphere(int dim) {
    RealVector u(dim);
    double norm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) u[i] = normal();
        norm = u.norm();
    } while (norm < 1e-12);
    return u / norm;
}

ComplexVector Rng::complex_ball(int n, double radius) {
    const RealVector dir = sphere(2 * n);
    const double r = radius * std::pow(uniform(), 1.0 / (2.0 * n));
    ComplexVector z(n);
    for (int a = 0; a < n; ++a) z[a] = r * std::complex<double>(dir[a], dir[a + n]);
    return z;
}

ComplexVector Rng::complex_polydisk(int n, double radius) {
    ComplexVector z(n);
    for (int a = 0; a < n; ++a) {
        const double r = radius * std::sqrt(uniform());
        const double phi = 2.0 * M_PI * uniform();
        z[a] = std::complex<double>(r * std::cos(phi), r * std::sin(phi));
    }
    return z;
}

} // namespace finsler
