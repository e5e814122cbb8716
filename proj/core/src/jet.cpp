#include "finsler/jet.hpp"

#include <cmath>

namespace finsler {

namespace {

// Factorial reciprocals for the order-4 truncation.
constexpr double kInvFactorial[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};

Jet nilpotent_part(const Jet& a) {
    Jet n = a;
    n.set_coeff(0, 0.0);
    return n;
}

ComplexJet nilpotent_part(const ComplexJet& a) {
    return {nilpotent_part(a.re), nilpotent_part(a.im)};
}

} // namespace

Jet taylor(const Jet& a, std::span<const double> derivs) {
    const Jet n = nilpotent_part(a);
    Jet result(derivs[0]);
    Jet power(1.0);
    const int order = static_cast<int>(derivs.size()) - 1;
    for (int m = 1; m <= order && m <= Jet::kSlots; ++m) {
        power *= n;
        result += power * (derivs[m] * kInvFactorial[m]);
    }
    return result;
}

ComplexJet taylor(const ComplexJet& a, std::span<const std::complex<double>> derivs) {
    const ComplexJet n = nilpotent_part(a);
    ComplexJet result(derivs[0]);
    ComplexJet power(1.0);
    const int order = static_cast<int>(derivs.size()) - 1;
    for (int m = 1; m <= order && m <= Jet::kSlots; ++m) {
        power *= n;
        result += power * (derivs[m] * kInvFactorial[m]);
    }
    return result;
}

Jet reciprocal(const Jet& a) {
    const double x = a.value();
    if (std::abs(x) < kBranchFloor) throw DomainError("jet division by a value below 1e-14");
    const double ix = 1.0 / x;
    const double d[5] = {ix, -ix * ix, 2.0 * ix * ix * ix, -6.0 * ix * ix * ix * ix,
                         24.0 * ix * ix * ix * ix * ix};
    return taylor(a, d);
}

Jet sqrt(const Jet& a) {
    const double x = a.value();
    if (x < kBranchFloor) throw DomainError("jet sqrt at or below the branch point");
    const double r = std::sqrt(x);
    const double d[5] = {r, 0.5 / r, -0.25 / (x * r), 0.375 / (x * x * r),
                         -0.9375 / (x * x * x * r)};
    return taylor(a, d);
}

Jet pow(const Jet& a, const Rational& r) {
    if (r.den == 0) throw ParamError("pow exponent with zero denominator");
    if (r.is_integer()) {
        long long k = r.num / r.den;
        if (k == 0) return Jet(1.0);
        Jet base = a;
        if (k < 0) {
            base = reciprocal(a);
            k = -k;
        }
        Jet acc(1.0);
        while (k > 0) {
            if (k & 1) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }
    const double x = a.value();
    if (x < kBranchFloor) throw DomainError("jet pow with non-integer exponent at or below the branch point");
    // d[m] = e(e-1)...(e-m+1) x^(e-m)
    const double e = r.value();
    double d[5];
    double coeff = 1.0;
    for (int m = 0; m <= 4; ++m) {
        d[m] = coeff * std::pow(x, e - m);
        coeff *= (e - m);
    }
    return taylor(a, d);
}

ComplexJet reciprocal(const ComplexJet& a) {
    const std::complex<double> w = a.value();
    if (std::abs(w) < kBranchFloor) throw DomainError("complex jet division by a value below 1e-14");
    const ComplexJet cc = conj(a);
    const Jet inv_norm = reciprocal(abs2(a));
    return {cc.re * inv_norm, cc.im * inv_norm};
}

ComplexJet sqrt(const ComplexJet& a) {
    const std::complex<double> w = a.value();
    if (std::abs(w) < kBranchFloor) throw DomainError("complex jet sqrt at or below the branch point");
    const std::complex<double> r = std::sqrt(w);
    const std::complex<double> d[5] = {r, 0.5 / r, -0.25 / (w * r), 0.375 / (w * w * r),
                                       -0.9375 / (w * w * w * r)};
    return taylor(a, d);
}

ComplexJet pow(const ComplexJet& a, long long k) {
    if (k == 0) return ComplexJet(1.0);
    ComplexJet base = a;
    if (k < 0) {
        base = reciprocal(a);
        k = -k;
    }
    ComplexJet acc(1.0);
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

ComplexJet pow(const ComplexJet& a, const Rational& r) {
    if (r.den == 0) throw ParamError("pow exponent with zero denominator");
    if (r.is_integer()) return pow(a, r.num / r.den);
    const std::complex<double> w = a.value();
    if (std::abs(w) < kBranchFloor) throw DomainError("complex jet pow with non-integer exponent at or below the branch point");
    const double e = r.value();
    std::complex<double> d[5];
    std::complex<double> coeff = 1.0;
    for (int m = 0; m <= 4; ++m) {
        d[m] = coeff * std::pow(w, std::complex<double>(e - m));
        coeff *= (e - m);
    }
    return taylor(a, d);
}

} // namespace finsler
