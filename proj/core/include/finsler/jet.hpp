#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>

#include "finsler/errors.hpp"

namespace finsler {

/// Smallest magnitude accepted as the base point of sqrt / non-integer pow /
/// division. Below this the derivatives are garbage, so we refuse.
inline constexpr double kBranchFloor = 1e-14;

/// Exact rational exponent for pow().
struct Rational {
    long long num = 0;
    long long den = 1;

    constexpr Rational() = default;
    constexpr Rational(long long n) : num(n), den(1) {}
    constexpr Rational(long long n, long long d) : num(n), den(d) {}

    bool is_integer() const { return den != 0 && num % den == 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Truncated Taylor scalar carrying mixed partial derivatives along up to
/// four seeded directions.
///
/// Algebraically this is the quotient ring R[e0,e1,e2,e3]/(e_i^2): every
/// generator is nilpotent of order two, so a product of five or more
/// generators always contains a repeated one and vanishes. coeff(mask) is
/// the coefficient of the product of generators named by the bits of mask;
/// after seeding direction d_i into slot i, coeff(mask) equals the mixed
/// partial of the evaluated expression along the seeded slots of mask.
/// Repeated derivatives in one coordinate are obtained by seeding the same
/// coordinate into several slots.
class Jet {
public:
    static constexpr int kSlots = 4;
    static constexpr int kSize = 1 << kSlots;

    Jet() { c_.fill(0.0); }
    explicit Jet(double value) {
        c_.fill(0.0);
        c_[0] = value;
    }

    /// Seeds d/d(slot) = scale on top of a constant value.
    static Jet seeded(double value, int slot, double scale = 1.0) {
        if (slot < 0 || slot >= kSlots) throw OrderError("jet slot out of range");
        Jet j(value);
        j.c_[1u << slot] = scale;
        return j;
    }

    double value() const { return c_[0]; }
    double coeff(unsigned mask) const { return c_[mask & (kSize - 1)]; }
    void set_coeff(unsigned mask, double v) { c_[mask & (kSize - 1)] = v; }

    Jet operator-() const {
        Jet r;
        for (int i = 0; i < kSize; ++i) r.c_[i] = -c_[i];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(double s) {
        for (int i = 0; i < kSize; ++i) c_[i] *= s;
        return *this;
    }
    Jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(double s) {
        c_[0] -= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator-(double a, const Jet& b) { return Jet(a) - b; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(Jet a, double b) { return a *= (1.0 / b); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        // Subset convolution: the term of mask s collects every split of s
        // into disjoint generator sets (e_i^2 = 0 kills all other pairs).
        for (unsigned s = 0; s < kSize; ++s) {
            double acc = a.c_[0] * b.c_[s];
            for (unsigned t = s; t != 0; t = (t - 1) & s) acc += a.c_[t] * b.c_[s ^ t];
            r.c_[s] = acc;
        }
        return r;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(double a, const Jet& b);

private:
    std::array<double, kSize> c_;
};

/// Composes a scalar function through a jet: derivs[m] = f^(m)(a.value()),
/// m = 0..4. Exact on the truncated algebra.
Jet taylor(const Jet& a, std::span<const double> derivs);

Jet reciprocal(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, const Rational& r);

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(double a, const Jet& b) { return reciprocal(b) * a; }

/// Complex scalar over the jet ring. The ring is commutative, so ordinary
/// complex arithmetic formulas apply verbatim.
struct ComplexJet {
    Jet re, im;

    ComplexJet() = default;
    explicit ComplexJet(double v) : re(v), im() {}
    ComplexJet(double v, double w) : re(v), im(w) {}
    explicit ComplexJet(std::complex<double> v) : re(v.real()), im(v.imag()) {}
    explicit ComplexJet(const Jet& r) : re(r), im() {}
    ComplexJet(const Jet& r, const Jet& i) : re(r), im(i) {}

    std::complex<double> value() const { return {re.value(), im.value()}; }
    std::complex<double> coeff(unsigned mask) const { return {re.coeff(mask), im.coeff(mask)}; }

    ComplexJet operator-() const { return {-re, -im}; }

    ComplexJet& operator+=(const ComplexJet& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexJet& operator-=(const ComplexJet& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    friend ComplexJet operator+(ComplexJet a, const ComplexJet& b) { return a += b; }
    friend ComplexJet operator-(ComplexJet a, const ComplexJet& b) { return a -= b; }
    friend ComplexJet operator*(const ComplexJet& a, const ComplexJet& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    ComplexJet& operator*=(const ComplexJet& o) { return *this = *this * o; }

    friend ComplexJet operator*(const ComplexJet& a, double s) { return {a.re * s, a.im * s}; }
    friend ComplexJet operator*(double s, const ComplexJet& a) { return a * s; }
    friend ComplexJet operator*(const ComplexJet& a, std::complex<double> s) {
        return a * ComplexJet(s);
    }
    friend ComplexJet operator+(ComplexJet a, double s) {
        a.re += s;
        return a;
    }
    friend ComplexJet operator+(double s, ComplexJet a) {
        a.re += s;
        return a;
    }
    friend ComplexJet operator-(ComplexJet a, double s) {
        a.re -= s;
        return a;
    }
    friend ComplexJet operator-(double s, const ComplexJet& a) { return ComplexJet(s) - a; }
    friend ComplexJet operator/(const ComplexJet& a, const ComplexJet& b);
    friend ComplexJet operator/(const ComplexJet& a, double s) { return a * (1.0 / s); }
};

inline ComplexJet conj(const ComplexJet& a) { return {a.re, -a.im}; }
inline Jet real_part(const ComplexJet& a) { return a.re; }
inline Jet imag_part(const ComplexJet& a) { return a.im; }
inline Jet abs2(const ComplexJet& a) { return a.re * a.re + a.im * a.im; }

ComplexJet reciprocal(const ComplexJet& a);
inline ComplexJet operator/(const ComplexJet& a, const ComplexJet& b) { return a * reciprocal(b); }

/// Complex Taylor composition (principal branch data supplied by caller).
ComplexJet taylor(const ComplexJet& a, std::span<const std::complex<double>> derivs);

ComplexJet sqrt(const ComplexJet& a);
ComplexJet pow(const ComplexJet& a, const Rational& r);
ComplexJet pow(const ComplexJet& a, long long k);

} // namespace finsler
