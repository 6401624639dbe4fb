#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gg {

using Rational = boost::multiprecision::cpp_rational;

/// Exact complex scalar over the Gaussian rationals Q(i).
struct GaussianRational {
    Rational re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long v) : re(v), im(0) {}
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }
    Rational abs_sq() const { return re * re + im * im; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational d = b.abs_sq();
        if (d == 0) throw std::domain_error("GaussianRational: division by zero");
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
    GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
    GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
    GaussianRational& operator/=(const GaussianRational& b) { return *this = *this / b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

/// Exact square root of a non-negative rational, if it exists in Q.
inline std::optional<Rational> rational_sqrt(const Rational& r) {
    using boost::multiprecision::cpp_int;
    if (r < 0) return std::nullopt;
    if (r == 0) return Rational(0);
    cpp_int num = numerator(r), den = denominator(r);
    cpp_int sn = sqrt(num), sd = sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<GaussianRational> {
    static constexpr bool exact = true;
    using real_type = Rational;

    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return {1}; }
    static GaussianRational imag_unit() { return {Rational(0), Rational(1)}; }
    static GaussianRational from_int(long v) { return {v}; }
    static GaussianRational from_ratio(long num, long den) { return {Rational(num, den)}; }
    static GaussianRational make(Rational re, Rational im) { return {std::move(re), std::move(im)}; }

    static GaussianRational conj(const GaussianRational& x) { return x.conj(); }
    static GaussianRational real(const GaussianRational& x) { return {x.re}; }
    static GaussianRational imag(const GaussianRational& x) { return {x.im}; }
    static bool is_zero(const GaussianRational& x) { return x.is_zero(); }
    static bool is_negligible(const GaussianRational& x) { return x.is_zero(); }
    static bool is_real(const GaussianRational& x) { return x.is_real(); }
    static bool is_positive(const GaussianRational& x) { return x.im == 0 && x.re > 0; }

    /// Magnitude proxy for reports; exact checks never rely on it.
    static double approx_abs(const GaussianRational& x) {
        return std::sqrt(static_cast<double>(x.abs_sq()));
    }
    static std::optional<GaussianRational> try_sqrt_real(const GaussianRational& x) {
        if (!x.is_real()) return std::nullopt;
        auto s = rational_sqrt(x.re);
        if (!s) return std::nullopt;
        return GaussianRational(*s);
    }
    static std::string display(const GaussianRational& x) {
        auto rat = [](const Rational& r) {
            std::ostringstream os;
            os << r;
            return os.str();
        };
        if (x.im == 0) return rat(x.re);
        return "(" + rat(x.re) + "," + rat(x.im) + ")";
    }
};

template <>
struct scalar_traits<std::complex<double>> {
    static constexpr bool exact = false;
    using real_type = double;
    static constexpr double eps = 1e-12;

    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> imag_unit() { return {0.0, 1.0}; }
    static std::complex<double> from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static std::complex<double> from_ratio(long num, long den) {
        return {static_cast<double>(num) / static_cast<double>(den), 0.0};
    }
    static std::complex<double> make(double re, double im) { return {re, im}; }

    static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
    static std::complex<double> real(const std::complex<double>& x) { return {x.real(), 0.0}; }
    static std::complex<double> imag(const std::complex<double>& x) { return {x.imag(), 0.0}; }
    static bool is_zero(const std::complex<double>& x) { return x == std::complex<double>{}; }
    static bool is_negligible(const std::complex<double>& x) { return std::abs(x) < eps; }
    static bool is_real(const std::complex<double>& x) { return std::abs(x.imag()) < eps; }
    static bool is_positive(const std::complex<double>& x) { return is_real(x) && x.real() > eps; }

    static double approx_abs(const std::complex<double>& x) { return std::abs(x); }
    static std::optional<std::complex<double>> try_sqrt_real(const std::complex<double>& x) {
        if (x.real() < 0 || !is_real(x)) return std::nullopt;
        return std::complex<double>{std::sqrt(x.real()), 0.0};
    }
    static std::string display(const std::complex<double>& x) {
        std::ostringstream os;
        os.precision(15);
        if (std::abs(x.imag()) < eps) {
            os << x.real();
        } else {
            os << "(" << x.real() << "," << x.imag() << ")";
        }
        return os.str();
    }
};

using Exact = GaussianRational;
using Floating = std::complex<double>;

}  // namespace gg
