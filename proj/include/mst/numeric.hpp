#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mst {

using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex  = std::complex<double>;

/// Raised when a numeric procedure fails its own quality gates
/// (root residuals, realness checks, invalid parameter regimes).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
inline double to_double(const T& x) {
    if constexpr (std::is_same_v<T, Rational>) {
        return x.template convert_to<double>();
    } else {
        return static_cast<double>(x);
    }
}

/// Exact conversion; doubles are dyadic rationals so nothing is lost.
template <class T>
inline T from_double(double x) {
    if constexpr (std::is_same_v<T, Rational>) {
        return Rational(x);
    } else {
        return static_cast<T>(x);
    }
}

inline BigInt factorial_big(long n) {
    BigInt r = 1;
    for (long k = 2; k <= n; ++k) r *= k;
    return r;
}

inline double factorial(long n) {
    double r = 1.0;
    for (long k = 2; k <= n; ++k) r *= static_cast<double>(k);
    return r;
}

/// C(n, k) as an exact integer; 0 when n < k or k < 0.
inline BigInt binomial_big(long n, long k) {
    if (k < 0 || n < 0 || n < k) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline double binomial(long n, long k) {
    if (k < 0 || n < 0 || n < k) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (long i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

inline double harmonic(long n) {
    double h = 0.0;
    for (long k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
    return h;
}

inline double harmonic2(long n) {
    double h = 0.0;
    for (long k = 1; k <= n; ++k) h += 1.0 / (static_cast<double>(k) * static_cast<double>(k));
    return h;
}

inline Rational harmonic_rational(long n) {
    Rational h = 0;
    for (long k = 1; k <= n; ++k) h += Rational(1, k);
    return h;
}

/// Rising factorial x(x+1)...(x+r-1).
template <class T>
inline T rising(T x, long r) {
    T p = T(1);
    for (long k = 0; k < r; ++k) p *= (x + T(k));
    return p;
}

/// Gamma(a)/Gamma(b) for a, b > 0, via log-gamma to dodge overflow.
inline double gamma_ratio(double a, double b) {
    return std::exp(std::lgamma(a) - std::lgamma(b));
}

/// m! Gamma(v+1)/Gamma(v+m); the transfer-theorem denominator ingredient.
inline double homogeneity_ratio(int m, double v) {
    return std::exp(std::lgamma(m + 1.0) + std::lgamma(v + 1.0) - std::lgamma(v + m));
}

/// Enumerates multisets of positive parts (descending) with sum q,
/// each part <= max_part, at most max_parts of them.
template <class Fn>
inline void for_each_partition(int q, int max_part, int max_parts, Fn&& fn) {
    std::vector<int> parts;
    auto rec = [&](auto&& self, int rem, int mx, int left) -> void {
        if (rem == 0) {
            fn(parts);
            return;
        }
        if (left == 0) return;
        for (int p = std::min(mx, rem); p >= 1; --p) {
            parts.push_back(p);
            self(self, rem - p, p, left - 1);
            parts.pop_back();
        }
    };
    if (q == 0) {
        fn(parts);
        return;
    }
    if (max_part <= 0 || max_parts <= 0) return;
    rec(rec, q, max_part, max_parts);
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace mst
