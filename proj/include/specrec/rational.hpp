#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace specrec {

namespace mp = boost::multiprecision;

/// Arbitrary-precision signed rational, always kept in lowest terms with
/// positive denominator.  Equality is structural.
using Rat = mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;
using Int = mp::number<mp::cpp_int_backend<>, mp::et_off>;

inline Rat ratFrom(long long num, long long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Rat(num, den);
}

inline Rat ratFromString(const std::string& s) { return Rat(s); }

inline std::string numeratorString(const Rat& r) { return numerator(r).str(); }
inline std::string denominatorString(const Rat& r) { return denominator(r).str(); }

inline std::string ratToString(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double ratToDouble(const Rat& r) { return r.convert_to<double>(); }

inline Rat ratPow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (e < 0) {
        if (base == 0) throw std::domain_error("0 raised to negative power");
        return Rat(1) / ratPow(base, -e);
    }
    Rat acc(1), b = base;
    long n = e;
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

/// Exact square root of a rational, when one exists.
inline bool ratSqrt(const Rat& r, Rat& out) {
    if (r < 0) return false;
    Int n = numerator(r), d = denominator(r);
    Int sn = sqrt(n), sd = sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    out = Rat(sn, sd);
    return true;
}

inline Rat factorial(long n) {
    Rat acc(1);
    for (long i = 2; i <= n; ++i) acc *= i;
    return acc;
}

/// (2k+1)!! = 1*3*5*...*(2k+1)
inline Rat oddDoubleFactorial(long k) {
    Rat acc(1);
    for (long i = 3; i <= 2 * k + 1; i += 2) acc *= i;
    return acc;
}

inline Rat binomial(long n, long k) {
    if (k < 0 || k > n) return Rat(0);
    Rat acc(1);
    for (long i = 0; i < k; ++i) acc = acc * Rat(n - i) / Rat(i + 1);
    return acc;
}

}  // namespace specrec
