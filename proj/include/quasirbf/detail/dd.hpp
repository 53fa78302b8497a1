#ifndef QUASIRBF_DETAIL_DD_HPP
#define QUASIRBF_DETAIL_DD_HPP

// Double-double arithmetic (Dekker/Knuth error-free transforms). Residue
// series of the Mellin-Barnes transforms cancel like exp(2cs); summing them
// in ~31-digit arithmetic keeps 1e-8 relative accuracy up to cs ~ 25.

#include <cmath>
#include <cstdint>

namespace quasirbf::detail {

struct Dd {
    double hi = 0.0;
    double lo = 0.0;

    Dd() = default;
    constexpr Dd(double h, double l = 0.0) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

inline Dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline Dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline Dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Dd operator+(Dd a, Dd b) {
    // accurate (Knuth) variant: stays exact-to-2ulp under heavy cancellation
    Dd s = two_sum(a.hi, b.hi);
    Dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Dd operator-(Dd a) { return {-a.hi, -a.lo}; }
inline Dd operator-(Dd a, Dd b) { return a + (-b); }

inline Dd operator*(Dd a, Dd b) {
    Dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline Dd operator/(Dd a, Dd b) {
    double q1 = a.hi / b.hi;
    Dd r = a - b * Dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * Dd(q2);
    double q3 = r.hi / b.hi;
    Dd q = quick_two_sum(q1, q2);
    return q + Dd(q3);
}

inline Dd dd_from_ratio(long long num, long long den) {
    return Dd(double(num)) / Dd(double(den));
}

inline constexpr Dd kDdPi{3.141592653589793, 1.2246467991473532e-16};
inline constexpr Dd kDdEuler{0.5772156649015329, -4.942915152430645e-18};
inline constexpr Dd kDdLn2{0.6931471805599453, 2.3190468138462996e-17};
inline constexpr Dd kDdSqrtPi{1.772453850905516, -7.666586499825799e-17};

// ln of a positive Dd to full double-double accuracy. The log factor of the
// residue series multiplies a large non-cancelling partial sum, so its
// absolute error enters the final cancelled result directly.
inline Dd dd_log(Dd x) {
    // x = m * 2^e with m in [~0.71, ~1.41), then ln m = 2 atanh((m-1)/(m+1))
    int e;
    std::frexp(x.hi, &e);
    double sc = std::ldexp(1.0, -e); // exact
    Dd m{x.hi * sc, x.lo * sc};
    if (m.hi < 0.70710678118654752) {
        m.hi *= 2.0;
        m.lo *= 2.0;
        e -= 1;
    }
    Dd u = (m - Dd(1.0)) / (m + Dd(1.0)); // |u| <= 0.172
    Dd u2 = u * u;
    Dd term = u;
    Dd acc(0.0);
    for (int k = 0; k <= 25; ++k) {
        acc = acc + term / Dd(2.0 * k + 1.0);
        term = term * u2;
        if (std::abs(term.hi) < 1e-35 * (std::abs(acc.hi) + 1e-300)) break;
    }
    acc = acc * Dd(2.0);
    return acc + Dd(double(e)) * kDdLn2;
}

// Dd scaled by a power of two to dodge overflow of long Gamma recurrences.
struct Sdd {
    Dd m{0.0, 0.0};
    long e = 0; // value = m * 2^e

    static Sdd from(Dd v) {
        Sdd s;
        s.m = v;
        s.normalize();
        return s;
    }
    static Sdd one() { return {Dd(1.0), 0}; }
    static Sdd zero() { return {Dd(0.0), 0}; }

    bool is_zero() const { return m.hi == 0.0; }

    void normalize() {
        if (m.hi == 0.0) { e = 0; m.lo = 0.0; return; }
        int k;
        std::frexp(m.hi, &k);
        m.hi = std::ldexp(m.hi, -k);
        m.lo = std::ldexp(m.lo, -k);
        e += k;
    }

    double to_double() const { return std::ldexp(m.hi, int(e)) + std::ldexp(m.lo, int(e)); }
    Dd to_dd() const { return {std::ldexp(m.hi, int(e)), std::ldexp(m.lo, int(e))}; }
    double log2_abs() const { return std::log2(std::abs(m.hi)) + double(e); }
};

inline Sdd operator*(Sdd a, Sdd b) {
    Sdd r;
    r.m = a.m * b.m;
    r.e = a.e + b.e;
    r.normalize();
    return r;
}

inline Sdd operator/(Sdd a, Sdd b) {
    Sdd r;
    r.m = a.m / b.m;
    r.e = a.e - b.e;
    r.normalize();
    return r;
}

inline Sdd operator*(Sdd a, Dd b) { return a * Sdd::from(b); }
inline Sdd operator/(Sdd a, Dd b) { return a / Sdd::from(b); }
inline Sdd operator-(Sdd a) { return {-a.m, a.e}; }

inline Sdd sdd_pow_int(Sdd base, long k) {
    if (k < 0) return Sdd::one() / sdd_pow_int(base, -k);
    Sdd r = Sdd::one();
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

// Gamma(p/2) for integer p, p/2 not a non-positive integer (p odd or p >= 2).
// Exact rational recurrence from Gamma(1) / Gamma(1/2).
inline Sdd sdd_gamma_half_integer(long p) {
    Sdd acc;
    long k; // current argument = k/2
    if (p % 2 == 0) {
        acc = Sdd::one();
        k = 2;
    } else {
        acc = Sdd::from(kDdSqrtPi);
        k = 1;
    }
    while (k < p) {
        acc = acc * Dd(double(k) / 2.0); // Gamma(x+1) = x Gamma(x)
        k += 2;
    }
    while (k > p) {
        k -= 2;
        acc = acc / Dd(double(k) / 2.0); // Gamma(x) = Gamma(x+1)/x
    }
    return acc;
}

// psi(p/2) for integer p with p/2 not a non-positive integer.
inline Dd dd_digamma_half_integer(long p) {
    Dd acc;
    long k;
    if (p % 2 == 0) {
        acc = -kDdEuler; // psi(1)
        k = 2;
    } else {
        acc = -kDdEuler - Dd(2.0) * kDdLn2; // psi(1/2)
        k = 1;
    }
    while (k < p) {
        acc = acc + dd_from_ratio(2, k); // psi(x+1) = psi(x) + 1/x
        k += 2;
    }
    while (k > p) {
        k -= 2;
        acc = acc - dd_from_ratio(2, k);
    }
    return acc;
}

inline Sdd sdd_factorial(long m) {
    Sdd r = Sdd::one();
    for (long k = 2; k <= m; ++k) r = r * Dd(double(k));
    return r;
}

} // namespace quasirbf::detail

#endif
