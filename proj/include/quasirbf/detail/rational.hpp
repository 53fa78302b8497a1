#ifndef QUASIRBF_DETAIL_RATIONAL_HPP
#define QUASIRBF_DETAIL_RATIONAL_HPP

// Exact rational bookkeeping for Mellin-Barnes pole locations. Pole collision
// and cancellation decisions are integer questions; doing them in exact
// arithmetic keeps the m0/t0 accounting free of tolerance artifacts.

#include <cstdint>
#include <numeric>
#include <cmath>
#include <optional>

namespace quasirbf::detail {

struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    double to_double() const { return double(num) / double(den); }
    bool is_integer() const { return den == 1; }
    bool is_nonpositive_integer() const { return den == 1 && num <= 0; }

    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(Rat a, Rat b) { return Rat(a.num * b.den, a.den * b.num); }
    friend Rat operator-(Rat a) { return Rat(-a.num, a.den); }
    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(Rat a, Rat b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(Rat a, Rat b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(Rat a, Rat b) { return b < a; }
    friend bool operator>=(Rat a, Rat b) { return b <= a; }
};

// Snap a double to a small-denominator rational (continued fractions).
// Returns nullopt if no denominator <= max_den reproduces x within tol.
inline std::optional<Rat> rat_from_double(double x, long long max_den = 1000000,
                                          double tol = 1e-12) {
    if (!std::isfinite(x)) return std::nullopt;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(v);
        if (fl > 9e17 || fl < -9e17) return std::nullopt;
        long long a = (long long)fl;
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double approx = double(p1) / double(q1);
        if (std::abs(approx - x) <= tol * std::max(1.0, std::abs(x))) return Rat(p1, q1);
        double frac = v - fl;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    return std::nullopt;
}

} // namespace quasirbf::detail

#endif
