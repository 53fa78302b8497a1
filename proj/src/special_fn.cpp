#include "quasirbf/special_fn.hpp"
#include "quasirbf/errors.hpp"

#include <cmath>
#include <limits>

namespace quasirbf {

namespace {

// Lanczos coefficients, g = 7, n = 9 (Godfrey / Boost choice). Relative error
// of the rational part is below 2e-15 on the right half plane.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

bool is_nonpositive_integer(std::complex<double> z, double tol = 1e-12) {
    if (z.imag() != 0.0) return false;
    double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol * std::max(1.0, std::abs(z.real()));
}

std::complex<double> lanczos_sum(std::complex<double> z) {
    // z with Re(z) >= 0.5, shifted convention Gamma(z) = ... A(z-1)
    std::complex<double> x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z - 1.0 + double(i));
    return x;
}

std::complex<double> gamma_positive_half(std::complex<double> z) {
    // Re(z) >= 0.5
    std::complex<double> x = lanczos_sum(z);
    std::complex<double> t = z - 1.0 + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z - 0.5) * std::exp(-t) * x;
}

std::complex<double> log_gamma_positive_half(std::complex<double> z) {
    std::complex<double> x = lanczos_sum(z);
    std::complex<double> t = z - 1.0 + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(x);
}

} // namespace

SpecialFnResult gamma(std::complex<double> z) {
    if (is_nonpositive_integer(z)) return {{0.0, 0.0}, true};
    if (z.real() >= 0.5) return {gamma_positive_half(z), false};
    // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
    std::complex<double> s = std::sin(kPi * z);
    return {kPi / (s * gamma_positive_half(1.0 - z)), false};
}

double gamma_real(double x) {
    SpecialFnResult r = gamma({x, 0.0});
    if (r.is_pole) return std::numeric_limits<double>::infinity();
    return r.value.real();
}

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.real() >= 0.5) return log_gamma_positive_half(z);
    // log pi - log sin(pi z) - log Gamma(1-z); branch jumps are harmless for
    // callers that exponentiate sums of these terms.
    std::complex<double> s = std::sin(kPi * z);
    return std::log(std::complex<double>(kPi)) - std::log(s) - log_gamma_positive_half(1.0 - z);
}

SpecialFnResult digamma(std::complex<double> z) {
    if (is_nonpositive_integer(z)) return {{0.0, 0.0}, true};
    // reflection for the left half plane, then recurrence up to |z| >= 16,
    // then the Bernoulli asymptotic series.
    std::complex<double> shift{0.0, 0.0};
    if (z.real() < 0.5) {
        // psi(z) = psi(1-z) - pi cot(pi z)
        shift -= kPi / std::tan(kPi * z);
        z = 1.0 - z;
    }
    while (std::abs(z) < 16.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    static const double b[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
                               5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
    std::complex<double> w = 1.0 / (z * z);
    std::complex<double> sum = std::log(z) - 0.5 / z;
    std::complex<double> p = w;
    for (int k = 0; k < 8; ++k) {
        sum -= b[k] / (2.0 * (k + 1)) * p;
        p *= w;
    }
    return {sum + shift, false};
}

double digamma_real(double x) {
    SpecialFnResult r = digamma({x, 0.0});
    if (r.is_pole) return std::numeric_limits<double>::infinity();
    return r.value.real();
}

double harmonic(int m) {
    if (m < 0) throw spec_error("harmonic: m must be >= 0");
    double s = 0.0;
    for (int k = m; k >= 1; --k) s += 1.0 / k;
    return s;
}

double bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw spec_error("bessel_k: x must be > 0");
    nu = std::abs(nu); // K_{-nu} = K_{nu}
    if (x > 705.0) return 0.0; // below double underflow of exp(-x)
    return std::cyl_bessel_k(nu, x);
}

} // namespace quasirbf
