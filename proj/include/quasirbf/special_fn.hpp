#ifndef QUASIRBF_SPECIAL_FN_HPP
#define QUASIRBF_SPECIAL_FN_HPP

#include <complex>

namespace quasirbf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Result of gamma/digamma evaluation. is_pole is set instead of throwing when
// the argument hits a non-positive-integer pole; residue calculus probes such
// points routinely.
struct SpecialFnResult {
    std::complex<double> value{0.0, 0.0};
    bool is_pole = false;
};

// Gamma(z). Accurate to >= 12 significant digits for |z| <= 50 away from poles.
SpecialFnResult gamma(std::complex<double> z);
double gamma_real(double x); // convenience wrapper; +/-inf at poles

// log Gamma(z) as a complex value; exp(log_gamma(z)) == Gamma(z) up to rounding.
// Used where ratios of huge Gamma values must not overflow.
std::complex<double> log_gamma(std::complex<double> z);

// psi^0(z), the digamma function.
SpecialFnResult digamma(std::complex<double> z);
double digamma_real(double x);

// H_m = sum_{k=1}^m 1/k, H_0 = 0.
double harmonic(int m);

// Modified Bessel function of the second kind K_nu(x), x > 0.
double bessel_k(double nu, double x);

} // namespace quasirbf

#endif
