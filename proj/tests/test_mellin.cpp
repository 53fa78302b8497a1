#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "quasirbf/errors.hpp"
#include "quasirbf/mellin.hpp"
#include "quasirbf/special_fn.hpp"

using namespace quasirbf;
using cplx = std::complex<double>;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// Shrinking-circle oracle: residue of the bare integrand (gamma product times
// (2/(cs))^{lam t}) by trapezoidal quadrature around the pole. Independent of
// the analytic residue formulas.
double circle_residue(const mb::IntegrandDesc& desc, const RbfSpec& spec, double s,
                      double center, double radius) {
    const int M = 256;
    double lnz = desc.lam.to_double() * std::log(2.0 / (spec.c * s));
    cplx acc = 0.0;
    for (int k = 0; k < M; ++k) {
        double th = 2.0 * kPi * k / M;
        cplx t = cplx(center) + radius * cplx(std::cos(th), std::sin(th));
        cplx w = t * lnz;
        for (const auto& f : desc.factors) {
            cplx arg = cplx(f.a.to_double()) + cplx(f.b.to_double()) * t;
            w += double(f.sgn) * log_gamma(arg);
        }
        // f(t) * dt/dtheta = f(t) * i radius e^{i theta}
        acc += std::exp(w) * cplx(0.0, 1.0) * radius * cplx(std::cos(th), std::sin(th));
    }
    acc *= 2.0 * kPi / M;          // integral over theta
    acc /= cplx(0.0, 2.0 * kPi);   // 1/(2 pi i)
    return acc.real();
}

double contribution_via_circle(const MbIntegrand& ig, const PoleDatum& p, double s,
                               double orient) {
    auto desc = mb::build_desc(ig);
    double r = circle_residue(desc, ig.spec, s, p.location, 0.25 / (1.0 + std::abs(desc.lam.to_double())));
    return orient * desc.pref_const * std::pow(s, desc.pref_pow_s) * r;
}

} // namespace

TEST_CASE("pole enumeration: classical TPS (n=2, d=1) has a simple pole at 0") {
    MbIntegrand ig{MbWhich::TpsIII, RbfSpec::tps(2, 1.0, 1)};
    auto poles = enumerate_poles(ig, HalfPlane::Left, 6);
    REQUIRE(!poles.empty());
    CHECK(poles[0].location == 0.0);
    CHECK(poles[0].order == 1); // Gamma(t)^2 double pole reduced by 1/Gamma(-d)
    // t = -1 is fully cancelled, first double pole at t0 = -2
    bool found_m1 = false, found_m2 = false;
    for (const auto& p : poles) {
        if (p.location == -1.0) { found_m1 = true; CHECK(p.cancelled); }
        if (p.location == -2.0) { found_m2 = true; CHECK(p.order == 2); }
    }
    CHECK(found_m1);
    CHECK(found_m2);
}

TEST_CASE("pole enumeration: n=2, d=2 first double pole at t0 = -2 (m0 = 1)") {
    MbIntegrand ig{MbWhich::TpsIII, RbfSpec::tps(2, 1.0, 2)};
    auto poles = enumerate_poles(ig, HalfPlane::Left, 20);
    const PoleDatum* first_double = nullptr;
    for (const auto& p : poles)
        if (p.order == 2) { first_double = &p; break; }
    REQUIRE(first_double != nullptr);
    CHECK(first_double->location == -2.0); // t0 = -1 - ceil(n/(2d)) = -2
    // log power = -n-2d - 2d*t0 = 2 -> m0 = 1 = d - (n/2 mod d)
    double log_power = -(2.0 + 4.0) - 4.0 * first_double->location;
    CHECK(log_power == 2.0);
}

TEST_CASE("pole enumeration: power family merged pole (lambda=2, beta=-1/2, n=1)") {
    MbIntegrand ig{MbWhich::PowerFamily, RbfSpec::power(1, 1.0, 2.0, -0.5)};
    auto poles = enumerate_poles(ig, HalfPlane::Left, 4);
    REQUIRE(!poles.empty());
    // beta-family pole at t = beta collides with the first dimension-gamma
    // pole at t = -n/lambda = -1/2: order-2 merged pole, logarithmic leading
    CHECK(poles[0].location == doctest::Approx(-0.5));
    CHECK(poles[0].order == 2);
    CHECK(poles[0].source == PoleSource::Merged);
}

TEST_CASE("residue values: TPS leading 16 pi s^-4 and power family -2 s^-2") {
    MbIntegrand tps{MbWhich::TpsIII, RbfSpec::tps(2, 1.0, 1)};
    auto poles = enumerate_poles(tps, HalfPlane::Left, 1);
    double s = 0.37;
    CHECK(rel(residue_at(tps, poles[0], s), 16.0 * kPi / std::pow(s, 4)) < 1e-13);

    MbIntegrand pw{MbWhich::PowerFamily, RbfSpec::power(1, 1.0, 2.0, 0.5)};
    auto ppoles = enumerate_poles(pw, HalfPlane::Left, 1);
    CHECK(ppoles[0].location == doctest::Approx(0.5)); // t = beta
    CHECK(rel(residue_at(pw, ppoles[0], s), -2.0 / (s * s)) < 1e-13);
}

TEST_CASE("residues cross-checked by shrinking-circle quadrature") {
    double s = 0.8;
    MbIntegrand ig{MbWhich::TpsIII, RbfSpec::tps(2, 1.3, 2)};
    auto poles = enumerate_poles(ig, HalfPlane::Left, 8);
    int checked = 0;
    for (const auto& p : poles) {
        if (p.cancelled) {
            // cancelled locations: the contour integral around them vanishes
            double v = contribution_via_circle(ig, p, s, 1.0);
            CHECK(std::abs(v) < 1e-8 * std::max(1.0, std::abs(residue_at(ig, poles[0], s))));
            ++checked;
            continue;
        }
        double a = residue_at(ig, p, s);
        double b = contribution_via_circle(ig, p, s, 1.0);
        CHECK(rel(a, b) < 1e-8);
        ++checked;
        if (checked > 6) break;
    }
    CHECK(checked >= 4);
}

TEST_CASE("power-family residue vs circle, including a merged (order-2) pole") {
    double s = 0.9;
    MbIntegrand ig{MbWhich::PowerFamily, RbfSpec::power(1, 1.5, 2.0, -0.5)};
    auto poles = enumerate_poles(ig, HalfPlane::Left, 3);
    for (const auto& p : poles) {
        if (p.cancelled) continue;
        double a = residue_at(ig, p, s);
        double b = contribution_via_circle(ig, p, s, 1.0);
        CHECK(rel(a, b) < 1e-8);
    }
}

TEST_CASE("d=1 closed form: residue series matches 4 (2 pi)^{n/2} (c/s)^{n/2+1} K") {
    for (int n : {1, 2, 3, 4}) {
        for (double c : {0.5, 1.0, 2.0}) {
            for (double s : {0.1, 0.9, 3.7, 10.0}) {
                RbfSpec spec = RbfSpec::tps(n, c, 1);
                MbIntegrand ig{MbWhich::TpsSum, spec};
                FtValue v = eval_ft(ig, s, 1e-10);
                double cf = eval_ft_closed_form_d1(spec, s);
                CHECK(rel(v.value, cf) < 1e-8);
            }
        }
    }
}

TEST_CASE("closed form sanity: n=2, c=1: 4(2pi)(c/s)^2 K_2(cs)") {
    RbfSpec spec = RbfSpec::tps(2, 1.0, 1);
    CHECK(rel(eval_ft_closed_form_d1(spec, 1.0), 8.0 * kPi * bessel_k(2.0, 1.0)) < 1e-14);
    CHECK(rel(eval_ft_closed_form_d1(spec, 2.0), 2.0 * kPi * bessel_k(2.0, 2.0)) < 1e-14);
    CHECK(rel(eval_ft({MbWhich::TpsSum, spec}, 2.0, 1e-10).value,
              2.0 * kPi * bessel_k(2.0, 2.0)) < 1e-9);
}

TEST_CASE("FT3+4 consistency: TpsSum equals TpsIII + TpsIV") {
    for (double s : {0.2, 0.7, 1.9}) {
        for (int n : {2, 4}) {
            RbfSpec spec = RbfSpec::tps(n, 1.2, 2);
            double a = eval_ft({MbWhich::TpsIII, spec}, s, 1e-11).value;
            double b = eval_ft({MbWhich::TpsIV, spec}, s, 1e-11).value;
            double c = eval_ft({MbWhich::TpsSum, spec}, s, 1e-11).value;
            CHECK(rel(a + b, c) < 1e-9);
        }
    }
}

TEST_CASE("residue series and contour quadrature agree on an overlap band") {
    RbfSpec spec = RbfSpec::tps(2, 1.0, 2);
    for (double s : {0.6, 1.1, 1.7, 2.4}) {
        FtValue a = eval_ft_with_method({MbWhich::TpsSum, spec}, s, 1e-10, FtMethod::ResidueLeft);
        FtValue b = eval_ft_with_method({MbWhich::TpsSum, spec}, s, 1e-9, FtMethod::Contour);
        CHECK(rel(a.value, b.value) < 1e-7);
    }
    RbfSpec pw = RbfSpec::power(1, 1.0, 2.0, 0.5);
    for (double s : {0.5, 1.2}) {
        FtValue a = eval_ft_with_method({MbWhich::PowerFamily, pw}, s, 1e-10, FtMethod::ResidueLeft);
        FtValue b = eval_ft_with_method({MbWhich::PowerFamily, pw}, s, 1e-9, FtMethod::Contour);
        CHECK(rel(a.value, b.value) < 1e-7);
    }
}

TEST_CASE("power family: classical inverse multiquadric equals 2 K_0(c s)") {
    // lambda=2, beta=-1/2, n=1: exact transform of 1/sqrt(c^2+x^2); exercises
    // the merged order-2 pole machinery end to end
    for (double c : {1.0, 1.5}) {
        RbfSpec spec = RbfSpec::power(1, c, 2.0, -0.5);
        for (double s : {0.4, 0.9, 2.2}) {
            double v = eval_ft({MbWhich::PowerFamily, spec}, s, 1e-10).value;
            CHECK(rel(v, 2.0 * bessel_k(0.0, c * s)) < 1e-9);
        }
    }
}

TEST_CASE("power family: (1+x^2)^{-3/2} in 1-D equals 2 s K_1(s)") {
    RbfSpec spec = RbfSpec::power(1, 1.0, 2.0, -1.5);
    for (double s : {0.3, 1.2, 2.5}) {
        double v = eval_ft({MbWhich::PowerFamily, spec}, s, 1e-10).value;
        CHECK(rel(v, 2.0 * s * bessel_k(1.0, s)) < 1e-9);
    }
}

TEST_CASE("power family: 1-D multiquadric equals -(2c/s) K_1(c s)") {
    RbfSpec spec = RbfSpec::power(1, 3.0, 2.0, 0.5);
    for (double s : {0.5, 0.7, 1.4}) {
        double v = eval_ft({MbWhich::PowerFamily, spec}, s, 1e-10).value;
        CHECK(rel(v, -2.0 * spec.c / s * bessel_k(1.0, spec.c * s)) < 1e-9);
    }
}

TEST_CASE("c -> 0 limit of TpsIII approaches the pure power transform") {
    // n=2, d=2: limit coefficient (-1)^{d+1} 2^{n+2d} pi^{n/2} d Gamma(d+1) Gamma(n/2+d)
    RbfSpec spec = RbfSpec::tps(2, 1e-4, 2);
    double v = eval_ft({MbWhich::TpsIII, spec}, 1.0, 1e-10).value;
    double lim = -std::pow(2.0, 6) * kPi * 2.0 * gamma_real(3.0) * gamma_real(3.0);
    CHECK(lim == doctest::Approx(-512.0 * kPi));
    CHECK(rel(v, lim) < 1e-3);
}

TEST_CASE("oracle_hankel agrees with eval_ft across both families") {
    std::vector<double> eps{0.016, 0.008, 0.004, 0.002};
    {
        RbfSpec spec = RbfSpec::tps(2, 1.0, 1);
        double o = oracle_hankel(spec, 2.0, eps);
        CHECK(rel(eval_ft_closed_form_d1(spec, 2.0), o) < 1e-5);
    }
    {
        RbfSpec spec = RbfSpec::tps(2, 1.0, 2);
        double o = oracle_hankel(spec, 2.0, eps);
        CHECK(rel(eval_ft({MbWhich::TpsSum, spec}, 2.0, 1e-10).value, o) < 1e-5);
    }
    {
        RbfSpec spec = RbfSpec::power(1, 1.0, 2.0, 0.5); // Hardy multiquadric
        std::vector<double> deep{0.008, 0.004, 0.002, 0.001};
        double o = oracle_hankel(spec, 1.0, deep);
        CHECK(rel(eval_ft({MbWhich::PowerFamily, spec}, 1.0, 1e-10).value, o) < 1e-5);
    }
}

TEST_CASE("oracle_hankel input validation") {
    RbfSpec spec = RbfSpec::tps(2, 1.0, 1);
    CHECK_THROWS_AS(oracle_hankel(spec, -1.0, {0.01, 0.005, 0.0025}), spec_error);
    CHECK_THROWS_AS(oracle_hankel(spec, 1.0, {0.01, 0.005}), spec_error);
    CHECK_THROWS_AS(oracle_hankel(spec, 1.0, {0.005, 0.01, 0.02}), spec_error);
}

TEST_CASE("eval_ft input validation and degenerate detection") {
    RbfSpec spec = RbfSpec::tps(2, 1.0, 1);
    CHECK_THROWS_AS(eval_ft({MbWhich::TpsSum, spec}, 0.0, 1e-8), spec_error);
    CHECK_THROWS_AS(eval_ft({MbWhich::TpsSum, spec}, 1.0, 1e-16), spec_error);
    // left- and right-family poles colliding: lambda=-2, beta=7/2, n=1 puts
    // beta-family poles on top of the right-moving dimension-gamma ladder
    CHECK_THROWS_AS(enumerate_poles({MbWhich::PowerFamily, RbfSpec::power(1, 1.0, -2.0, 3.5)},
                                    HalfPlane::Left, 8),
                    spec_error);
}

TEST_CASE("large c s stress: dd residue series holds to 1e-8 against Bessel form") {
    RbfSpec spec = RbfSpec::tps(2, 2.0, 1);
    for (double s : {6.0, 8.5, 10.0}) { // c s up to 20
        FtValue v = eval_ft({MbWhich::TpsSum, spec}, s, 1e-9);
        double cf = eval_ft_closed_form_d1(spec, s);
        CHECK(rel(v.value, cf) < 1e-8);
    }
}
