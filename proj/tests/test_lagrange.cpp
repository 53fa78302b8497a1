#include <doctest.h>

#include <cmath>
#include <set>

#include "quasirbf/errors.hpp"
#include "quasirbf/lagrange.hpp"
#include "quasirbf/mellin.hpp"
#include "quasirbf/special_fn.hpp"

using namespace quasirbf;

namespace {

Stencil tps21_stencil() {
    RbfSpec spec = RbfSpec::tps(2, 1.0, 1);
    return build_stencil(tps_expansion_full(spec, 1.0), 2, 3);
}

double monomial_moment(const Stencil& st, const Offset& gamma) {
    double acc = 0.0;
    for (const auto& [alpha, mu] : st.offsets_and_coeffs) {
        double t = mu;
        for (size_t l = 0; l < gamma.size(); ++l)
            for (int r = 0; r < gamma[l]; ++r) t *= alpha[l];
        acc += t;
    }
    return acc;
}

} // namespace

TEST_CASE("TPS n=2 d=1 stencil exists on radius 2 and kills the singularity") {
    Stencil st = tps21_stencil();
    CHECK(st.singularity_order == 4);
    CHECK(st.reproduction_degree == 3);
    CHECK(st.leading_laurent_coeff == doctest::Approx(16.0 * kPi));

    // moment annihilation: all moments of degree < 4 vanish (exact arithmetic
    // on integers times the solved mu; tolerance covers the solve)
    for (const Offset& g : std::vector<Offset>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                                               {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}) {
        CHECK(std::abs(monomial_moment(st, g)) < 1e-12);
    }
    // this also annihilates the distributional transform pieces: constants
    // and the r^{2d} polynomial are degree <= 2 here
}

TEST_CASE("product residual: P(xi) phi_hat(xi) - 1 = O(|xi|^4 log) along rays") {
    RbfSpec spec = RbfSpec::tps(2, 1.0, 1);
    Stencil st = tps21_stencil();
    MbIntegrand ig{MbWhich::TpsSum, spec};
    // Predict the order-4 block of Psi_hat - 1 along e1 from the expansion
    // and the achieved Taylor blocks, then check the rest decays two orders
    // faster. (Double-precision mu quantization bounds how far the probe can
    // shrink: phi_hat ~ s^-4 amplifies ~1e-17 moment residues, so t >= 0.05.)
    AsymptoticExpansion full = tps_expansion_full(spec, 1.0);
    SymbolTaylor ty = symbol_taylor(st, 8);
    double K4 = 0.0, K2 = 0.0, Blog = 0.0, Bc = 0.0;
    for (const auto& term : full.terms) {
        if (term.power == -4.0) K4 = term.coeff;
        if (term.power == -2.0) K2 = term.coeff;
        if (term.has_log && term.power == 0.0) {
            Blog = term.coeff_of_log;
            Bc = term.coeff;
        }
    }
    double c4 = ty.coefficients.at(Offset{4, 0});
    double c6 = ty.coefficients.at(Offset{6, 0});
    double c8 = ty.coefficients.at(Offset{8, 0});
    double prev_ratio = 1e300;
    for (double t : {2e-1, 1e-1, 5e-2}) {
        std::vector<double> xi{t, 0.0};
        double psi_hat = symbol_eval(st, xi) * eval_ft(ig, t, 1e-11).value;
        double pred4 = (Blog * std::log(spec.c * t / 2.0) + Bc) * c4 + K4 * c8 + K2 * c6;
        double rest = psi_hat - 1.0 - pred4 * std::pow(t, 4);
        double ratio = std::abs(rest) / (std::pow(t, 6) * std::abs(std::log(t)));
        CHECK(ratio < 10.0);
        CHECK(ratio < prev_ratio * 2.0);
        prev_ratio = ratio;
        CHECK(std::abs(psi_hat - 1.0) < 5.0 * std::pow(t, 4) * std::abs(std::log(t)));
    }
    // diagonal direction sanity at a scale above the mu-quantization floor
    double t = 5e-2;
    std::vector<double> xi{t / std::sqrt(2.0), t / std::sqrt(2.0)};
    double psi_hat = symbol_eval(st, xi) * eval_ft(ig, t, 1e-11).value;
    CHECK(std::abs(psi_hat - 1.0) < 1e-5);
}

TEST_CASE("hypercubic symmetry is exact") {
    Stencil st = tps21_stencil();
    for (const auto& [alpha, mu] : st.offsets_and_coeffs) {
        Offset flipped{-alpha[0], alpha[1]};
        Offset swapped{alpha[1], alpha[0]};
        REQUIRE(st.offsets_and_coeffs.count(flipped) == 1);
        REQUIRE(st.offsets_and_coeffs.count(swapped) == 1);
        CHECK(st.offsets_and_coeffs.at(flipped) == mu);
        CHECK(st.offsets_and_coeffs.at(swapped) == mu);
    }
}

TEST_CASE("symbol evaluation: vanishing at 0, periodicity, discrete Laplacian identity") {
    Stencil st = tps21_stencil();
    CHECK(std::abs(symbol_eval(st, {0.0, 0.0})) < 1e-12);
    std::vector<double> xi{0.73, -1.21};
    std::vector<double> shifted{0.73 + 2.0 * kPi, -1.21};
    CHECK(symbol_eval(st, xi) == doctest::Approx(symbol_eval(st, shifted)).epsilon(1e-12));

    // hand-built 1-D discrete Laplacian {-1:1, 0:-2, 1:1} -> 2 cos(xi) - 2
    Stencil lap;
    lap.n = 1;
    lap.support_radius = 1;
    lap.singularity_order = 2;
    lap.offsets_and_coeffs[{-1}] = 1.0;
    lap.offsets_and_coeffs[{0}] = -2.0;
    lap.offsets_and_coeffs[{1}] = 1.0;
    for (double x : {0.3, 1.9}) {
        CHECK(symbol_eval(lap, {x}) == doctest::Approx(2.0 * std::cos(x) - 2.0));
        CHECK(symbol_eval(lap, {x}) == doctest::Approx(-4.0 * std::pow(std::sin(x / 2.0), 2)));
    }
}

TEST_CASE("order-2 stencil for the n=4 inverse multiquadric solves the Laplacian system") {
    RbfSpec spec = RbfSpec::power(4, 1.0, -2.0, -0.5);
    AsymptoticExpansion e = power_expansion(spec, 1.5);
    Stencil st = build_stencil(e, 4, 1);
    CHECK(st.singularity_order == 2);
    CHECK(st.reproduction_degree == 1);
    // the hand-solved order-2 system: sum mu = 0 and the (2,0,0,0) Taylor
    // block equals 1/K0, i.e. sum mu alpha_1^2 = -2/K0. (The minimum-norm
    // solution spreads over diagonal orbits, so the axis-only -2n:1
    // Laplacian ratio is one solution of the same system, not this one.)
    CHECK(std::abs(monomial_moment(st, {0, 0, 0, 0})) < 1e-12);
    double m2 = monomial_moment(st, {2, 0, 0, 0});
    CHECK(m2 == doctest::Approx(-2.0 / e.terms.front().coeff));
    // the lowest Taylor block is the prescribed radial one, c2 = 1/K0
    SymbolTaylor ty = symbol_taylor(st, 2);
    CHECK(ty.coefficients.at(Offset{2, 0, 0, 0}) ==
          doctest::Approx(1.0 / e.terms.front().coeff));
    CHECK(st.offsets_and_coeffs.at(Offset{0, 0, 0, 0}) < 0.0); // center dominates
}

TEST_CASE("leading-term-only sanity: pure K s^-k symbol block") {
    // synthetic expansion K0 s^-2 in n=1: lowest Taylor block must be xi^2/K0
    AsymptoticExpansion e;
    ExpansionTerm t;
    t.power = -2.0;
    t.coeff = 5.0;
    e.terms.push_back(t);
    e.truncated_at_power = 0.0;
    e.m0 = 0;
    Stencil st = build_stencil(e, 1, 1);
    SymbolTaylor taylor = symbol_taylor(st, 2);
    CHECK(taylor.coefficients.at(Offset{0}) == doctest::Approx(0.0));
    CHECK(taylor.coefficients.at(Offset{2}) == doctest::Approx(1.0 / 5.0));
}

TEST_CASE("build_stencil error paths") {
    // log-leading regime
    AsymptoticExpansion e;
    ExpansionTerm t;
    t.power = -2.0;
    t.coeff = 1.0;
    t.has_log = true;
    t.coeff_of_log = 1.0;
    e.terms.push_back(t);
    CHECK_THROWS_AS(build_stencil(e, 2, 2), spec_error);

    // odd singularity order
    AsymptoticExpansion e2;
    ExpansionTerm t2;
    t2.power = -3.0;
    t2.coeff = 1.0;
    e2.terms.push_back(t2);
    e2.truncated_at_power = 0.0;
    CHECK_THROWS_AS(build_stencil(e2, 2, 2), spec_error);

    // support too small: TPS n=2 d=2 needs Taylor orders up to 12
    RbfSpec spec = RbfSpec::tps(2, 1.0, 2);
    AsymptoticExpansion full = tps_expansion_full(spec, 3.0);
    CHECK_THROWS_AS(build_stencil(full, 2, 2), spec_error);
    CHECK_NOTHROW(build_stencil(full, 2, 6));
}

TEST_CASE("larger support reproduces the constraint contract") {
    RbfSpec spec = RbfSpec::tps(2, 1.0, 1);
    AsymptoticExpansion e = tps_expansion_full(spec, 1.0);
    Stencil small = build_stencil(e, 2, 3);
    Stencil big = build_stencil(e, 2, 4);
    SymbolTaylor ts = symbol_taylor(small, 6);
    SymbolTaylor tb = symbol_taylor(big, 6);
    for (const auto& [g, v] : ts.coefficients) {
        CHECK(tb.coefficients.at(g) == doctest::Approx(v).epsilon(1e-9));
    }
}

TEST_CASE("check_strang_fix on the TPS n=2 d=1 stencil") {
    RbfSpec spec = RbfSpec::tps(2, 1.0, 1);
    Stencil st = tps21_stencil();
    std::vector<Offset> lattice{{1, 0}, {0, 1}, {1, 1}, {2, 0}};
    StrangFixReport rep = check_strang_fix(st, spec, 3, lattice);
    CHECK(rep.degree_verified == 3);
    CHECK(rep.max_origin_residual < 1e-6);
    CHECK(rep.max_lattice_residual < 1e-10);
    CHECK(rep.checked_lattice_points.size() == 4);

    // degree request exceeding k-1 is capped
    StrangFixReport rep2 = check_strang_fix(st, spec, 9, lattice);
    CHECK(rep2.degree_verified == 3);
}

TEST_CASE("stencil decay bounds") {
    RbfSpec tps = RbfSpec::tps(2, 1.0, 1);
    AsymptoticExpansion e = tps_expansion_full(tps, 1.0);
    CHECK(stencil_decay_bound(tps, e) == 4.0 + 2.0 + 2.0 * e.m0); // 2n+2d+2m0, m0 = 0

    RbfSpec tps22 = RbfSpec::tps(2, 1.0, 2);
    AsymptoticExpansion e22 = tps_expansion_full(tps22, 3.0);
    CHECK(stencil_decay_bound(tps22, e22) == 10.0); // m0 = 1

    RbfSpec imq4 = RbfSpec::power(4, 1.0, -2.0, -0.5);
    AsymptoticExpansion e4 = power_expansion(imq4, 1.0);
    CHECK(stencil_decay_bound(imq4, e4) == 6.0); // 2n-2
    RbfSpec imq5 = RbfSpec::power(5, 1.0, -2.0, -0.5);
    AsymptoticExpansion e5 = power_expansion(imq5, 1.0);
    CHECK(stencil_decay_bound(imq5, e5) == 9.0); // 2n-1
}

TEST_CASE("stencil JSON round trip") {
    Stencil st = tps21_stencil();
    Stencil back = Stencil::from_json(st.to_json());
    CHECK(back.n == st.n);
    CHECK(back.singularity_order == st.singularity_order);
    CHECK(back.offsets_and_coeffs.size() == st.offsets_and_coeffs.size());
    for (const auto& [k, v] : st.offsets_and_coeffs)
        CHECK(back.offsets_and_coeffs.at(k) == v);
    CHECK_THROWS_AS(Stencil::from_json("{"), spec_error);
}
