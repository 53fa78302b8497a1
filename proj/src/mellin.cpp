#include "quasirbf/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>

#include "quasirbf/errors.hpp"
#include "quasirbf/special_fn.hpp"
#include "quasirbf/detail/dd.hpp"

namespace quasirbf {

using detail::Dd;
using detail::Rat;
using detail::Sdd;

namespace mb {

namespace {

Rat snap(double x, const char* what) {
    auto r = detail::rat_from_double(x);
    if (!r) throw spec_error(std::string("parameter ") + what +
                             " is not representable as a small rational; pole bookkeeping "
                             "requires rational lambda/beta (perturb the parameter)");
    return *r;
}

} // namespace

IntegrandDesc build_desc(const MbIntegrand& integrand) {
    const RbfSpec& spec = integrand.spec;
    spec.validate();
    IntegrandDesc desc;
    desc.n = spec.n;
    Rat half_n(spec.n, 2);

    if (integrand.which == MbWhich::PowerFamily) {
        if (spec.family != RbfFamily::PowerFamily)
            throw spec_error("MbIntegrand: PowerFamily integrand requires a power-family spec");
        Rat beta = snap(spec.beta, "beta");
        Rat lam = snap(spec.lambda, "lambda");
        Rat lh = lam / Rat(2);
        desc.factors = {
            {Rat(0), Rat(-1), +1, PoleSource::GammaNumB}, // Gamma(-t)
            {-beta, Rat(1), +1, PoleSource::GammaNumA},   // Gamma(-beta + t)
            {half_n, lh, +1, PoleSource::GammaDim},       // Gamma((n + lambda t)/2)
            {Rat(0), -lh, -1, PoleSource::GammaNumB},     // / Gamma(-lambda t / 2)
        };
        desc.lam = lam;
        desc.contour = Rat(1, 2);
        desc.pref_pow_s = -spec.n;
        SpecialFnResult g = quasirbf::gamma({-spec.beta, 0.0});
        if (g.is_pole)
            throw spec_error("MbIntegrand: beta must not be a non-negative integer");
        desc.pref_const = std::pow(2.0, spec.n) * std::pow(kPi, spec.n / 2.0) *
                          std::pow(spec.c, spec.lambda * spec.beta) / g.value.real();
        return desc;
    }

    if (spec.family != RbfFamily::GeneralizedTps)
        throw spec_error("MbIntegrand: TPS integrand requires a generalized-TPS spec");
    // rational (not necessarily integer) d: the integral representations hold
    // for any d > 0; only the expansion theorems need d in N
    Rat rd = snap(spec.d, "d");
    double d = spec.d;
    desc.lam = Rat(2) * rd;
    desc.half_integer_grid = rd.is_integer();
    double pin2 = std::pow(kPi, spec.n / 2.0);

    switch (integrand.which) {
    case MbWhich::TpsIII:
        desc.factors = {
            {Rat(1), Rat(-1), +1, PoleSource::GammaNumB},  // Gamma(1 - t)
            {Rat(0), Rat(1), +1, PoleSource::GammaNumA},   // Gamma(t)
            {Rat(0), Rat(1), +1, PoleSource::GammaNumA},   // Gamma(t)
            {half_n + rd, rd, +1, PoleSource::GammaDim},   // Gamma(n/2 + d + d t)
            {Rat(1), Rat(1), -1, PoleSource::GammaNumA},   // / Gamma(1 + t)
            {-rd, -rd, -1, PoleSource::GammaNumB},         // / Gamma(-d - d t)
        };
        desc.contour = Rat(1, 2);
        desc.pref_pow_s = -(spec.n + 2 * d);
        desc.pref_const = std::pow(2.0, spec.n + 2 * d) * pin2;
        break;
    case MbWhich::TpsIV:
        desc.factors = {
            {Rat(1), Rat(-1), +1, PoleSource::GammaNumB},
            {Rat(0), Rat(1), +1, PoleSource::GammaNumA},
            {Rat(0), Rat(1), +1, PoleSource::GammaNumA},
            {half_n, rd, +1, PoleSource::GammaDim},        // Gamma(n/2 + d t)
            {Rat(1), Rat(1), -1, PoleSource::GammaNumA},
            {Rat(0), -rd, -1, PoleSource::GammaNumB},      // / Gamma(-d t)
        };
        desc.contour = Rat(1, 2);
        desc.pref_pow_s = -spec.n;
        desc.pref_const = std::pow(2.0, spec.n) * pin2 * std::pow(spec.c, 2.0 * d);
        break;
    case MbWhich::TpsSum:
        desc.factors = {
            {Rat(0), Rat(-1), +1, PoleSource::GammaNumB},  // Gamma(-t)
            {Rat(-1), Rat(1), +1, PoleSource::GammaNumA},  // Gamma(t - 1)
            {half_n, rd, +1, PoleSource::GammaDim},
            {Rat(0), -rd, -1, PoleSource::GammaNumB},
        };
        desc.contour = Rat(3, 2);
        desc.mixed_ok_below = Rat(3, 2);
        desc.pref_pow_s = -spec.n;
        desc.pref_const = std::pow(2.0, spec.n) * pin2 * std::pow(spec.c, 2.0 * d);
        break;
    default:
        throw spec_error("MbIntegrand: unknown integrand kind");
    }
    return desc;
}

struct ResolvedPole {
    Rat t;
    int net = 0;       // net order after cancellation (<= 0 when cancelled)
    int raw_num = 0;   // numerator multiplicity before cancellation
    HalfPlane side = HalfPlane::Left;
    PoleSource source = PoleSource::GammaNumA;
};

// Net order and provenance of a candidate location.
ResolvedPole resolve_location(const IntegrandDesc& desc, const Rat& t) {
    ResolvedPole out;
    out.t = t;
    std::set<PoleSource> tags;
    bool left_family = false, right_family = false;
    for (const auto& f : desc.factors) {
        Rat arg = f.a + f.b * t;
        if (!arg.is_nonpositive_integer()) continue;
        out.net += f.sgn;
        if (f.sgn > 0) {
            out.raw_num += 1;
            tags.insert(f.tag);
            (f.b > Rat(0) ? left_family : right_family) = true;
        }
    }
    if (tags.size() > 1) out.source = PoleSource::Merged;
    else if (!tags.empty()) out.source = *tags.begin();
    if (left_family && right_family) {
        if (t < desc.mixed_ok_below) {
            out.side = HalfPlane::Left;
        } else if (out.net > 0) {
            throw spec_error("degenerate parameters: a left-family and a right-family pole "
                             "coincide and cannot be separated by the contour; perturb "
                             "lambda or beta");
        } else {
            out.side = HalfPlane::Right; // fully cancelled; report on the right
        }
    } else if (left_family) {
        out.side = HalfPlane::Left;
    } else {
        out.side = HalfPlane::Right;
    }
    return out;
}

std::vector<ResolvedPole> enumerate_resolved(const IntegrandDesc& desc, HalfPlane side,
                                             int count) {
    std::map<Rat, bool, std::less<Rat>> seen;
    std::vector<ResolvedPole> out;
    int m_max = 4 * count + 64;
    for (const auto& f : desc.factors) {
        if (f.sgn < 0) continue;
        for (int m = 0; m <= m_max; ++m) {
            Rat t = (Rat(-m) - f.a) / f.b;
            if (seen.count(t)) continue;
            seen[t] = true;
            ResolvedPole p = resolve_location(desc, t);
            if (p.raw_num == 0) continue;
            if (p.side == side) out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end(), [&](const ResolvedPole& a, const ResolvedPole& b) {
        return side == HalfPlane::Left ? (b.t < a.t) : (a.t < b.t);
    });
    if (int(out.size()) > count) out.resize(count);
    return out;
}

// Gamma at a rational argument as a scaled double-double. Half-integer grid
// arguments (the TPS integrands) are exact recurrences; general rationals go
// through lgamma, good to ~1e-15 relative, enough for the power family.
Sdd gamma_rat(const Rat& r) {
    if (r.den == 1) return detail::sdd_gamma_half_integer(2 * r.num);
    if (r.den == 2) return detail::sdd_gamma_half_integer(r.num);
    double x = r.to_double();
    double lg = std::lgamma(x);
    double sign = 1.0;
    if (x < 0.0 && (std::llround(std::floor(x)) % 2 != 0)) sign = -1.0;
    double e2 = lg / std::log(2.0);
    double efloor = std::floor(e2);
    Sdd out;
    out.m = Dd(sign * std::exp2(e2 - efloor));
    out.e = long(efloor);
    out.normalize();
    return out;
}

Dd psi_rat(const Rat& r) {
    if (r.den == 1) return detail::dd_digamma_half_integer(2 * r.num);
    if (r.den == 2) return detail::dd_digamma_half_integer(r.num);
    return Dd(digamma_real(r.to_double()));
}

struct Parts {
    Sdd A;      // product of factor coefficients/values, z^{t0} excluded
    Dd S;       // sum of +/- b psi(...) terms; log z excluded
    int net = 0;
};

Parts parts_at(const IntegrandDesc& desc, const Rat& t0) {
    Parts out;
    out.A = Sdd::one();
    out.S = Dd(0.0);
    for (const auto& f : desc.factors) {
        Rat arg = f.a + f.b * t0;
        Dd b_dd = detail::dd_from_ratio(f.b.num, f.b.den);
        if (arg.is_nonpositive_integer()) {
            long m = -arg.num;
            out.net += f.sgn;
            // Gamma(-m + b u) ~ (-1)^m / (m! b u) (1 + b psi(m+1) u + ...)
            Sdd coef = Sdd::one() / detail::sdd_factorial(m) / Sdd::from(b_dd);
            if (m % 2 != 0) coef = -coef;
            out.A = f.sgn > 0 ? out.A * coef : out.A / coef;
            Dd p = detail::dd_digamma_half_integer(2 * (m + 1));
            out.S = f.sgn > 0 ? out.S + b_dd * p : out.S - b_dd * p;
        } else {
            Sdd g = gamma_rat(arg);
            out.A = f.sgn > 0 ? out.A * g : out.A / g;
            Dd p = psi_rat(arg);
            out.S = f.sgn > 0 ? out.S + b_dd * p : out.S - b_dd * p;
        }
    }
    return out;
}

// (c s / 2)^p for rational p, scaled.
Sdd cs_half_pow(double c, double s, const Rat& p) {
    Dd w = detail::two_prod(c, s) * Dd(0.5);
    if (p.den == 1) return detail::sdd_pow_int(Sdd::from(w), p.num);
    double e2 = p.to_double() * std::log(w.to_double()) / std::log(2.0);
    double efloor = std::floor(e2);
    Sdd out;
    out.m = Dd(std::exp2(e2 - efloor));
    out.e = long(efloor);
    out.normalize();
    return out;
}

double orient_sign(HalfPlane side) { return side == HalfPlane::Left ? 1.0 : -1.0; }

std::vector<PoleDatum> enumerate_poles_desc(const IntegrandDesc& desc, HalfPlane side,
                                            int count) {
    std::vector<PoleDatum> out;
    for (const auto& p : enumerate_resolved(desc, side, count)) {
        PoleDatum d;
        d.location = p.t.to_double();
        d.location_exact = p.t;
        d.order = std::max(p.net, 0);
        d.source = p.source;
        d.cancelled = p.net <= 0;
        out.push_back(d);
    }
    return out;
}

SymbolicTerm residue_term(const IntegrandDesc& desc, const RbfSpec& spec,
                          const Rat& location, int order, HalfPlane side) {
    if (order > 2) throw numeric_error("residue_term: pole of order >= 3 (degenerate)");
    Parts parts = parts_at(desc, location);
    // z^{t0} = (c s / 2)^{-lam t0}; split the s power off, keep (c/2)^{-lam t0}.
    Rat p = -(desc.lam * location);
    Dd chalf = Dd(spec.c) * Dd(0.5);
    Sdd cpow;
    if (p.den == 1) {
        cpow = detail::sdd_pow_int(Sdd::from(chalf), p.num);
    } else {
        double e2 = p.to_double() * std::log(chalf.to_double()) / std::log(2.0);
        double efloor = std::floor(e2);
        cpow.m = Dd(std::exp2(e2 - efloor));
        cpow.e = long(efloor);
        cpow.normalize();
    }
    Sdd base = parts.A * cpow;
    double scale = orient_sign(side) * desc.pref_const;
    SymbolicTerm term;
    term.power = desc.pref_pow_s + p.to_double();
    if (order == 1) {
        term.coeff = scale * base.to_double();
        return term;
    }
    // order 2: residue = A z^{t0} (S + ln z), ln z = -lam ln(c s / 2)
    term.has_log = true;
    double lam = desc.lam.to_double();
    term.coeff_of_log = -scale * lam * base.to_double();
    term.coeff = scale * (base * Sdd::from(parts.S)).to_double();
    return term;
}

} // namespace mb

namespace {

using mb::IntegrandDesc;

struct SeriesResult {
    Dd total;        // sum of residues, prefactor excluded
    int terms = 0;
    double rel_err = 0.0;
    bool ok = false;
    bool side_empty = false;
};

// Residue summation on one side in double-double with a cancellation-aware
// error estimate. The log-of-s parts are accumulated separately so the two
// catastrophically cancelling sums both happen in extended precision.
SeriesResult sum_side(const IntegrandDesc& desc, const RbfSpec& spec, double s,
                      double tol, HalfPlane side) {
    SeriesResult res;
    Dd lnz = -detail::dd_from_ratio(desc.lam.num, desc.lam.den) *
             detail::dd_log(detail::two_prod(spec.c, s) * Dd(0.5));
    Dd sum_plain(0.0), sum_log(0.0);
    double peak = 0.0;
    int small_streak = 0;
    int used = 0;
    const int max_terms = 800;
    auto poles = mb::enumerate_resolved(desc, side, max_terms);
    bool any = false;
    for (const auto& p : poles) {
        if (p.net <= 0) continue;
        if (p.net > 2) throw numeric_error("residue series: pole of order >= 3 (degenerate)");
        any = true;
        mb::Parts parts = mb::parts_at(desc, p.t);
        Sdd zv = mb::cs_half_pow(spec.c, s, -(desc.lam * p.t));
        Sdd av = parts.A * zv;
        if (av.log2_abs() > 990.0) throw numeric_error("residue series: term overflow");
        Dd a_dd = av.to_dd();
        Dd plain = p.net == 1 ? a_dd : a_dd * parts.S;
        Dd logc = p.net == 2 ? a_dd * lnz : Dd(0.0);
        sum_plain = sum_plain + plain;
        sum_log = sum_log + logc;
        ++used;
        double term_mag = std::abs(plain.to_double() + logc.to_double());
        peak = std::max(peak, term_mag);
        double cur = std::abs((sum_plain + sum_log).to_double());
        // Mid-series the partial sum can dwarf the final value (the series
        // cancels like exp(2cs)); a term only counts as negligible against
        // the partial sum when no large cancellation is still pending.
        bool below_noise = term_mag <= 3e-29 * peak;
        bool small_vs_sum = term_mag < 0.1 * tol * std::max(cur, 1e-300) && peak <= 16.0 * cur;
        if (below_noise || small_vs_sum) {
            if (++small_streak >= 3) break;
        } else {
            small_streak = 0;
        }
    }
    if (!any) {
        res.side_empty = true;
        return res;
    }
    res.total = sum_plain + sum_log;
    res.terms = used;
    double denom = std::max(std::abs(res.total.to_double()), 1e-300);
    double tail = small_streak >= 3 ? 0.1 * tol : 1.0;
    res.rel_err = tail + peak * 1.3e-31 * std::max(used, 1) / denom;
    res.ok = res.rel_err <= tol;
    return res;
}

// --- vertical-contour quadrature ---------------------------------------------

std::complex<double> integrand_log(const IntegrandDesc& desc, std::complex<double> t,
                                   double lnz) {
    std::complex<double> w = t * lnz;
    for (const auto& f : desc.factors) {
        std::complex<double> arg = std::complex<double>(f.a.to_double()) +
                                   std::complex<double>(f.b.to_double()) * t;
        w += double(f.sgn) * log_gamma(arg);
    }
    return w;
}

double pick_contour_abscissa(const IntegrandDesc& desc, const RbfSpec& spec, double s) {
    double r0 = desc.contour.to_double();
    if (desc.half_integer_grid) {
        // TPS: no uncancelled poles right of the base contour, so the line
        // can slide toward the saddle at d*r ~ c s / 2 for large c s.
        double saddle = (spec.c * s / 2.0) / (2.0 * spec.d);
        r0 = std::max(r0, std::floor(saddle) + 0.5);
    }
    for (int k = 0; k < 12; ++k) {
        bool clean = true;
        for (const auto& f : desc.factors) {
            double arg = f.a.to_double() + f.b.to_double() * r0;
            if (arg < 0.5 && std::abs(arg - std::round(arg)) < 2e-2) clean = false;
        }
        if (clean) break;
        r0 += 1.0 / 16.0;
    }
    return r0;
}

SeriesResult contour_value(const IntegrandDesc& desc, const RbfSpec& spec, double s,
                           double tol) {
    double lnz = desc.lam.to_double() * std::log(2.0 / (spec.c * s));
    double r0 = pick_contour_abscissa(desc, spec, s);

    auto g = [&](double y) {
        std::complex<double> w = integrand_log(desc, {r0, y}, lnz);
        if (w.real() > 700.0) throw numeric_error("contour: integrand overflow");
        return std::exp(w).real();
    };

    double gmax = std::abs(g(0.0));
    double T = 4.0;
    const double cut = std::min(tol, 1e-10) * 1e-3;
    while (T < 512.0) {
        double v = std::abs(g(T));
        gmax = std::max(gmax, v);
        if (v < cut * std::max(gmax, 1e-300)) break;
        T *= 1.25;
    }

    double h = T / 32.0;
    double acc = 0.5 * g(0.0);
    for (int k = 1; k * h <= T + 1e-12; ++k) acc += g(k * h);
    double cur = acc * h, prev = 0.0;
    for (int level = 0; level < 9; ++level) {
        double mid = 0.0;
        for (double y = 0.5 * h; y < T; y += h) mid += g(y);
        prev = cur;
        cur = 0.5 * cur + 0.5 * h * mid;
        h *= 0.5;
        if (std::abs(cur - prev) <= 0.1 * tol * std::abs(cur) + 1e-320) break;
    }
    // line contribution of (1/2 pi i) int f dt along t = r0 + i y
    double line = cur / kPi;

    // weaving corrections: left-family poles right of the line and vice versa
    Dd corr(0.0);
    Dd lnz_dd = -detail::dd_from_ratio(desc.lam.num, desc.lam.den) *
                detail::dd_log(detail::two_prod(spec.c, s) * Dd(0.5));
    for (HalfPlane side : {HalfPlane::Left, HalfPlane::Right}) {
        auto poles = mb::enumerate_resolved(desc, side, 64);
        for (const auto& p : poles) {
            if (p.net <= 0) continue;
            double loc = p.t.to_double();
            bool misplaced = (side == HalfPlane::Left && loc > r0) ||
                             (side == HalfPlane::Right && loc < r0);
            if (!misplaced) continue;
            if (p.net > 2) throw numeric_error("contour: degenerate pole correction");
            mb::Parts parts = mb::parts_at(desc, p.t);
            Sdd zv = mb::cs_half_pow(spec.c, s, -(desc.lam * p.t));
            Dd a_dd = (parts.A * zv).to_dd();
            Dd r = p.net == 1 ? a_dd : a_dd * (parts.S + lnz_dd);
            corr = side == HalfPlane::Left ? corr + r : corr - r;
        }
    }

    SeriesResult out;
    out.total = Dd(line) + corr;
    out.terms = int(T / h);
    out.rel_err = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300) + 1e-14;
    out.ok = out.rel_err <= tol;
    return out;
}

double assemble(const IntegrandDesc& desc, double s, double orient, const Dd& total) {
    return orient * desc.pref_const * std::pow(s, desc.pref_pow_s) * total.to_double();
}

} // namespace

std::vector<PoleDatum> enumerate_poles(const MbIntegrand& integrand, HalfPlane half_plane,
                                       int count) {
    if (count < 1) throw spec_error("enumerate_poles: count must be >= 1");
    auto desc = mb::build_desc(integrand);
    return mb::enumerate_poles_desc(desc, half_plane, count);
}

double residue_at(const MbIntegrand& integrand, const PoleDatum& pole, double s) {
    if (!(s > 0)) throw spec_error("residue_at: s must be > 0");
    auto desc = mb::build_desc(integrand);
    Rat loc = pole.location_exact;
    if (loc.num == 0 && loc.den == 1 && pole.location != 0.0) {
        auto snapped = detail::rat_from_double(pole.location);
        if (!snapped) throw spec_error("residue_at: pole location not rational");
        loc = *snapped;
    }
    auto rp = mb::resolve_location(desc, loc);
    if (rp.net <= 0) return 0.0;
    if (rp.net > 2) throw numeric_error("residue_at: pole of order >= 3 (degenerate)");
    mb::SymbolicTerm term = mb::residue_term(desc, integrand.spec, loc, rp.net, rp.side);
    double v = term.coeff * std::pow(s, term.power);
    if (term.has_log)
        v += term.coeff_of_log * std::pow(s, term.power) * std::log(integrand.spec.c * s / 2.0);
    return v;
}

FtValue eval_ft_with_method(const MbIntegrand& integrand, double s, double tol,
                            FtMethod method) {
    if (!(s > 0)) throw spec_error("eval_ft: s must be > 0");
    if (!(tol >= 1e-12)) throw spec_error("eval_ft: tol must be >= 1e-12");
    FtValue out;
    out.method = method;
    if (method == FtMethod::ClosedForm) {
        out.value = eval_ft_closed_form_d1(integrand.spec, s);
        out.truncation_estimate = 1e-13;
        return out;
    }
    auto desc = mb::build_desc(integrand);
    if (method == FtMethod::Contour) {
        SeriesResult r = contour_value(desc, integrand.spec, s, tol);
        if (!r.ok) throw numeric_error("eval_ft: contour quadrature did not reach tol");
        out.value = assemble(desc, s, 1.0, r.total);
        out.series_terms_used = r.terms;
        out.truncation_estimate = r.rel_err;
        return out;
    }
    HalfPlane side = method == FtMethod::ResidueLeft ? HalfPlane::Left : HalfPlane::Right;
    SeriesResult r = sum_side(desc, integrand.spec, s, tol, side);
    if (r.side_empty) throw numeric_error("eval_ft: no poles on the requested side");
    if (!r.ok) throw numeric_error("eval_ft: residue series did not reach tol");
    out.value = assemble(desc, s, side == HalfPlane::Left ? 1.0 : -1.0, r.total);
    out.series_terms_used = r.terms;
    out.truncation_estimate = r.rel_err;
    return out;
}

FtValue eval_ft(const MbIntegrand& integrand, double s, double tol) {
    if (!(s > 0)) throw spec_error("eval_ft: s must be > 0");
    if (!(tol >= 1e-12)) throw spec_error("eval_ft: tol must be >= 1e-12");
    auto desc = mb::build_desc(integrand);
    double rho = std::pow(integrand.spec.c * s / 2.0, desc.lam.to_double());

    auto run_series = [&](HalfPlane side) -> std::pair<bool, FtValue> {
        SeriesResult r = sum_side(desc, integrand.spec, s, tol, side);
        FtValue v;
        if (r.side_empty || !r.ok) return {false, v};
        v.value = assemble(desc, s, side == HalfPlane::Left ? 1.0 : -1.0, r.total);
        v.series_terms_used = r.terms;
        v.truncation_estimate = r.rel_err;
        v.method = side == HalfPlane::Left ? FtMethod::ResidueLeft : FtMethod::ResidueRight;
        return {true, v};
    };

    if (rho < 0.9 || rho > 1.1) {
        // The TPS integrands have no uncancelled right poles; their left
        // series is entire and stays primary at every s.
        HalfPlane primary = rho < 0.9 ? HalfPlane::Left : HalfPlane::Right;
        if (desc.half_integer_grid) primary = HalfPlane::Left;
        try {
            auto [ok, v] = run_series(primary);
            if (ok) return v;
            auto [ok2, v2] = run_series(primary == HalfPlane::Left ? HalfPlane::Right
                                                                   : HalfPlane::Left);
            if (ok2) return v2;
        } catch (const numeric_error&) {
            // fall through to contour
        }
    }
    SeriesResult r = contour_value(desc, integrand.spec, s, tol);
    if (!r.ok)
        throw numeric_error("eval_ft: neither residue series nor contour reached tol");
    FtValue out;
    out.value = assemble(desc, s, 1.0, r.total);
    out.series_terms_used = r.terms;
    out.truncation_estimate = r.rel_err;
    out.method = FtMethod::Contour;
    return out;
}

double eval_ft_closed_form_d1(const RbfSpec& spec, double s) {
    if (spec.family != RbfFamily::GeneralizedTps || std::abs(spec.d - 1.0) > 1e-12)
        throw spec_error("eval_ft_closed_form_d1: requires generalized TPS with d = 1");
    if (!(s > 0)) throw spec_error("eval_ft_closed_form_d1: s must be > 0");
    double nu = spec.n / 2.0 + 1.0;
    return 4.0 * std::pow(2.0 * kPi, spec.n / 2.0) * std::pow(spec.c / s, nu) *
           bessel_k(nu, spec.c * s);
}

// --- Hankel-type oracle -------------------------------------------------------

namespace {

double bessel_j_halfgrid(double nu, double x) {
    if (std::abs(nu + 0.5) < 1e-14) return std::sqrt(2.0 / (kPi * x)) * std::cos(x);
    return std::cyl_bessel_j(nu, x);
}

// Non-distributional part of phi: delta-type transform pieces are dropped
// (they vanish at s > 0), leaving exactly what eval_ft computes.
double phi_regular(const RbfSpec& spec, double r) {
    if (spec.family == RbfFamily::GeneralizedTps) {
        TpsSplit sp = eval_tps_split(spec, r);
        return sp.phi3 + sp.phi4;
    }
    double v = eval_rbf(spec, r);
    if (spec.lambda < 0) v -= std::pow(spec.c, spec.lambda * spec.beta);
    return v;
}

constexpr double kGlx[10] = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
constexpr double kGlw[10] = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

template <typename F>
double gl20(F&& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 10; ++i)
        acc += kGlw[i] * (f(mid + half * kGlx[i]) + f(mid - half * kGlx[i]));
    return acc * half;
}

double hankel_eps(const RbfSpec& spec, double s, double eps) {
    double nu = spec.n / 2.0 - 1.0;
    auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        return std::pow(r, spec.n / 2.0) * phi_regular(spec, r) *
               bessel_j_halfgrid(nu, s * r) * std::exp(-eps * r * r);
    };
    double R = std::sqrt(80.0 / eps);
    double panel = kPi / s;
    double acc = 0.0;
    double first = std::min(panel, R);
    double lo = 0.0;
    for (double frac : {0.125, 0.25, 0.5, 1.0}) {
        double hi = first * frac;
        acc += gl20(f, lo, hi);
        lo = hi;
    }
    long guard = 0;
    while (lo < R) {
        double hi = std::min(lo + panel, R);
        acc += gl20(f, lo, hi);
        lo = hi;
        if (++guard > 2000000) throw numeric_error("oracle_hankel: panel budget exhausted");
    }
    return std::pow(2.0 * kPi, spec.n / 2.0) * std::pow(s, 1.0 - spec.n / 2.0) * acc;
}

} // namespace

double oracle_hankel(const RbfSpec& spec, double s, const std::vector<double>& eps_list) {
    if (!(s > 0)) throw spec_error("oracle_hankel: s must be > 0");
    if (eps_list.size() < 3) throw spec_error("oracle_hankel: need >= 3 eps values");
    for (size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw spec_error("oracle_hankel: eps_list must be decreasing");
    if (!(eps_list.back() > 0)) throw spec_error("oracle_hankel: eps values must be > 0");
    const size_t m = eps_list.size();
    std::vector<double> val(m);
    for (size_t i = 0; i < m; ++i) val[i] = hankel_eps(spec, s, eps_list[i]);
    // Neville extrapolation to eps = 0 (regularization error is analytic in eps)
    std::vector<double> x(eps_list.begin(), eps_list.end());
    for (size_t level = 1; level < m; ++level)
        for (size_t i = 0; i + level < m; ++i)
            val[i] = val[i + 1] + (val[i + 1] - val[i]) * x[i + level] / (x[i] - x[i + level]);
    if (!std::isfinite(val[0])) throw numeric_error("oracle_hankel: quadrature failed");
    return val[0];
}

} // namespace quasirbf
