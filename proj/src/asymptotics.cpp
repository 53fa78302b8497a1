#include "quasirbf/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "quasirbf/errors.hpp"
#include "quasirbf/mellin.hpp"
#include "quasirbf/special_fn.hpp"

namespace quasirbf {

namespace {

constexpr double kLogPowerGuard = 1e-9;

struct TpsIndex {
    int n, d, q, m0, t0_phi3, t0_phi4;
};

TpsIndex tps_index(const RbfSpec& spec) {
    if (spec.family != RbfFamily::GeneralizedTps)
        throw spec_error("tps expansion: spec is not a generalized TPS");
    if (spec.n % 2 != 0)
        throw spec_error("tps expansion: closed forms require even dimension n");
    if (!spec.tps_d_is_integer())
        throw spec_error("tps expansion: closed forms require integer d");
    TpsIndex ix;
    ix.n = spec.n;
    ix.d = int(std::lround(spec.d));
    ix.q = (ix.n + 2 * ix.d - 1) / (2 * ix.d); // ceil(n / (2d))
    // m0 = d - (n/2 mod d) reduced mod d: the first log power is 2*m0 and
    // m0 = 0 occurs exactly when d divides n/2 (the d=1 Bessel closed form
    // pins this: the first log term of the classical TPS transform sits at
    // s^0, not s^2).
    ix.m0 = ix.d * ix.q - ix.n / 2;
    ix.t0_phi3 = -1 - ix.q;
    ix.t0_phi4 = -ix.q;
    return ix;
}

void sort_terms(AsymptoticExpansion& e) {
    std::sort(e.terms.begin(), e.terms.end(),
              [](const ExpansionTerm& a, const ExpansionTerm& b) { return a.power < b.power; });
}

// --- closed-form constants (resolved against residues and the d=1 Bessel form) ---

AsymptoticExpansion tps_phi3_closed(const RbfSpec& spec, double up_to_power) {
    TpsIndex ix = tps_index(spec);
    const int n = ix.n, d = ix.d, q = ix.q, m0 = ix.m0;
    const double c = spec.c;
    const double pin2 = std::pow(kPi, n / 2.0);
    const double A = std::pow(2.0, n + 2 * d) * pin2;
    AsymptoticExpansion out;
    out.m0 = m0;
    out.t0 = ix.t0_phi3;

    // simple poles at integer t = -j, j = 0..q (j = 1 cancels identically)
    for (int j = 0; j <= q; ++j) {
        double power = -n - 2.0 * d + 2.0 * d * j;
        if (power >= up_to_power + kLogPowerGuard) continue;
        ExpansionTerm t;
        t.power = power;
        if (j == 0) {
            t.coeff = A * ((d + 1) % 2 == 0 ? 1.0 : -1.0) * d * gamma_real(d + 1.0) *
                      gamma_real(n / 2.0 + d);
        } else if (j == 1) {
            continue; // 1/Gamma(0): the j = 1 residue vanishes
        } else {
            double sgn = (j % 2 == 0) ? -1.0 : 1.0;
            t.coeff = A * sgn / j * gamma_real(n / 2.0 + d - double(d) * j) /
                      gamma_real(double(d) * (j - 1.0)) * std::pow(c / 2.0, 2.0 * d * j);
        }
        out.terms.push_back(t);
    }
    // simple Gamma_dim poles at t_m = -1 - (n/2 + m)/d, m = 0..m0-1
    for (int m = 0; m < m0; ++m) {
        double power = 2.0 * m;
        if (power >= up_to_power + kLogPowerGuard) continue;
        double tm = -1.0 - (n / 2.0 + m) / d;
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        ExpansionTerm t;
        t.power = power;
        t.coeff = A * sgn * kPi /
                  (gamma_real(m + 1.0) * d * tm * std::sin(kPi * tm) * gamma_real(n / 2.0 + m)) *
                  std::pow(c / 2.0, n + 2.0 * d + 2.0 * m);
        out.terms.push_back(t);
    }
    // double pole at t0: Chat1 s^{2 m0} (log(c s / 2) + Chat2)
    if (2.0 * m0 < up_to_power + kLogPowerGuard) {
        double sgn = ((q + m0 + 1) % 2 == 0) ? 1.0 : -1.0;
        double chat1 = sgn * std::pow(2.0, 1.0 - 2.0 * m0) * pin2 *
                       std::pow(c, n + 2.0 * d + 2.0 * m0) /
                       ((1.0 + q) * gamma_real(m0 + 1.0) * gamma_real(n / 2.0 + m0));
        double chat2 = -2.0 / (n + 2.0 * d + 2.0 * m0) - harmonic(m0) + kEulerGamma -
                       digamma_real(n / 2.0 + m0);
        chat2 *= 0.5;
        ExpansionTerm t;
        t.power = 2.0 * m0;
        t.has_log = true;
        t.coeff_of_log = chat1;
        t.coeff = chat1 * chat2;
        out.terms.push_back(t);
        out.truncated_at_power = 2.0 * m0 + 2.0;
    } else {
        out.truncated_at_power = std::min(up_to_power, 2.0 * m0);
    }
    sort_terms(out);
    return out;
}

AsymptoticExpansion tps_phi4_closed(const RbfSpec& spec, double up_to_power) {
    TpsIndex ix = tps_index(spec);
    const int n = ix.n, d = ix.d, q = ix.q, m0 = ix.m0;
    const double c = spec.c;
    const double B = std::pow(2.0, n) * std::pow(kPi, n / 2.0) * std::pow(c, 2.0 * d);
    AsymptoticExpansion out;
    out.m0 = m0;
    out.t0 = ix.t0_phi4;

    for (int j = 0; j <= q - 1; ++j) {
        double power = -n + 2.0 * d * j;
        if (power >= up_to_power + kLogPowerGuard) continue;
        ExpansionTerm t;
        t.power = power;
        if (j == 0) {
            t.coeff = -B * d * gamma_real(n / 2.0);
        } else {
            double sgn = (j % 2 == 0) ? -1.0 : 1.0;
            t.coeff = B * sgn * gamma_real(n / 2.0 - double(d) * j) /
                      (j * gamma_real(double(d) * j)) * std::pow(c / 2.0, 2.0 * d * j);
        }
        out.terms.push_back(t);
    }
    for (int m = 0; m < m0; ++m) {
        double power = 2.0 * m;
        if (power >= up_to_power + kLogPowerGuard) continue;
        double tm = -(n / 2.0 + m) / d;
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        ExpansionTerm t;
        t.power = power;
        t.coeff = B * sgn * kPi /
                  (gamma_real(m + 1.0) * d * tm * std::sin(kPi * tm) * gamma_real(n / 2.0 + m)) *
                  std::pow(c / 2.0, n + 2.0 * m);
        out.terms.push_back(t);
    }
    if (2.0 * m0 < up_to_power + kLogPowerGuard) {
        double sgn = ((q + m0) % 2 == 0) ? 1.0 : -1.0;
        double chat1 = B * sgn * 2.0 / (q * gamma_real(m0 + 1.0) * gamma_real(n / 2.0 + m0)) *
                       std::pow(c / 2.0, n + 2.0 * m0);
        double chat2 = -2.0 / (n + 2.0 * m0) - harmonic(m0) + kEulerGamma -
                       digamma_real(n / 2.0 + m0);
        chat2 *= 0.5;
        ExpansionTerm t;
        t.power = 2.0 * m0;
        t.has_log = true;
        t.coeff_of_log = chat1;
        t.coeff = chat1 * chat2;
        out.terms.push_back(t);
        out.truncated_at_power = 2.0 * m0 + 2.0;
    } else {
        out.truncated_at_power = std::min(up_to_power, 2.0 * m0);
    }
    sort_terms(out);
    return out;
}

// --- residue-extraction route -------------------------------------------------

AsymptoticExpansion expansion_by_residues(const MbIntegrand& integrand, double up_to_power,
                                          HalfPlane side) {
    auto desc = mb::build_desc(integrand);
    auto poles = mb::enumerate_poles_desc(desc, side, 400);
    AsymptoticExpansion out;
    bool saw_log = false;
    double next_power = up_to_power;
    for (const auto& p : poles) {
        if (p.cancelled) continue;
        if (p.order > 2)
            throw numeric_error("expansion: pole of order >= 3 (degenerate parameters)");
        double power = desc.pref_pow_s - desc.lam.to_double() * p.location;
        if (power >= up_to_power + kLogPowerGuard || saw_log) {
            next_power = std::min(next_power, power);
            if (saw_log) break;
            continue;
        }
        mb::SymbolicTerm st = mb::residue_term(desc, integrand.spec, p.location_exact,
                                               p.order, side);
        ExpansionTerm t;
        t.power = st.power;
        t.has_log = st.has_log;
        t.coeff = st.coeff;
        t.coeff_of_log = st.coeff_of_log;
        out.terms.push_back(t);
        if (st.has_log) {
            saw_log = true; // terms past the first log are out of scope
            next_power = st.power + 2.0;
        }
    }
    out.truncated_at_power = saw_log ? next_power : std::min(up_to_power, next_power);
    sort_terms(out);
    return out;
}

void fill_tps_indices(const RbfSpec& spec, MbWhich which, AsymptoticExpansion& e) {
    TpsIndex ix = tps_index(spec);
    e.m0 = ix.m0;
    e.t0 = which == MbWhich::TpsIV ? ix.t0_phi4 : ix.t0_phi3;
}

AsymptoticExpansion merge_terms(const AsymptoticExpansion& a, const AsymptoticExpansion& b) {
    AsymptoticExpansion out;
    out.m0 = a.m0;
    out.t0 = a.t0;
    out.truncated_at_power = std::min(a.truncated_at_power, b.truncated_at_power);
    std::vector<ExpansionTerm> all = a.terms;
    all.insert(all.end(), b.terms.begin(), b.terms.end());
    std::sort(all.begin(), all.end(),
              [](const ExpansionTerm& x, const ExpansionTerm& y) { return x.power < y.power; });
    for (const auto& t : all) {
        if (t.power >= out.truncated_at_power - kLogPowerGuard &&
            std::abs(t.power - out.truncated_at_power) > kLogPowerGuard)
            continue;
        if (!out.terms.empty() && std::abs(out.terms.back().power - t.power) < 1e-9) {
            out.terms.back().coeff += t.coeff;
            out.terms.back().coeff_of_log += t.coeff_of_log;
            out.terms.back().has_log = out.terms.back().has_log || t.has_log;
        } else {
            out.terms.push_back(t);
        }
    }
    // drop terms that cancelled between the two pieces
    std::vector<ExpansionTerm> kept;
    for (const auto& t : out.terms) {
        double scale = std::abs(t.coeff) + std::abs(t.coeff_of_log);
        if (scale > 1e-13) kept.push_back(t);
    }
    out.terms = kept;
    return out;
}

} // namespace

double AsymptoticExpansion::eval(double c, double s) const {
    double lg = std::log(c * s / 2.0);
    double acc = 0.0;
    for (const auto& t : terms) {
        double p = std::pow(s, t.power);
        acc += t.coeff * p;
        if (t.has_log) acc += t.coeff_of_log * p * lg;
    }
    return acc;
}

std::string AsymptoticExpansion::to_json() const {
    nlohmann::ordered_json j;
    j["m0"] = m0;
    j["t0"] = t0;
    j["truncated_at_power"] = truncated_at_power;
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : terms) {
        nlohmann::ordered_json jt;
        jt["power"] = t.power;
        jt["coeff"] = t.coeff;
        jt["has_log"] = t.has_log;
        jt["coeff_of_log"] = t.coeff_of_log;
        j["terms"].push_back(jt);
    }
    return j.dump();
}

ExpansionTerm tps_leading(const RbfSpec& spec) {
    if (spec.family != RbfFamily::GeneralizedTps)
        throw spec_error("tps_leading: spec is not a generalized TPS");
    const int n = spec.n;
    const double d = spec.d;
    ExpansionTerm t;
    t.power = -double(n) - 2.0 * d;
    if (spec.tps_d_is_integer()) {
        int di = int(std::lround(d));
        t.coeff = std::pow(2.0, n + 2.0 * d) * std::pow(kPi, n / 2.0) *
                  ((di + 1) % 2 == 0 ? 1.0 : -1.0) * d * gamma_real(d + 1.0) *
                  gamma_real(n / 2.0 + d);
        return t;
    }
    // non-integer d: order-two pole at t = 0,
    // -K (2 log(cs/2) - psi(-d) - psi(d + n/2)), K = 2^{n+2d} pi^{n/2} d G(d+n/2)/G(-d)
    double K = std::pow(2.0, n + 2.0 * d) * std::pow(kPi, n / 2.0) * d *
               gamma_real(d + n / 2.0) / gamma_real(-d);
    t.has_log = true;
    t.coeff_of_log = -2.0 * K;
    t.coeff = K * (digamma_real(-d) + digamma_real(d + n / 2.0));
    return t;
}

AsymptoticExpansion tps_expansion_phi3(const RbfSpec& spec, double up_to_power,
                                       ExpansionRoute route) {
    if (route == ExpansionRoute::ClosedForm) return tps_phi3_closed(spec, up_to_power);
    AsymptoticExpansion e = expansion_by_residues({MbWhich::TpsIII, spec}, up_to_power,
                                                  HalfPlane::Left);
    fill_tps_indices(spec, MbWhich::TpsIII, e);
    return e;
}

AsymptoticExpansion tps_expansion_phi4(const RbfSpec& spec, double up_to_power,
                                       ExpansionRoute route) {
    if (route == ExpansionRoute::ClosedForm) return tps_phi4_closed(spec, up_to_power);
    AsymptoticExpansion e = expansion_by_residues({MbWhich::TpsIV, spec}, up_to_power,
                                                  HalfPlane::Left);
    fill_tps_indices(spec, MbWhich::TpsIV, e);
    return e;
}

AsymptoticExpansion tps_expansion_full(const RbfSpec& spec, double up_to_power,
                                       ExpansionRoute route) {
    AsymptoticExpansion a = tps_expansion_phi3(spec, up_to_power, route);
    AsymptoticExpansion b = tps_expansion_phi4(spec, up_to_power, route);
    AsymptoticExpansion out = merge_terms(a, b);
    fill_tps_indices(spec, MbWhich::TpsIII, out);
    return out;
}

AsymptoticExpansion power_expansion(const RbfSpec& spec, double up_to_power) {
    if (spec.family != RbfFamily::PowerFamily)
        throw spec_error("power_expansion: spec is not a power-family RBF");
    HalfPlane side = spec.lambda > 0 ? HalfPlane::Left : HalfPlane::Right;
    AsymptoticExpansion e = expansion_by_residues({MbWhich::PowerFamily, spec}, up_to_power,
                                                  side);
    // record the first double pole location if one appeared
    auto poles = enumerate_poles({MbWhich::PowerFamily, spec}, side, 64);
    for (const auto& p : poles) {
        if (p.order == 2 && p.location_exact.is_integer()) {
            e.t0 = int(p.location_exact.num);
            break;
        }
    }
    return e;
}

std::string quadrant_name(Quadrant q) {
    switch (q) {
    case Quadrant::MQ_pos_pos: return "MQ_pos_pos";
    case Quadrant::IMQ_pos_neg: return "IMQ_pos_neg";
    case Quadrant::Singular_neg_pos: return "Singular_neg_pos";
    default: return "IMQ_neg_neg";
    }
}

std::string feasible_name(QiFeasible f) {
    switch (f) {
    case QiFeasible::FiniteStencil: return "FiniteStencil";
    case QiFeasible::InfiniteOnly: return "InfiniteOnly";
    default: return "Infeasible";
    }
}

std::string RegimeReport::to_json() const {
    nlohmann::ordered_json j;
    j["quadrant"] = quadrant_name(quadrant);
    j["qi_feasible"] = feasible_name(qi_feasible);
    j["singularity_order"] = singularity_order;
    nlohmann::ordered_json lt;
    lt["power"] = leading.power;
    lt["coeff"] = leading.coeff;
    lt["has_log"] = leading.has_log;
    lt["coeff_of_log"] = leading.coeff_of_log;
    j["leading"] = lt;
    j["notes"] = notes;
    return j.dump();
}

RegimeReport classify_regime(const RbfSpec& spec) {
    if (spec.family != RbfFamily::PowerFamily)
        throw spec_error("classify_regime: spec is not a power-family RBF");
    spec.validate();
    RegimeReport rep;
    const double lam = spec.lambda, beta = spec.beta;
    rep.quadrant = lam > 0 ? (beta > 0 ? Quadrant::MQ_pos_pos : Quadrant::IMQ_pos_neg)
                           : (beta > 0 ? Quadrant::Singular_neg_pos : Quadrant::IMQ_neg_neg);
    std::ostringstream notes;

    bool beta_neg_int = beta < 0 && std::abs(beta - std::round(beta)) < 1e-12;
    if (beta_neg_int)
        notes << "beta is a negative integer: every beta-family pole is cancelled, so the "
                 "transform decays faster than any polynomial at infinity. ";

    try {
        AsymptoticExpansion e = power_expansion(spec, 1.0 + kLogPowerGuard);
        if (e.terms.empty()) {
            // nothing at or below s^1: treat as no usable singularity
            rep.qi_feasible = QiFeasible::Infeasible;
            notes << "no singular term at the origin. ";
        } else {
            rep.leading = e.terms.front();
            double p = rep.leading.power;
            rep.singularity_order = p < 0 ? -p : 0.0;
            bool even_int_order = p < -kLogPowerGuard &&
                                  std::abs(p - 2.0 * std::round(p / 2.0)) < 1e-9;
            if (even_int_order && !rep.leading.has_log) {
                rep.qi_feasible = QiFeasible::FiniteStencil;
            } else if (p < -kLogPowerGuard ||
                       (std::abs(p) <= kLogPowerGuard && rep.leading.has_log)) {
                rep.qi_feasible = QiFeasible::InfiniteOnly;
                if (rep.leading.has_log)
                    notes << "leading behaviour is logarithmic; only an infinite "
                             "trigonometric symbol applies. ";
                else
                    notes << "leading singularity has odd or non-integer order; only an "
                             "infinite trigonometric symbol applies. ";
            } else {
                rep.qi_feasible = QiFeasible::Infeasible;
                notes << "transform is bounded at the origin (constant leading term). ";
            }
        }
    } catch (const std::exception& e) {
        rep.qi_feasible = QiFeasible::Infeasible;
        notes << "degenerate parameter configuration: " << e.what() << " ";
    }

    if (rep.quadrant == Quadrant::Singular_neg_pos) {
        if (rep.qi_feasible == QiFeasible::FiniteStencil) {
            notes << "the RBF itself is singular at the origin; a single spec cannot be "
                     "used directly, a multi-c linear combination is required (not "
                     "constructed here). ";
        }
        rep.qi_feasible = QiFeasible::Infeasible;
    }
    rep.notes = notes.str();
    return rep;
}

} // namespace quasirbf
