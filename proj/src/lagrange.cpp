#include "quasirbf/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include <Eigen/Dense>
#include <json.hpp>

#include "quasirbf/detail/dd.hpp"
#include "quasirbf/errors.hpp"
#include "quasirbf/mellin.hpp"
#include "quasirbf/special_fn.hpp"

namespace quasirbf {

namespace {

void enumerate_reps_rec(int n, int radius, int pos, int maxval, Offset& cur,
                        std::vector<Offset>& out) {
    if (pos == n) {
        out.push_back(cur);
        return;
    }
    for (int v = std::min(maxval, radius); v >= 0; --v) {
        cur[pos] = v;
        enumerate_reps_rec(n, radius, pos + 1, v, cur, out);
    }
}

std::vector<Offset> orbit_representatives(int n, int radius) {
    std::vector<Offset> out;
    Offset cur(n, 0);
    enumerate_reps_rec(n, radius, 0, radius, cur, out);
    return out;
}

std::vector<Offset> orbit_points(const Offset& rep) {
    std::set<Offset> pts;
    Offset perm = rep;
    std::sort(perm.begin(), perm.end());
    do {
        // all sign flips of nonzero entries
        std::vector<int> nz;
        for (size_t i = 0; i < perm.size(); ++i)
            if (perm[i] != 0) nz.push_back(int(i));
        int flips = 1 << nz.size();
        for (int mask = 0; mask < flips; ++mask) {
            Offset p = perm;
            for (size_t b = 0; b < nz.size(); ++b)
                if (mask & (1 << b)) p[nz[b]] = -p[nz[b]];
            pts.insert(p);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {pts.begin(), pts.end()};
}

// canonical all-even multi-indices with |gamma| <= max_order (non-increasing)
void enumerate_even_midx_rec(int n, int budget, int pos, int maxval, Offset& cur,
                             std::vector<Offset>& out) {
    if (pos == n) {
        out.push_back(cur);
        return;
    }
    int v0 = std::min(maxval, budget);
    v0 -= v0 % 2;
    for (int v = v0; v >= 0; v -= 2) {
        cur[pos] = v;
        enumerate_even_midx_rec(n, budget - v, pos + 1, v, cur, out);
    }
}

std::vector<Offset> even_multi_indices(int n, int max_order) {
    std::vector<Offset> out;
    Offset cur(n, 0);
    enumerate_even_midx_rec(n, max_order, 0, max_order - (max_order % 2), cur, out);
    std::sort(out.begin(), out.end(), [](const Offset& a, const Offset& b) {
        int sa = 0, sb = 0;
        for (int v : a) sa += v;
        for (int v : b) sb += v;
        if (sa != sb) return sa < sb;
        return a < b;
    });
    return out;
}

void all_midx_rec(int n, int budget, int pos, Offset& cur, std::vector<Offset>& out) {
    if (pos == n) {
        out.push_back(cur);
        return;
    }
    for (int v = 0; v <= budget; ++v) {
        cur[pos] = v;
        all_midx_rec(n, budget - v, pos + 1, cur, out);
    }
}

std::vector<Offset> all_multi_indices(int n, int max_order) {
    std::vector<Offset> out;
    Offset cur(n, 0);
    all_midx_rec(n, max_order, 0, cur, out);
    return out;
}

double factorial_d(int m) {
    double f = 1.0;
    for (int k = 2; k <= m; ++k) f *= k;
    return f;
}

// coefficient of xi^gamma in ||xi||^{|gamma|}: (m/2)! / prod (gamma_l/2)!
double radial_multinomial(const Offset& gamma) {
    int m = 0;
    for (int v : gamma) m += v;
    double num = factorial_d(m / 2);
    for (int v : gamma) num /= factorial_d(v / 2);
    return num;
}

double pow_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// moment basis entry: sum over the orbit of w^gamma * (-1)^{|gamma|/2} / gamma!
double moment_entry(const std::vector<Offset>& orbit, const Offset& gamma) {
    int m = 0;
    double gfac = 1.0;
    for (int v : gamma) {
        m += v;
        gfac *= factorial_d(v);
    }
    double acc = 0.0;
    for (const auto& w : orbit) {
        double t = 1.0;
        for (size_t l = 0; l < w.size(); ++l) t *= pow_int(double(w[l]), gamma[l]);
        acc += t;
    }
    double sign = (m / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * acc / gfac;
}

struct PureLadder {
    int k = 0;                 // singularity order
    double K0 = 0.0;           // leading Laurent coefficient
    int kprime = 0;            // achieved product order
    std::map<int, double> Kp;  // even-integer pure powers p -> coefficient
    std::map<int, double> c;   // prescribed radial Taylor coefficients of P
};

PureLadder build_ladder(const AsymptoticExpansion& expansion) {
    PureLadder L;
    if (expansion.terms.empty()) throw spec_error("build_stencil: empty expansion");
    const ExpansionTerm& lead = expansion.terms.front();
    if (lead.has_log)
        throw spec_error("build_stencil: leading term is logarithmic; no finite stencil "
                         "cancels it (infinite-symbol regime)");
    double kf = -lead.power;
    if (kf <= 0 || std::abs(kf - std::round(kf)) > 1e-9 || int(std::lround(kf)) % 2 != 0)
        throw spec_error("build_stencil: leading singularity order must be a positive "
                         "even integer (parity violation)");
    L.k = int(std::lround(kf));
    L.K0 = lead.coeff;

    // block power: first log term or first odd/non-integer pure power
    double block = expansion.truncated_at_power;
    for (const auto& t : expansion.terms) {
        bool even_int = std::abs(t.power - 2.0 * std::round(t.power / 2.0)) < 1e-9;
        if (t.has_log || !even_int) {
            block = std::min(block, t.power);
            continue;
        }
        L.Kp[int(std::lround(t.power))] += t.coeff;
    }
    L.kprime = L.k + int(std::floor(block + 1e-9));
    if (L.kprime <= 0)
        throw spec_error("build_stencil: an odd power below the singular head leaves no "
                         "attainable product order (parity violation)");

    // triangular solve for the radial Taylor ladder: for even tau in [0, k'),
    // sum_p K_p c_{tau - p} = delta_{tau,0}
    for (int tau = 0; tau < L.kprime; tau += 2) {
        double rhs = tau == 0 ? 1.0 : 0.0;
        for (const auto& [p, Kp] : L.Kp) {
            int cm = tau - p;
            if (cm == L.k + tau) continue; // the unknown being solved
            auto it = L.c.find(cm);
            if (it != L.c.end()) rhs -= Kp * it->second;
        }
        L.c[L.k + tau] = rhs / L.K0;
    }
    return L;
}

} // namespace

Stencil build_stencil(const AsymptoticExpansion& expansion, int n, int support_radius) {
    if (n < 1) throw spec_error("build_stencil: dimension must be >= 1");
    if (support_radius < 1) throw spec_error("build_stencil: support_radius must be >= 1");
    PureLadder L = build_ladder(expansion);
    // highest prescribed Taylor order: k + (largest even tau below k')
    const int tau_max = L.kprime % 2 == 0 ? L.kprime - 2 : L.kprime - 1;
    const int M = L.k + std::max(tau_max, 0);

    auto reps = orbit_representatives(n, support_radius);
    std::vector<std::vector<Offset>> orbits;
    orbits.reserve(reps.size());
    for (const auto& r : reps) orbits.push_back(orbit_points(r));

    auto gammas = even_multi_indices(n, M);
    const int rows = int(gammas.size()), cols = int(reps.size());

    Eigen::VectorXd sqrt_w(cols);
    for (int j = 0; j < cols; ++j) sqrt_w(j) = std::sqrt(double(orbits[j].size()));

    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (int i = 0; i < rows; ++i) {
        int order = 0;
        for (int v : gammas[i]) order += v;
        for (int j = 0; j < cols; ++j) A(i, j) = moment_entry(orbits[j], gammas[i]);
        double rhs = 0.0;
        if (order >= L.k) {
            auto it = L.c.find(order);
            rhs = (it != L.c.end() ? it->second : 0.0) * radial_multinomial(gammas[i]);
        }
        b(i) = rhs;
        // row scaling keeps the prescribed-ladder rows comparable
        double scale = std::max(A.row(i).cwiseAbs().maxCoeff(), std::abs(rhs));
        if (scale > 0) {
            A.row(i) /= scale;
            b(i) /= scale;
        }
    }

    // substitute nu_j = sqrt(orbit size) mu_j so the minimum-norm solve
    // minimizes the Euclidean norm of the full coefficient vector
    Eigen::MatrixXd Aw = A * sqrt_w.cwiseInverse().asDiagonal();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Aw);
    cod.setThreshold(1e-12);
    Eigen::VectorXd mu = (cod.solve(b).array() / sqrt_w.array()).matrix();
    double resid = (A * mu - b).cwiseAbs().maxCoeff();
    if (resid > 1e-9)
        throw spec_error("build_stencil: moment system inconsistent at this support_radius "
                         "(residual " + std::to_string(resid) + "); enlarge the support");
    // iterative refinement with extended-precision residuals: the zeroth and
    // second moments of mu multiply phi_hat ~ s^-k at small s, so constraint
    // violations at the 1e-16 level are visible in the product
    for (int step = 0; step < 3; ++step) {
        Eigen::VectorXd r(rows);
        for (int i = 0; i < rows; ++i) {
            detail::Dd acc(-b(i));
            for (int j = 0; j < cols; ++j) acc = acc + detail::two_prod(A(i, j), mu(j));
            r(i) = -acc.to_double();
        }
        mu += (cod.solve(r).array() / sqrt_w.array()).matrix();
    }

    Stencil st;
    st.n = n;
    st.support_radius = support_radius;
    st.singularity_order = L.k;
    st.reproduction_degree = std::min(L.k, L.kprime) - 1;
    st.leading_laurent_coeff = L.K0;
    st.achieved_product_order = double(L.kprime);
    for (int j = 0; j < cols; ++j) {
        if (mu(j) == 0.0) continue;
        for (const auto& w : orbits[j]) st.offsets_and_coeffs[w] = mu(j);
    }
    return st;
}

namespace {

// cos x - 1 + x^2/2 by its series: relative accuracy at small x, where the
// direct cosine sum of the symbol cancels to O(|xi|^k) and double addition
// would lose everything.
double cos_remainder(double x) {
    double x2 = x * x;
    double acc = 0.0;
    double t = x2 * x2 / 24.0; // x^4/4!
    double fact_arg = 4.0;
    for (int k = 0; k < 9; ++k) {
        acc += t;
        t *= -x2 / ((fact_arg + 1.0) * (fact_arg + 2.0));
        fact_arg += 2.0;
        if (std::abs(t) < 1e-20 * std::abs(acc)) break;
    }
    return acc;
}

} // namespace

double symbol_eval(const Stencil& stencil, const std::vector<double>& xi) {
    if (int(xi.size()) != stencil.n) throw spec_error("symbol_eval: dimension mismatch");
    double maxdot = 0.0;
    for (const auto& [alpha, mu] : stencil.offsets_and_coeffs) {
        double dot = 0.0;
        for (int l = 0; l < stencil.n; ++l) dot += alpha[l] * xi[l];
        maxdot = std::max(maxdot, std::abs(dot));
    }
    if (maxdot >= 0.5) {
        double acc = 0.0;
        for (const auto& [alpha, mu] : stencil.offsets_and_coeffs) {
            double dot = 0.0;
            for (int l = 0; l < stencil.n; ++l) dot += alpha[l] * xi[l];
            acc += mu * std::cos(dot);
        }
        return acc;
    }
    // small-angle split: P = sum mu + sum mu (cos(dot)-1+dot^2/2) - (1/2) sum mu dot^2.
    // The first and last pieces are exact moment sums; the middle one is a
    // same-sign O(dot^4) series with no catastrophic cancellation.
    double s0 = 0.0, s2 = 0.0, srem = 0.0;
    for (const auto& [alpha, mu] : stencil.offsets_and_coeffs) {
        double dot = 0.0;
        for (int l = 0; l < stencil.n; ++l) dot += alpha[l] * xi[l];
        s0 += mu;
        s2 += mu * dot * dot;
        srem += mu * cos_remainder(dot);
    }
    return s0 - 0.5 * s2 + srem;
}

double symbol_derivative(const Stencil& stencil, const std::vector<double>& xi,
                         const Offset& gamma) {
    if (int(gamma.size()) != stencil.n) throw spec_error("symbol_derivative: bad multi-index");
    std::complex<double> acc = 0.0;
    for (const auto& [alpha, mu] : stencil.offsets_and_coeffs) {
        double dot = 0.0;
        std::complex<double> fac = 1.0;
        for (int l = 0; l < stencil.n; ++l) {
            dot += alpha[l] * xi[l];
            for (int r = 0; r < gamma[l]; ++r) fac *= std::complex<double>(0.0, -double(alpha[l]));
        }
        acc += mu * fac * std::exp(std::complex<double>(0.0, -dot));
    }
    return acc.real();
}

SymbolTaylor symbol_taylor(const Stencil& stencil, int max_order) {
    SymbolTaylor out;
    auto gammas = even_multi_indices(stencil.n, max_order);
    for (const auto& g : gammas) {
        int m = 0;
        double gfac = 1.0;
        for (int v : g) {
            m += v;
            gfac *= factorial_d(v);
        }
        double acc = 0.0;
        for (const auto& [alpha, mu] : stencil.offsets_and_coeffs) {
            double t = 1.0;
            for (int l = 0; l < stencil.n; ++l) t *= pow_int(double(alpha[l]), g[l]);
            acc += mu * t;
        }
        double sign = (m / 2) % 2 == 0 ? 1.0 : -1.0;
        out.coefficients[g] = sign * acc / gfac;
    }
    return out;
}

StrangFixReport check_strang_fix(const Stencil& stencil, const RbfSpec& spec, int degree,
                                 const std::vector<Offset>& lattice_points) {
    if (degree < 0) throw spec_error("check_strang_fix: degree must be >= 0");
    StrangFixReport rep;
    rep.degree_verified = std::min(degree, stencil.singularity_order - 1);
    MbIntegrand ig{spec.family == RbfFamily::GeneralizedTps ? MbWhich::TpsSum
                                                            : MbWhich::PowerFamily,
                   spec};

    // (i) Psi_hat -> 1 along rays through the origin
    double worst0 = 0.0;
    std::vector<std::vector<double>> dirs;
    for (int l = 0; l < stencil.n; ++l) {
        std::vector<double> e(stencil.n, 0.0);
        e[l] = 1.0;
        dirs.push_back(e);
    }
    std::vector<double> diag(stencil.n, 1.0 / std::sqrt(double(stencil.n)));
    dirs.push_back(diag);
    for (const auto& dir : dirs) {
        double t = 1e-2;
        std::vector<double> xi(stencil.n);
        for (int l = 0; l < stencil.n; ++l) xi[l] = t * dir[l];
        double psi_hat = symbol_eval(stencil, xi) * eval_ft(ig, t, 1e-11).value;
        worst0 = std::max(worst0, std::abs(psi_hat - 1.0));
    }

    // (ii) product-series derivative conditions at the origin: moments below
    // order k vanish, and the radial Taylor ladder of P cancels the pure
    // powers of the expansion below the achieved product order
    const int k = stencil.singularity_order;
    int kprime = int(std::lround(stencil.achieved_product_order));
    SymbolTaylor taylor = symbol_taylor(stencil, k + std::max(kprime - 1, 0));
    for (const auto& [g, val] : taylor.coefficients) {
        int m = 0;
        for (int v : g) m += v;
        if (m < k) worst0 = std::max(worst0, std::abs(val));
    }
    {
        AsymptoticExpansion e =
            spec.family == RbfFamily::GeneralizedTps
                ? tps_expansion_full(spec, double(kprime - k) + 1.5)
                : power_expansion(spec, double(kprime - k) + 1.5);
        std::map<int, double> chat; // achieved radial ladder, read off axis blocks
        for (int m = k; m <= k + std::max(kprime - 1, 0); m += 2) {
            Offset axis(stencil.n, 0);
            axis[0] = m;
            auto it = taylor.coefficients.find(axis);
            if (it != taylor.coefficients.end()) chat[m] = it->second;
        }
        for (int tau = 0; tau < kprime; tau += 2) {
            double acc = tau == 0 ? -1.0 : 0.0;
            for (const auto& t : e.terms) {
                if (t.has_log) continue;
                double cmf = tau - t.power;
                int cm = int(std::lround(cmf));
                if (std::abs(cmf - cm) > 1e-9) continue;
                auto it = chat.find(cm);
                if (it != chat.end()) acc += t.coeff * it->second;
            }
            worst0 = std::max(worst0, std::abs(acc));
        }
    }
    rep.max_origin_residual = worst0;

    // (iii) lattice points: P and its derivatives up to `degree` at 2 pi j,
    // scaled by the transform magnitude there
    double worstL = 0.0;
    for (const auto& j : lattice_points) {
        std::vector<double> xi(stencil.n);
        double norm = 0.0;
        for (int l = 0; l < stencil.n; ++l) {
            xi[l] = 2.0 * kPi * j[l];
            norm += xi[l] * xi[l];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) throw spec_error("check_strang_fix: lattice point must be nonzero");
        double ft = std::abs(eval_ft(ig, norm, 1e-9).value);
        for (const auto& g : all_multi_indices(stencil.n, rep.degree_verified))
            worstL = std::max(worstL, std::abs(symbol_derivative(stencil, xi, g)) * ft);
        rep.checked_lattice_points.push_back(j);
    }
    rep.max_lattice_residual = worstL;
    return rep;
}

double stencil_decay_bound(const RbfSpec& spec, const AsymptoticExpansion& expansion) {
    if (spec.family == RbfFamily::GeneralizedTps)
        return 2.0 * spec.n + 2.0 * spec.d + 2.0 * expansion.m0;
    if (spec.n % 2 == 0) return 2.0 * spec.n - 2.0;
    return 2.0 * spec.n - 1.0;
}

std::string Stencil::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["support_radius"] = support_radius;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& [off, mu] : offsets_and_coeffs) {
        nlohmann::ordered_json e;
        e["offset"] = off;
        e["mu"] = mu;
        j["entries"].push_back(e);
    }
    j["singularity_order"] = singularity_order;
    j["reproduction_degree"] = reproduction_degree;
    j["leading_laurent_coeff"] = leading_laurent_coeff;
    j["achieved_product_order"] = achieved_product_order;
    return j.dump();
}

Stencil Stencil::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw spec_error(std::string("Stencil: invalid JSON: ") + e.what());
    }
    Stencil st;
    try {
        st.n = j.at("n").get<int>();
        st.support_radius = j.at("support_radius").get<int>();
        st.singularity_order = j.at("singularity_order").get<int>();
        st.reproduction_degree = j.at("reproduction_degree").get<int>();
        if (j.contains("leading_laurent_coeff"))
            st.leading_laurent_coeff = j["leading_laurent_coeff"].get<double>();
        if (j.contains("achieved_product_order"))
            st.achieved_product_order = j["achieved_product_order"].get<double>();
        for (const auto& e : j.at("entries")) {
            Offset off = e.at("offset").get<Offset>();
            if (int(off.size()) != st.n) throw spec_error("Stencil: offset dimension mismatch");
            st.offsets_and_coeffs[off] = e.at("mu").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw spec_error(std::string("Stencil: missing or malformed field: ") + e.what());
    }
    return st;
}

} // namespace quasirbf
