#ifndef QUASIRBF_MELLIN_HPP
#define QUASIRBF_MELLIN_HPP

#include <vector>

#include "quasirbf/rbf_model.hpp"
#include "quasirbf/detail/rational.hpp"

namespace quasirbf {

// Which Mellin-Barnes integrand to evaluate. TpsIII / TpsIV are the two
// nontrivial summands of the TPS transform, TpsSum their combined single
// integral, PowerFamily the (c^lambda + r^lambda)^beta transform.
enum class MbWhich { TpsIII, TpsIV, TpsSum, PowerFamily };

struct MbIntegrand {
    MbWhich which = MbWhich::TpsSum;
    RbfSpec spec;
};

enum class HalfPlane { Left, Right };

enum class PoleSource { GammaNumA, GammaNumB, GammaDim, Merged };

// A pole of the integrand. `order` is the net order after cancellation
// against denominator Gamma zeros; 0 with cancelled=true marks a location
// where a numerator pole is fully cancelled (a "hole" in the figures' sense).
struct PoleDatum {
    double location = 0.0;
    detail::Rat location_exact{};
    int order = 0;
    PoleSource source = PoleSource::GammaNumA;
    bool cancelled = false;
};

enum class FtMethod { ResidueLeft, ResidueRight, Contour, ClosedForm };

struct FtValue {
    double value = 0.0;
    int series_terms_used = 0;
    double truncation_estimate = 0.0; // relative
    FtMethod method = FtMethod::ResidueLeft;
};

// First `count` poles of the integrand in the given half plane, ordered by
// distance from the separating contour, cancellation resolved exactly.
std::vector<PoleDatum> enumerate_poles(const MbIntegrand& integrand, HalfPlane half_plane,
                                       int count);

// Contribution of one pole to phi_hat(s): residue times the outer prefactor,
// signed with the closing orientation of the pole's half plane.
double residue_at(const MbIntegrand& integrand, const PoleDatum& pole, double s);

// phi_hat piece at s > 0 by residue summation on the convergent side, with a
// vertical-contour quadrature fallback. Throws numeric_error if neither
// reaches tol.
FtValue eval_ft(const MbIntegrand& integrand, double s, double tol);

// Force a specific method (testing and cross-validation).
FtValue eval_ft_with_method(const MbIntegrand& integrand, double s, double tol,
                            FtMethod method);

// d = 1 closed form of the full TPS transform: 4 (2 pi)^{n/2} (c/s)^{n/2+1} K_{n/2+1}(c s).
double eval_ft_closed_form_d1(const RbfSpec& spec, double s);

// Brute-force oracle: Gaussian-regularized Hankel-type integral of the
// non-distributional part of phi, Richardson-extrapolated over eps_list to
// eps -> 0. Independent of the residue/contour machinery.
double oracle_hankel(const RbfSpec& spec, double s, const std::vector<double>& eps_list);

namespace mb {

// Internal integrand description shared with the asymptotics module.
struct GammaFactor {
    detail::Rat a, b; // Gamma(a + b t)
    int sgn = 1;      // +1 numerator, -1 denominator
    PoleSource tag = PoleSource::GammaNumA;
};

struct IntegrandDesc {
    std::vector<GammaFactor> factors;
    detail::Rat lam;       // power factor (2/(c s))^{lam * t}
    detail::Rat contour;   // nominal separating abscissa
    detail::Rat mixed_ok_below{-1000000, 1}; // mixed-family poles below this are Left
    int pref_pow_s = 0;    // prefactor s-power
    double pref_const = 0; // prefactor constant (everything except s^pref_pow_s)
    int n = 0;
    bool half_integer_grid = false; // all Gamma args on the half-integer grid (TPS)
};

IntegrandDesc build_desc(const MbIntegrand& integrand);

struct SymbolicTerm {
    double power = 0;       // exponent of s
    double coeff = 0;       // coefficient of s^power
    double coeff_of_log = 0; // coefficient of s^power * log(c s / 2)
    bool has_log = false;
};

// Residue of one pole as a term of the s -> 0 expansion (prefactor and
// orientation included).
SymbolicTerm residue_term(const IntegrandDesc& desc, const RbfSpec& spec,
                          const detail::Rat& location, int order, HalfPlane side);

std::vector<PoleDatum> enumerate_poles_desc(const IntegrandDesc& desc, HalfPlane half_plane,
                                            int count);

} // namespace mb

} // namespace quasirbf

#endif
