#ifndef QUASIRBF_ASYMPTOTICS_HPP
#define QUASIRBF_ASYMPTOTICS_HPP

#include <string>
#include <vector>

#include "quasirbf/rbf_model.hpp"

namespace quasirbf {

// One term of an s -> 0 expansion: coeff * s^power, plus
// coeff_of_log * s^power * log(c s / 2) when has_log is set.
struct ExpansionTerm {
    double power = 0.0;
    bool has_log = false;
    double coeff = 0.0;
    double coeff_of_log = 0.0;
};

struct AsymptoticExpansion {
    std::vector<ExpansionTerm> terms; // sorted by increasing power
    int m0 = 0;                       // index of the first log power (2 m0)
    int t0 = 0;                       // location of the first double pole
    double truncated_at_power = 0.0;  // all terms with power < this are present

    double eval(double c, double s) const; // sum of terms at s
    std::string to_json() const;
};

enum class Quadrant { MQ_pos_pos, IMQ_pos_neg, Singular_neg_pos, IMQ_neg_neg };
enum class QiFeasible { FiniteStencil, InfiniteOnly, Infeasible };

struct RegimeReport {
    Quadrant quadrant = Quadrant::MQ_pos_pos;
    ExpansionTerm leading;
    QiFeasible qi_feasible = QiFeasible::Infeasible;
    double singularity_order = 0.0; // order of the s^-k singularity (0 if none)
    std::string notes;

    std::string to_json() const;
};

// Which derivation path produces the expansion constants. Both must agree;
// the acceptance suite enforces it.
enum class ExpansionRoute { ClosedForm, ResidueExtraction };

// Leading asymptotic term of phi_III_hat: pure power for integer d, power
// times log for non-integer d > 0.
ExpansionTerm tps_leading(const RbfSpec& spec);

// Full expansion of phi_III_hat / phi_IV_hat up to (and never beyond) the
// first logarithmic term, for even dimension and integer d.
AsymptoticExpansion tps_expansion_phi3(const RbfSpec& spec, double up_to_power,
                                       ExpansionRoute route = ExpansionRoute::ClosedForm);
AsymptoticExpansion tps_expansion_phi4(const RbfSpec& spec, double up_to_power,
                                       ExpansionRoute route = ExpansionRoute::ClosedForm);

// phi3 + phi4 combined (the full transform at s > 0); what the stencil
// construction consumes for the TPS family.
AsymptoticExpansion tps_expansion_full(const RbfSpec& spec, double up_to_power,
                                       ExpansionRoute route = ExpansionRoute::ClosedForm);

// Power-family expansion by residue enumeration on the closing side.
AsymptoticExpansion power_expansion(const RbfSpec& spec, double up_to_power);

// The section-5 case analysis: quadrant, leading behaviour, feasibility.
RegimeReport classify_regime(const RbfSpec& spec);

std::string quadrant_name(Quadrant q);
std::string feasible_name(QiFeasible f);

} // namespace quasirbf

#endif
