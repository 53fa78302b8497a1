#ifndef QUASIRBF_LAGRANGE_HPP
#define QUASIRBF_LAGRANGE_HPP

#include <map>
#include <string>
#include <vector>

#include "quasirbf/asymptotics.hpp"
#include "quasirbf/rbf_model.hpp"

namespace quasirbf {

using Offset = std::vector<int>;

// Finite quasi-Lagrange stencil: lattice offsets alpha with coefficients
// mu_alpha, hypercubic-symmetric, built so the symbol P(xi) = sum mu_alpha
// e^{-i alpha xi} cancels the origin singularity of phi_hat.
struct Stencil {
    int n = 0;
    int support_radius = 0;            // max-norm radius
    std::map<Offset, double> offsets_and_coeffs;
    int singularity_order = 0;         // even k with phi_hat ~ s^-k
    int reproduction_degree = 0;
    double leading_laurent_coeff = 0;  // K0 of phi_hat ~ K0 s^-k
    double achieved_product_order = 0; // P phi_hat = 1 + O(s^this [log])

    std::string to_json() const;
    static Stencil from_json(const std::string& text);
};

// Taylor coefficients of the symbol at 0, indexed by (all-even) multi-index.
struct SymbolTaylor {
    std::map<Offset, double> coefficients;
};

struct StrangFixReport {
    int degree_verified = 0;
    double max_origin_residual = 0.0;
    double max_lattice_residual = 0.0;
    std::vector<Offset> checked_lattice_points;
};

// Build the minimal-norm hypercubic stencil whose symbol Taylor blocks kill
// every pure power of the expansion below the first log / odd-power term.
// Throws spec_error when the leading order is odd or the support is too small.
Stencil build_stencil(const AsymptoticExpansion& expansion, int n, int support_radius);

// P(xi) by direct cosine summation (2 pi periodic in each coordinate).
double symbol_eval(const Stencil& stencil, const std::vector<double>& xi);

// Partial derivative of P of multi-index gamma at xi.
double symbol_derivative(const Stencil& stencil, const std::vector<double>& xi,
                         const Offset& gamma);

// Taylor blocks of P at 0 from the moment sums, up to total order max_order.
SymbolTaylor symbol_taylor(const Stencil& stencil, int max_order);

// Numerical Strang-Fix verification: Psi_hat -> 1 at 0 along rays, derivative
// decay at 0 through the product series, and derivative smallness at the
// given nonzero lattice points 2 pi j.
StrangFixReport check_strang_fix(const Stencil& stencil, const RbfSpec& spec, int degree,
                                 const std::vector<Offset>& lattice_points);

// Guaranteed algebraic decay exponent of the quasi-Lagrange function.
double stencil_decay_bound(const RbfSpec& spec, const AsymptoticExpansion& expansion);

} // namespace quasirbf

#endif
