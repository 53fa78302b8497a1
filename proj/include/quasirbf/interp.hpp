#ifndef QUASIRBF_INTERP_HPP
#define QUASIRBF_INTERP_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "quasirbf/lagrange.hpp"
#include "quasirbf/rbf_model.hpp"

namespace quasirbf {

using Point = std::vector<double>;
using TestFunction = std::function<double(const Point&)>;

// Samples of f on the lattice h Z^n restricted to a box of lattice indices.
struct GridFunction {
    double h = 1.0;
    std::vector<int> lo, hi;     // inclusive per-axis lattice bounds
    std::vector<double> samples; // row-major over the box

    static GridFunction sample(const TestFunction& f, double h, const std::vector<int>& lo,
                               const std::vector<int>& hi);
    double at(const std::vector<int>& j) const;
    size_t index(const std::vector<int>& j) const;
};

struct ConvergenceReport {
    std::vector<double> h_values;
    std::vector<double> sup_errors;
    double fitted_slope = 0.0;       // least squares on (log h, log err)
    double log_corrected_slope = 0.0; // model err = C h^p log(1/h)
    double target_order = 0.0;
    bool target_has_log = false;

    std::string to_json() const;
    std::string to_csv() const;
};

// Psi(x) = sum_alpha mu_alpha phi(||x - alpha||), a finite sum.
double eval_psi(const Stencil& stencil, const RbfSpec& spec, const Point& x);

// Truncation radius (in lattice units) for a requested tail tolerance, from
// the decay bound of Psi with an empirically estimated constant.
int truncation_radius(const Stencil& stencil, const RbfSpec& spec, double tail_tol);

// Q_h f(x) = sum_j f(jh) Psi(x/h - j), truncated at the radius implied by
// tail_tol. The GridFunction overload throws when the data box cannot cover
// the truncation window around x (insufficient margin).
double quasi_interpolate(const Stencil& stencil, const RbfSpec& spec,
                         const GridFunction& data, const Point& x, double tail_tol = 1e-6);
double quasi_interpolate_fn(const Stencil& stencil, const RbfSpec& spec,
                            const TestFunction& f, double h, const Point& x,
                            double tail_tol = 1e-6);

// Sup residual of Q_h p - p per monomial p of total degree <= degree, over a
// fixed low-discrepancy interior point set.
std::map<Offset, double> reproduction_test(const Stencil& stencil, const RbfSpec& spec,
                                           int degree, double h, int box_margin = 0,
                                           double tail_tol = 1e-6);

ConvergenceReport convergence_study(const Stencil& stencil, const RbfSpec& spec,
                                    const TestFunction& f, const std::vector<double>& h_values,
                                    double tail_tol = 1e-7);

// Named smooth test functions for the CLI: gaussian-bump, trig-product, runge.
TestFunction test_function_by_name(const std::string& name, int n);

// Deterministic interior low-discrepancy evaluation points.
std::vector<Point> interior_eval_points(int n, int count, double half_width);

} // namespace quasirbf

#endif
