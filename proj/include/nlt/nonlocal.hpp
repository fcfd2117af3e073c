#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nlt/kernel_table.hpp"
#include "nlt/radial.hpp"

namespace nlt {

struct NonlocalParams {
    int n = 2;
    double alpha = 0.5;
    double inner_rel_tol = 1e-11;  ///< innermost (kernel-weighted) integrals
    double outer_rel_tol = 1e-9;   ///< outer radial integrals
    double split_h = 0.5;          ///< half-width of the graded window around the singular point

    void validate() const;
    std::shared_ptr<const KernelTable> kernel() const;
};

/// Constants of the velocity law.
struct KernelConstants {
    double c_na;      ///< Riesz potential normalisation
    double c_prime;   ///< radial velocity prefactor
    double c_dprime;  ///< c_prime * omega_{n-1}
    double riesz_C;   ///< principal-value kernel constant (negative)
};

KernelConstants kernel_constants(int n, double alpha);

/// u_r(r) = c' r^{-(n-1+2a)} int_0^inf f'(rho) rho^n G(rho/r) drho.
double radial_velocity(const RadialProfile& f, const NonlocalParams& p, double r);

/// f'(r) u_r(r).
double nonlinear_density(const RadialProfile& f, const NonlocalParams& p, double r);

struct OracleResult {
    std::vector<double> u;            ///< extrapolated velocity vector
    std::vector<double> by_epsilon;   ///< |u| component along x for each excision radius
    double extrapolation_error = 0.0;
};

/// Velocity at x from the principal-value integral of the odd Riesz kernel
/// against f, with ball excision radii `eps` and Richardson extrapolation.
/// n must be 2 or 3.
OracleResult direct_velocity_oracle(const RadialProfile& f, const NonlocalParams& p,
                                    std::span<const double> x,
                                    std::span<const double> eps = {});

enum class Weight { plain, exponential };

/// omega_{n-1} int_0^inf f'(r) u_r(r) w(r) / r dr with w = 1 or e^{-r}.
Estimate weighted_lhs(const RadialProfile& f, const NonlocalParams& p, Weight w);

/// Double integral with kernel e^{-r} r^{-n-2a} d/drho(rho^n G(rho/r)) against
/// (f(rho) - f(r))^2 over the two regions rho < r and r < rho.
Estimate double_integral_I(const RadialProfile& f, const NonlocalParams& p);

/// The nonnegative term
///   -(c''/2) int int e^{-r} d/dr(r^{-n-2a} d/drho(rho^n G(rho/r))) (f(rho) - f(r))^2,
/// which closes the identity
///   weighted_lhs(exponential) = main + (c''/2) I + N,  main = 2 C' functional_R.
Estimate dropped_term_N(const RadialProfile& f, const NonlocalParams& p);

/// d/dr (r^{-n-2a} d/drho(rho^n G(rho/r))) at (rho, r), rho != r.
double kernel_r_derivative(const KernelTable& t, double rho, double r);

/// r^{-n-2a} d/drho(rho^n G(rho/r)) at (rho, r), rho != r.
double kernel_rho_derivative(const KernelTable& t, double rho, double r);

}  // namespace nlt
