#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlt/nonlocal.hpp"
#include "nlt/radial.hpp"

namespace nlt {

/// A series sum with its truncation remainder estimate.
struct SeriesValue {
    double value = 0.0;
    double error = 0.0;
    long long terms = 0;  ///< partial-sum length before the asymptotic tail
};

/// S0 = sum_{k>=0} a_2k (finite only for alpha < 1/2), S1 = sum_{k>=1} a_2k / k,
/// S2 = sum_{k>=0} a_2k / (2k+1), with a_2k the Taylor coefficients of G_alpha.
struct SeriesSums {
    std::optional<SeriesValue> S0;  ///< empty when the series diverges
    SeriesValue S1;
    SeriesValue S2;
    bool converged = true;  ///< false when the term cap stopped refinement short of tol
};

/// Partial sums plus a tail from the large-k expansion of a_2k. Refines the cut-off
/// until the tail's remainder estimate is below tol / 10, up to 10^6 terms.
SeriesSums series_sums(int n, double alpha, double tol = 1e-13);

enum class ProofCase { sub, crit, super };

const char* to_string(ProofCase c);

struct ConstantBundle {
    int n = 2;
    double alpha = 0.5;
    double c_na = 0.0;
    double c_prime = 0.0;
    double c_dprime = 0.0;
    double C_prime = 0.0;   ///< coefficient of the R functional in the weighted inequality
    double C_dprime = 0.0;  ///< coefficient of ||f||^2
    double A = 0.0;         ///< initial-data threshold
    SeriesSums sums;
    ProofCase case_tag = ProofCase::crit;
    std::vector<std::string> trace;
};

/// alpha exactly 1/2 uses the critical-case bound; alpha within 1e-9 of 1/2 is rejected.
ConstantBundle constant_bundle(int n, double alpha, double tol = 1e-13);

/// alpha 2^{2 alpha - 1} Gamma(n/2 + alpha) / (Gamma(1 - alpha) Gamma(n/2 + 1)).
double prop31_constant(int n, double alpha);

struct VerifyResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double constant = 0.0;  ///< the coefficient of the R functional actually used
    bool holds = false;
};

/// Unweighted inequality: lhs = weighted_lhs(plain), rhs = prop31_constant * R.
/// `constant_override` replaces the coefficient of R.
VerifyResult verify_prop31(const RadialProfile& f, const NonlocalParams& p,
                           std::optional<double> constant_override = {}, double tol_rel = 1e-6);

/// Exponentially weighted inequality: rhs = C' R - C'' ||f||^2.
VerifyResult verify_prop32(const RadialProfile& f, const NonlocalParams& p,
                           const ConstantBundle& b,
                           std::optional<double> constant_override = {}, double tol_rel = 1e-6);

struct RiccatiCoeffs {
    double c1 = 0.0;
    double c2 = 0.0;
};

RiccatiCoeffs riccati_coeffs(const ConstantBundle& b, double sup_norm);

/// Solution of I' = c1 I^2 - c2, I(0) = J0, for J0 above the equilibrium sqrt(c2/c1).
double comparison_solution(const RiccatiCoeffs& c, double J0, double t);

/// Time at which comparison_solution diverges.
double blowup_time(const RiccatiCoeffs& c, double J0);

struct InitialCheck {
    double J0 = 0.0;
    double threshold = 0.0;
    bool qualifies = false;
};

InitialCheck verify_initial_condition(const RadialProfile& f, const ConstantBundle& b);

/// Bump radius at half of the admissible window: delta = e^{-e A / omega_{n-1}} / 4.
double qualifying_bump_delta(const ConstantBundle& b);

}  // namespace nlt
