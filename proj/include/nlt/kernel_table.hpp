#pragma once

#include <memory>
#include <vector>

#include "nlt/gkernel.hpp"

namespace nlt {

/// Fast evaluator of g, g', g'' and of the moment H(lambda) = int_0^lambda s^m g(s) ds.
///
/// Below lambda = 1/2 and above lambda = 2 the Taylor series (directly or through
/// the reflection identity) is summed. In between, log g^{(k)}(1 - d) is
/// tabulated against log d on a uniform grid and interpolated with six-point
/// Lagrange stencils; node values come from GEvaluator::near_one. Points closer
/// to 1 than the table reaches fall back to direct quadrature.
///
/// Everything is computed in the constructor; afterwards the object is
/// read-only and safe to share between threads.
class KernelTable {
public:
    explicit KernelTable(KernelParams p, double d_min = 1e-22, double step = 0.02);

    /// Process-wide cache keyed by (m, beta).
    static std::shared_ptr<const KernelTable> shared(KernelParams p);

    const KernelParams& params() const { return params_; }
    const GEvaluator& evaluator() const { return ev_; }
    double d_min() const { return d_min_; }

    /// Derivative of the given order (0, 1, 2) at lambda >= 0, lambda != 1.
    double eval(int order, double lambda) const;
    double g(double lambda) const { return eval(0, lambda); }

    /// g^{(order)}(1 - d) for d in (0, 1].
    double below(int order, double d) const;
    /// g^{(order)}(1 + d) for d > 0.
    double above(int order, double d) const;

    /// Derivative of the given order from the Taylor series, lambda in [0, 1).
    double series(int order, double lambda) const;

    /// H(lambda) for lambda >= 0 (finite at lambda = 1 for every beta < 1).
    double moment(double lambda) const;
    /// H(1 - d) and H(1 + d) with d carried exactly.
    double moment_below(double d) const;
    double moment_above(double d) const;
    double moment_at_one() const { return h_one_; }

private:
    double interp(const std::vector<double>& table, double s) const;
    double tail_m(double d) const;  // int_{1-d}^1 s^m g(s) ds
    double tail_k(double d) const;  // int_{1-d}^1 u^{2b-2} g(u) du

    KernelParams params_;
    GEvaluator ev_;
    double d_min_;
    double s_lo_;
    double step_;
    std::vector<double> coeffs_;
    std::vector<double> log_g_[3];
    std::vector<double> log_m_;
    std::vector<double> log_k_;
    double m_floor_ = 0.0;  // tail_m(d_min)
    double k_floor_ = 0.0;  // tail_k(d_min)
    double h_half_ = 0.0;   // H(1/2)
    double h_one_ = 0.0;    // H(1)
    double h_two_ = 0.0;    // H(2)
};

}  // namespace nlt
