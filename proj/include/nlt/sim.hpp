#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlt/inequality.hpp"
#include "nlt/nonlocal.hpp"
#include "nlt/radial.hpp"

namespace nlt {

enum class Scheme { upwind1, semilagrangian_monotone };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SimConfig {
    GridSpec grid;
    double cfl = 0.5;
    double t_end = 1.0;
    Scheme scheme = Scheme::upwind1;
    double gradient_growth_factor = 10.0;
    double dt_floor = 1e-8;   ///< relative to the first step's dt
    int output_every = 1;     ///< history cadence in steps; the last step is always kept
    long long max_steps = 2'000'000;
    int threads = 0;          ///< 0 = hardware concurrency

    void validate() const;
};

struct DiagnosticsRow {
    double t = 0.0;
    double J = 0.0;
    double I_ref = 0.0;  ///< NaN when the data does not qualify or t is past the reference blow-up
    double sup_norm = 0.0;
    double max_abs_gradient = 0.0;
    double dt = 0.0;
};

struct SimState {
    double t = 0.0;
    long long steps = 0;
    std::vector<double> r;
    std::vector<double> theta;
    std::vector<double> u;
    double theta_ext = 0.0;  ///< value beyond r_max
    std::vector<DiagnosticsRow> history;
};

/// J on the grid for the piecewise linear interpolant, plus the exterior
/// contribution omega (theta(0) - theta_ext) E1(r_max).
double grid_functional_J(std::span<const double> r, std::span<const double> theta,
                         double theta_ext, int n);

/// Radial transport on a fixed grid. The velocity operator is assembled once from
/// the kernel moment H on the ratio set {r_j / r_i}; each step is a matrix-vector
/// product against the cell slopes.
class Simulator {
public:
    Simulator(SimConfig config, NonlocalParams params);

    const SimConfig& config() const { return config_; }
    const NonlocalParams& params() const { return params_; }
    std::span<const double> nodes() const { return r_; }

    SimState initial_state(const RadialProfile& f0) const;

    /// u on the nodes for the given theta; u[0] = 0.
    std::vector<double> velocity(std::span<const double> theta) const;

    struct StepInfo {
        double dt = 0.0;
        bool dt_collapsed = false;  ///< dt fell below dt_floor * first dt
    };

    /// Recomputes u, advances theta by one CFL-limited step and updates t.
    /// `dt_ref` is the first step's dt (0 on the first call).
    StepInfo step(SimState& s, double dt_ref = 0.0) const;

private:
    SimConfig config_;
    NonlocalParams params_;
    std::vector<double> r_;
    std::vector<double> W_;  // (N+1) x N, row-major
    int threads_ = 1;
};

enum class Verdict { completed, blowup_proxy, aborted };

const char* to_string(Verdict v);

struct RunResult {
    std::vector<DiagnosticsRow> history;
    Verdict verdict = Verdict::completed;
    std::optional<double> t_star;
    long long steps = 0;
    bool qualifies = false;
    double J0 = 0.0;          ///< functional_J of the initial profile
    double T0 = 0.0;          ///< reference blow-up time (NaN unless qualifying)
    RiccatiCoeffs riccati;
    double theta_min0 = 0.0;  ///< range of the initial grid data
    double theta_max0 = 0.0;
    double range_violation = 0.0;  ///< largest excursion outside [theta_min0, theta_max0]
    std::string message;
};

RunResult run(const SimConfig& config, const RadialProfile& f0, const NonlocalParams& params);

/// Earliest t where max_abs_gradient reached growth_factor times the first row's,
/// or where dt fell to dt_floor times the first row's dt.
std::optional<double> detect_blowup(const std::vector<DiagnosticsRow>& history,
                                    const SimConfig& config);

}  // namespace nlt
