#include "nlt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "nlt/errors.hpp"
#include "nlt/kernel_table.hpp"
#include "nlt/specfun.hpp"

namespace nlt {

namespace {

template <class F>
void parallel_rows(int threads, std::size_t rows, F&& body) {
    if (threads <= 1 || rows < 64) {
        for (std::size_t i = 0; i < rows; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(rows, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// int_a^b e^{-r}/r dr for 0 < a < b.
double exp_over_r(double a, double b) {
    if (b < 1e-3) {
        // ln(b/a) + sum_k (-1)^k (b^k - a^k) / (k k!)
        double s = std::log(b / a);
        double pa = 1.0, pb = 1.0, fact = 1.0;
        for (int k = 1; k <= 8; ++k) {
            pa *= a;
            pb *= b;
            fact *= k;
            s += ((k % 2) ? -1.0 : 1.0) * (pb - pa) / (k * fact);
        }
        return s;
    }
    return specfun::expint_e1(a) - specfun::expint_e1(b);
}

}  // namespace

const char* to_string(Scheme s) {
    return s == Scheme::upwind1 ? "upwind1" : "semilagrangian_monotone";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "upwind1") return Scheme::upwind1;
    if (s == "semilagrangian_monotone" || s == "semilagrangian") return Scheme::semilagrangian_monotone;
    throw DomainError("unknown scheme '" + s + "'");
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::completed: return "completed";
        case Verdict::blowup_proxy: return "blowup_proxy";
        case Verdict::aborted: return "aborted";
    }
    return "?";
}

void SimConfig::validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");
    if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
    if (!(dt_floor > 0.0)) throw DomainError("dt_floor must be positive");
    if (!(gradient_growth_factor > 1.0)) throw DomainError("gradient_growth_factor must exceed 1");
    if (output_every < 1) throw DomainError("output_every must be >= 1");
    if (grid.n_cells < 2) throw DomainError("grid needs at least 2 cells");
}

double grid_functional_J(std::span<const double> r, std::span<const double> theta,
                         double theta_ext, int n) {
    const double t0 = theta[0];
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < r.size(); ++j) {
        const double a = r[j], b = r[j + 1];
        const double da = t0 - theta[j], db = t0 - theta[j + 1];
        const double B = (db - da) / (b - a);
        const double A = da - B * a;
        // int_a^b (A + B r) e^{-r} / r dr
        double cell = B * std::exp(-a) * (-std::expm1(-(b - a)));
        if (A != 0.0) cell += A * exp_over_r(a, b);
        sum += cell;
    }
    sum += (t0 - theta_ext) * specfun::expint_e1(r.back());
    return specfun::sphere_area(n) * sum;
}

Simulator::Simulator(SimConfig config, NonlocalParams params)
    : config_(std::move(config)), params_(params) {
    config_.validate();
    params_.validate();
    r_ = config_.grid.nodes();
    threads_ = config_.threads > 0 ? config_.threads
                                   : std::max(1u, std::thread::hardware_concurrency());
    const std::size_t N = r_.size() - 1;
    W_.assign((N + 1) * N, 0.0);
    const auto table = params_.kernel();
    const double cp = kernel_constants(params_.n, params_.alpha).c_prime;
    const double expo = 2.0 - 2.0 * params_.alpha;
    parallel_rows(threads_, N + 1, [&](std::size_t i) {
        if (i == 0) return;
        const double ri = r_[i];
        const double pre = cp * std::pow(ri, expo);
        double* row = &W_[i * N];
        double h_prev = 0.0;  // H(r_0 / r_i) = 0
        for (std::size_t j = 0; j < N; ++j) {
            const double h_next = (j + 1 == i) ? table->moment_at_one() : table->moment(r_[j + 1] / ri);
            row[j] = pre * (h_next - h_prev);
            h_prev = h_next;
        }
    });
}

SimState Simulator::initial_state(const RadialProfile& f0) const {
    SimState s;
    s.r = r_;
    s.theta.resize(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) s.theta[i] = f0.value(r_[i]);
    s.theta_ext = f0.value(r_.back());
    s.u = velocity(s.theta);
    return s;
}

std::vector<double> Simulator::velocity(std::span<const double> theta) const {
    const std::size_t N = r_.size() - 1;
    std::vector<double> slope(N);
    for (std::size_t j = 0; j < N; ++j) slope[j] = (theta[j + 1] - theta[j]) / (r_[j + 1] - r_[j]);
    std::vector<double> u(N + 1, 0.0);
    parallel_rows(threads_, N + 1, [&](std::size_t i) {
        if (i == 0) return;
        const double* row = &W_[i * N];
        double acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) acc += row[j] * slope[j];
        u[i] = acc;
    });
    return u;
}

Simulator::StepInfo Simulator::step(SimState& s, double dt_ref) const {
    const std::size_t N = r_.size() - 1;
    s.u = velocity(s.theta);
    s.u[0] = 0.0;

    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= N; ++i) {
        const double u = s.u[i];
        if (u == 0.0) continue;
        double width;
        if (config_.scheme == Scheme::upwind1) {
            width = (u < 0.0) ? (i < N ? r_[i + 1] - r_[i] : r_[N] - r_[N - 1]) : r_[i] - r_[i - 1];
        } else {
            // feet may cross cells but must stay on the same side of the origin
            width = 4.0 * std::max(r_[i] - r_[i - 1], i < N ? r_[i + 1] - r_[i] : 0.0);
            width = std::min(width, 0.5 * r_[i]);
        }
        dt = std::min(dt, config_.cfl * width / std::abs(u));
    }
    if (!std::isfinite(dt)) dt = config_.t_end - s.t;  // u == 0: nothing moves
    dt = std::min(dt, config_.t_end - s.t);

    StepInfo info;
    info.dt = dt;
    if (dt_ref > 0.0 && dt < config_.dt_floor * dt_ref && s.t + dt < config_.t_end) {
        info.dt_collapsed = true;
    }

    std::vector<double> next(s.theta.size());
    next[0] = s.theta[0];
    if (config_.scheme == Scheme::upwind1) {
        for (std::size_t i = 1; i <= N; ++i) {
            const double u = s.u[i];
            if (u > 0.0) {
                const double c = dt * u / (r_[i] - r_[i - 1]);
                next[i] = s.theta[i] + c * (s.theta[i - 1] - s.theta[i]);
            } else if (u < 0.0) {
                const double up = i < N ? s.theta[i + 1] : s.theta_ext;
                const double w = i < N ? r_[i + 1] - r_[i] : r_[N] - r_[N - 1];
                const double c = -dt * u / w;
                next[i] = s.theta[i] + c * (up - s.theta[i]);
            } else {
                next[i] = s.theta[i];
            }
        }
    } else {
        for (std::size_t i = 1; i <= N; ++i) {
            const double foot = r_[i] - dt * s.u[i];
            if (foot >= r_[N]) {
                next[i] = s.theta_ext;
                continue;
            }
            const auto it = std::upper_bound(r_.begin(), r_.end(), foot);
            const std::size_t j = static_cast<std::size_t>(it - r_.begin()) - 1;
            const double w = (foot - r_[j]) / (r_[j + 1] - r_[j]);
            next[i] = (1.0 - w) * s.theta[j] + w * s.theta[j + 1];
        }
    }
    s.theta.swap(next);
    s.t += dt;
    ++s.steps;
    return info;
}

std::optional<double> detect_blowup(const std::vector<DiagnosticsRow>& history,
                                    const SimConfig& config) {
    if (history.empty()) return std::nullopt;
    const double g0 = history.front().max_abs_gradient;
    // The first row is the initial state (dt = 0); its successor carries the reference dt.
    double dt_ref = 0.0;
    for (const auto& row : history) {
        if (row.dt > 0.0) {
            dt_ref = row.dt;
            break;
        }
    }
    for (const auto& row : history) {
        if (g0 > 0.0 && row.max_abs_gradient >= config.gradient_growth_factor * g0) return row.t;
        if (dt_ref > 0.0 && row.dt > 0.0 && row.dt < config.dt_floor * dt_ref) return row.t;
    }
    return std::nullopt;
}

RunResult run(const SimConfig& config, const RadialProfile& f0, const NonlocalParams& params) {
    RunResult out;
    Simulator sim(config, params);
    SimState s = sim.initial_state(f0);

    const auto bundle = constant_bundle(params.n, params.alpha);
    const auto init = verify_initial_condition(f0, bundle);
    out.J0 = init.J0;
    out.qualifies = init.qualifies;
    out.riccati = riccati_coeffs(bundle, f0.sup_norm());
    out.T0 = std::numeric_limits<double>::quiet_NaN();
    if (out.qualifies) out.T0 = blowup_time(out.riccati, out.J0);

    out.theta_min0 = *std::min_element(s.theta.begin(), s.theta.end());
    out.theta_max0 = *std::max_element(s.theta.begin(), s.theta.end());

    auto diagnostics = [&](double dt) {
        DiagnosticsRow row;
        row.t = s.t;
        row.dt = dt;
        row.J = grid_functional_J(s.r, s.theta, s.theta_ext, params.n);
        row.I_ref = std::numeric_limits<double>::quiet_NaN();
        if (out.qualifies && s.t < out.T0) row.I_ref = comparison_solution(out.riccati, out.J0, s.t);
        double sup = 0.0, grad = 0.0;
        for (std::size_t i = 0; i < s.theta.size(); ++i) {
            sup = std::max(sup, std::abs(s.theta[i]));
            out.range_violation = std::max({out.range_violation, s.theta[i] - out.theta_max0,
                                            out.theta_min0 - s.theta[i]});
            if (i + 1 < s.theta.size())
                grad = std::max(grad, std::abs(s.theta[i + 1] - s.theta[i]) / (s.r[i + 1] - s.r[i]));
        }
        row.sup_norm = sup;
        row.max_abs_gradient = grad;
        return row;
    };

    out.history.push_back(diagnostics(0.0));
    const double g0 = out.history.front().max_abs_gradient;
    double dt_ref = 0.0;
    try {
        while (s.t < config.t_end && s.steps < config.max_steps) {
            const auto info = sim.step(s, dt_ref);
            if (dt_ref == 0.0) dt_ref = info.dt;
            auto row = diagnostics(info.dt);
            const bool grad_hit = g0 > 0.0 && row.max_abs_gradient >= config.gradient_growth_factor * g0;
            const bool last = grad_hit || info.dt_collapsed || s.t >= config.t_end;
            if (last || s.steps == 1 || s.steps % config.output_every == 0) out.history.push_back(row);
            if (grad_hit || info.dt_collapsed) {
                out.verdict = Verdict::blowup_proxy;
                out.t_star = row.t;
                break;
            }
        }
        if (out.verdict == Verdict::completed && s.t < config.t_end) {
            out.verdict = Verdict::aborted;
            out.message = "step limit reached before t_end";
        }
    } catch (const std::exception& e) {
        out.verdict = Verdict::aborted;
        out.message = e.what();
    }
    out.steps = s.steps;
    return out;
}

}  // namespace nlt
