#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nlt {

/// A radial function f(|x|) with value and derivative access.
///
/// Beyond tail_radius() the profile is within tail_tol() of value(tail_radius());
/// integrals over [tail_radius, inf) are closed analytically against that level.
class RadialProfile {
public:
    enum class Kind { analytic, sampled };
    using Fn = std::function<double(double)>;

    /// `scale` is a characteristic length used to seed quadrature panels;
    /// `features` are radii where the profile changes character (joins, support edges).
    static RadialProfile analytic(std::string name, Fn value, Fn derivative, double sup_norm,
                                  double tail_radius, double tail_tol, double scale,
                                  std::vector<double> features = {});

    /// Piecewise cubic through (r_i, f_i), r_0 = 0. With `fprime` the pieces are
    /// Hermite cubics on the given slopes; without it, monotone (Fritsch-Carlson)
    /// slopes are used. Constant extension past the last node.
    static RadialProfile sampled(std::vector<double> r, std::vector<double> f,
                                 std::vector<double> fprime = {}, std::string name = "sampled");

    Kind kind() const;
    const std::string& name() const;
    double value(double r) const;
    double derivative(double r) const;
    double sup_norm() const;
    double tail_radius() const;
    double tail_tol() const;
    double scale() const;
    std::span<const double> features() const;

    /// True when the profile is identically constant (derivative zero everywhere).
    bool is_constant() const;

    /// c * f.
    RadialProfile scaled(double c) const;
    /// Sampled copy on the given nodes, carrying the exact derivative.
    RadialProfile resampled(std::span<const double> r) const;

    struct Impl;

private:
    explicit RadialProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

RadialProfile gaussian_profile(double a);
/// Equal to 1 on [0, d], 0 on [2d, inf), with the e^{-1/(2d-r)} / e^{-1/(r-d)} gluing between.
RadialProfile bump_profile(double delta);
/// exp(-a r^2) cos(k r).
RadialProfile oscillatory_profile(double a, double k);
RadialProfile constant_profile(double c);

/// Radial grid r_0 = 0 < r_1 < ... < r_N = r_max.
struct GridSpec {
    enum class Grading { uniform, geometric };

    double r_max = 1.0;
    int n_cells = 256;
    Grading grading = Grading::uniform;
    double ratio = 1.02;        ///< cell-width growth factor from the origin
    double stretch_cap = 50.0;  ///< widths stop growing at stretch_cap * first width

    std::vector<double> nodes() const;
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;  ///< quadrature error estimate plus certified tail remainder
};

/// omega_{n-1} int_0^inf (f(0) - f(r)) e^{-r} / r dr.
Estimate functional_J(const RadialProfile& f, int n, double rel_tol = 1e-11);

/// omega_{n-1} int_0^inf (f(0) - f(r))^2 / r^{1+2 alpha} dr. Throws DomainError when
/// f(0) - f(r) does not vanish at the origin fast enough for convergence.
Estimate functional_R(const RadialProfile& f, int n, double alpha, double rel_tol = 1e-11);

struct YoungResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Evaluates one of the three Young-type bounds (which = 1, 2, 3) with ||f||_inf = sup_norm.
/// which = 1 requires 1/2 < alpha < 1; alpha is ignored otherwise.
YoungResult young_check(const RadialProfile& f, double alpha, double eps, int which);

/// Generic one-dimensional radial integral int_0^inf F(r, f(0) - f(r)) dr over the
/// profile's panels. `tail` receives (R, f(0) - f(R)) and returns the closed-form
/// integral over [R, inf).
Estimate profile_integral(const RadialProfile& f,
                          const std::function<double(double, double)>& integrand,
                          const std::function<double(double, double)>& tail,
                          double tail_weight_bound, double rel_tol = 1e-11);

/// CSV with header `r,f,fprime` and %.17g values.
void write_profile_csv(const std::string& path, const RadialProfile& f, std::span<const double> r);
RadialProfile read_profile_csv(const std::string& path);

}  // namespace nlt
