#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlt/gkernel.hpp"
#include "nlt/inequality.hpp"
#include "nlt/nonlocal.hpp"
#include "nlt/radial.hpp"
#include "nlt/sim.hpp"
#include "nlt/specfun.hpp"

namespace py = pybind11;
using namespace nlt;

namespace {

NonlocalParams params(int n, double alpha, double inner_rel_tol, double outer_rel_tol) {
    NonlocalParams p{n, alpha};
    p.inner_rel_tol = inner_rel_tol;
    p.outer_rel_tol = outer_rel_tol;
    return p;
}

py::dict verify_dict(const VerifyResult& v) {
    py::dict d;
    d["lhs"] = v.lhs;
    d["rhs"] = v.rhs;
    d["slack"] = v.slack;
    d["constant"] = v.constant;
    d["holds"] = v.holds;
    return d;
}

// Elementwise method over an array argument.
template <class T, class F>
auto elementwise(F f) {
    return [f](const T& self, py::array_t<double> x) {
        return py::vectorize([&](double v) { return f(self, v); })(x);
    };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Radial nonlocal transport: kernels, constants, inequalities and simulation";

    auto sf = m.def_submodule("specfun");
    sf.def("gamma", &specfun::gamma, py::arg("s"));
    sf.def("log_gamma", &specfun::log_gamma, py::arg("s"));
    sf.def("gamma_limit_partial", &specfun::gamma_limit_partial, py::arg("s"), py::arg("k"));
    sf.def("beta", &specfun::beta, py::arg("p"), py::arg("q"));
    sf.def("pochhammer", &specfun::pochhammer, py::arg("x"), py::arg("k"));
    sf.def("sphere_area", &specfun::sphere_area, py::arg("n"));
    sf.def("expint_e1", &specfun::expint_e1, py::arg("x"));

    m.def("taylor_coeff", [](int m_, double beta, long long k) { return taylor_coeff({m_, beta}, k); },
          py::arg("m"), py::arg("beta"), py::arg("k"));
    m.def("coeff_ratio_limit", [](int m_, double beta) { return coeff_ratio_limit({m_, beta}); },
          py::arg("m"), py::arg("beta"));
    m.def("check_recurrence", &check_recurrence, py::arg("lam"), py::arg("m"), py::arg("beta"));

    py::class_<GEvaluator>(m, "GEvaluator")
        .def(py::init([](int m_, double beta) { return GEvaluator({m_, beta}); }), py::arg("m"), py::arg("beta"))
        .def("value", elementwise<GEvaluator>([](const GEvaluator& g, double lam) { return g.value(lam); }))
        .def("first_derivative", elementwise<GEvaluator>([](const GEvaluator& g, double lam) { return g.first_derivative(lam); }))
        .def("second_derivative", elementwise<GEvaluator>([](const GEvaluator& g, double lam) { return g.second_derivative(lam); }))
        .def("coeff", &GEvaluator::coeff, py::arg("k"));

    py::class_<RadialProfile>(m, "RadialProfile")
        .def_static("gaussian", &gaussian_profile, py::arg("a"))
        .def_static("bump", &bump_profile, py::arg("delta"))
        .def_static("oscillatory", &oscillatory_profile, py::arg("a"), py::arg("k"))
        .def_static("constant", &constant_profile, py::arg("c"))
        .def_static("sampled",
                    [](std::vector<double> r, std::vector<double> f, std::vector<double> fp) {
                        return RadialProfile::sampled(std::move(r), std::move(f), std::move(fp));
                    },
                    py::arg("r"), py::arg("f"), py::arg("fprime") = std::vector<double>{})
        .def_static("from_csv", &read_profile_csv, py::arg("path"))
        .def("value", elementwise<RadialProfile>([](const RadialProfile& f, double r) { return f.value(r); }))
        .def("derivative", elementwise<RadialProfile>([](const RadialProfile& f, double r) { return f.derivative(r); }))
        .def("resampled", [](const RadialProfile& f, std::vector<double> r) { return f.resampled(r); })
        .def("scaled", &RadialProfile::scaled)
        .def_property_readonly("sup_norm", &RadialProfile::sup_norm)
        .def_property_readonly("tail_radius", &RadialProfile::tail_radius)
        .def_property_readonly("name", &RadialProfile::name);

    m.def("functional_J", [](const RadialProfile& f, int n) { return functional_J(f, n).value; },
          py::arg("f"), py::arg("n"));
    m.def("functional_R", [](const RadialProfile& f, int n, double a) { return functional_R(f, n, a).value; },
          py::arg("f"), py::arg("n"), py::arg("alpha"));

    m.def("radial_velocity",
          [](const RadialProfile& f, int n, double a, py::array_t<double> r, double itol, double otol) {
              const auto p = params(n, a, itol, otol);
              return py::vectorize([&](double x) { return radial_velocity(f, p, x); })(r);
          },
          py::arg("f"), py::arg("n"), py::arg("alpha"), py::arg("r"), py::arg("inner_rel_tol") = 1e-11,
          py::arg("outer_rel_tol") = 1e-9);
    m.def("weighted_lhs",
          [](const RadialProfile& f, int n, double a, bool exponential) {
              return weighted_lhs(f, NonlocalParams{n, a}, exponential ? Weight::exponential : Weight::plain).value;
          },
          py::arg("f"), py::arg("n"), py::arg("alpha"), py::arg("exponential") = false);

    py::class_<ConstantBundle>(m, "ConstantBundle")
        .def_readonly("n", &ConstantBundle::n)
        .def_readonly("alpha", &ConstantBundle::alpha)
        .def_readonly("c_na", &ConstantBundle::c_na)
        .def_readonly("c_prime", &ConstantBundle::c_prime)
        .def_readonly("c_dprime", &ConstantBundle::c_dprime)
        .def_readonly("C_prime", &ConstantBundle::C_prime)
        .def_readonly("C_dprime", &ConstantBundle::C_dprime)
        .def_readonly("A", &ConstantBundle::A)
        .def_readonly("trace", &ConstantBundle::trace)
        .def_property_readonly("S0", [](const ConstantBundle& b) -> py::object {
            if (!b.sums.S0) return py::none();
            return py::float_(b.sums.S0->value);
        })
        .def_property_readonly("S1", [](const ConstantBundle& b) { return b.sums.S1.value; })
        .def_property_readonly("S2", [](const ConstantBundle& b) { return b.sums.S2.value; })
        .def_property_readonly("case", [](const ConstantBundle& b) { return std::string(to_string(b.case_tag)); });
    m.def("constant_bundle", [](int n, double a) { return constant_bundle(n, a); }, py::arg("n"), py::arg("alpha"));
    m.def("qualifying_bump_delta", &qualifying_bump_delta, py::arg("bundle"));

    m.def("verify_prop31",
          [](const RadialProfile& f, int n, double a, std::optional<double> c) {
              return verify_dict(verify_prop31(f, NonlocalParams{n, a}, c));
          },
          py::arg("f"), py::arg("n"), py::arg("alpha"), py::arg("constant_override") = py::none());
    m.def("verify_prop32",
          [](const RadialProfile& f, int n, double a, std::optional<double> c) {
              return verify_dict(verify_prop32(f, NonlocalParams{n, a}, constant_bundle(n, a), c));
          },
          py::arg("f"), py::arg("n"), py::arg("alpha"), py::arg("constant_override") = py::none());
    m.def("verify_initial_condition",
          [](const RadialProfile& f, const ConstantBundle& b) {
              const auto c = verify_initial_condition(f, b);
              py::dict d;
              d["J0"] = c.J0;
              d["threshold"] = c.threshold;
              d["qualifies"] = c.qualifies;
              return d;
          },
          py::arg("f"), py::arg("bundle"));

    py::class_<RiccatiCoeffs>(m, "RiccatiCoeffs")
        .def(py::init([](double c1, double c2) { return RiccatiCoeffs{c1, c2}; }), py::arg("c1"), py::arg("c2"))
        .def_readonly("c1", &RiccatiCoeffs::c1)
        .def_readonly("c2", &RiccatiCoeffs::c2);
    m.def("riccati_coeffs", &riccati_coeffs, py::arg("bundle"), py::arg("sup_norm"));
    m.def("blowup_time", &blowup_time, py::arg("c"), py::arg("J0"));
    m.def("comparison_solution",
          [](const RiccatiCoeffs& c, double J0, py::array_t<double> t) {
              return py::vectorize([&](double s) { return comparison_solution(c, J0, s); })(t);
          },
          py::arg("c"), py::arg("J0"), py::arg("t"));

    m.def("simulate",
          [](const RadialProfile& f, int n, double a, double r_max, int n_cells, bool geometric, double cfl,
             double t_end, const std::string& scheme, double growth_factor, int threads) {
              SimConfig c;
              c.grid.r_max = r_max;
              c.grid.n_cells = n_cells;
              c.grid.grading = geometric ? GridSpec::Grading::geometric : GridSpec::Grading::uniform;
              c.cfl = cfl;
              c.t_end = t_end;
              c.scheme = scheme_from_string(scheme);
              c.gradient_growth_factor = growth_factor;
              c.threads = threads;
              RunResult res;
              {
                  py::gil_scoped_release release;
                  res = run(c, f, NonlocalParams{n, a});
              }
              const std::size_t H = res.history.size();
              py::array_t<double> t(H), J(H), I(H), sup(H), grad(H), dt(H);
              auto tt = t.mutable_unchecked<1>(), jj = J.mutable_unchecked<1>(), ii = I.mutable_unchecked<1>(),
                   ss = sup.mutable_unchecked<1>(), gg = grad.mutable_unchecked<1>(), dd = dt.mutable_unchecked<1>();
              for (std::size_t k = 0; k < H; ++k) {
                  const auto& r = res.history[k];
                  tt(k) = r.t;
                  jj(k) = r.J;
                  ii(k) = r.I_ref;
                  ss(k) = r.sup_norm;
                  gg(k) = r.max_abs_gradient;
                  dd(k) = r.dt;
              }
              py::dict d;
              d["t"] = t;
              d["J"] = J;
              d["I_ref"] = I;
              d["sup_norm"] = sup;
              d["max_grad"] = grad;
              d["dt"] = dt;
              d["verdict"] = std::string(to_string(res.verdict));
              d["t_star"] = res.t_star ? py::object(py::float_(*res.t_star)) : py::object(py::none());
              d["T0"] = res.T0;
              d["J0"] = res.J0;
              d["qualifies"] = res.qualifies;
              d["steps"] = res.steps;
              d["range_violation"] = res.range_violation;
              d["message"] = res.message;
              return d;
          },
          py::arg("f"), py::arg("n"), py::arg("alpha"), py::arg("r_max"), py::arg("n_cells") = 1024,
          py::arg("geometric") = false, py::arg("cfl") = 0.5, py::arg("t_end") = 1.0,
          py::arg("scheme") = "upwind1", py::arg("growth_factor") = 10.0, py::arg("threads") = 0);
}
