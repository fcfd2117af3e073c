#include "nlt/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlt/errors.hpp"
#include "nlt/gkernel.hpp"
#include "nlt/inequality.hpp"
#include "nlt/nonlocal.hpp"
#include "nlt/radial.hpp"
#include "nlt/sim.hpp"
#include "nlt/specfun.hpp"

namespace nlt::cli {

using json = nlohmann::ordered_json;

const char* version() { return "0.1.0"; }

namespace {

struct VerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Globals {
    double tol = 1e-11;
    int threads = 0;
    std::string out_dir;
    std::string format = "csv";
};

// Table output in csv or json; json rows are objects keyed by the header.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<double> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& os, const std::string& format) const {
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : rows_) {
                json o;
                for (std::size_t i = 0; i < header_.size(); ++i) o[header_[i]] = r[i];
                arr.push_back(o);
            }
            os << arr.dump(2) << "\n";
            return;
        }
        for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
        os << "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << num(r[i]);
            os << "\n";
        }
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

// Writes to <out-dir>/<name> when --out-dir is set, else to `out`.
void emit(const Globals& g, std::ostream& out, const std::string& name,
          const std::function<void(std::ostream&)>& body) {
    if (g.out_dir.empty()) {
        body(out);
        return;
    }
    std::filesystem::create_directories(g.out_dir);
    const auto path = std::filesystem::path(g.out_dir) / name;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(os);
}

void emit_record(const Globals& g, std::ostream& out, const std::string& stem, const json& rec) {
    if (g.format == "json") {
        emit(g, out, stem + ".json", [&](std::ostream& os) { os << rec.dump(2) << "\n"; });
        return;
    }
    emit(g, out, stem + ".csv", [&](std::ostream& os) {
        bool first = true;
        for (auto it = rec.begin(); it != rec.end(); ++it) {
            os << (first ? "" : ",") << it.key();
            first = false;
        }
        os << "\n";
        first = true;
        for (auto it = rec.begin(); it != rec.end(); ++it) {
            os << (first ? "" : ",");
            first = false;
            if (it->is_number_float()) os << num(it->get<double>());
            else if (it->is_string()) os << it->get<std::string>();
            else os << it->dump();
        }
        os << "\n";
    });
}

struct ProfileOpts {
    std::string name = "gaussian";
    double a = 1.0;
    double delta = 0.05;
    double k = 4.0;
    double c = 1.0;
    std::string file;
    int sample = 0;  // resample onto this many uniform cells when > 0

    void add_to(CLI::App* app) {
        app->add_option("--profile", name, "gaussian | bump | oscillatory | constant | file")
            ->check(CLI::IsMember({"gaussian", "bump", "oscillatory", "constant", "file"}));
        app->add_option("--a", a, "gaussian / oscillatory decay rate");
        app->add_option("--delta", delta, "bump radius");
        app->add_option("--k", k, "oscillatory wavenumber");
        app->add_option("--c", c, "constant value");
        app->add_option("--file", file, "CSV profile with columns r,f[,fprime]");
        app->add_option("--sample", sample, "resample onto this many uniform cells");
    }

    RadialProfile build() const {
        RadialProfile f = [&] {
            if (name == "gaussian") return gaussian_profile(a);
            if (name == "bump") return bump_profile(delta);
            if (name == "oscillatory") return oscillatory_profile(a, k);
            if (name == "constant") return constant_profile(c);
            if (file.empty()) throw DomainError("--profile file needs --file");
            return read_profile_csv(file);
        }();
        if (sample > 0) {
            std::vector<double> r(sample + 1);
            for (int i = 0; i <= sample; ++i) r[i] = f.tail_radius() * i / sample;
            f = f.resampled(r);
        }
        return f;
    }

    json describe() const {
        json j{{"profile", name}};
        if (name == "gaussian") j["a"] = a;
        if (name == "bump") j["delta"] = delta;
        if (name == "oscillatory") {
            j["a"] = a;
            j["k"] = k;
        }
        if (name == "constant") j["c"] = c;
        if (name == "file") j["file"] = file;
        if (sample > 0) j["sample"] = sample;
        return j;
    }
};

// "0.5,1,2" or "lo:hi:count".
std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::stringstream ss(s);
        std::string a, b, c;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c, ':');
        const double lo = std::stod(a), hi = std::stod(b);
        const int count = std::stoi(c);
        if (count < 1) throw DomainError("grid count must be >= 1");
        for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        return out;
    }
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    if (out.empty()) throw DomainError("empty r grid");
    return out;
}

json bundle_json(const ConstantBundle& b) {
    json j;
    j["n"] = b.n;
    j["alpha"] = b.alpha;
    j["c_na"] = b.c_na;
    j["c_prime"] = b.c_prime;
    j["c_dprime"] = b.c_dprime;
    j["C_prime"] = b.C_prime;
    j["C_dprime"] = b.C_dprime;
    j["A"] = b.A;
    if (b.sums.S0) j["S0"] = b.sums.S0->value;
    else j["S0"] = "divergent";
    j["S1"] = b.sums.S1.value;
    j["S2"] = b.sums.S2.value;
    j["S_errors"] = {{"S0", b.sums.S0 ? b.sums.S0->error : std::numeric_limits<double>::quiet_NaN()},
                     {"S1", b.sums.S1.error},
                     {"S2", b.sums.S2.error}};
    j["case"] = to_string(b.case_tag);
    j["trace"] = b.trace;
    return j;
}

NonlocalParams make_params(int n, double alpha, const Globals& g) {
    NonlocalParams p{n, alpha};
    p.inner_rel_tol = g.tol;
    p.outer_rel_tol = std::max(g.tol, 1e-9);
    return p;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

namespace {

// ---- subcommands -------------------------------------------------------------

struct SpecfunOpts {
    std::string fn = "gamma";
    double x = 1.0, y = 1.0;
    long long k = 0;
};

void run_specfun(const SpecfunOpts& o, const Globals& g, std::ostream& out) {
    double v;
    if (o.fn == "gamma") v = specfun::gamma(o.x);
    else if (o.fn == "lgamma") v = specfun::log_gamma(o.x);
    else if (o.fn == "gamma_limit") v = specfun::gamma_limit_partial(o.x, o.k);
    else if (o.fn == "beta") v = specfun::beta(o.x, o.y);
    else if (o.fn == "pochhammer") v = specfun::pochhammer(o.x, o.k);
    else if (o.fn == "sphere_area") v = specfun::sphere_area(static_cast<int>(o.k));
    else v = specfun::expint_e1(o.x);
    emit_record(g, out, "specfun", json{{"fn", o.fn}, {"value", v}});
}

struct GkernelOpts {
    int n = 2;
    double alpha = 0.5;
    double lambda = 0.5;
    int order = 0;
    long long kmax = 20;
};

void run_gkernel_eval(const GkernelOpts& o, const Globals& g, std::ostream& out) {
    GEvaluator ev(KernelParams::for_transport(o.n, o.alpha));
    double v;
    if (o.order == 0) v = ev.value(o.lambda);
    else if (o.order == 1) v = ev.first_derivative(o.lambda);
    else v = ev.second_derivative(o.lambda);
    emit_record(g, out, "gkernel",
                json{{"n", o.n}, {"alpha", o.alpha}, {"lambda", o.lambda}, {"order", o.order}, {"value", v}});
}

void run_gkernel_coeffs(const GkernelOpts& o, const Globals& g, std::ostream& out) {
    const KernelParams kp = KernelParams::for_transport(o.n, o.alpha);
    const double L = coeff_ratio_limit(kp);
    Table t({"k", "a_2k", "ratio_to_limit"});
    for (long long k = 0; k <= o.kmax; ++k) {
        const double a = taylor_coeff(kp, k);
        const double ratio = k == 0 ? std::numeric_limits<double>::quiet_NaN()
                                    : a / (L * std::pow(double(k), 2.0 * o.alpha - 2.0));
        t.add({double(k), a, ratio});
    }
    emit(g, out, "coeffs." + g.format, [&](std::ostream& os) { t.write(os, g.format); });
}

struct FieldOpts {
    int n = 2;
    double alpha = 0.5;
    std::string r_grid = "0.5,1,2";
    ProfileOpts profile;
    double threshold = 1e-4;
};

void run_velocity(const FieldOpts& o, const Globals& g, std::ostream& out) {
    const auto f = o.profile.build();
    const auto p = make_params(o.n, o.alpha, g);
    Table t({"r", "u_r", "density"});
    for (double r : parse_grid(o.r_grid)) {
        const double u = radial_velocity(f, p, r);
        t.add({r, u, f.derivative(r) * u});
    }
    emit(g, out, "velocity." + g.format, [&](std::ostream& os) { t.write(os, g.format); });
}

bool run_oracle_check(const FieldOpts& o, const Globals& g, std::ostream& out) {
    if (o.n != 2 && o.n != 3) throw DomainError("oracle-check supports n = 2 or 3");
    const auto f = o.profile.build();
    const auto p = make_params(o.n, o.alpha, g);
    Table t({"r", "u_radial", "u_oracle", "rel_error", "transversal", "extrapolation_error"});
    bool ok = true;
    for (double r : parse_grid(o.r_grid)) {
        const double u = radial_velocity(f, p, r);
        std::vector<double> x(o.n, 0.0);
        x[0] = r;
        const auto orc = direct_velocity_oracle(f, p, x);
        double trans = 0.0;
        for (int i = 1; i < o.n; ++i) trans = std::max(trans, std::abs(orc.u[i]));
        const double rel = std::abs(orc.u[0] - u) / std::max(std::abs(u), 1e-300);
        if (!(rel <= o.threshold) || !(trans <= 1e-6 * std::abs(orc.u[0]))) ok = false;
        t.add({r, u, orc.u[0], rel, trans, orc.extrapolation_error});
    }
    emit(g, out, "oracle_check." + g.format, [&](std::ostream& os) { t.write(os, g.format); });
    return ok;
}

struct ConstOpts {
    int n = 2;
    double alpha = 0.5;
};

struct VerifyOpts {
    int prop = 32;
    int n = 2;
    double alpha = 0.5;
    ProfileOpts profile;
    std::optional<double> constant_override;
    double tol_rel = 1e-6;
};

bool run_verify(const VerifyOpts& o, const Globals& g, std::ostream& out) {
    const auto f = o.profile.build();
    const auto p = make_params(o.n, o.alpha, g);
    VerifyResult v;
    if (o.prop == 31) {
        v = verify_prop31(f, p, o.constant_override, o.tol_rel);
    } else {
        const auto b = constant_bundle(o.n, o.alpha);
        v = verify_prop32(f, p, b, o.constant_override, o.tol_rel);
    }
    json rec{{"prop", o.prop}, {"n", o.n}, {"alpha", o.alpha}, {"lhs", v.lhs}, {"rhs", v.rhs},
             {"slack", v.slack}, {"constant", v.constant}, {"holds", v.holds}};
    emit_record(g, out, "verify", rec);
    return v.holds;
}

struct InitOpts {
    int n = 2;
    double alpha = 0.5;
    std::optional<double> delta;
    ProfileOpts profile;
    std::string r_grid = "0:1:101";
    std::string output;
};

void run_initdata_bump(const InitOpts& o, const Globals& g, std::ostream& out) {
    const auto b = constant_bundle(o.n, o.alpha);
    const double delta = o.delta.value_or(qualifying_bump_delta(b));
    const auto f = bump_profile(delta);
    const auto c = verify_initial_condition(f, b);
    emit_record(g, out, "initdata",
                json{{"n", o.n}, {"alpha", o.alpha}, {"delta", delta}, {"J0", c.J0},
                     {"threshold", c.threshold}, {"qualifies", c.qualifies}});
}

void run_initdata_export(const InitOpts& o, const Globals& g) {
    const auto f = o.profile.build();
    const auto r = parse_grid(o.r_grid);
    std::string path = o.output;
    if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        path = (std::filesystem::path(g.out_dir) / o.output).string();
    }
    write_profile_csv(path, f, r);
}

struct SimOpts {
    std::string config;
    bool wall_time = false;
};

double to_double(const std::map<std::string, std::string>& kv, const std::string& key, double def) {
    const auto it = kv.find(key);
    if (it == kv.end()) return def;
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::runtime_error("config key " + key + ": not a number");
    return v;
}

bool run_simulate(const SimOpts& o, const Globals& g, std::ostream& out, std::ostream& err) {
    std::ifstream in(o.config);
    if (!in) throw std::runtime_error("cannot open config " + o.config);
    const auto kv = parse_config(in);
    static const std::set<std::string> known{
        "n", "alpha", "profile", "delta", "a", "k", "c", "file", "r_max", "n_cells", "grading",
        "ratio", "stretch_cap", "cfl", "t_end", "scheme", "growth_factor", "dt_floor",
        "output_every", "max_steps"};
    for (const auto& [key, value] : kv)
        if (!known.count(key)) throw std::runtime_error("unknown config key '" + key + "'");

    const auto wall0 = std::chrono::steady_clock::now();
    const int n = static_cast<int>(to_double(kv, "n", 2));
    const double alpha = to_double(kv, "alpha", 0.5);
    const auto p = make_params(n, alpha, g);

    ProfileOpts prof;
    if (kv.count("profile")) prof.name = kv.at("profile");
    prof.a = to_double(kv, "a", prof.a);
    prof.k = to_double(kv, "k", prof.k);
    prof.c = to_double(kv, "c", prof.c);
    if (kv.count("file")) prof.file = kv.at("file");
    if (prof.name == "bump") {
        if (!kv.count("delta") || kv.at("delta") == "auto") prof.delta = qualifying_bump_delta(constant_bundle(n, alpha));
        else prof.delta = to_double(kv, "delta", prof.delta);
    }
    const auto f0 = prof.build();

    SimConfig c;
    const double r_default = prof.name == "bump" ? 4.0 * prof.delta : f0.tail_radius();
    c.grid.r_max = to_double(kv, "r_max", r_default);
    c.grid.n_cells = static_cast<int>(to_double(kv, "n_cells", 1024));
    const std::string grading = kv.count("grading") ? kv.at("grading") : "uniform";
    if (grading == "uniform") c.grid.grading = GridSpec::Grading::uniform;
    else if (grading == "geometric") c.grid.grading = GridSpec::Grading::geometric;
    else throw std::runtime_error("grading must be uniform or geometric");
    c.grid.ratio = to_double(kv, "ratio", c.grid.ratio);
    c.grid.stretch_cap = to_double(kv, "stretch_cap", c.grid.stretch_cap);
    c.cfl = to_double(kv, "cfl", c.cfl);
    c.t_end = to_double(kv, "t_end", c.t_end);
    if (kv.count("scheme")) c.scheme = scheme_from_string(kv.at("scheme"));
    c.gradient_growth_factor = to_double(kv, "growth_factor", c.gradient_growth_factor);
    c.dt_floor = to_double(kv, "dt_floor", c.dt_floor);
    c.output_every = static_cast<int>(to_double(kv, "output_every", c.output_every));
    c.max_steps = static_cast<long long>(to_double(kv, "max_steps", double(c.max_steps)));
    c.threads = g.threads;

    const auto res = run(c, f0, p);
    const auto bundle = constant_bundle(n, alpha);

    Table t({"t", "J", "I_ref", "sup_norm", "max_grad", "dt"});
    for (const auto& row : res.history) t.add({row.t, row.J, row.I_ref, row.sup_norm, row.max_abs_gradient, row.dt});

    json m;
    m["command"] = "simulate";
    m["version"] = version();
    json params = prof.describe();
    params["n"] = n;
    params["alpha"] = alpha;
    params["cfl"] = c.cfl;
    params["t_end"] = c.t_end;
    params["scheme"] = to_string(c.scheme);
    params["growth_factor"] = c.gradient_growth_factor;
    params["dt_floor"] = c.dt_floor;
    m["parameters"] = params;
    m["grid"] = {{"r_max", c.grid.r_max}, {"n_cells", c.grid.n_cells}, {"grading", grading},
                 {"ratio", c.grid.ratio}, {"stretch_cap", c.grid.stretch_cap}};
    m["constants"] = bundle_json(bundle);
    m["riccati"] = {{"c1", res.riccati.c1}, {"c2", res.riccati.c2}};
    m["J0"] = res.J0;
    m["qualifies"] = res.qualifies;
    m["T0_formula"] = res.T0;
    m["verdict"] = to_string(res.verdict);
    if (res.t_star) m["t_star"] = *res.t_star;
    else m["t_star"] = nullptr;
    m["steps"] = res.steps;
    m["tolerances"] = {{"inner_rel_tol", p.inner_rel_tol}, {"outer_rel_tol", p.outer_rel_tol},
                       {"max_principle_excursion", res.range_violation}};
    if (!res.message.empty()) m["message"] = res.message;
    if (o.wall_time)
        m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

    const std::string dir = g.out_dir.empty() ? "." : g.out_dir;
    std::filesystem::create_directories(dir);
    {
        const auto path = std::filesystem::path(dir) / ("diagnostics." + g.format);
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        t.write(os, g.format);
    }
    {
        const auto path = std::filesystem::path(dir) / "manifest.json";
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        os << m.dump(2) << "\n";
    }
    out << "verdict," << to_string(res.verdict) << "\n";
    if (res.verdict == Verdict::aborted) {
        err << "simulation aborted: " << res.message << "\n";
        throw std::runtime_error("simulation aborted");
    }
    return res.range_violation <= 1e-12;
}

struct BlowupOpts {
    double c1 = 1.0, c2 = 1.0, j0 = 2.0;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial nonlocal transport: kernels, constants, inequalities and blow-up simulation", "nlt"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());
    app.fallthrough();
    Globals g;
    app.add_option("--tol", g.tol, "relative tolerance for kernel-weighted integrals")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
    app.add_option("--out-dir", g.out_dir, "write outputs to files in this directory");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));

    SpecfunOpts so;
    auto* sf = app.add_subcommand("specfun", "special function values");
    sf->add_option("--fn", so.fn)->check(CLI::IsMember({"gamma", "lgamma", "gamma_limit", "beta", "pochhammer", "sphere_area", "e1"}));
    sf->add_option("--x", so.x);
    sf->add_option("--y", so.y);
    sf->add_option("--k", so.k, "integer argument (k, or n for sphere_area)");

    GkernelOpts go;
    auto* gk = app.add_subcommand("gkernel", "angular kernel values and Taylor coefficients");
    gk->require_subcommand(1);
    auto* gk_eval = gk->add_subcommand("eval", "kernel value or derivative");
    auto* gk_coeffs = gk->add_subcommand("coeffs", "Taylor coefficients");
    for (auto* s : {gk_eval, gk_coeffs}) {
        s->add_option("--n", go.n)->required();
        s->add_option("--alpha", go.alpha)->required();
    }
    gk_eval->add_option("--lambda", go.lambda)->required();
    gk_eval->add_option("--order", go.order)->check(CLI::Range(0, 2));
    gk_coeffs->add_option("--kmax", go.kmax)->check(CLI::NonNegativeNumber);

    FieldOpts vo;
    auto* vel = app.add_subcommand("velocity", "radial velocity on a list of radii");
    auto* orc = app.add_subcommand("oracle-check", "radial formula against the direct singular integral");
    for (auto* s : {vel, orc}) {
        s->add_option("--n", vo.n)->required();
        s->add_option("--alpha", vo.alpha)->required();
        s->add_option("--r-grid", vo.r_grid, "comma list or lo:hi:count");
        vo.profile.add_to(s);
    }
    orc->add_option("--threshold", vo.threshold, "largest accepted relative error");

    ConstOpts co;
    auto* cs = app.add_subcommand("constants", "constant bundle as JSON");
    cs->add_option("--n", co.n)->required();
    cs->add_option("--alpha", co.alpha)->required();

    VerifyOpts vf;
    auto* ver = app.add_subcommand("verify", "check a weighted nonlinear inequality");
    ver->add_option("--prop", vf.prop)->required()->check(CLI::IsMember({31, 32}));
    ver->add_option("--n", vf.n)->required();
    ver->add_option("--alpha", vf.alpha)->required();
    ver->add_option("--constant-override", vf.constant_override, "replace the coefficient of the R functional");
    ver->add_option("--tol-rel", vf.tol_rel);
    vf.profile.add_to(ver);

    InitOpts io;
    auto* ini = app.add_subcommand("initdata", "initial data checks and profile export");
    ini->require_subcommand(1);
    auto* ini_bump = ini->add_subcommand("bump", "J(0) against the blow-up threshold for the bump");
    ini_bump->add_option("--delta", io.delta, "bump radius (default: half the admissible window)");
    ini_bump->add_option("--n", io.n)->required();
    ini_bump->add_option("--alpha", io.alpha)->required();
    auto* ini_exp = ini->add_subcommand("export", "write a profile as CSV");
    io.profile.add_to(ini_exp);
    ini_exp->add_option("--r-grid", io.r_grid);
    ini_exp->add_option("--output", io.output)->required();

    SimOpts smo;
    auto* sm = app.add_subcommand("simulate", "evolve radial data and track J(t)");
    sm->add_option("--config", smo.config)->required();
    sm->add_flag("--wall-time", smo.wall_time, "record wall time in the manifest");

    BlowupOpts bo;
    auto* bt = app.add_subcommand("blowup-time", "blow-up time of the comparison Riccati solution");
    bt->add_option("--c1", bo.c1)->required();
    bt->add_option("--c2", bo.c2)->required();
    bt->add_option("--j0", bo.j0)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        // help of the innermost parsed subcommand
        const CLI::App* sub = &app;
        while (!sub->get_subcommands().empty()) sub = sub->get_subcommands().front();
        err << sub->help();
        return kExitToolFailure;
    }

    try {
        bool ok = true;
        if (sf->parsed()) run_specfun(so, g, out);
        else if (gk_eval->parsed()) run_gkernel_eval(go, g, out);
        else if (gk_coeffs->parsed()) run_gkernel_coeffs(go, g, out);
        else if (vel->parsed()) run_velocity(vo, g, out);
        else if (orc->parsed()) ok = run_oracle_check(vo, g, out);
        else if (cs->parsed()) {
            const auto b = constant_bundle(co.n, co.alpha);
            emit(g, out, "constants.json", [&](std::ostream& os) { os << bundle_json(b).dump(2) << "\n"; });
        } else if (ver->parsed()) ok = run_verify(vf, g, out);
        else if (ini_bump->parsed()) run_initdata_bump(io, g, out);
        else if (ini_exp->parsed()) run_initdata_export(io, g);
        else if (sm->parsed()) ok = run_simulate(smo, g, out, err);
        else if (bt->parsed()) {
            const double T0 = blowup_time({bo.c1, bo.c2}, bo.j0);
            emit_record(g, out, "blowup_time", json{{"T0", T0}});
        }
        if (!ok) {
            err << "verification failed\n";
            return kExitVerificationFailed;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitToolFailure;
    }
}

}  // namespace nlt::cli
