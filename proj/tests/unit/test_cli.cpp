#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nlt/cli.hpp"

namespace {
struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = nlt::cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("blowup-time") {
    const auto r = call({"blowup-time", "--c1", "1", "--c2", "1", "--j0", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.5493061443340") != std::string::npos);
    CHECK(call({"blowup-time", "--c1", "1", "--c2", "1", "--j0", "0.5"}).code == 1);
}

TEST_CASE("verify exit codes") {
    const auto ok = call({"verify", "--prop", "32", "--profile", "gaussian", "--n", "2", "--alpha", "0.5"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("true") != std::string::npos);
    const auto bad = call({"verify", "--prop", "32", "--profile", "gaussian", "--n", "2", "--alpha", "0.5",
                           "--constant-override", "1000"});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("false") != std::string::npos);
}

TEST_CASE("usage errors") {
    const auto r = call({"verify", "--prop", "32", "--bogus"});
    CHECK(r.code == 1);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(call({"nosuchcommand"}).code == 1);
    CHECK(call({}).code == 1);
    CHECK(call({"--format", "xml", "constants", "--n", "2", "--alpha", "0.5"}).code == 1);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("constants json") {
    const auto r = call({"constants", "--n", "2", "--alpha", "0.25"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"c_na", "c_prime", "c_dprime", "C_prime", "C_dprime", "A", "S0", "S1", "S2", "case", "trace"})
        CHECK(j.contains(key));
    CHECK(j["case"] == "sub");
    CHECK(j["A"].get<double>() > 0.0);
}

TEST_CASE("gkernel and specfun output") {
    const auto c = call({"gkernel", "coeffs", "--n", "2", "--alpha", "0.5", "--kmax", "2"});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("k,a_2k,ratio_to_limit\n", 0) == 0);
    CHECK(c.out.find("\n0,1.57079632679489") != std::string::npos);
    const auto e = call({"--format", "json", "gkernel", "eval", "--n", "2", "--alpha", "0.5", "--lambda", "0"});
    CHECK(e.code == 0);
    CHECK(nlohmann::json::parse(e.out)["value"].get<double>() == doctest::Approx(1.5707963267948966));
    const auto s = call({"specfun", "--fn", "beta", "--x", "0.5", "--y", "1.5"});
    CHECK(s.out.find("1.570796326794896") != std::string::npos);
    CHECK(call({"gkernel", "eval", "--n", "2", "--alpha", "0.5", "--lambda", "1"}).code == 1);
}

TEST_CASE("velocity and initdata") {
    const auto v = call({"velocity", "--profile", "constant", "--n", "2", "--alpha", "0.5", "--r-grid", "0.5,1"});
    CHECK(v.code == 0);
    CHECK(v.out == "r,u_r,density\n0.5,0,0\n1,0,0\n");
    const auto b = call({"initdata", "bump", "--n", "2", "--alpha", "0.5"});
    CHECK(b.code == 0);
    CHECK(b.out.find(",true") != std::string::npos);
}

TEST_CASE("simulate writes deterministic artifacts") {
    const auto dir = std::filesystem::temp_directory_path() / "nlt_cli_sim";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "run.cfg";
    {
        std::ofstream os(cfg);
        os << "# smoke\nn = 2\nalpha = 0.5\nprofile = gaussian\nr_max = 8\nn_cells = 64\nt_end = 0.1\n";
    }
    const auto a = dir / "a", b = dir / "b";
    CHECK(call({"simulate", "--config", cfg.string(), "--out-dir", a.string()}).code == 0);
    CHECK(call({"--out-dir", b.string(), "simulate", "--config", cfg.string()}).code == 0);
    CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(m["verdict"] == "completed");
    CHECK_FALSE(m.contains("wall_time_s"));
    CHECK(m["constants"]["case"] == "crit");
    CHECK(slurp(a / "diagnostics.csv").rfind("t,J,I_ref,sup_norm,max_grad,dt\n", 0) == 0);

    {
        std::ofstream os(dir / "bad.cfg");
        os << "n = 2\nwhat = 1\n";
    }
    CHECK(call({"simulate", "--config", (dir / "bad.cfg").string()}).code == 1);
    CHECK(call({"simulate", "--config", (dir / "missing.cfg").string()}).code == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config parser") {
    std::istringstream in("a = 1\n  # comment\n\nb=two # trailing\n");
    const auto kv = nlt::cli::parse_config(in);
    CHECK(kv.at("a") == "1");
    CHECK(kv.at("b") == "two");
    std::istringstream bad("novalue\n");
    CHECK_THROWS(nlt::cli::parse_config(bad));
}
