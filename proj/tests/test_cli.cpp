#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hydro/cli.hpp"
#include "hydro/hodograph.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    int code = -1;
    json report;  // stdout parsed as JSON
};

// Writes the config into a fresh directory under the working directory and
// runs the binary there.
Run run_cli(const std::string& name, const std::string& command, const std::string& config,
            const std::string& extra = "") {
    fs::path dir = fs::absolute("cli_tests") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << config;
    std::string cmd = std::string(HYDRO_CLI_PATH) + " " + command + " --config " + (dir / "config.json").string() +
                      " --out " + (dir / "out").string() + " " + extra + " > " + (dir / "stdout.json").string() +
                      " 2> " + (dir / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::string out = slurp(dir / "stdout.json");
    if (!out.empty()) r.report = json::parse(out, nullptr, false);
    return r;
}

fs::path out_dir(const std::string& name) { return fs::absolute("cli_tests") / name / "out"; }

const char* kGamma3 = R"({
  "system": {"kind": "polytropic_gas", "a": 1, "gamma": 3},
  "solve": {"method": "t-dependent", "a": ["s", "r - 0.2"], "beta": 0,
            "x": [-0.05, 0.05, 51], "t": [0, 0.1, 51], "guess": [0, 0.2], "seed_point": [0, 0]}
})";

}  // namespace

TEST_CASE("check on the epsilon system passes") {
    auto r = run_cli("check_eps", "check", R"({
      "system": {"kind": "epsilon_system", "n": 3},
      "samples": {"count": 50, "box": [[0, 1], [2, 3], [4, 5]], "seed": 42}
    })");
    CHECK(r.code == 0);
    CHECK(r.report["status"] == "pass");
    CHECK(r.report["tsarev_max"].get<double>() < 1e-10);
    CHECK(r.report["curvature_disagreements"] == 0);
    CHECK(fs::exists(out_dir("check_eps") / "report.json"));
}

TEST_CASE("check on a non-semi-Hamiltonian system fails with exit 1") {
    auto r = run_cli("check_pert", "check", R"({
      "system": {"vars": ["u1", "u2", "u3"], "speeds": ["u2 + u3 + u2^2*u3", "u1 + u3", "u1 + u2"]},
      "samples": {"count": 20, "box": [[0.9, 1.1], [1.9, 2.1], [3.9, 4.1]]}
    })");
    CHECK(r.code == 1);
    CHECK(r.report["status"] == "fail");
}

TEST_CASE("malformed speed expression") {
    auto r = run_cli("bad_speed", "check", R"({
      "system": {"vars": ["u1", "u2"], "speeds": ["u1 + u2", "u1*(u2 +"]},
      "samples": {"box": [[0, 1], [2, 3]]}
    })");
    CHECK(r.code == 2);
    CHECK(r.report["status"] == "error");
    CHECK(r.report["error"]["type"] == "parse");
    CHECK(r.report["error"]["field"] == "system.speeds[1]");
    CHECK(r.report["error"]["offset"] == 8);  // end of input
}

TEST_CASE("unknown keys are rejected") {
    auto r = run_cli("unknown_key", "check", R"({
      "system": {"kind": "epsilon_system", "n": 3, "colour": "red"}
    })");
    CHECK(r.code == 2);
    CHECK(r.report["error"]["type"] == "config");
    CHECK(r.report["error"]["field"] == "system.colour");

    CHECK_THROWS_AS(hydro::cli::parse_config(R"({"solve": {"x": [0, 1]}})"), hydro::cli::ConfigError);
    try {
        hydro::cli::parse_config("{\"task\": ");
        FAIL("expected a config error");
    } catch (const hydro::cli::ConfigError& e) {
        CHECK(e.offset.has_value());
    }
}

TEST_CASE("gamma = 3 solve matches the closed form") {
    auto r = run_cli("solve_g3", "solve", kGamma3);
    CHECK(r.code == 0);
    CHECK(r.report["verify"]["status"] == "pass");
    auto g = hydro::hodograph::from_csv(slurp(out_dir("solve_g3") / "solution.csv"));
    REQUIRE(g.nx() == 51);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.nt(); ++k)
        for (std::size_t j = 0; j < g.nx(); ++j)
            worst = std::max(worst, std::fabs(g.at(k, j, 0) - g.x[j] / (g.t[k] - 1.0)));
    CHECK(worst < 1e-10);

    // verify and plot-data read the CSV back
    std::string input = (out_dir("solve_g3") / "solution.csv").string();
    std::string cfg = R"({"system": {"kind": "polytropic_gas", "a": 1, "gamma": 3}, "input": ")" + input + "\"}";
    auto v = run_cli("verify_g3", "verify", cfg);
    CHECK(v.code == 0);
    auto p = run_cli("plot_g3", "plot-data", cfg);
    CHECK(p.code == 0);
    std::string plot = slurp(out_dir("plot_g3") / "plot.csv");
    CHECK(plot.rfind("x,t,component,value", 0) == 0);
}

TEST_CASE("a failing verification exits 1") {
    auto r = run_cli("solve_tight", "solve", kGamma3, "--tol 1e-12");
    CHECK(r.code == 1);
    CHECK(r.report["verify"]["status"] == "fail");
}

TEST_CASE("repeated runs give identical CSV") {
    auto a = run_cli("repeat_a", "solve", kGamma3);
    auto b = run_cli("repeat_b", "solve", kGamma3, "--threads 3");
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(slurp(out_dir("repeat_a") / "solution.csv") == slurp(out_dir("repeat_b") / "solution.csv"));
}

TEST_CASE("symmetry and series tasks") {
    auto s = run_cli("symmetry_eps", "symmetry", R"({
      "system": {"kind": "epsilon_system", "n": 3},
      "samples": {"count": 20, "box": [[0, 1], [2, 3], [4, 5]]},
      "w": ["u2 + u3", "u1 + u3", "u1 + u2"]
    })");
    CHECK(s.code == 0);
    CHECK(s.report["residual"].get<double>() < 1e-12);

    auto n = run_cli("series_gas", "series", R"({
      "system": {"kind": "polytropic_gas", "a": 1, "gamma": 1.4},
      "samples": {"count": 20, "box": [[-7, -5], [5, 7]]},
      "recursion": {"order": 1, "c": ["1", "1"], "d": ["0.3", "0.3"], "N": 2, "seed": "speeds"}
    })");
    CHECK(n.code == 0);
    CHECK(n.report["residual"].get<double>() < 1e-8);
}

TEST_CASE("command-line errors") {
    int code = std::system((std::string(HYDRO_CLI_PATH) + " --help > /dev/null").c_str());
    CHECK(WEXITSTATUS(code) == 0);
    code = std::system((std::string(HYDRO_CLI_PATH) + " solve > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(code) == 2);
    code = std::system((std::string(HYDRO_CLI_PATH) + " frobnicate --config x > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(code) == 2);
    code = std::system((std::string(HYDRO_CLI_PATH) + " check --config " +
                        (fs::absolute("cli_tests") / "no_such_config.json").string() + " > /dev/null")
                           .c_str());
    CHECK(WEXITSTATUS(code) == 2);
}
