#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydro/gasdyn.hpp"

namespace hydro::cli {

// Invalid configuration. field is a dotted path such as "system.speeds[1]";
// offset is set for expression parse errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& msg, std::optional<std::size_t> offset = std::nullopt)
        : std::runtime_error(msg), field(std::move(field)), offset(offset) {}
    std::string field;
    std::optional<std::size_t> offset;
};

struct GasConfig {
    double a = 1.0, gamma = 1.4, P0 = 0.0;
    std::optional<double> rho0;
    std::string alpha;  // custom_gas only
};

struct SystemConfig {
    std::string kind = "custom";  // custom | epsilon_system | polytropic_gas | chaplygin | custom_gas
    std::vector<std::string> vars, speeds;
    std::string dependence = "autonomous";  // autonomous | t | x
    int n = 3;
    GasConfig gas;
    std::map<std::string, double> params;
};

struct SampleConfig {
    std::size_t count = 50;
    std::vector<std::pair<double, double>> box;
    std::uint64_t seed = 42;
};

struct RecursionConfig {
    int order = 1;
    std::vector<std::string> f, c, d;
    std::optional<std::string> V;
    std::vector<double> base;
    int N = 1;
    std::string seed = "one";  // one | speeds
};

struct AxisConfig {
    double from = 0.0, to = 1.0;
    std::size_t points = 101;
};

// A density given as an expression or as a Manin member.
struct DensityConfig {
    std::string expr;
    std::string kind;  // "1,0" | "0,1" | "gas" when expr is empty
    int N = 0;
};

struct HamiltonianConfig {
    std::string alpha2 = "1", beta2 = "1";
    DensityConfig H, HN;
};

struct SolveConfig {
    std::string method = "hodograph";  // hodograph | t-dependent | piston | series | linearized
    std::vector<std::string> w, a;
    double beta = 0.0;
    gasdyn::PistonParams piston;
    int N = 2;
    std::vector<double> constants;
    HamiltonianConfig hamiltonian;
    AxisConfig x{-1.0, 1.0, 101}, t{0.0, 1.0, 101};
    std::vector<double> guess;
    std::optional<std::array<double, 2>> seed_point;
    int max_iter = 50;
    double newton_tol = 1e-12;
    double residual_tol = 1e-4;
    double min_converged = 0.0;
};

struct OutputConfig {
    std::string report = "report.json", csv = "solution.csv", plot = "plot.csv";
};

struct RunConfig {
    std::string task;  // empty when the config does not pin one
    std::optional<SystemConfig> system;
    SampleConfig samples;
    double tolerance = 1e-8;
    std::vector<std::string> w;
    RecursionConfig recursion;
    SolveConfig solve;
    std::string input;  // solution CSV for verify and plot-data
    OutputConfig output;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Command-line overrides.
struct Invocation {
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

// Runs one command and writes its artifacts. Returns 0 on success, 1 when a
// check or verification fails, 2 on error; errors print a JSON document.
int run(const Invocation& inv, std::ostream& out);

// Writes via a temporary file in the same directory and renames it in place.
void write_atomic(const std::string& path, const std::string& content);

extern const char* const kCommands[6];

}  // namespace hydro::cli
