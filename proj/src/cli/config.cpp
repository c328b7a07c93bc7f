#include <fstream>
#include <set>
#include <sstream>

#include "hydro/cli.hpp"
#include "json.hpp"

namespace hydro::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw ConfigError(join(path, it.key()), "unknown key '" + it.key() + "'");
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<int>();
}

std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ConfigError(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

std::string choice(const json& j, const std::string& path, std::initializer_list<const char*> options) {
    std::string s = string(j, path);
    for (const char* o : options)
        if (s == o) return s;
    std::string list;
    for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
    throw ConfigError(path, "expected one of " + list);
}

std::vector<std::string> strings(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(string(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

SystemConfig system(const json& j, const std::string& path) {
    only_keys(j, path, {"kind", "vars", "speeds", "dependence", "n", "a", "gamma", "P0", "rho0", "alpha", "params"});
    SystemConfig s;
    if (j.contains("kind"))
        s.kind = choice(j["kind"], join(path, "kind"),
                        {"custom", "epsilon_system", "polytropic_gas", "chaplygin", "custom_gas"});
    if (j.contains("vars")) s.vars = strings(j["vars"], join(path, "vars"));
    if (j.contains("speeds")) s.speeds = strings(j["speeds"], join(path, "speeds"));
    if (j.contains("dependence"))
        s.dependence = choice(j["dependence"], join(path, "dependence"), {"autonomous", "t", "x"});
    if (j.contains("n")) s.n = integer(j["n"], join(path, "n"));
    GasConfig& g = s.gas;
    if (j.contains("a")) g.a = number(j["a"], join(path, "a"));
    if (j.contains("gamma")) g.gamma = number(j["gamma"], join(path, "gamma"));
    if (j.contains("P0")) g.P0 = number(j["P0"], join(path, "P0"));
    if (j.contains("rho0")) g.rho0 = number(j["rho0"], join(path, "rho0"));
    if (j.contains("alpha")) g.alpha = string(j["alpha"], join(path, "alpha"));
    if (j.contains("params")) {
        const json& p = j["params"];
        if (!p.is_object()) throw ConfigError(join(path, "params"), "expected an object of numbers");
        for (auto it = p.begin(); it != p.end(); ++it)
            s.params[it.key()] = number(it.value(), join(path, "params." + it.key()));
    }
    if (s.kind == "custom") {
        if (s.vars.empty()) throw ConfigError(join(path, "vars"), "custom system needs vars");
        if (s.speeds.size() != s.vars.size())
            throw ConfigError(join(path, "speeds"), "one speed per variable is required");
    }
    if (s.kind == "custom_gas" && g.alpha.empty()) throw ConfigError(join(path, "alpha"), "custom gas needs alpha(rho)");
    if (s.kind == "epsilon_system" && s.n < 2) throw ConfigError(join(path, "n"), "epsilon system needs n >= 2");
    return s;
}

SampleConfig samples(const json& j, const std::string& path) {
    only_keys(j, path, {"count", "box", "seed"});
    SampleConfig s;
    if (j.contains("count")) s.count = count(j["count"], join(path, "count"));
    if (j.contains("seed")) s.seed = count(j["seed"], join(path, "seed"));
    if (j.contains("box")) {
        const json& b = j["box"];
        if (!b.is_array()) throw ConfigError(join(path, "box"), "expected an array of [lo, hi] pairs");
        for (std::size_t k = 0; k < b.size(); ++k) {
            std::string p = join(path, "box[" + std::to_string(k) + "]");
            auto v = numbers(b[k], p);
            if (v.size() != 2 || !(v[0] <= v[1])) throw ConfigError(p, "expected [lo, hi] with lo <= hi");
            s.box.emplace_back(v[0], v[1]);
        }
    }
    return s;
}

RecursionConfig recursion(const json& j, const std::string& path) {
    only_keys(j, path, {"order", "f", "c", "d", "V", "base", "N", "seed"});
    RecursionConfig r;
    if (j.contains("order")) r.order = integer(j["order"], join(path, "order"));
    if (r.order != 1 && r.order != 2) throw ConfigError(join(path, "order"), "order must be 1 or 2");
    if (j.contains("f")) r.f = strings(j["f"], join(path, "f"));
    if (j.contains("c")) r.c = strings(j["c"], join(path, "c"));
    if (j.contains("d")) r.d = strings(j["d"], join(path, "d"));
    if (j.contains("V")) r.V = string(j["V"], join(path, "V"));
    if (j.contains("base")) r.base = numbers(j["base"], join(path, "base"));
    if (j.contains("N")) r.N = integer(j["N"], join(path, "N"));
    if (r.N < 0) throw ConfigError(join(path, "N"), "N must be non-negative");
    if (j.contains("seed")) r.seed = choice(j["seed"], join(path, "seed"), {"one", "speeds"});
    return r;
}

AxisConfig axis(const json& j, const std::string& path) {
    auto v = numbers(j, path);
    if (v.size() != 3 || v[2] < 1.0 || v[2] != static_cast<double>(static_cast<std::size_t>(v[2])))
        throw ConfigError(path, "expected [from, to, points]");
    return {v[0], v[1], static_cast<std::size_t>(v[2])};
}

DensityConfig density(const json& j, const std::string& path) {
    DensityConfig d;
    if (j.is_string()) {
        d.expr = j.get<std::string>();
        return d;
    }
    only_keys(j, path, {"kind", "N"});
    if (!j.contains("kind")) throw ConfigError(join(path, "kind"), "density needs an expression or a kind");
    d.kind = choice(j["kind"], join(path, "kind"), {"1,0", "0,1", "gas"});
    if (j.contains("N")) d.N = integer(j["N"], join(path, "N"));
    if (d.N < -1) throw ConfigError(join(path, "N"), "N must be at least -1");
    return d;
}

HamiltonianConfig hamiltonian(const json& j, const std::string& path) {
    only_keys(j, path, {"alpha2", "beta2", "H", "HN"});
    HamiltonianConfig h;
    if (j.contains("alpha2")) h.alpha2 = string(j["alpha2"], join(path, "alpha2"));
    if (j.contains("beta2")) h.beta2 = string(j["beta2"], join(path, "beta2"));
    if (!j.contains("H") || !j.contains("HN")) throw ConfigError(path, "hamiltonian needs H and HN");
    h.H = density(j["H"], join(path, "H"));
    h.HN = density(j["HN"], join(path, "HN"));
    return h;
}

SolveConfig solve(const json& j, const std::string& path) {
    only_keys(j, path,
              {"method", "w", "a", "beta", "piston", "N", "constants", "hamiltonian", "x", "t", "guess", "seed_point",
               "max_iter", "newton_tol", "residual_tol", "min_converged"});
    SolveConfig s;
    if (j.contains("method"))
        s.method =
            choice(j["method"], join(path, "method"), {"hodograph", "t-dependent", "piston", "series", "linearized"});
    if (j.contains("w")) s.w = strings(j["w"], join(path, "w"));
    if (j.contains("a")) s.a = strings(j["a"], join(path, "a"));
    if (j.contains("beta")) s.beta = number(j["beta"], join(path, "beta"));
    if (j.contains("piston")) {
        const json& p = j["piston"];
        std::string pp = join(path, "piston");
        only_keys(p, pp, {"lambda", "u0", "x0", "t0", "rhobar0"});
        if (p.contains("lambda")) s.piston.lambda = number(p["lambda"], join(pp, "lambda"));
        if (p.contains("u0")) s.piston.u0 = number(p["u0"], join(pp, "u0"));
        if (p.contains("x0")) s.piston.x0 = number(p["x0"], join(pp, "x0"));
        if (p.contains("t0")) s.piston.t0 = number(p["t0"], join(pp, "t0"));
        if (p.contains("rhobar0")) s.piston.rhobar0 = number(p["rhobar0"], join(pp, "rhobar0"));
    }
    if (j.contains("N")) s.N = integer(j["N"], join(path, "N"));
    if (j.contains("constants")) s.constants = numbers(j["constants"], join(path, "constants"));
    if (j.contains("hamiltonian")) s.hamiltonian = hamiltonian(j["hamiltonian"], join(path, "hamiltonian"));
    else if (s.method == "linearized")
        throw ConfigError(join(path, "hamiltonian"), "linearized solve needs a hamiltonian section");
    if (j.contains("x")) s.x = axis(j["x"], join(path, "x"));
    if (j.contains("t")) s.t = axis(j["t"], join(path, "t"));
    if (j.contains("guess")) s.guess = numbers(j["guess"], join(path, "guess"));
    if (j.contains("seed_point")) {
        auto v = numbers(j["seed_point"], join(path, "seed_point"));
        if (v.size() != 2) throw ConfigError(join(path, "seed_point"), "expected [x, t]");
        s.seed_point = std::array<double, 2>{v[0], v[1]};
    }
    if (j.contains("max_iter")) s.max_iter = integer(j["max_iter"], join(path, "max_iter"));
    if (j.contains("newton_tol")) s.newton_tol = number(j["newton_tol"], join(path, "newton_tol"));
    if (j.contains("residual_tol")) s.residual_tol = number(j["residual_tol"], join(path, "residual_tol"));
    if (j.contains("min_converged")) s.min_converged = number(j["min_converged"], join(path, "min_converged"));
    return s;
}

}  // namespace

const char* const kCommands[6] = {"check", "symmetry", "series", "solve", "verify", "plot-data"};

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("config is not valid JSON: ") + e.what(), e.byte);
    }
    only_keys(j, "", {"task", "system", "samples", "tolerance", "w", "recursion", "solve", "input", "output"});
    RunConfig c;
    if (j.contains("task"))
        c.task = choice(j["task"], "task", {"check", "symmetry", "series", "solve", "verify", "plot-data"});
    if (j.contains("system")) c.system = system(j["system"], "system");
    if (j.contains("samples")) c.samples = samples(j["samples"], "samples");
    if (j.contains("tolerance")) c.tolerance = number(j["tolerance"], "tolerance");
    if (j.contains("w")) c.w = strings(j["w"], "w");
    if (j.contains("recursion")) c.recursion = recursion(j["recursion"], "recursion");
    if (j.contains("solve")) c.solve = solve(j["solve"], "solve");
    if (j.contains("input")) c.input = string(j["input"], "input");
    if (j.contains("output")) {
        only_keys(j["output"], "output", {"report", "csv", "plot"});
        const json& o = j["output"];
        if (o.contains("report")) c.output.report = string(o["report"], "output.report");
        if (o.contains("csv")) c.output.csv = string(o["csv"], "output.csv");
        if (o.contains("plot")) c.output.plot = string(o["plot"], "output.plot");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return parse_config(s.str());
}

}  // namespace hydro::cli
