#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include "hydro/cli.hpp"
#include "hydro/separable.hpp"
#include "json.hpp"

namespace hydro::cli {

using nlohmann::ordered_json;
namespace ex = exprlang;
namespace fs = std::filesystem;

void write_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string indexed(const std::string& base, std::size_t k) { return base + "[" + std::to_string(k) + "]"; }

// Everything derived from the configuration that the tasks share.
class Context {
public:
    Context(const RunConfig& cfg, const Invocation& inv) : cfg_(cfg), inv_(inv) {
        if (cfg.system) build_system(*cfg.system);
    }

    bool has_system() const { return sys_.has_value(); }
    const DiagonalSystem& sys() const {
        if (!sys_) throw ConfigError("system", "this task needs a system section");
        return *sys_;
    }
    const gasdyn::GasModel& gas() const {
        if (!gas_) throw ConfigError("system.kind", "this task needs a gas system");
        return *gas_;
    }

    ScalarField field(const std::string& src, const std::string& path) const {
        std::vector<std::string> allowed = sys().vars;
        allowed.push_back("x");
        allowed.push_back("t");
        if (gas_) allowed.push_back("rho");
        ex::Expr e;
        try {
            e = ex::parse(src, allowed, cfg_.system->params);
        } catch (const ex::ParseError& err) {
            throw ConfigError(path, err.what(), err.offset());
        }
        return ScalarField::from_expr(e, sys().speeds.front().aux());
    }

    // Functions of one Riemann invariant, as recursion specs require.
    std::vector<ScalarField> fields(const std::vector<std::string>& src, const std::string& path,
                                    double fallback) const {
        std::vector<ScalarField> out;
        if (src.empty()) {
            out.assign(sys().n(), ScalarField::constant(fallback));
            return out;
        }
        if (src.size() != sys().n()) throw ConfigError(path, "expected one entry per variable");
        for (std::size_t k = 0; k < src.size(); ++k) out.push_back(field(src[k], indexed(path, k)));
        return out;
    }

    std::uint64_t seed() const { return inv_.seed ? *inv_.seed : cfg_.samples.seed; }
    double tolerance() const { return inv_.tol ? *inv_.tol : cfg_.tolerance; }
    double residual_tol() const { return inv_.tol ? *inv_.tol : cfg_.solve.residual_tol; }

    // Reproducible samples from the configured box; points that are not
    // strictly hyperbolic are skipped and counted.
    std::vector<Env> samples(std::size_t& skipped) const {
        const auto& box = cfg_.samples.box;
        if (box.size() != sys().n()) throw ConfigError("samples.box", "expected one [lo, hi] pair per variable");
        Sampler sampler(seed());
        std::vector<Env> out;
        skipped = 0;
        for (std::size_t k = 0; k < cfg_.samples.count; ++k) {
            Env e = sys().env(sampler.point(box));
            try {
                if (!validate_hyperbolic(sys(), e).pass) {
                    ++skipped;
                    continue;
                }
            } catch (const DomainError&) {
                ++skipped;
                continue;
            }
            out.push_back(std::move(e));
        }
        return out;
    }

    geometry::LameMetric metric() const {
        if (gas_) return gasdyn::natural_metric(*gas_);
        geometry::LameGauge g;
        g.base = cfg_.recursion.base;
        if (g.base.empty())
            for (const auto& [lo, hi] : cfg_.samples.box) g.base.push_back(0.5 * (lo + hi));
        if (g.base.size() != sys().n())
            throw ConfigError("recursion.base", "expected a base point with one entry per variable");
        return geometry::lame_metric(sys(), g);
    }

private:
    void build_system(const SystemConfig& s) {
        if (s.kind == "epsilon_system") {
            sys_ = epsilon_system(s.n);
        } else if (s.kind != "custom") {
            const GasConfig& g = s.gas;
            if (s.kind == "polytropic_gas")
                gas_ = gasdyn::polytropic(g.a, g.gamma, g.rho0);
            else if (s.kind == "chaplygin")
                gas_ = gasdyn::chaplygin(g.a, g.P0, g.rho0.value_or(1.0));
            else {
                try {
                    gas_ = gasdyn::custom_gas(g.alpha, g.rho0.value_or(1.0));
                } catch (const ex::ParseError& err) {
                    throw ConfigError("system.alpha", err.what(), err.offset());
                }
            }
            sys_ = gasdyn::riemann_system(*gas_);
        } else {
            std::vector<std::string> allowed = s.vars;
            Dependence dep = Dependence::Autonomous;
            if (s.dependence == "t") {
                dep = Dependence::ExplicitT;
                allowed.push_back("t");
            } else if (s.dependence == "x") {
                dep = Dependence::ExplicitX;
                allowed.push_back("x");
            }
            std::vector<ScalarField> speeds;
            for (std::size_t k = 0; k < s.speeds.size(); ++k) {
                try {
                    speeds.push_back(ScalarField::from_expr(ex::parse(s.speeds[k], allowed, s.params)));
                } catch (const ex::ParseError& err) {
                    throw ConfigError(indexed("system.speeds", k), err.what(), err.offset());
                }
            }
            sys_ = make_system(s.vars, speeds, dep, "custom");
        }
    }

    const RunConfig& cfg_;
    const Invocation& inv_;
    std::optional<DiagonalSystem> sys_;
    std::optional<gasdyn::GasModel> gas_;
};

ordered_json header(const std::string& command, bool pass) {
    ordered_json j;
    j["command"] = command;
    j["status"] = pass ? "pass" : "fail";
    return j;
}

struct Outcome {
    ordered_json report;
    bool pass = true;
};

Outcome do_check(const Context& ctx) {
    std::size_t skipped = 0;
    auto samples = ctx.samples(skipped);
    double tol = ctx.tolerance();
    double worst = 0.0, worst_curv = 0.0, min_gap = -1.0;
    std::size_t disagree = 0;
    for (const auto& e : samples) {
        double r = geometry::tsarev_residual(ctx.sys(), e);
        auto c = geometry::curvature_check(ctx.sys(), e);
        double cv = std::max(std::fabs(c.r_ikj), std::fabs(c.r_jki));
        if ((r <= tol) != (std::fabs(c.r_jki) <= tol)) ++disagree;
        worst = std::max(worst, r);
        worst_curv = std::max(worst_curv, cv);
        double gap = validate_hyperbolic(ctx.sys(), e).min_gap;
        min_gap = min_gap < 0.0 ? gap : std::min(min_gap, gap);
    }
    Outcome o;
    o.pass = !samples.empty() && worst <= tol;
    o.report = header("check", o.pass);
    o.report["system"] = ctx.sys().name;
    o.report["samples"] = samples.size();
    o.report["skipped_nonhyperbolic"] = skipped;
    o.report["tolerance"] = tol;
    o.report["tsarev_max"] = worst;
    o.report["curvature_max"] = worst_curv;
    o.report["curvature_disagreements"] = disagree;
    o.report["min_speed_gap"] = samples.empty() ? 0.0 : min_gap;
    o.report["semi_hamiltonian"] = o.pass;
    return o;
}

Outcome do_symmetry(const Context& ctx, const RunConfig& cfg) {
    std::size_t skipped = 0;
    auto samples = ctx.samples(skipped);
    if (cfg.w.size() != ctx.sys().n()) throw ConfigError("w", "expected one coefficient per variable");
    CoefficientVector w;
    for (std::size_t k = 0; k < cfg.w.size(); ++k) w.push_back(ctx.field(cfg.w[k], indexed("w", k)));
    double r = symmetry::symmetry_residual(ctx.sys(), w, samples);
    Outcome o;
    o.pass = r <= ctx.tolerance();
    o.report = header("symmetry", o.pass);
    o.report["samples"] = samples.size();
    o.report["skipped_nonhyperbolic"] = skipped;
    o.report["tolerance"] = ctx.tolerance();
    o.report["residual"] = r;
    return o;
}

hodograph::RecursionOperator recursion_operator(const Context& ctx, const RecursionConfig& r) {
    if (r.order == 1) return symmetry::RecursionSpecFirst{ctx.fields(r.c, "recursion.c", 1.0),
                                                          ctx.fields(r.d, "recursion.d", 0.0)};
    symmetry::RecursionSpecSecond s{ctx.fields(r.f, "recursion.f", 1.0), ctx.fields(r.c, "recursion.c", 0.0),
                                    ctx.fields(r.d, "recursion.d", 0.0), std::nullopt};
    if (r.V) s.V = ctx.field(*r.V, "recursion.V");
    return s;
}

Outcome do_series(const Context& ctx, const RunConfig& cfg) {
    std::size_t skipped = 0;
    auto samples = ctx.samples(skipped);
    auto op = recursion_operator(ctx, cfg.recursion);
    auto seed = cfg.recursion.seed == "one" ? hodograph::Seed::One : hodograph::Seed::Speeds;
    auto series = hodograph::series_coefficients(ctx.sys(), ctx.metric(), op, seed, cfg.recursion.N, samples);
    Outcome o;
    o.pass = series.residual && *series.residual <= ctx.tolerance();
    o.report = header("series", o.pass);
    o.report["order"] = cfg.recursion.order;
    o.report["N"] = cfg.recursion.N;
    o.report["seed"] = cfg.recursion.seed;
    o.report["samples"] = samples.size();
    o.report["tolerance"] = ctx.tolerance();
    o.report["residual"] = series.residual.value_or(0.0);
    ordered_json values = ordered_json::array();
    if (!samples.empty()) {
        for (const auto& w : series.w) values.push_back(w.eval(samples.front()));
    }
    o.report["w_at_first_sample"] = values;
    return o;
}

ScalarField density(const separable::SeparableModel& m, const DensityConfig& d, const std::string& path) {
    if (!d.expr.empty()) {
        try {
            return separable::user_hamiltonian(d.expr).H;
        } catch (const ex::ParseError& err) {
            throw ConfigError(path, err.what(), err.offset());
        }
    }
    if (d.kind == "gas") return separable::gas_hamiltonian(m).H;
    auto kind = d.kind == "1,0" ? separable::ManinKind::Rho : separable::ManinKind::U;
    return separable::manin_hamiltonian(m, kind, d.N).H;
}

struct Linearized {
    ScalarField H, HN;
};

Linearized linearized(const HamiltonianConfig& h) {
    separable::SeparableModel m;
    try {
        m = separable::make_model(h.alpha2, h.beta2);
    } catch (const ex::ParseError& err) {
        throw ConfigError("solve.hamiltonian", err.what(), err.offset());
    }
    return {density(m, h.H, "solve.hamiltonian.H"), density(m, h.HN, "solve.hamiltonian.HN")};
}

hodograph::ImplicitSystem implicit_system(const Context& ctx, const RunConfig& cfg) {
    const SolveConfig& s = cfg.solve;
    if (s.method == "linearized") {
        auto l = linearized(s.hamiltonian);
        return separable::linearize_implicit(l.H, l.HN);
    }
    if (s.method == "piston") return gasdyn::piston_implicit(ctx.gas(), s.piston);
    if (s.method == "series") return gasdyn::k_series_implicit(ctx.gas(), s.N, s.constants);
    if (s.method == "t-dependent") {
        if (s.a.size() != ctx.sys().n()) throw ConfigError("solve.a", "expected one coefficient per variable");
        CoefficientVector a;
        for (std::size_t k = 0; k < s.a.size(); ++k) a.push_back(ctx.field(s.a[k], indexed("solve.a", k)));
        return hodograph::build_implicit_t(ctx.sys(), a, s.beta);
    }
    if (s.w.size() != ctx.sys().n()) throw ConfigError("solve.w", "expected one coefficient per variable");
    CoefficientVector w;
    for (std::size_t k = 0; k < s.w.size(); ++k) w.push_back(ctx.field(s.w[k], indexed("solve.w", k)));
    std::vector<Env> samples;
    if (!cfg.samples.box.empty()) {
        std::size_t skipped = 0;
        samples = ctx.samples(skipped);
    }
    return hodograph::build_implicit(ctx.sys(), w, samples);
}

// The evolution the solution grid must satisfy.
QuasiLinearSystem target_system(const Context& ctx, const RunConfig& cfg) {
    if (cfg.solve.method == "linearized")
        return separable::hamiltonian_system(linearized(cfg.solve.hamiltonian).HN);
    return quasi_linear(ctx.sys());
}

ordered_json verify_section(const QuasiLinearSystem& sys, const hodograph::SolutionGrid& g, double tol,
                            double min_converged, bool& pass) {
    ordered_json v;
    v["converged_fraction"] = g.converged_fraction();
    v["min_converged"] = min_converged;
    v["residual_tol"] = tol;
    try {
        auto rep = hodograph::residual_pde(sys, g);
        v["max_residual"] = rep.max_residual;
        v["nodes"] = rep.nodes;
        v["worst"] = {{"x", g.x[rep.worst_x]}, {"t", g.t[rep.worst_t]}, {"component", g.vars[rep.worst_component]}};
        pass = rep.max_residual <= tol && g.converged_fraction() >= min_converged;
    } catch (const std::exception& e) {
        v["error"] = e.what();
        pass = false;
    }
    v["status"] = pass ? "pass" : "fail";
    return v;
}

std::string out_path(const Invocation& inv, const std::string& name) { return (fs::path(inv.out_dir) / name).string(); }

Outcome do_solve(const Context& ctx, const RunConfig& cfg, const Invocation& inv) {
    const SolveConfig& s = cfg.solve;
    auto imp = implicit_system(ctx, cfg);
    if (s.guess.size() != imp.n()) throw ConfigError("solve.guess", "expected one starting value per unknown");
    hodograph::GridAxes axes{hodograph::linspace(s.x.from, s.x.to, s.x.points),
                             hodograph::linspace(s.t.from, s.t.to, s.t.points)};
    hodograph::SolveOptions opt;
    opt.max_iter = s.max_iter;
    opt.tol = s.newton_tol;
    opt.threads = std::max(1u, inv.threads);
    auto sp = s.seed_point.value_or(std::array<double, 2>{s.x.from, s.t.from});
    opt.x0 = sp[0];
    opt.t0 = sp[1];
    auto grid = hodograph::solve_grid(imp, axes, s.guess, opt);
    write_atomic(out_path(inv, cfg.output.csv), hodograph::to_csv(grid));

    Outcome o;
    ordered_json verify = verify_section(target_system(ctx, cfg), grid, ctx.residual_tol(), s.min_converged, o.pass);
    o.report = header("solve", o.pass);
    o.report["method"] = s.method;
    o.report["provenance"] = grid.provenance;
    o.report["csv"] = cfg.output.csv;
    o.report["grid"] = {{"nx", grid.nx()}, {"nt", grid.nt()}};
    ordered_json warnings = ordered_json::array();
    for (const auto& w : imp.warnings) warnings.push_back(w);
    o.report["warnings"] = warnings;
    if (imp.certification) o.report["certification"] = *imp.certification;
    o.report["verify"] = verify;
    return o;
}

Outcome do_verify(const Context& ctx, const RunConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("input", "verify needs an input CSV");
    auto grid = hodograph::from_csv(read_file(cfg.input));
    Outcome o;
    ordered_json verify =
        verify_section(target_system(ctx, cfg), grid, ctx.residual_tol(), cfg.solve.min_converged, o.pass);
    o.report = header("verify", o.pass);
    o.report["input"] = cfg.input;
    o.report["verify"] = verify;
    return o;
}

Outcome do_plot(const RunConfig& cfg, const Invocation& inv) {
    if (cfg.input.empty()) throw ConfigError("input", "plot-data needs an input CSV");
    auto grid = hodograph::from_csv(read_file(cfg.input));
    write_atomic(out_path(inv, cfg.output.plot), hodograph::to_plot_csv(grid));
    Outcome o;
    o.report = header("plot-data", true);
    o.report["input"] = cfg.input;
    o.report["plot"] = cfg.output.plot;
    o.report["rows"] = grid.converged() * grid.n();
    return o;
}

void print_error(std::ostream& out, const std::string& type, const std::string& msg, const std::string& field = "",
                 std::optional<std::size_t> offset = std::nullopt) {
    ordered_json e;
    e["type"] = type;
    e["message"] = msg;
    if (!field.empty()) e["field"] = field;
    if (offset) e["offset"] = *offset;
    ordered_json doc;
    doc["status"] = "error";
    doc["error"] = e;
    out << doc.dump(2) << "\n";
}

}  // namespace

int run(const Invocation& inv, std::ostream& out) {
    try {
        bool known = false;
        for (const char* c : kCommands) known = known || inv.command == c;
        if (!known) throw ConfigError("", "unknown command '" + inv.command + "'");
        if (inv.config_path.empty()) throw ConfigError("", "--config is required");
        RunConfig cfg = load_config(inv.config_path);
        if (!cfg.task.empty() && cfg.task != inv.command)
            throw ConfigError("task", "config is for task '" + cfg.task + "', not '" + inv.command + "'");
        fs::create_directories(inv.out_dir);
        Context ctx(cfg, inv);
        Outcome o;
        if (inv.command == "check")
            o = do_check(ctx);
        else if (inv.command == "symmetry")
            o = do_symmetry(ctx, cfg);
        else if (inv.command == "series")
            o = do_series(ctx, cfg);
        else if (inv.command == "solve")
            o = do_solve(ctx, cfg, inv);
        else if (inv.command == "verify")
            o = do_verify(ctx, cfg);
        else
            o = do_plot(cfg, inv);
        std::string text = o.report.dump(2) + "\n";
        write_atomic(out_path(inv, cfg.output.report), text);
        out << text;
        return o.pass ? 0 : 1;
    } catch (const ConfigError& e) {
        print_error(out, e.offset && !e.field.empty() ? "parse" : "config", e.what(), e.field, e.offset);
    } catch (const ex::ParseError& e) {
        print_error(out, "parse", e.what(), "", e.offset());
    } catch (const std::exception& e) {
        print_error(out, "execution", e.what());
    }
    return 2;
}

}  // namespace hydro::cli
