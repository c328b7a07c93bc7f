#include <cmath>

#include "hydro/hodograph.hpp"
#include "hydro/quadrature.hpp"

namespace hydro::hodograph {

namespace ex = exprlang;

Env ImplicitSystem::env(const std::vector<double>& u, double x, double t) const {
    if (u.size() != ids.size()) throw std::invalid_argument("point has wrong dimension");
    Env e;
    for (std::size_t i = 0; i < u.size(); ++i) e.set(ids[i], u[i]);
    e.set("x", x);
    e.set("t", t);
    return e;
}

std::vector<double> ImplicitSystem::eval(const std::vector<double>& u, double x, double t) const {
    Env e = env(u, x, t);
    std::vector<double> out(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) out[i] = F[i].eval(e);
    return out;
}

Matrix ImplicitSystem::jacobian(const std::vector<double>& u, double x, double t) const {
    Env e = env(u, x, t);
    Matrix out(n(), std::vector<double>(n()));
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = 0; j < n(); ++j) out[i][j] = J[i][j].eval(e);
    return out;
}

ImplicitSystem make_implicit(std::vector<std::string> vars, std::vector<ScalarField> F, std::string provenance) {
    if (vars.size() != F.size()) throw std::invalid_argument("one equation per unknown is required");
    ImplicitSystem s;
    s.vars = std::move(vars);
    for (const auto& v : s.vars) s.ids.push_back(ex::intern(v));
    s.F = std::move(F);
    s.provenance = std::move(provenance);
    s.J.assign(s.n(), std::vector<ScalarField>(s.n()));
    for (std::size_t i = 0; i < s.n(); ++i)
        for (std::size_t j = 0; j < s.n(); ++j) s.J[i][j] = s.F[i].partial(s.ids[j]);
    return s;
}

ImplicitSystem build_implicit(const DiagonalSystem& sys, const CoefficientVector& w, const std::vector<Env>& samples) {
    if (w.size() != sys.n()) throw std::invalid_argument("coefficient vector has wrong length");
    ScalarField x = ScalarField::from_expr(Expr::variable("x"));
    ScalarField t = ScalarField::from_expr(Expr::variable("t"));
    std::vector<ScalarField> F;
    for (std::size_t i = 0; i < sys.n(); ++i) F.push_back(w[i] - t * sys.speeds[i] - x);
    ImplicitSystem s = make_implicit(sys.vars, F, sys.n() == 2 ? "hodograph" : "generalized");
    if (!samples.empty()) {
        s.certification = symmetry::symmetry_residual(sys, w, samples);
        if (*s.certification > 1e-6)
            s.warnings.push_back("coefficients are not a symmetry: residual " + ex::format_double(*s.certification));
    }
    return s;
}

namespace {

// int_0^{axis} f d(axis) at fixed u, as a field. Symbolic when f is a plain
// expression with a supported antiderivative, otherwise by quadrature.
ScalarField axis_integral(const ScalarField& f, const std::string& axis, const std::vector<int>& deps,
                          int depth = 1) {
    int aid = ex::intern(axis);
    ScalarField a = ScalarField::from_expr(Expr::variable(axis));
    if (!f.depends_on(aid)) return a * f;
    if (const Expr* e = f.expr(); e && !f.aux()) {
        try {
            return ScalarField::from_expr(ex::antiderivative(*e, axis, 0.0));
        } catch (const ex::UnsupportedAntiderivative&) {
        }
    }
    auto value = [f, aid](const Env& env) {
        double upper = *env.get(aid);
        Env e = env;
        return integrate(
            [&](double s) {
                e.set(aid, s);
                return f.eval(e);
            },
            0.0, upper, 1e-12);
    };
    std::vector<int> all = deps;
    all.push_back(aid);
    std::map<int, ScalarField> grad{{aid, f}};
    if (depth > 0)
        for (int id : deps) grad[id] = axis_integral(f.partial(id), axis, deps, depth - 1);
    return ScalarField::callback(value, all, grad);
}

}  // namespace

ImplicitSystem build_implicit_t(const DiagonalSystem& sys, const CoefficientVector& a, double beta) {
    if (a.size() != sys.n()) throw std::invalid_argument("coefficient vector has wrong length");
    bool x_dep = sys.dependence == Dependence::ExplicitX;
    const char* fixed = x_dep ? "t" : "x";
    const char* axis = x_dep ? "x" : "t";
    ScalarField y = ScalarField::from_expr(Expr::variable(fixed));
    std::vector<int> deps = sys.ids;
    deps.push_back(ex::intern("x"));
    deps.push_back(ex::intern("t"));
    std::vector<ScalarField> F;
    for (std::size_t i = 0; i < sys.n(); ++i) {
        ScalarField v = x_dep ? 1.0 / sys.speeds[i] : sys.speeds[i];
        ScalarField xi = y + axis_integral(v, axis, sys.ids);
        if (beta != 0.0) {
            ScalarField arg = -beta * xi;
            ScalarField ex_field;
            if (const Expr* e = arg.expr())
                ex_field = ScalarField::from_expr(ex::exp(*e), arg.aux());
            else
                ex_field = ScalarField::callback([arg](const Env& env) { return std::exp(arg.eval(env)); }, deps);
            F.push_back(a[i] + ex_field);
        } else {
            F.push_back(a[i] + xi);
        }
    }
    std::string prov = "t-dependent(beta=" + ex::format_double(beta) + ")";
    if (x_dep) prov = "x-dependent(beta=" + ex::format_double(beta) + ")";
    return make_implicit(sys.vars, F, prov);
}

Series series_coefficients(const DiagonalSystem& sys, const geometry::LameMetric& m, const RecursionOperator& op,
                           Seed seed, int N, const std::vector<Env>& samples) {
    if (N < 0) throw std::invalid_argument("series index must be non-negative");
    Series out;
    if (seed == Seed::One)
        out.w.assign(sys.n(), ScalarField::constant(1.0));
    else
        out.w = sys.speeds;
    for (int k = 0; k < N; ++k) {
        if (auto p = std::get_if<symmetry::RecursionSpecFirst>(&op))
            out.w = symmetry::recursion_first(m, *p, out.w);
        else
            out.w = symmetry::recursion_second(m, std::get<symmetry::RecursionSpecSecond>(op), out.w);
    }
    if (!samples.empty()) out.residual = symmetry::symmetry_residual(sys, out.w, samples);
    return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {a};
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

}  // namespace hydro::hodograph
