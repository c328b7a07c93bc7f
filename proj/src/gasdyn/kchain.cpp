#include "hydro/gasdyn.hpp"
#include "hydro/quadrature.hpp"

namespace hydro::gasdyn {

namespace ex = exprlang;

namespace {

const Expr& as_expr(const ScalarField& f) {
    const Expr* e = f.expr();
    if (!e || f.aux()) throw ex::UnsupportedAntiderivative("K acts on plain expressions of u and rho");
    return *e;
}

// int from 0 to rho when the integrand allows it, otherwise from rho0.
Expr rho_antiderivative(const Expr& e, double rho0) {
    try {
        return ex::antiderivative(e, "rho", 0.0);
    } catch (const ex::UnsupportedAntiderivative&) {
        return ex::antiderivative(e, "rho", rho0);
    }
}

}  // namespace

std::pair<ScalarField, ScalarField> k_apply(const GasModel& m, const ScalarField& A, const ScalarField& B) {
    const Expr& a = as_expr(A);
    const Expr& b = as_expr(B);
    Expr zero = Expr::constant(0.0);
    Expr a0 = ex::substitute(a, "u", zero), b0 = ex::substitute(b, "u", zero);
    Expr w1 = ex::antiderivative(a, "u", 0.0) + rho_antiderivative(m.alpha * m.alpha * b0, m.rho0);
    Expr w2 = ex::antiderivative(b, "u", 0.0) + rho_antiderivative(a0, m.rho0);
    return {ScalarField::from_expr(w1), ScalarField::from_expr(w2)};
}

std::pair<double, double> k_apply_numeric(const GasModel& m, const ScalarField& A, const ScalarField& B, double u,
                                          double rho, double tol) {
    Env e;
    auto at = [&](const ScalarField& f, double uu, double rr) {
        e.set("u", uu);
        e.set("rho", rr);
        return f.eval(e);
    };
    double Iu_a = integrate([&](double t) { return at(A, t, rho); }, 0.0, u, tol);
    double Iu_b = integrate([&](double t) { return at(B, t, rho); }, 0.0, u, tol);
    double Ir_b = integrate(
        [&](double p) {
            double al = m.alpha_at(p);
            return al * al * at(B, 0.0, p);
        },
        0.0, rho, tol);
    double Ir_a = integrate([&](double p) { return at(A, 0.0, p); }, 0.0, rho, tol);
    return {Iu_a + Ir_b, Iu_b + Ir_a};
}

std::vector<KTerm> k_chain_terms(const GasModel& m, int N) {
    if (N < 1) throw std::invalid_argument("series index must be at least 1");
    ScalarField one = ScalarField::constant(1.0), zero;
    std::vector<KTerm> out{{2 * N - 1, one, zero}, {2 * N, zero, one}};
    std::pair<ScalarField, ScalarField> prev[2] = {{zero, one}, {one, zero}};
    for (int g = 1; g < N; ++g) {
        for (int k = 0; k < 2; ++k) {
            prev[k] = k_apply(m, prev[k].first, prev[k].second);
            out.push_back({2 * N - 2 * g - k, prev[k].first, prev[k].second});
        }
    }
    return out;
}

}  // namespace hydro::gasdyn

namespace hydro::gasdyn {

namespace {

// Rewrites a field of (u, rho) in the Riemann unknowns.
ScalarField riemann_form(const Expr& e, const ImplicitVars& aux) {
    Expr u = (Expr::variable("s") + Expr::variable("r")) * Expr::constant(0.5);
    return ScalarField::from_expr(ex::substitute(e, "u", u), aux);
}

}  // namespace

hodograph::ImplicitSystem k_series_implicit(const GasModel& m, int N, const std::vector<double>& c) {
    if (c.size() != static_cast<std::size_t>(2 * N)) throw std::invalid_argument("series needs 2N constants");
    ImplicitVars aux = rho_variable(m);
    Expr u = Expr::variable("u"), rho = Expr::variable("rho"), x = Expr::variable("x"), t = Expr::variable("t");
    Expr F1 = -(x - u * t), F2 = rho * t;
    for (const auto& term : k_chain_terms(m, N)) {
        Expr k = Expr::constant(c[static_cast<std::size_t>(term.coefficient - 1)]);
        F1 = F1 + k * *term.A.expr();
        F2 = F2 + k * *term.B.expr();
    }
    return hodograph::make_implicit({"s", "r"}, {riemann_form(F1, aux), riemann_form(F2, aux)},
                                    "series(N=" + std::to_string(N) + ")");
}

hodograph::ImplicitSystem piston_implicit(const GasModel& m, const PistonParams& p) {
    if (!(p.lambda > 0.0)) throw std::invalid_argument("piston scale lambda must be positive");
    ImplicitVars aux = rho_variable(m);
    Expr L = Expr::constant(p.lambda);
    Expr q = Expr::variable("q");
    // P'(lambda q) / q^2 = lambda^2 alpha^2(lambda q).
    Expr a2 = ex::substitute(m.alpha * m.alpha, "rho", L * q);
    Expr I = ex::antiderivative(L * L * a2, "q", p.rhobar0);
    Expr rhobar = Expr::variable("rho") / L;
    I = ex::substitute(I, "q", rhobar);
    Expr u = Expr::variable("u"), x = Expr::variable("x"), t = Expr::variable("t");
    Expr dt = t - Expr::constant(p.t0);
    Expr F1 = u - Expr::constant(p.u0) - rhobar * dt;
    Expr F2 = rhobar * dt * dt - I - (x - Expr::constant(p.x0) - Expr::constant(p.u0) * dt);
    return hodograph::make_implicit({"s", "r"}, {riemann_form(F1, aux), riemann_form(F2, aux)}, "piston");
}

std::pair<double, double> trivial_solution(const GasModel& m, double c1, double c2, double x, double t) {
    if (t == 0.0) throw DomainError("trivial solution is singular at t = 0");
    double rho = -c2 / t;
    if (!(rho > 0.0)) throw DomainError("trivial solution needs -c2 / t > 0");
    return riemann_from_physical(m, (x - c1) / t, rho);
}

}  // namespace hydro::gasdyn
