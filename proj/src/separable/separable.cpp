#include <algorithm>
#include <cmath>

#include "hydro/separable.hpp"

namespace hydro::separable {

namespace ex = exprlang;

namespace {

const std::vector<std::string> kVars{"u", "rho"};

// F -> int int g2 F in var from lower, applied times times.
Expr double_integral(const Expr& g2, const std::string& var, double lower, Expr F, int times) {
    for (int k = 0; k < times; ++k) {
        F = ex::antiderivative(g2 * F, var, lower);
        F = ex::antiderivative(F, var, lower);
    }
    return F;
}

struct Ops {
    const SeparableModel& m;
    Expr U(const Expr& F, int k) const { return double_integral(m.beta2, "u", m.u_lower, F, k); }
    Expr P(const Expr& F, int k) const { return double_integral(m.alpha2, "rho", m.rho_lower, F, k); }
};

std::string kind_tag(ManinKind k) { return k == ManinKind::Rho ? "1,0" : "0,1"; }

}  // namespace

SeparableModel make_model(const std::string& alpha2, const std::string& beta2, double u_lower, double rho_lower) {
    SeparableModel m;
    m.alpha2 = ex::parse(alpha2, std::vector<std::string>{"rho"});
    m.beta2 = ex::parse(beta2, std::vector<std::string>{"u"});
    m.u_lower = u_lower;
    m.rho_lower = rho_lower;
    return m;
}

HamiltonianDensity user_hamiltonian(const std::string& source) {
    return {ScalarField::from_expr(ex::parse(source, kVars)), "user"};
}

QuasiLinearSystem hamiltonian_system(const ScalarField& H) {
    QuasiLinearSystem s;
    s.name = "hamiltonian";
    s.vars = kVars;
    for (const auto& v : s.vars) s.ids.push_back(ex::intern(v));
    ScalarField Hu = H.partial("u"), Hr = H.partial("rho");
    s.M = {{Hr.partial("u"), Hr.partial("rho")}, {Hu.partial("u"), Hu.partial("rho")}};
    return s;
}

std::vector<Env> sample_grid(double u0, double u1, double rho0, double rho1, std::size_t n) {
    std::vector<Env> out;
    auto us = hodograph::linspace(u0, u1, n), rs = hodograph::linspace(rho0, rho1, n);
    for (double u : us)
        for (double r : rs) out.push_back(Env{{"u", u}, {"rho", r}});
    return out;
}

double commute_check(const ScalarField& H, const ScalarField& h, const std::vector<Env>& samples) {
    ScalarField Huu = H.partial("u").partial("u"), Hrr = H.partial("rho").partial("rho");
    ScalarField huu = h.partial("u").partial("u"), hrr = h.partial("rho").partial("rho");
    double worst = 0.0;
    for (const auto& e : samples)
        worst = std::max(worst, std::fabs(Hrr.eval(e) * huu.eval(e) - hrr.eval(e) * Huu.eval(e)));
    return worst;
}

double wave_residual(const SeparableModel& m, const ScalarField& H, const std::vector<Env>& samples) {
    ScalarField Huu = H.partial("u").partial("u"), Hrr = H.partial("rho").partial("rho");
    double worst = 0.0;
    for (const auto& e : samples)
        worst = std::max(worst, std::fabs(Huu.eval(e) / m.beta2.eval(e) - Hrr.eval(e) / m.alpha2.eval(e)));
    return worst;
}

HamiltonianDensity manin_hamiltonian(const SeparableModel& m, ManinKind kind, int N) {
    if (N < -1) throw std::invalid_argument("Manin index must be at least -1");
    std::string prov = "manin(" + kind_tag(kind) + ";" + std::to_string(N) + ")";
    Ops op{m};
    Expr one = Expr::constant(1.0), u = Expr::variable("u"), rho = Expr::variable("rho");
    if (N == -1) return {ScalarField::constant(kind == ManinKind::Rho ? 0.0 : 1.0), prov};
    Expr sum = Expr::constant(0.0);
    int mm = (N + 1) / 2;
    bool even = N % 2 == 0;
    if (kind == ManinKind::Rho) {
        if (even)
            for (int n = 0; n <= mm; ++n) sum = sum + op.U(one, mm - n) * op.P(rho, n);
        else
            for (int n = 0; n <= mm - 1; ++n) sum = sum + op.U(u, mm - n - 1) * op.P(rho, n);
    } else {
        for (int n = 0; n <= mm; ++n) sum = sum + op.U(even ? u : one, mm - n) * op.P(one, n);
    }
    return {ScalarField::from_expr(sum), prov};
}

HamiltonianDensity manin_pair(const SeparableModel& m, int N, double c1, double c2) {
    ScalarField H = c1 * manin_hamiltonian(m, ManinKind::Rho, N).H + c2 * manin_hamiltonian(m, ManinKind::U, N).H;
    return {H, "manin(" + ex::format_double(c1) + "," + ex::format_double(c2) + ";" + std::to_string(N) + ")"};
}

HamiltonianDensity manin_combination(const SeparableModel& m, int order, const std::vector<double>& c) {
    if (order < 0) throw std::invalid_argument("combination order must be non-negative");
    if (c.size() != static_cast<std::size_t>(4 * order + 4))
        throw std::invalid_argument("combination of order m needs 4m + 4 constants");
    ScalarField H;
    for (int k = 0; k <= order; ++k) {
        std::size_t base = static_cast<std::size_t>(4 * (order - k));
        if (c[base] != 0.0) H = H + c[base] * manin_hamiltonian(m, ManinKind::Rho, 2 * k).H;
        if (c[base + 1] != 0.0) H = H + c[base + 1] * manin_hamiltonian(m, ManinKind::U, 2 * k).H;
        if (c[base + 2] != 0.0) H = H + c[base + 2] * manin_hamiltonian(m, ManinKind::Rho, 2 * k - 1).H;
        if (c[base + 3] != 0.0) H = H + c[base + 3] * manin_hamiltonian(m, ManinKind::U, 2 * k - 1).H;
    }
    return {H, "manin-combination(" + std::to_string(order) + ")"};
}

RecursionResult hamiltonian_recursion(const SeparableModel& m, const ScalarField& h, int times,
                                      const std::vector<Env>& samples, double tol) {
    if (times < 0) throw std::invalid_argument("recursion count must be non-negative");
    ScalarField a2 = ScalarField::from_expr(m.alpha2), b2 = ScalarField::from_expr(m.beta2);
    RecursionResult r{h, h};
    for (int k = 0; k < times; ++k) {
        r.by_u = r.by_u.partial("u").partial("u") / b2;
        r.by_rho = r.by_rho.partial("rho").partial("rho") / a2;
    }
    for (const auto& e : samples) r.mismatch = std::max(r.mismatch, std::fabs(r.by_u.eval(e) - r.by_rho.eval(e)));
    r.in_class = r.mismatch <= tol;
    return r;
}

HamiltonianDensity gas_hamiltonian(const SeparableModel& m) {
    Ops op{m};
    Expr u = Expr::variable("u"), rho = Expr::variable("rho");
    Expr H = -(rho * u * u * Expr::constant(0.5) + op.P(rho, 1));
    return {ScalarField::from_expr(H), "gas"};
}

hodograph::ImplicitSystem linearize_implicit(const ScalarField& H, const ScalarField& HN) {
    ScalarField x = ScalarField::from_expr(Expr::variable("x"));
    ScalarField t = ScalarField::from_expr(Expr::variable("t"));
    ScalarField F1 = H.partial("rho").partial("u") - x - t * HN.partial("rho").partial("u");
    ScalarField F2 = H.partial("u").partial("u") - t * HN.partial("u").partial("u");
    return hodograph::make_implicit(kVars, {F1, F2}, "linearized");
}

LinearizedSolution linearize_separable(const ScalarField& H, const ScalarField& HN, const hodograph::GridAxes& axes,
                                       const std::vector<double>& seed_guess, const hodograph::SolveOptions& opt) {
    LinearizedSolution out;
    out.grid = hodograph::solve_grid(linearize_implicit(H, HN), axes, seed_guess, opt);
    if (out.grid.nx() >= 3 && out.grid.nt() >= 3) {
        try {
            out.residual = hodograph::residual_pde(hamiltonian_system(HN), out.grid);
        } catch (const std::runtime_error&) {
            // no interior node with a converged stencil
        }
    }
    return out;
}

}  // namespace hydro::separable
