#include <cmath>

#include "hydro/gasdyn.hpp"

namespace hydro::gasdyn {

namespace ex = exprlang;
using symmetry::Characteristic2;

ScalarField Jet::var(const std::string& base, int order) const {
    return ScalarField::from_expr(Expr::variable(jet_name(base, order)), aux);
}

ScalarField Jet::total_x(const ScalarField& f, int max_order) const {
    ScalarField out = f.partial("x");
    for (int k = 0; k <= max_order; ++k)
        for (const auto& q : names) {
            int id = ex::intern(jet_name(q, k));
            if (!f.depends_on(id)) continue;
            if (k == max_order) throw std::invalid_argument("jet order exceeds the supported maximum");
            out = out + f.partial(id) * var(q, k + 1);
        }
    return out;
}

int Jet::order(const ScalarField& f, int max_order) const {
    int o = 0;
    for (int k = 1; k <= max_order; ++k)
        for (const auto& q : names)
            if (f.depends_on(ex::intern(jet_name(q, k)))) o = k;
    return o;
}

Jet make_jet(const GasModel& m) {
    Jet j;
    j.aux = rho_variable(m);
    return j;
}

ScalarField alpha_jet(const GasModel& m, const Jet& j, int derivative) {
    Expr a = m.alpha;
    for (int k = 0; k < derivative; ++k) a = ex::differentiate(a, "rho");
    return ScalarField::from_expr(a, j.aux);
}

namespace {

// alpha_x / (2 alpha) with rho_x = (r_x - s_x) / (2 alpha).
ScalarField half_log_alpha_x(const GasModel& m, const Jet& j) {
    ScalarField al = alpha_jet(m, j), al1 = alpha_jet(m, j, 1);
    ScalarField rho_x = (j.var("r", 1) - j.var("s", 1)) / (2.0 * al);
    return al1 * rho_x / (2.0 * al);
}

Env jet_env(const JetPoint& p, const Jet& j) {
    if (p.depth() < 1) throw std::invalid_argument("jet point needs first derivatives");
    if (p.d[1][0] == 0.0 || p.d[1][1] == 0.0) throw DomainError("s_x and r_x must be nonzero");
    return p.env(j.names);
}

std::pair<double, double> eval_at(const Characteristic2& fg, const Jet& j, const JetPoint& p) {
    int need = std::max(j.order(fg.f), j.order(fg.g));
    if (need > p.depth())
        throw std::invalid_argument("jet point has depth " + std::to_string(p.depth()) + " but the characteristic needs " +
                                    std::to_string(need));
    Env e = jet_env(p, j);
    return {fg.f.eval(e), fg.g.eval(e)};
}

}  // namespace

Characteristic2 recursion_field(const GasModel& m, const Jet& j, const Characteristic2& fg) {
    ScalarField p = fg.f / j.var("s", 1);
    ScalarField q = fg.g / j.var("r", 1);
    ScalarField k = half_log_alpha_x(m, j);
    ScalarField diff = k * (p - q);
    return {j.total_x(p) - diff, j.total_x(q) + diff};
}

std::pair<double, double> recursion_apply(const GasModel& m, const Characteristic2& fg, const JetPoint& point) {
    Jet j = make_jet(m);
    return eval_at(recursion_field(m, j, fg), j, point);
}

Characteristic2 characteristic_chain(const GasModel& m, int N) {
    if (N < 1) throw std::invalid_argument("chain index must be at least 1");
    Jet j = make_jet(m);
    Characteristic2 fg{ScalarField::constant(1.0), ScalarField::constant(1.0)};
    for (int k = 1; k < N; ++k) fg = recursion_field(m, j, fg);
    return fg;
}

std::pair<double, double> characteristic_chain(const GasModel& m, int N, const JetPoint& point) {
    if (point.depth() < N) throw std::invalid_argument("jet point too shallow for the requested chain");
    return eval_at(characteristic_chain(m, N), make_jet(m), point);
}

Characteristic2 closed_form_f2(const GasModel& m) {
    Jet j = make_jet(m);
    ScalarField sx = j.var("s", 1), rx = j.var("r", 1);
    ScalarField al = alpha_jet(m, j), al1 = alpha_jet(m, j, 1);
    ScalarField K = al1 / (4.0 * al * al);
    ScalarField cross = K * (sx - rx) * (sx - rx) / (sx * rx);
    return {-j.var("s", 2) / (sx * sx) - cross, -j.var("r", 2) / (rx * rx) + cross};
}

Characteristic2 closed_form_f3(const GasModel& m) {
    Jet j = make_jet(m);
    ScalarField sx = j.var("s", 1), rx = j.var("r", 1);
    ScalarField sxx = j.var("s", 2), rxx = j.var("r", 2);
    ScalarField sxxx = j.var("s", 3), rxxx = j.var("r", 3);
    ScalarField al = alpha_jet(m, j);
    Expr L_e = ex::differentiate(m.alpha, "rho") / (m.alpha * m.alpha);
    ScalarField L = ScalarField::from_expr(L_e, j.aux);
    ScalarField L1 = ScalarField::from_expr(ex::differentiate(L_e, "rho"), j.aux);
    ScalarField K = 0.25 * L;
    ScalarField sx3 = sx * sx * sx, rx3 = rx * rx * rx;
    ScalarField inv3 = 1.0 / sx3 - 1.0 / rx3;
    ScalarField d = sx - rx;
    ScalarField cube = d * d * d / (8.0 * sx * rx);
    ScalarField half_L2 = 0.5 * L * L * (1.0 / sx + 1.0 / rx);
    ScalarField f = -(sxxx / sx3 - 3.0 * sxx * sxx / (sx3 * sx)) - K * inv3 * sx * rxx - 3.0 * K * sxx / sx3 * d -
                    (half_L2 - L1 / (al * sx)) * cube;
    ScalarField g = -(rxxx / rx3 - 3.0 * rxx * rxx / (rx3 * rx)) - K * inv3 * rx * sxx - 3.0 * K * rxx / rx3 * d +
                    (half_L2 - L1 / (al * rx)) * cube;
    return {f, g};
}

std::pair<ScalarField, ScalarField> recursion_ac(const GasModel& m, const ScalarField& a, const ScalarField& c) {
    ImplicitVars aux = a.aux() ? a.aux() : (c.aux() ? c.aux() : rho_variable(m));
    Expr k = ex::differentiate(m.alpha, "rho") / (Expr::constant(4.0) * m.alpha * m.alpha);
    ScalarField kd = ScalarField::from_expr(k, aux) * (a - c);
    return {a.partial("s") + kd, c.partial("r") + kd};
}

std::pair<double, double> recursion_ac(const GasModel& m, const ScalarField& a, const ScalarField& c, double s,
                                       double r) {
    auto [a1, c1] = recursion_ac(m, a, c);
    Env e;
    e.set("s", s);
    e.set("r", r);
    return {a1.eval(e), c1.eval(e)};
}

std::vector<Characteristic2> kernel_basis(const GasModel& m, int N) {
    if (N != 1 && N != 2) throw std::invalid_argument("kernel basis is available for N = 1 and N = 2");
    Jet j = make_jet(m);
    ScalarField sx = j.var("s", 1), rx = j.var("r", 1);
    ScalarField al = alpha_jet(m, j);
    std::vector<Characteristic2> out;
    if (N == 2) {
        ScalarField u = 0.5 * (j.var("s", 0) + j.var("r", 0));
        ScalarField rho = ScalarField::from_expr(Expr::variable("rho"), j.aux);
        // The lower limit only shifts the entry by a multiple of (s_x, r_x);
        // rho0 = 0 is avoided since alpha^2 need not be integrable there.
        Expr I = ex::antiderivative(m.alpha * m.alpha, "rho", m.rho0 > 0.0 ? m.rho0 : 1.0);
        ScalarField Ia = ScalarField::from_expr(I, j.aux);
        out.push_back({(u - rho * al) * sx, (u + rho * al) * rx});
        out.push_back({(Ia - u * al) * sx, (Ia + u * al) * rx});
    }
    out.push_back({sx, rx});
    out.push_back({-al * sx, al * rx});
    return out;
}

}  // namespace hydro::gasdyn
