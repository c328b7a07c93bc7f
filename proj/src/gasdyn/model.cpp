#include <cmath>

#include "hydro/gasdyn.hpp"
#include "hydro/quadrature.hpp"

namespace hydro::gasdyn {

namespace ex = exprlang;

void GasModel::prepare() {
    rho_id_ = ex::intern("rho");
    int_alpha_.reset();
    try {
        int_alpha_ = ex::antiderivative(alpha, "rho", rho0);
    } catch (const ex::UnsupportedAntiderivative&) {
    }
}

double GasModel::alpha_at(double rho) const {
    Env e;
    e.set(rho_id_ < 0 ? ex::intern("rho") : rho_id_, rho);
    double v = alpha.eval(e);
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("alpha is not positive at rho = " + ex::format_double(rho));
    return v;
}

double GasModel::alpha_integral(double rho) const {
    if (!(rho > 0.0)) throw DomainError("density must be positive");
    if (int_alpha_) {
        Env e;
        e.set("rho", rho);
        return int_alpha_->eval(e);
    }
    return integrate([this](double p) { return alpha_at(p); }, rho0, rho, 1e-13);
}

GasModel polytropic(double a, double gamma, std::optional<double> rho0) {
    if (!(a > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("polytropic gas needs a > 0 and gamma > 0");
    GasModel m;
    m.kind = GasKind::Polytropic;
    m.a = a;
    m.gamma = gamma;
    m.rho0 = rho0 ? *rho0 : (gamma > 1.0 ? 0.0 : 1.0);
    double p = (gamma - 3.0) / 2.0;
    Expr k = Expr::constant(a * std::sqrt(gamma));
    m.alpha = p == 0.0 ? k : k * ex::pow(Expr::variable("rho"), p);
    m.prepare();
    return m;
}

GasModel chaplygin(double a, double P0, double rho0) {
    if (!(a > 0.0)) throw std::invalid_argument("Chaplygin gas needs a > 0");
    GasModel m;
    m.kind = GasKind::Chaplygin;
    m.a = a;
    m.P0 = P0;
    m.rho0 = rho0;
    m.alpha = Expr::constant(a) * ex::pow(Expr::variable("rho"), -2.0);
    m.prepare();
    return m;
}

GasModel custom_gas(const std::string& alpha, double rho0) {
    GasModel m;
    m.kind = GasKind::Custom;
    m.rho0 = rho0;
    m.alpha = ex::parse(alpha, std::vector<std::string>{"rho"});
    m.prepare();
    return m;
}

std::pair<double, double> riemann_from_physical(const GasModel& m, double u, double rho) {
    double I = m.alpha_integral(rho);
    return {u - I, u + I};
}

double rho_from_integral(const GasModel& m, double target) {
    auto F = [&](double p) { return m.alpha_integral(p) - target; };
    // int alpha is increasing in rho, so a bracket is found by doubling or halving.
    double hi = m.rho0 > 0.0 ? m.rho0 : 1.0;
    double fhi = F(hi);
    double lo = hi, flo = fhi;
    if (fhi < 0.0) {
        for (int k = 0; fhi < 0.0; ++k) {
            if (k > 2000) throw DomainError("no density reaches the requested Riemann-invariant difference");
            lo = hi;
            flo = fhi;
            hi *= 2.0;
            fhi = F(hi);
        }
    } else {
        for (int k = 0; flo > 0.0; ++k) {
            if (k > 2000 || lo < 1e-300) throw DomainError("no positive density reaches the requested difference");
            hi = lo;
            fhi = flo;
            lo *= 0.5;
            flo = F(lo);
        }
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double fx = F(x);
        if (fx == 0.0) return x;
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
        double nx = x - fx / m.alpha_at(x);
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (std::fabs(nx - x) <= 1e-14 * std::max(1.0, std::fabs(x)) || hi - lo <= 4e-16 * hi) return nx;
        x = nx;
    }
    throw DomainError("density inversion did not converge");
}

std::pair<double, double> physical_from_riemann(const GasModel& m, double s, double r) {
    return {0.5 * (s + r), rho_from_integral(m, 0.5 * (r - s))};
}

ImplicitVars rho_variable(const GasModel& m, const std::string& s, const std::string& r) {
    ImplicitVar v;
    v.name = "rho";
    v.id = ex::intern("rho");
    int sid = ex::intern(s), rid = ex::intern(r);
    v.resolve = [m, sid, rid](const Env& e) {
        auto sv = e.get(sid), rv = e.get(rid);
        if (!sv || !rv) throw ex::UnboundVariable(ex::symbol_name(!sv ? sid : rid));
        return rho_from_integral(m, 0.5 * (*rv - *sv));
    };
    Expr half_inv = Expr::constant(0.5) / m.alpha;
    v.partials[sid] = -half_inv;
    v.partials[rid] = half_inv;
    return std::make_shared<const std::vector<ImplicitVar>>(std::vector<ImplicitVar>{v});
}

DiagonalSystem riemann_system(const GasModel& m) {
    ImplicitVars aux = rho_variable(m);
    Expr s = Expr::variable("s"), r = Expr::variable("r"), rho = Expr::variable("rho");
    Expr mean = (s + r) * Expr::constant(0.5);
    Expr c = rho * m.alpha;
    ScalarField phi = ScalarField::from_expr(-(mean - c), aux);
    ScalarField psi = ScalarField::from_expr(-(mean + c), aux);
    DiagonalSystem sys = make_system({"s", "r"}, {phi, psi}, Dependence::Autonomous, "gas");
    sys.labels = {"s", "r"};
    return sys;
}

geometry::LameMetric natural_metric(const GasModel& m) {
    DiagonalSystem sys = riemann_system(m);
    ScalarField phi = ScalarField::from_expr(Expr::constant(-0.5) * ex::ln(m.alpha), sys.speeds[0].aux());
    geometry::LameMetric g = geometry::metric_with_phi(sys, {phi, phi});
    g.sign = {-1.0, 1.0};
    return g;
}

}  // namespace hydro::gasdyn
