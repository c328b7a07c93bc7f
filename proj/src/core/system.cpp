#include <cmath>
#include <limits>

#include "hydro/core.hpp"

namespace hydro {

namespace ex = exprlang;

Env DiagonalSystem::env(const std::vector<double>& u, double t, double x) const {
    if (u.size() != ids.size()) throw std::invalid_argument("point has wrong dimension");
    Env e;
    for (std::size_t i = 0; i < u.size(); ++i) e.set(ids[i], u[i]);
    e.set("t", t);
    e.set("x", x);
    return e;
}

Env QuasiLinearSystem::env(const std::vector<double>& u, double t, double x) const {
    if (u.size() != ids.size()) throw std::invalid_argument("point has wrong dimension");
    Env e;
    for (std::size_t i = 0; i < u.size(); ++i) e.set(ids[i], u[i]);
    e.set("t", t);
    e.set("x", x);
    return e;
}

QuasiLinearSystem quasi_linear(const DiagonalSystem& sys) {
    QuasiLinearSystem q;
    q.name = sys.name;
    q.vars = sys.vars;
    q.ids = sys.ids;
    q.M.assign(sys.n(), std::vector<ScalarField>(sys.n()));
    for (std::size_t i = 0; i < sys.n(); ++i) q.M[i][i] = sys.speeds[i];
    return q;
}

std::vector<double> DiagonalSystem::speeds_at(const Env& env) const {
    std::vector<double> v(speeds.size());
    for (std::size_t i = 0; i < speeds.size(); ++i) v[i] = speeds[i].eval(env);
    return v;
}

DiagonalSystem make_system(std::vector<std::string> vars, std::vector<ScalarField> speeds, Dependence dep,
                           std::string name) {
    if (vars.size() != speeds.size()) throw std::invalid_argument("one speed per component is required");
    if (vars.size() < 2) throw std::invalid_argument("a diagonal system needs at least two components");
    DiagonalSystem s;
    s.name = std::move(name);
    s.vars = std::move(vars);
    for (const auto& v : s.vars) s.ids.push_back(ex::intern(v));
    s.speeds = std::move(speeds);
    s.dependence = dep;
    s.labels = s.vars;
    return s;
}

DiagonalSystem epsilon_system(int n) {
    if (n < 2) throw std::invalid_argument("epsilon_system needs n >= 2");
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i) vars.push_back("u" + std::to_string(i));
    std::vector<ScalarField> speeds;
    for (int i = 0; i < n; ++i) {
        Expr v;
        for (int j = 0; j < n; ++j)
            if (j != i) v = v + Expr::variable(vars[j]);
        speeds.push_back(ScalarField::from_expr(v));
    }
    return make_system(vars, speeds, Dependence::Autonomous, "epsilon_system");
}

DiagonalSystem constant_speed_system(const std::vector<double>& c) {
    std::vector<std::string> vars;
    std::vector<ScalarField> speeds;
    for (std::size_t i = 0; i < c.size(); ++i) {
        vars.push_back("u" + std::to_string(i + 1));
        speeds.push_back(ScalarField::constant(c[i]));
    }
    return make_system(vars, speeds, Dependence::Autonomous, "constant_speed");
}

HyperbolicReport validate_hyperbolic(const DiagonalSystem& sys, const Env& point, double threshold) {
    HyperbolicReport r;
    r.min_gap = std::numeric_limits<double>::infinity();
    auto v = sys.speeds_at(point);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            double g = std::fabs(v[i] - v[j]);
            if (g < r.min_gap) {
                r.min_gap = g;
                r.i = static_cast<int>(i);
                r.j = static_cast<int>(j);
            }
        }
    r.pass = r.min_gap > threshold;
    return r;
}

double JetPoint::at(int order, std::size_t i) const {
    if (order > depth()) throw std::out_of_range("jet point has no entries of order " + std::to_string(order));
    return d[static_cast<std::size_t>(order)].at(i);
}

Env JetPoint::env(const std::vector<std::string>& names) const {
    Env e;
    e.set("x", x);
    e.set("t", t);
    for (std::size_t k = 0; k < d.size(); ++k)
        for (std::size_t i = 0; i < names.size() && i < d[k].size(); ++i)
            e.set(jet_name(names[i], static_cast<int>(k)), d[k][i]);
    return e;
}

std::string jet_name(const std::string& base, int order) {
    if (order == 0) return base;
    return base + "_" + std::string(static_cast<std::size_t>(order), 'x');
}

double Sampler::uniform(double lo, double hi) {
    double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::vector<double> Sampler::point(const std::vector<std::pair<double, double>>& box) {
    std::vector<double> p;
    p.reserve(box.size());
    for (const auto& [lo, hi] : box) p.push_back(uniform(lo, hi));
    return p;
}

}  // namespace hydro
