#include "hydro/geometry.hpp"

#include <cmath>
#include <numeric>

namespace hydro::geometry {

namespace ex = exprlang;

ScalarField gamma_field(const DiagonalSystem& sys, std::size_t i, std::size_t j) {
    ScalarField dv = sys.speeds[i].partial(sys.id(j));
    if (dv.is_zero()) return ScalarField();
    return dv / (sys.speeds[j] - sys.speeds[i]);
}

std::vector<std::vector<ScalarField>> connection_fields(const DiagonalSystem& sys) {
    std::size_t n = sys.n();
    std::vector<std::vector<ScalarField>> g(n, std::vector<ScalarField>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) g[i][j] = gamma_field(sys, i, j);
    return g;
}

namespace {

void require_hyperbolic(const DiagonalSystem& sys, const Env& point) {
    auto h = validate_hyperbolic(sys, point);
    if (!h.pass)
        throw DomainError("speeds v" + std::to_string(h.i + 1) + " and v" + std::to_string(h.j + 1) +
                          " coincide at this point");
}

}  // namespace

Matrix connection(const DiagonalSystem& sys, const Env& point) {
    require_hyperbolic(sys, point);
    auto g = connection_fields(sys);
    Matrix m(sys.n(), std::vector<double>(sys.n(), 0.0));
    for (std::size_t i = 0; i < sys.n(); ++i)
        for (std::size_t j = 0; j < sys.n(); ++j)
            if (i != j) m[i][j] = g[i][j].eval(point);
    return m;
}

double tsarev_residual(const DiagonalSystem& sys, const Env& point) {
    std::size_t n = sys.n();
    if (n < 3) return 0.0;
    require_hyperbolic(sys, point);
    auto g = connection_fields(sys);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                if (i == j || i == k) continue;
                double a = g[i][j].partial(sys.id(k)).eval(point);
                double b = g[i][k].partial(sys.id(j)).eval(point);
                worst = std::max(worst, std::fabs(a - b));
            }
    return worst;
}

CurvatureReport curvature_check(const DiagonalSystem& sys, const Env& point) {
    CurvatureReport r;
    std::size_t n = sys.n();
    if (n < 3) return r;
    require_hyperbolic(sys, point);
    auto g = connection_fields(sys);
    Matrix G(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) G[i][j] = g[i][j].eval(point);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                double gij_k = g[i][j].partial(sys.id(k)).eval(point);
                double gik_j = g[i][k].partial(sys.id(j)).eval(point);
                r.r_ikj = std::max(r.r_ikj, std::fabs(gij_k - gik_j));
                double rhs = G[i][k] * G[k][j] + G[i][j] * (G[j][k] - G[i][k]);
                r.r_jki = std::max(r.r_jki, std::fabs(gij_k - rhs));
            }
    return r;
}

namespace {

// integral from base to u^m of G, preferring a closed form.
ScalarField integrate_axis(const ScalarField& g, const std::string& var, int id, double base) {
    if (g.is_zero()) return ScalarField();
    const Expr* e = g.expr();
    if (e && !g.aux()) {
        try {
            return ScalarField::from_expr(ex::antiderivative(*e, var, base));
        } catch (const ex::UnsupportedAntiderivative&) {
        }
    }
    return ScalarField::integral(g, id, base);
}

}  // namespace

LameMetric lame_metric(const DiagonalSystem& sys, const LameGauge& gauge) {
    std::size_t n = sys.n();
    if (gauge.base.size() != n) throw std::invalid_argument("gauge base point has wrong dimension");
    std::vector<std::size_t> order = gauge.order;
    if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
    }
    LameMetric m;
    m.n = n;
    m.ids = sys.ids;
    m.gamma = connection_fields(sys);
    m.sign = gauge.sign.empty() ? std::vector<double>(n, 1.0) : gauge.sign;
    m.base = gauge.base;
    for (std::size_t i = 0; i < n; ++i) {
        std::map<int, double> others;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) others[sys.id(j)] = gauge.base[j];
        ScalarField phi;
        if (i < gauge.axis.size()) phi = ScalarField::pinned(gauge.axis[i], others);
        for (std::size_t p = 0; p < order.size(); ++p) {
            std::size_t a = order[p];
            if (a == i) continue;
            std::map<int, double> later;
            for (std::size_t q = p + 1; q < order.size(); ++q)
                if (order[q] != i) later[sys.id(order[q])] = gauge.base[order[q]];
            ScalarField g = ScalarField::pinned(m.gamma[i][a], later);
            phi = phi + integrate_axis(g, sys.vars[a], sys.id(a), gauge.base[a]);
        }
        m.phi.push_back(phi);
        m.gamma_ii.push_back(phi.partial(sys.id(i)));
    }
    return m;
}

LameMetric metric_from_phi(const std::vector<std::string>& vars, const std::vector<ScalarField>& phi,
                           std::vector<double> sign) {
    LameMetric m;
    m.n = vars.size();
    for (const auto& v : vars) m.ids.push_back(ex::intern(v));
    m.phi = phi;
    m.sign = sign.empty() ? std::vector<double>(m.n, 1.0) : std::move(sign);
    m.gamma.assign(m.n, std::vector<ScalarField>(m.n));
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j)
            if (i != j) m.gamma[i][j] = phi[i].partial(m.ids[j]);
        m.gamma_ii.push_back(phi[i].partial(m.ids[i]));
    }
    return m;
}

LameMetric metric_with_phi(const DiagonalSystem& sys, const std::vector<ScalarField>& phi) {
    if (phi.size() != sys.n()) throw std::invalid_argument("one Phi per component is required");
    LameMetric m;
    m.n = sys.n();
    m.ids = sys.ids;
    m.phi = phi;
    m.sign.assign(m.n, 1.0);
    m.gamma = connection_fields(sys);
    for (std::size_t i = 0; i < m.n; ++i) m.gamma_ii.push_back(phi[i].partial(m.ids[i]));
    return m;
}

LameResult lame_reconstruct(const DiagonalSystem& sys, const LameGauge& gauge, const Env& point) {
    LameMetric m = lame_metric(sys, gauge);
    std::size_t n = sys.n();
    LameResult r;
    for (std::size_t i = 0; i < n; ++i) {
        r.phi.push_back(m.phi[i].eval(point));
        r.H.push_back(std::exp(r.phi[i]));
    }
    r.beta.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const ScalarField& phi = m.phi[i];
        std::vector<int> deps(sys.ids.begin(), sys.ids.end());
        ScalarField H = ScalarField::callback([phi](const Env& e) { return std::exp(phi.eval(e)); }, deps);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            PartialOptions o;
            o.mode = DerivativeMode::FiniteDifference;
            r.beta[j][i] = partial(H, sys.vars[j], point, o) / r.H[j];
        }
    }
    return r;
}

Matrix gamma_jii(const LameMetric& m, const Env& point) {
    std::size_t n = m.n;
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = m.phi[i].eval(point);
    Matrix out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        out[i][i] = m.gamma_ii[i].eval(point);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            // out[j][i] = Gamma^j_ii
            out[j][i] = -(m.sign[i] / m.sign[j]) * std::exp(2.0 * (phi[i] - phi[j])) * m.gamma[i][j].eval(point);
        }
    }
    return out;
}

Matrix riemann_jji(const LameMetric& m, const Env& point) {
    std::size_t n = m.n;
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = m.phi[i].eval(point);
    Matrix G(n, std::vector<double>(n, 0.0));  // G[i][j] = Gamma^i_ij, G[i][i] = Gamma^i_ii
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) G[i][j] = i == j ? m.gamma_ii[i].eval(point) : m.gamma[i][j].eval(point);
    Matrix D = gamma_jii(m, point);  // D[m][j] = Gamma^m_jj

    Matrix R(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double ratio = (m.sign[j] / m.sign[i]) * std::exp(2.0 * (phi[j] - phi[i]));
            double d_i_gjji = m.gamma[j][i].partial(m.ids[i]).eval(point);
            double d_i_g_i_jj = -ratio * (2.0 * (G[j][i] - G[i][i]) * G[j][i] + d_i_gjji);
            double d_j_gij = m.gamma[i][j].partial(m.ids[j]).eval(point);
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += G[i][k] * D[k][j];
            R[i][j] = d_j_gij - d_i_g_i_jj + G[i][j] * G[i][j] + D[i][j] * G[j][i] - sum;
        }
    return R;
}

HamiltonianReport hamiltonian_check(const LameMetric& m, const std::vector<Env>& samples, double tol) {
    HamiltonianReport rep;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        Matrix R = riemann_jji(m, samples[s]);
        for (const auto& row : R)
            for (double v : row)
                if (std::fabs(v) > rep.max_residual) {
                    rep.max_residual = std::fabs(v);
                    rep.worst_point = s;
                }
    }
    rep.pass = rep.max_residual < tol;
    return rep;
}

}  // namespace hydro::geometry
