#include <cmath>

#include "hydro/symmetry.hpp"

namespace hydro::symmetry {

namespace ex = exprlang;

namespace {

const ScalarField& G(const LameMetric& m, std::size_t i, std::size_t k) {
    return i == k ? m.gamma_ii[i] : m.gamma[i][k];
}

void check_sizes(const LameMetric& m, std::size_t a, std::size_t b, const char* what) {
    if (a != m.n || b != m.n) throw std::invalid_argument(std::string(what) + ": one function per component is required");
}

ScalarField integrate_along(const ScalarField& g, int id, double lower) {
    if (g.is_zero()) return ScalarField();
    const Expr* e = g.expr();
    if (e && !g.aux()) {
        try {
            return ScalarField::from_expr(ex::antiderivative(*e, ex::symbol_name(id), lower));
        } catch (const ex::UnsupportedAntiderivative&) {
        }
    }
    return ScalarField::integral(g, id, lower);
}

double pair_residual(const ScalarField& S, const ScalarField& T, const ScalarField& Phi_r, const ScalarField& Theta_s,
                     int s_id, int r_id, const std::vector<Env>& samples) {
    ScalarField S_r = S.partial(r_id);
    ScalarField T_s = T.partial(s_id);
    double worst = 0.0;
    for (const auto& e : samples) {
        double s = S.eval(e), t = T.eval(e);
        worst = std::max(worst, std::fabs(S_r.eval(e) - Phi_r.eval(e) * (s - t)));
        worst = std::max(worst, std::fabs(T_s.eval(e) - Theta_s.eval(e) * (t - s)));
    }
    return worst;
}

// Two-component fields in the notation of the (a, c) recursions.
struct TwoFields {
    int s, r;
    ScalarField Phi_s, Phi_r, Theta_s, Theta_r;
};

TwoFields two_fields(const LameMetric& m) {
    return {m.ids[0], m.ids[1], -m.gamma_ii[0], -m.gamma[0][1], -m.gamma[1][0], -m.gamma_ii[1]};
}

TwoFields two_fields(const TwoComponentStructure& st) {
    return {st.s_id(), st.r_id(), st.Phi_s(), st.Phi_r(), st.Theta_s(), st.Theta_r()};
}

ScalarField lambda_from(const TwoFields& t, const std::vector<double>& base) {
    if (base.size() != 2) throw ex::UnsupportedAntiderivative("Lambda needs a base point or an explicit value");
    ScalarField inner = integrate_along(t.Phi_r * t.Theta_s, t.r, base[1]);
    return -integrate_along(inner, t.s, base[0]);
}

std::pair<ScalarField, ScalarField> second_ST(const TwoFields& t, const TwoSpecSecond& sp, const ScalarField& L) {
    const int s = t.s, r = t.r;
    ScalarField A1 = sp.A.partial(s), C1 = sp.C.partial(r);
    ScalarField L_s = L.partial(s), L_r = L.partial(r);
    ScalarField S = sp.A * (t.Phi_s * t.Phi_s - t.Phi_s.partial(s) + 2.0 * L_s.partial(s)) + A1 * L_s +
                    sp.C * (2.0 * t.Phi_r * t.Theta_r + t.Phi_r.partial(r) - t.Phi_r * t.Phi_r) + C1 * t.Phi_r +
                    sp.b * t.Phi_s + sp.d * t.Phi_r + sp.Phi0;
    ScalarField T = A1 * t.Theta_s + sp.A * (2.0 * t.Theta_s * t.Phi_s + t.Theta_s.partial(s) - t.Theta_s * t.Theta_s) +
                    sp.C * (t.Theta_r * t.Theta_r - t.Theta_r.partial(r) + 2.0 * L_r.partial(r)) + C1 * L_r +
                    sp.b * t.Theta_s + sp.d * t.Theta_r + sp.Theta0;
    return {S, T};
}

std::pair<ScalarField, ScalarField> second_apply(const TwoFields& t, const TwoSpecSecond& sp, const ScalarField& L,
                                                 const ScalarField& a, const ScalarField& c) {
    const int s = t.s, r = t.r;
    ScalarField A1 = sp.A.partial(s), C1 = sp.C.partial(r);
    ScalarField a_s = a.partial(s), c_r = c.partial(r);
    ScalarField L_s = L.partial(s), L_r = L.partial(r);
    ScalarField ahat =
        sp.A * a_s.partial(s) - (2.0 * sp.A * t.Phi_s + sp.b) * a_s - sp.C * t.Phi_r * c_r +
        (A1 * L_s + sp.A * (t.Phi_s * t.Phi_s - t.Phi_s.partial(s) + 2.0 * L_s.partial(s)) + sp.b * t.Phi_s + sp.Phi0) *
            a +
        (C1 * t.Phi_r + sp.C * (2.0 * t.Phi_r * t.Theta_r + t.Phi_r.partial(r) - t.Phi_r * t.Phi_r) +
         sp.d * t.Phi_r) *
            c;
    ScalarField chat =
        sp.C * c_r.partial(r) - (2.0 * sp.C * t.Theta_r + sp.d) * c_r - sp.A * t.Theta_s * a_s +
        (C1 * L_r + sp.C * (t.Theta_r * t.Theta_r - t.Theta_r.partial(r) + 2.0 * L_r.partial(r)) + sp.d * t.Theta_r +
         sp.Theta0) *
            c +
        (A1 * t.Theta_s + sp.A * (2.0 * t.Theta_s * t.Phi_s + t.Theta_s.partial(s) - t.Theta_s * t.Theta_s) +
         sp.b * t.Theta_s) *
            a;
    return {ahat, chat};
}

TwoSpecSecond to_two(const RecursionSpecSecond& sp) {
    TwoSpecSecond t;
    t.A = sp.f[0];
    t.C = sp.f[1];
    t.b = -sp.c[0];
    t.d = -sp.c[1];
    t.Phi0 = sp.d[0];
    t.Theta0 = sp.d[1];
    return t;
}

}  // namespace

std::vector<ScalarField> first_order_S(const LameMetric& m, const RecursionSpecFirst& spec) {
    check_sizes(m, spec.c.size(), spec.d.size(), "first-order spec");
    std::vector<ScalarField> S(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        ScalarField acc = spec.d[i];
        for (std::size_t k = 0; k < m.n; ++k) acc = acc + G(m, i, k) * spec.c[k];
        S[i] = acc;
    }
    return S;
}

CoefficientVector recursion_first(const LameMetric& m, const RecursionSpecFirst& spec, const CoefficientVector& w) {
    check_sizes(m, spec.c.size(), spec.d.size(), "first-order spec");
    if (w.size() != m.n) throw std::invalid_argument("coefficient vector has wrong length");
    CoefficientVector out(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        ScalarField acc = spec.c[i] * w[i].partial(m.ids[i]) + spec.d[i] * w[i];
        for (std::size_t k = 0; k < m.n; ++k) acc = acc + G(m, i, k) * spec.c[k] * w[k];
        out[i] = acc;
    }
    return out;
}

double existence_first(const LameMetric& m, const RecursionSpecFirst& spec, const std::vector<Env>& samples) {
    return symmetry_residual(m, first_order_S(m, spec), samples);
}

ScalarField connection_potential(const LameMetric& m, const RecursionSpecSecond& spec) {
    if (spec.V) return *spec.V;
    if (m.n == 2) return -lambda_from(two_fields(m), m.base);
    throw ex::UnsupportedAntiderivative("a connection potential V must be supplied for n >= 3");
}

std::vector<std::vector<ScalarField>> second_order_b(const LameMetric& m, const RecursionSpecSecond& spec) {
    check_sizes(m, spec.f.size(), spec.c.size(), "second-order spec");
    check_sizes(m, spec.d.size(), spec.d.size(), "second-order spec");
    ScalarField V = connection_potential(m, spec);
    std::size_t n = m.n;
    std::vector<std::vector<ScalarField>> b(n, std::vector<ScalarField>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const ScalarField& fk = spec.f[k];
            ScalarField fk1 = fk.partial(m.ids[k]);
            if (i != k) {
                const ScalarField& g = G(m, i, k);
                b[i][k] = fk * (g * (2.0 * G(m, k, k) - g) - g.partial(m.ids[k])) + (spec.c[k] - fk1) * g;
            } else {
                const ScalarField& g = G(m, i, i);
                ScalarField Vi = V.partial(m.ids[i]);
                b[i][i] = fk * (g.partial(m.ids[i]) + g * g - 2.0 * Vi.partial(m.ids[i])) - fk1 * Vi + spec.c[i] * g +
                          spec.d[i];
            }
        }
    return b;
}

std::vector<ScalarField> second_order_B(const LameMetric& m, const RecursionSpecSecond& spec) {
    auto b = second_order_b(m, spec);
    std::vector<ScalarField> B(m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t k = 0; k < m.n; ++k) B[i] = B[i] + b[i][k];
    return B;
}

CoefficientVector recursion_second(const LameMetric& m, const RecursionSpecSecond& spec, const CoefficientVector& w) {
    if (w.size() != m.n) throw std::invalid_argument("coefficient vector has wrong length");
    if (m.n == 2) {
        check_sizes(m, spec.f.size(), spec.c.size(), "second-order spec");
        ScalarField L = -connection_potential(m, spec);
        auto [a, c] = second_apply(two_fields(m), to_two(spec), L, w[0], w[1]);
        return {a, c};
    }
    auto b = second_order_b(m, spec);
    CoefficientVector out(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        int ui = m.ids[i];
        ScalarField wi = w[i].partial(ui);
        ScalarField acc = spec.f[i] * wi.partial(ui) + (2.0 * spec.f[i] * G(m, i, i) + spec.c[i]) * wi;
        for (std::size_t k = 0; k < m.n; ++k) {
            if (k != i) acc = acc + spec.f[k] * G(m, i, k) * w[k].partial(m.ids[k]);
            acc = acc + b[i][k] * w[k];
        }
        out[i] = acc;
    }
    return out;
}

double existence_second(const LameMetric& m, const RecursionSpecSecond& spec, const std::vector<Env>& samples) {
    if (m.n == 2) {
        check_sizes(m, spec.f.size(), spec.c.size(), "second-order spec");
        TwoFields t = two_fields(m);
        ScalarField L = -connection_potential(m, spec);
        auto [S, T] = second_ST(t, to_two(spec), L);
        return pair_residual(S, T, t.Phi_r, t.Theta_s, t.s, t.r, samples);
    }
    return symmetry_residual(m, second_order_B(m, spec), samples);
}

RecursionSpecSecond induced_second(const LameMetric& m, const RecursionSpecFirst& spec, const ScalarField& V,
                                   const std::vector<double>& base) {
    check_sizes(m, spec.c.size(), spec.d.size(), "first-order spec");
    if (base.size() != m.n) throw std::invalid_argument("base point has wrong dimension");
    RecursionSpecSecond out;
    out.V = V;
    ScalarField cV;
    for (std::size_t k = 0; k < m.n; ++k) cV = cV + spec.c[k] * V.partial(m.ids[k]);
    for (std::size_t i = 0; i < m.n; ++i) {
        int ui = m.ids[i];
        const ScalarField& c = spec.c[i];
        const ScalarField& d = spec.d[i];
        out.f.push_back(c * c);
        out.c.push_back(c * c.partial(ui) + 2.0 * c * d);
        ScalarField dd = c * d.partial(ui) + d * d + 2.0 * c * cV.partial(ui);
        std::map<int, double> others;
        for (std::size_t j = 0; j < m.n; ++j)
            if (j != i) others[m.ids[j]] = base[j];
        out.d.push_back(ScalarField::pinned(dd, others));
    }
    return out;
}

std::pair<ScalarField, ScalarField> two_first_ST(const TwoComponentStructure& st, const TwoSpecFirst& sp) {
    ScalarField S = sp.A * st.Phi_s() + sp.C * st.Phi_r() + sp.Phi0;
    ScalarField T = sp.A * st.Theta_s() + sp.C * st.Theta_r() + sp.Theta0;
    return {S, T};
}

std::pair<ScalarField, ScalarField> two_recursion_first(const TwoComponentStructure& st, const TwoSpecFirst& sp,
                                                        const ScalarField& a, const ScalarField& c) {
    ScalarField ahat = sp.A * (a.partial(st.s_id()) - st.Phi_s() * a) - sp.Phi0 * a - sp.C * st.Phi_r() * c;
    ScalarField chat = sp.C * (c.partial(st.r_id()) - st.Theta_r() * c) - sp.Theta0 * c - sp.A * st.Theta_s() * a;
    return {ahat, chat};
}

double two_existence_first(const TwoComponentStructure& st, const TwoSpecFirst& sp, const std::vector<Env>& samples) {
    auto [S, T] = two_first_ST(st, sp);
    return pair_residual(S, T, st.Phi_r(), st.Theta_s(), st.s_id(), st.r_id(), samples);
}

ScalarField two_lambda(const TwoComponentStructure& st, const TwoSpecSecond& sp) {
    if (sp.Lambda) return *sp.Lambda;
    return lambda_from(two_fields(st), {st.s0(), st.r0()});
}

std::pair<ScalarField, ScalarField> two_second_ST(const TwoComponentStructure& st, const TwoSpecSecond& sp) {
    return second_ST(two_fields(st), sp, two_lambda(st, sp));
}

std::pair<ScalarField, ScalarField> two_recursion_second(const TwoComponentStructure& st, const TwoSpecSecond& sp,
                                                         const ScalarField& a, const ScalarField& c) {
    return second_apply(two_fields(st), sp, two_lambda(st, sp), a, c);
}

double two_existence_second(const TwoComponentStructure& st, const TwoSpecSecond& sp,
                            const std::vector<Env>& samples) {
    auto [S, T] = two_second_ST(st, sp);
    return pair_residual(S, T, st.Phi_r(), st.Theta_s(), st.s_id(), st.r_id(), samples);
}

}  // namespace hydro::symmetry
