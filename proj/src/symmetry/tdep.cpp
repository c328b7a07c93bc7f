#include <cmath>

#include "hydro/quadrature.hpp"
#include "hydro/symmetry.hpp"

namespace hydro::symmetry {

namespace {

// Fits beta in [v_{i,j} / (v_i - v_j)]_y = beta v_{i,j} where y is "t" or "x".
DependenceReport fit(const std::vector<int>& ids, const std::vector<ScalarField>& v, const char* y,
                     const std::vector<Env>& samples) {
    std::size_t n = v.size();
    int yid = exprlang::intern(y);
    std::vector<ScalarField> lhs, vij;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            ScalarField d = v[i].partial(ids[j]);
            vij.push_back(d);
            lhs.push_back((d / (v[i] - v[j])).partial(yid));
        }
    std::vector<double> L, R;
    double num = 0.0, den = 0.0;
    for (const auto& e : samples)
        for (std::size_t k = 0; k < lhs.size(); ++k) {
            double l = lhs[k].eval(e), r = vij[k].eval(e);
            L.push_back(l);
            R.push_back(r);
            num += l * r;
            den += r * r;
        }
    DependenceReport rep;
    rep.equations = L.size();
    rep.degenerate = den < 1e-28;
    rep.beta = rep.degenerate ? 0.0 : num / den;
    for (std::size_t k = 0; k < L.size(); ++k) rep.residual = std::max(rep.residual, std::fabs(L[k] - rep.beta * R[k]));
    return rep;
}

}  // namespace

DependenceReport t_dependence_check(const DiagonalSystem& sys, const std::vector<Env>& samples) {
    return fit(sys.ids, sys.speeds, "t", samples);
}

DependenceReport x_dependence_check(const DiagonalSystem& sys, const std::vector<Env>& samples) {
    std::vector<ScalarField> inv;
    for (const auto& v : sys.speeds) inv.push_back(1.0 / v);
    return fit(sys.ids, inv, "x", samples);
}

double time_integral(const ScalarField& v, const Env& point, double t) {
    int tid = exprlang::intern("t");
    if (!v.depends_on(tid)) {
        Env e = point;
        e.set(tid, 0.0);
        return v.eval(e) * t;
    }
    Env e = point;
    return integrate(
        [&](double tau) {
            e.set(tid, tau);
            return v.eval(e);
        },
        0.0, t);
}

std::vector<double> symmetry_coefficients_t(const DiagonalSystem& sys, const CoefficientVector& a, double beta,
                                            double C, const Env& point) {
    if (a.size() != sys.n()) throw std::invalid_argument("coefficient vector has wrong length");
    double t = point.at("t"), x = point.at("x");
    std::vector<double> out(sys.n());
    for (std::size_t i = 0; i < sys.n(); ++i) {
        double xi = x + time_integral(sys.speeds[i], point, t);
        double ai = a[i].eval(point);
        out[i] = beta != 0.0 ? ai * std::exp(beta * xi) + C : ai + C * xi;
    }
    return out;
}

}  // namespace hydro::symmetry
