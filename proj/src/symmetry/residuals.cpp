#include <cmath>

#include "hydro/symmetry.hpp"

namespace hydro::symmetry {

namespace {

double residual(const std::vector<int>& ids, const std::vector<std::vector<ScalarField>>& gamma,
                const CoefficientVector& w, const std::vector<Env>& samples) {
    std::size_t n = ids.size();
    if (w.size() != n) throw std::invalid_argument("coefficient vector has wrong length");
    std::vector<std::vector<ScalarField>> dw(n, std::vector<ScalarField>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) dw[i][j] = w[i].partial(ids[j]);
    double worst = 0.0;
    std::vector<double> wv(n);
    for (const auto& e : samples) {
        for (std::size_t i = 0; i < n; ++i) wv[i] = w[i].eval(e);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double r = dw[i][j].eval(e) - gamma[i][j].eval(e) * (wv[j] - wv[i]);
                worst = std::max(worst, std::fabs(r));
            }
    }
    return worst;
}

}  // namespace

double symmetry_residual(const DiagonalSystem& sys, const CoefficientVector& w, const std::vector<Env>& samples) {
    return residual(sys.ids, geometry::connection_fields(sys), w, samples);
}

double symmetry_residual(const LameMetric& m, const CoefficientVector& w, const std::vector<Env>& samples) {
    return residual(m.ids, m.gamma, w, samples);
}

double potential_residual(const LameMetric& m, const ScalarField& V, const std::vector<Env>& samples) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = i + 1; j < m.n; ++j) {
            ScalarField Vij = V.partial(m.ids[i]).partial(m.ids[j]);
            ScalarField rhs = m.gamma[i][j] * m.gamma[j][i];
            for (const auto& e : samples) worst = std::max(worst, std::fabs(Vij.eval(e) - rhs.eval(e)));
        }
    return worst;
}

}  // namespace hydro::symmetry
