#include <cmath>

#include "hydro/symmetry.hpp"

namespace hydro::symmetry {

TwoComponentStructure::TwoComponentStructure(const DiagonalSystem& sys, double s0, double r0)
    : sys_(sys), s0_(s0), r0_(r0) {
    if (sys.n() != 2) throw std::invalid_argument("two-component structure needs n = 2");
    geometry::LameGauge g;
    g.base = {s0, r0};
    metric_ = geometry::lame_metric(sys, g);
    Phi_ = -metric_.phi[0];
    Theta_ = -metric_.phi[1];
    Phi_s_ = -metric_.gamma_ii[0];
    Phi_r_ = -metric_.gamma[0][1];
    Theta_s_ = -metric_.gamma[1][0];
    Theta_r_ = -metric_.gamma_ii[1];
}

double TwoComponentStructure::invariant_residual(const std::vector<Env>& samples) const {
    const ScalarField& phi = sys_.speeds[0];
    const ScalarField& psi = sys_.speeds[1];
    ScalarField phi_r = phi.partial(r_id());
    ScalarField psi_s = psi.partial(s_id());
    double worst = 0.0;
    for (const auto& e : samples) {
        double p = phi.eval(e), q = psi.eval(e);
        worst = std::max(worst, std::fabs(Phi_r_.eval(e) * (p - q) - phi_r.eval(e)));
        worst = std::max(worst, std::fabs(Theta_s_.eval(e) * (q - p) - psi_s.eval(e)));
    }
    return worst;
}

double inhomogeneous_existence_check(const TwoComponentStructure& st, const ScalarField& b, const ScalarField& d,
                                     const ScalarField& Phi0, const ScalarField& Theta0,
                                     const std::vector<Env>& samples) {
    ScalarField Phat = b * st.Phi_s() + d * st.Phi_r() + Phi0;
    ScalarField That = b * st.Theta_s() + d * st.Theta_r() + Theta0;
    ScalarField Phat_r = Phat.partial(st.r_id());
    ScalarField That_s = That.partial(st.s_id());
    double worst = 0.0;
    for (const auto& e : samples) {
        double P = Phat.eval(e), T = That.eval(e);
        worst = std::max(worst, std::fabs(Phat_r.eval(e) - st.Phi_r().eval(e) * (P - T)));
        worst = std::max(worst, std::fabs(That_s.eval(e) - st.Theta_s().eval(e) * (T - P)));
    }
    return worst;
}

}  // namespace hydro::symmetry
