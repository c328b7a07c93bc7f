#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hydro/core.hpp"
#include "hydro/geometry.hpp"

namespace hydro::symmetry {

using geometry::LameMetric;

// max over samples and i != j of |w_{i,u^j} - Gamma^i_ij (w_j - w_i)|.
double symmetry_residual(const DiagonalSystem& sys, const CoefficientVector& w, const std::vector<Env>& samples);
double symmetry_residual(const LameMetric& m, const CoefficientVector& w, const std::vector<Env>& samples);

// Two-component data in the notation s = u^1, r = u^2:
// Phi_r = phi_r / (phi - psi), Theta_s = psi_s / (psi - phi), normalized by
// Phi(s, r0) = 0 and Theta(s0, r) = 0. In the n-component language
// Phi_1 = -Phi and Phi_2 = -Theta.
class TwoComponentStructure {
public:
    TwoComponentStructure(const DiagonalSystem& sys, double s0, double r0);

    const DiagonalSystem& system() const { return sys_; }
    const LameMetric& metric() const { return metric_; }
    double s0() const { return s0_; }
    double r0() const { return r0_; }
    int s_id() const { return sys_.id(0); }
    int r_id() const { return sys_.id(1); }

    const ScalarField& Phi() const { return Phi_; }
    const ScalarField& Theta() const { return Theta_; }
    const ScalarField& Phi_s() const { return Phi_s_; }
    const ScalarField& Phi_r() const { return Phi_r_; }
    const ScalarField& Theta_s() const { return Theta_s_; }
    const ScalarField& Theta_r() const { return Theta_r_; }

    // max |Phi_r (phi - psi) - phi_r| and |Theta_s (psi - phi) - psi_s| over samples.
    double invariant_residual(const std::vector<Env>& samples) const;

private:
    DiagonalSystem sys_;
    LameMetric metric_;
    double s0_, r0_;
    ScalarField Phi_, Theta_, Phi_s_, Phi_r_, Theta_s_, Theta_r_;
};

// max residual of Phi^_r - Phi_r (Phi^ - Theta^) and Theta^_s - Theta_s (Theta^ - Phi^)
// with Phi^ = b Phi_s + d Phi_r + Phi0 and Theta^ = b Theta_s + d Theta_r + Theta0.
double inhomogeneous_existence_check(const TwoComponentStructure& st, const ScalarField& b, const ScalarField& d,
                                     const ScalarField& Phi0, const ScalarField& Theta0,
                                     const std::vector<Env>& samples);

// c_i(u^i), d_i(u^i).
struct RecursionSpecFirst {
    std::vector<ScalarField> c, d;
};

// f_i(u^i), c_i(u^i), d_i(u^i) and the connection potential V with
// V_{u^i u^j} = Gamma^i_ij Gamma^j_ji. V may be left empty for n = 2, where it
// is built as a double integral from the metric base point.
struct RecursionSpecSecond {
    std::vector<ScalarField> f, c, d;
    std::optional<ScalarField> V;
};

// S_i = sum_k Gamma^i_ik c_k + d_i (k = i uses the gauge's Gamma^i_ii).
std::vector<ScalarField> first_order_S(const LameMetric& m, const RecursionSpecFirst& spec);
CoefficientVector recursion_first(const LameMetric& m, const RecursionSpecFirst& spec, const CoefficientVector& w);
double existence_first(const LameMetric& m, const RecursionSpecFirst& spec, const std::vector<Env>& samples);

ScalarField connection_potential(const LameMetric& m, const RecursionSpecSecond& spec);
double potential_residual(const LameMetric& m, const ScalarField& V, const std::vector<Env>& samples);

// b_ik of the second-order recursion, [i][k].
std::vector<std::vector<ScalarField>> second_order_b(const LameMetric& m, const RecursionSpecSecond& spec);
std::vector<ScalarField> second_order_B(const LameMetric& m, const RecursionSpecSecond& spec);
CoefficientVector recursion_second(const LameMetric& m, const RecursionSpecSecond& spec, const CoefficientVector& w);
double existence_second(const LameMetric& m, const RecursionSpecSecond& spec, const std::vector<Env>& samples);

// Spec of the second-order recursion equal to the square of a first-order
// one: f = c^2, c2 = c c' + 2 c d, d2 = c d' + d^2 + 2 c d_i(sum_k c_k V_k).
// d2_i is frozen along the other axes at `base`.
RecursionSpecSecond induced_second(const LameMetric& m, const RecursionSpecFirst& spec, const ScalarField& V,
                                   const std::vector<double>& base);

// Two-component forms written with A(s), C(r), b(s), d(r), Phi0(s), Theta0(r).
struct TwoSpecFirst {
    ScalarField A, C, Phi0, Theta0;
};
struct TwoSpecSecond {
    ScalarField A, C, b, d, Phi0, Theta0;
    std::optional<ScalarField> Lambda;  // Lambda_sr = -Phi_r Theta_s
};

std::pair<ScalarField, ScalarField> two_first_ST(const TwoComponentStructure& st, const TwoSpecFirst& spec);
std::pair<ScalarField, ScalarField> two_recursion_first(const TwoComponentStructure& st, const TwoSpecFirst& spec,
                                                        const ScalarField& a, const ScalarField& c);
double two_existence_first(const TwoComponentStructure& st, const TwoSpecFirst& spec, const std::vector<Env>& samples);

ScalarField two_lambda(const TwoComponentStructure& st, const TwoSpecSecond& spec);
std::pair<ScalarField, ScalarField> two_second_ST(const TwoComponentStructure& st, const TwoSpecSecond& spec);
std::pair<ScalarField, ScalarField> two_recursion_second(const TwoComponentStructure& st, const TwoSpecSecond& spec,
                                                         const ScalarField& a, const ScalarField& c);
double two_existence_second(const TwoComponentStructure& st, const TwoSpecSecond& spec,
                            const std::vector<Env>& samples);

// Jet characteristic (f, g) of a two-component symmetry, a pair of fields of
// x, t, s, r, s_x, r_x (names taken from the system variables).
struct Characteristic2 {
    ScalarField f, g;
};

// Commutator of characteristics, evaluated literally with central differences
// (step h scaled by max(1, |slot|)) for every jet partial and for D_x.
std::pair<double, double> commutator2(const Characteristic2& sigma, const Characteristic2& sigma_bar,
                                      const JetPoint& point, const std::vector<std::string>& names,
                                      double h = 1e-5);

// Homogeneous hydrodynamic characteristic (a s_x, c r_x).
Characteristic2 hydrodynamic_characteristic(const std::vector<std::string>& names, const ScalarField& a,
                                            const ScalarField& c);

struct DependenceReport {
    double beta = 0.0;
    double residual = 0.0;
    bool degenerate = false;  // all v_{i,u^j} vanish on the samples
    std::size_t equations = 0;
};

// Least-squares beta for [v_{i,u^j} / (v_i - v_j)]_t = beta v_{i,u^j}.
DependenceReport t_dependence_check(const DiagonalSystem& sys, const std::vector<Env>& samples);
// Same with 1 / v_i in place of v_i and x in place of t.
DependenceReport x_dependence_check(const DiagonalSystem& sys, const std::vector<Env>& samples);

// integral from 0 to t of v_i(u, tau) at fixed u.
double time_integral(const ScalarField& v, const Env& point, double t);

// A_i = a_i exp{beta [x + int_0^t v_i]} + C (beta != 0),
// A_i = a_i + C [x + int_0^t v_i] (beta = 0), at the point's (u, t, x).
std::vector<double> symmetry_coefficients_t(const DiagonalSystem& sys, const CoefficientVector& a, double beta,
                                            double C, const Env& point);

}  // namespace hydro::symmetry
