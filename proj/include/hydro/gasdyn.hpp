#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hydro/core.hpp"
#include "hydro/geometry.hpp"
#include "hydro/hodograph.hpp"
#include "hydro/symmetry.hpp"

namespace hydro::gasdyn {

enum class GasKind { Polytropic, Chaplygin, Custom };

// One-dimensional isentropic gas with sound speed rho * alpha(rho).
struct GasModel {
    GasKind kind = GasKind::Custom;
    double a = 1.0, gamma = 1.4, P0 = 0.0;
    double rho0 = 1.0;  // lower limit of every rho integral
    Expr alpha;         // in the variable "rho"

    ScalarField alpha_field() const { return ScalarField::from_expr(alpha); }
    // integral of alpha from rho0 to rho, symbolic when possible.
    double alpha_integral(double rho) const;
    const std::optional<Expr>& alpha_integral_expr() const { return int_alpha_; }

    // Internal: set by the factories.
    void prepare();
    double alpha_at(double rho) const;

private:
    std::optional<Expr> int_alpha_;
    int rho_id_ = -1;
};

// alpha = a sqrt(gamma) rho^((gamma - 3) / 2). rho0 defaults to 0 when
// int alpha converges there (gamma > 1) and to 1 otherwise.
GasModel polytropic(double a, double gamma, std::optional<double> rho0 = std::nullopt);
// alpha = a / rho^2 (pressure P0 - a^2 / rho).
GasModel chaplygin(double a, double P0 = 0.0, double rho0 = 1.0);
// alpha given as an expression in rho.
GasModel custom_gas(const std::string& alpha, double rho0 = 1.0);

// s = u - int alpha, r = u + int alpha.
std::pair<double, double> riemann_from_physical(const GasModel& m, double u, double rho);
// Inverse: u = (s + r) / 2 and rho from int alpha = (r - s) / 2.
std::pair<double, double> physical_from_riemann(const GasModel& m, double s, double r);
// rho with int_{rho0}^{rho} alpha = target; bracketed Newton to 1e-12.
double rho_from_integral(const GasModel& m, double target);

// rho as an implicit variable of (s, r) with rho_s = -1/(2 alpha), rho_r = 1/(2 alpha).
ImplicitVars rho_variable(const GasModel& m, const std::string& s = "s", const std::string& r = "r");

// s_t = phi s_x, r_t = psi r_x with phi = -[(s + r)/2 - rho alpha],
// psi = -[(s + r)/2 + rho alpha]. Variables "s", "r"; "rho" is implicit.
DiagonalSystem riemann_system(const GasModel& m);

// Diagonal metric in which the Riemann system is flat: Phi_i = -ln(alpha)/2
// with signature (-, +), from du drho = (dr^2 - ds^2) / (4 alpha).
geometry::LameMetric natural_metric(const GasModel& m);

// Jet characteristics are fields of x, t, s, r, s_x, r_x, s_xx, ... and rho.
struct Jet {
    ImplicitVars aux;
    std::vector<std::string> names{"s", "r"};

    ScalarField var(const std::string& base, int order) const;
    // Total x-derivative by the chain rule over every jet slot.
    ScalarField total_x(const ScalarField& f, int max_order = 12) const;
    // Highest jet order present in f (0 when only s, r, rho appear).
    int order(const ScalarField& f, int max_order = 12) const;
};

Jet make_jet(const GasModel& m);

// alpha and its rho-derivatives as jet fields.
ScalarField alpha_jet(const GasModel& m, const Jet& j, int derivative = 0);

// R(f, g) = (I D_x - (alpha_x / 2 alpha) [[1, -1], [-1, 1]]) (f / s_x, g / r_x).
symmetry::Characteristic2 recursion_field(const GasModel& m, const Jet& j, const symmetry::Characteristic2& fg);
std::pair<double, double> recursion_apply(const GasModel& m, const symmetry::Characteristic2& fg,
                                          const JetPoint& point);

// R^(N-1) (1, 1) as fields; N >= 1 (N = 1 gives (1, 1)).
symmetry::Characteristic2 characteristic_chain(const GasModel& m, int N);
// Values at a jet point. Throws if the point does not carry enough derivatives.
std::pair<double, double> characteristic_chain(const GasModel& m, int N, const JetPoint& point);

// Closed forms of the second- and third-order characteristics.
symmetry::Characteristic2 closed_form_f2(const GasModel& m);
symmetry::Characteristic2 closed_form_f3(const GasModel& m);

// (a, c) -> (a_s + k (a - c), c_r + k (a - c)), k = alpha' / (4 alpha^2).
std::pair<ScalarField, ScalarField> recursion_ac(const GasModel& m, const ScalarField& a, const ScalarField& c);
std::pair<double, double> recursion_ac(const GasModel& m, const ScalarField& a, const ScalarField& c,
                                       double s, double r);

// Characteristics spanning the kernel of R^N, N in {1, 2}. The free functions
// c_i(t) of the kernel multiply these entries in order.
std::vector<symmetry::Characteristic2> kernel_basis(const GasModel& m, int N);

// One term of the series of invariant solutions: coefficient index k of c_k
// (relative to N) and the vector (A, B)(u, rho) it multiplies.
struct KTerm {
    int coefficient = 0;
    ScalarField A, B;
};

// K (A, B) = (int A du + alpha^2 B drho, int B du + A drho) along the path
// (0, 0) -> (0, rho) -> (u, rho). A rho integral that diverges at 0 starts at
// rho0 instead. Symbolic; throws UnsupportedAntiderivative.
std::pair<ScalarField, ScalarField> k_apply(const GasModel& m, const ScalarField& A, const ScalarField& B);
// Same path with adaptive quadrature at (u, rho), rho integrals from 0.
std::pair<double, double> k_apply_numeric(const GasModel& m, const ScalarField& A, const ScalarField& B, double u,
                                          double rho, double tol = 1e-11);

// Terms of sum c_k (A_k, B_k) = (x - u t, -rho t) for a given N >= 1, in the
// order c_{2N-1}, c_{2N}, c_{2N-2}, c_{2N-3}, ..., c_1. Fields of "u", "rho".
std::vector<KTerm> k_chain_terms(const GasModel& m, int N);

// sum_k c_k (A_k, B_k) - (x - u t, -rho t) = 0 in the unknowns (s, r), with
// u = (s + r) / 2 and rho implicit. c holds c_1 .. c_{2N}.
hodograph::ImplicitSystem k_series_implicit(const GasModel& m, int N, const std::vector<double>& c);

// Piston flow after an explosion, with rhobar = rho / lambda:
// u - u0 = rhobar (t - t0),
// rhobar (t - t0)^2 - int_{rhobar0}^{rhobar} P'(lambda q) / q^2 dq = x - x0 - u0 (t - t0),
// where P'(rho) = rho^2 alpha^2. Unknowns (s, r).
struct PistonParams {
    double lambda = 1.0, u0 = 0.0, x0 = 0.0, t0 = 0.0, rhobar0 = 1.0;
};
hodograph::ImplicitSystem piston_implicit(const GasModel& m, const PistonParams& p);

// Trivial solution u = (x - c1) / t, rho = -c2 / t, as (s, r).
std::pair<double, double> trivial_solution(const GasModel& m, double c1, double c2, double x, double t);

}  // namespace hydro::gasdyn
