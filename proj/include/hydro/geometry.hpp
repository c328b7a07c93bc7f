#pragma once

#include <vector>

#include "hydro/core.hpp"

namespace hydro::geometry {

using Matrix = std::vector<std::vector<double>>;

// Gamma^i_ij = v_{i,u^j} / (v_j - v_i) for i != j.
ScalarField gamma_field(const DiagonalSystem& sys, std::size_t i, std::size_t j);

// All off-diagonal Gamma^i_ij as fields, G[i][j]; the diagonal is zero.
std::vector<std::vector<ScalarField>> connection_fields(const DiagonalSystem& sys);

// Numeric Gamma^i_ij at a point. Throws DomainError if the point is not
// strictly hyperbolic.
Matrix connection(const DiagonalSystem& sys, const Env& point);

// max over distinct (i, j, k) of |d_k Gamma^i_ij - d_j Gamma^i_ik|; 0 for n = 2.
double tsarev_residual(const DiagonalSystem& sys, const Env& point);

struct CurvatureReport {
    double r_ikj = 0.0;  // Gamma^i_ij,k - Gamma^i_ik,j
    double r_jki = 0.0;  // Gamma^i_ij,k - [Gamma^i_ik Gamma^k_kj + Gamma^i_ij (Gamma^j_jk - Gamma^i_ik)]
};
CurvatureReport curvature_check(const DiagonalSystem& sys, const Env& point);

// Gauge of the diagonal metric g_ii = sign_i exp(2 Phi_i). Phi_i is fixed to
// axis[i] on the line through base along u^i and continued to other points by
// integrating Gamma^i_ij along axis-aligned segments in the given order.
struct LameGauge {
    std::vector<double> base;
    std::vector<ScalarField> axis;  // default: zero
    std::vector<double> sign;       // default: all +1
    std::vector<std::size_t> order; // default: 0, 1, ..., n-1
};

struct LameMetric {
    std::size_t n = 0;
    std::vector<int> ids;
    std::vector<ScalarField> phi;                   // Phi_i
    std::vector<ScalarField> gamma_ii;              // d_i Phi_i
    std::vector<std::vector<ScalarField>> gamma;    // Gamma^i_ij from the speeds (i != j)
    std::vector<double> sign;
    std::vector<double> base;  // empty when the metric was given directly
};

LameMetric lame_metric(const DiagonalSystem& sys, const LameGauge& gauge);
// A metric given directly by its Phi_i; Gamma^i_ij is d_j Phi_i.
LameMetric metric_from_phi(const std::vector<std::string>& vars, const std::vector<ScalarField>& phi,
                           std::vector<double> sign = {});
// Gamma^i_ij from the speeds, Gamma^i_ii from the supplied Phi_i.
LameMetric metric_with_phi(const DiagonalSystem& sys, const std::vector<ScalarField>& phi);

struct LameResult {
    std::vector<double> phi, H;
    Matrix beta;  // beta[j][i] = H_{i,u^j} / H_j
};
LameResult lame_reconstruct(const DiagonalSystem& sys, const LameGauge& gauge, const Env& point);

// Gamma^j_ii = -(g_ii / g_jj) Gamma^i_ij, with Gamma^i_ii on the diagonal.
Matrix gamma_jii(const LameMetric& m, const Env& point);

// R^i_jji for i != j, indexed [i][j].
Matrix riemann_jji(const LameMetric& m, const Env& point);

struct HamiltonianReport {
    double max_residual = 0.0;
    std::size_t worst_point = 0;
    bool pass = false;
};
HamiltonianReport hamiltonian_check(const LameMetric& m, const std::vector<Env>& samples, double tol = 1e-6);

}  // namespace hydro::geometry
