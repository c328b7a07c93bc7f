#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hydro/core.hpp"
#include "hydro/hodograph.hpp"

namespace hydro::separable {

// Separable Hamiltonian systems: densities H(u, rho) with
// H_uu / beta^2(u) = H_rhorho / alpha^2(rho).
struct SeparableModel {
    Expr alpha2;  // of "rho"
    Expr beta2;   // of "u"
    double u_lower = 0.0, rho_lower = 0.0;  // lower limits of the inverse derivatives
};

SeparableModel make_model(const std::string& alpha2, const std::string& beta2 = "1", double u_lower = 0.0,
                          double rho_lower = 0.0);

struct HamiltonianDensity {
    ScalarField H;
    std::string provenance;  // "user" or "manin(k1,k2;N)" and so on
};

HamiltonianDensity user_hamiltonian(const std::string& source);

// (u, rho)_t = [[H_rhou, H_rhorho], [H_uu, H_urho]] (u, rho)_x.
QuasiLinearSystem hamiltonian_system(const ScalarField& H);

// Samples on a uniform n x n grid over [u0, u1] x [rho0, rho1].
std::vector<Env> sample_grid(double u0, double u1, double rho0, double rho1, std::size_t n);

// max |H_rhorho h_uu - h_rhorho H_uu| over the samples.
double commute_check(const ScalarField& H, const ScalarField& h, const std::vector<Env>& samples);
// max |H_uu / beta^2 - H_rhorho / alpha^2| over the samples.
double wave_residual(const SeparableModel& m, const ScalarField& H, const std::vector<Env>& samples);

enum class ManinKind { Rho, U };  // (1,0) and (0,1)

// Nested-antiderivative Manin densities, N >= -1. Each operator step
// F -> int int g^2 F acts on everything to its right; the rho steps act
// first, so a term factors as f(u) g(rho). Throws
// exprlang::UnsupportedAntiderivative outside the closed-form class.
HamiltonianDensity manin_hamiltonian(const SeparableModel& m, ManinKind kind, int N);

// c_1 H^(N)(1,0) + c_2 H^(N)(0,1).
HamiltonianDensity manin_pair(const SeparableModel& m, int N, double c1, double c2);

// H^[m] = sum_k c_{4(m-k)+1} H^(2k)(1,0) + c_{4(m-k)+2} H^(2k)(0,1)
//       + c_{4(m-k)+3} H^(2k-1)(1,0) + c_{4(m-k)+4} H^(2k-1)(0,1),
// with c holding c_1 .. c_{4m+4}.
HamiltonianDensity manin_combination(const SeparableModel& m, int order, const std::vector<double>& c);

struct RecursionResult {
    ScalarField by_u;    // h_uu / beta^2, applied m times
    ScalarField by_rho;  // h_rhorho / alpha^2, applied m times
    double mismatch = 0.0;  // max |by_u - by_rho| over the samples
    bool in_class = true;   // mismatch within tolerance
};

RecursionResult hamiltonian_recursion(const SeparableModel& m, const ScalarField& h, int times,
                                      const std::vector<Env>& samples, double tol = 1e-8);

// Gas dynamics density -[rho u^2 / 2 + int_0^rho int_0^rho alpha^2 rho].
HamiltonianDensity gas_hamiltonian(const SeparableModel& m);

// H_rhou - x - t HN_rhou = 0, H_uu - t HN_uu = 0 in the unknowns (u, rho).
hodograph::ImplicitSystem linearize_implicit(const ScalarField& H, const ScalarField& HN);

struct LinearizedSolution {
    hodograph::SolutionGrid grid;
    std::optional<hodograph::ResidualReport> residual;  // evolution of HN by finite differences
};

LinearizedSolution linearize_separable(const ScalarField& H, const ScalarField& HN, const hodograph::GridAxes& axes,
                                       const std::vector<double>& seed_guess,
                                       const hodograph::SolveOptions& opt = {});

}  // namespace hydro::separable
