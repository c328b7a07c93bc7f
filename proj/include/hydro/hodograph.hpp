#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hydro/core.hpp"
#include "hydro/geometry.hpp"
#include "hydro/symmetry.hpp"

namespace hydro::hodograph {

using geometry::Matrix;

// F_i(u; x, t) = 0 defining u(x, t) implicitly.
struct ImplicitSystem {
    std::vector<std::string> vars;
    std::vector<int> ids;
    std::vector<ScalarField> F;
    std::vector<std::vector<ScalarField>> J;  // dF_i / du^j
    std::string provenance;
    std::optional<double> certification;  // symmetry residual of the coefficients, when checked
    std::vector<std::string> warnings;

    std::size_t n() const { return vars.size(); }
    Env env(const std::vector<double>& u, double x, double t) const;
    std::vector<double> eval(const std::vector<double>& u, double x, double t) const;
    Matrix jacobian(const std::vector<double>& u, double x, double t) const;
};

ImplicitSystem make_implicit(std::vector<std::string> vars, std::vector<ScalarField> F, std::string provenance);

// F_i = w_i(u) - t v_i(u) - x. With samples, the symmetry residual of w is
// recorded and a warning is added when it exceeds 1e-6.
ImplicitSystem build_implicit(const DiagonalSystem& sys, const CoefficientVector& w,
                              const std::vector<Env>& samples = {});

// Explicit t (or autonomous): F_i = a_i + exp{-beta [x + int_0^t v_i dt]} for
// beta != 0 and a_i + x + int_0^t v_i dt for beta = 0.
// Explicit x: the same with t and x exchanged and 1 / v_i in place of v_i.
ImplicitSystem build_implicit_t(const DiagonalSystem& sys, const CoefficientVector& a, double beta);

enum class Seed { One, Speeds };

// Reduced recursion operators acting on coefficient vectors.
using RecursionOperator = std::variant<symmetry::RecursionSpecFirst, symmetry::RecursionSpecSecond>;

struct Series {
    CoefficientVector w;
    std::optional<double> residual;  // symmetry residual on the samples
};

// N-fold application of the operator to the seed (w = 1 or w = v).
Series series_coefficients(const DiagonalSystem& sys, const geometry::LameMetric& m, const RecursionOperator& op,
                           Seed seed, int N, const std::vector<Env>& samples = {});

struct GridAxes {
    std::vector<double> x, t;
};
// n points from a to b inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

enum class NodeStatus { Converged, Singular, OutOfDomain, Diverged, Unsolved };
const char* status_name(NodeStatus s);
NodeStatus status_from_name(const std::string& s);

struct SolutionGrid {
    std::vector<std::string> vars;
    std::vector<double> x, t;
    std::vector<double> u;            // (k * nx + j) * n + i for t index k, x index j
    std::vector<NodeStatus> status;   // k * nx + j
    std::string provenance;

    std::size_t n() const { return vars.size(); }
    std::size_t nx() const { return x.size(); }
    std::size_t nt() const { return t.size(); }
    double at(std::size_t k, std::size_t j, std::size_t i) const { return u[(k * nx() + j) * n() + i]; }
    double& at(std::size_t k, std::size_t j, std::size_t i) { return u[(k * nx() + j) * n() + i]; }
    NodeStatus node(std::size_t k, std::size_t j) const { return status[k * nx() + j]; }
    std::size_t converged() const;
    double converged_fraction() const;
};

struct SolveOptions {
    int max_iter = 50;
    double tol = 1e-12;          // on max |F_i|
    double singular_tol = 1e-12; // |det J| relative to the product of row norms
    std::optional<std::pair<std::size_t, std::size_t>> seed_node;  // (x index, t index); default: nearest to (x0, t0)
    double x0 = 0.0, t0 = 0.0;
    unsigned threads = 1;
};

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NodeResult {
    NodeStatus status = NodeStatus::Unsolved;
    std::vector<double> u;
    int iterations = 0;
    double residual = 0.0;
};

// Damped Newton from a starting point.
NodeResult newton(const ImplicitSystem& imp, std::vector<double> guess, double x, double t, const SolveOptions& opt);

// Continuation over the grid: the seed row is swept outward from the seed
// node; every other row is warm-started column by column from the row nearer
// the seed. Throws SolveError when the seed node fails.
SolutionGrid solve_grid(const ImplicitSystem& imp, const GridAxes& axes, const std::vector<double>& seed_guess,
                        const SolveOptions& opt = {});

struct ResidualReport {
    double max_residual = 0.0;
    std::size_t nodes = 0;  // interior nodes with a converged stencil
    std::size_t worst_x = 0, worst_t = 0, worst_component = 0;
};

// max over interior nodes with a converged 5-point stencil of
// |u^i_t - sum_j M_ij u^j_x| / max(1, |sum_j M_ij u^j_x|), central differences.
ResidualReport residual_pde(const QuasiLinearSystem& sys, const SolutionGrid& grid);
ResidualReport residual_pde(const DiagonalSystem& sys, const SolutionGrid& grid);

// CSV with columns x, t, <vars>, status; shortest round-trip decimals.
std::string to_csv(const SolutionGrid& g);
SolutionGrid from_csv(const std::string& text);
// Long format x, t, component, value for plotting (converged nodes only).
std::string to_plot_csv(const SolutionGrid& g);
std::string to_json(const SolutionGrid& g, const std::optional<ResidualReport>& report = std::nullopt);
SolutionGrid from_json(const std::string& text);

}  // namespace hydro::hodograph
