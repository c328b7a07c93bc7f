#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hydro/exprlang.hpp"

namespace hydro {

using exprlang::Env;
using exprlang::Expr;

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A variable that is a function of the primary variables but is not bound by
// the caller, e.g. the density rho(r - s) of a gas in Riemann invariants.
// Its value is computed on demand and cached in the Env; its first partials
// are Exprs (which may mention the variable itself).
struct ImplicitVar {
    std::string name;
    int id = -1;
    std::function<double(const Env&)> resolve;
    std::map<int, Expr> partials;
};
using ImplicitVars = std::shared_ptr<const std::vector<ImplicitVar>>;

enum class DerivativeMode { Symbolic, FiniteDifference };

struct FieldNode;

// A real function of named variables. Backed by an Expr (exact derivatives),
// by a callback (finite-difference derivatives unless a gradient is given),
// or by a composition of those including integrals along one axis.
class ScalarField {
public:
    using Callback = std::function<double(const Env&)>;

    ScalarField();  // zero
    explicit ScalarField(std::shared_ptr<const FieldNode> n) : n_(std::move(n)) {}

    static ScalarField constant(double v);
    static ScalarField from_expr(const Expr& e, ImplicitVars aux = nullptr);
    // deps lists the variables the callback reads. h_scale is the relative
    // finite-difference step for partials that are not in gradient.
    static ScalarField callback(Callback f, std::vector<int> deps, std::map<int, ScalarField> gradient = {},
                                double h_scale = 1e-4);
    // x -> integral from lower to x of integrand(var = tau) d tau, other
    // variables held at their bound values.
    static ScalarField integral(const ScalarField& integrand, int var, double lower);
    // f with some variables frozen to constants.
    static ScalarField pinned(const ScalarField& f, const std::map<int, double>& values);

    double eval(const Env& env) const;
    ScalarField partial(int var) const;
    ScalarField partial(std::string_view var) const { return partial(exprlang::intern(var)); }

    DerivativeMode mode() const;
    bool symbolic() const { return mode() == DerivativeMode::Symbolic; }
    bool depends_on(int var) const;
    bool is_zero() const;
    std::optional<double> constant_value() const;
    // Non-null when the field is a plain Expr.
    const Expr* expr() const;
    ImplicitVars aux() const;
    std::string describe() const;

    const FieldNode& node() const { return *n_; }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a);

private:
    std::shared_ptr<const FieldNode> n_;
};

inline ScalarField operator*(double c, const ScalarField& f) { return ScalarField::constant(c) * f; }
inline ScalarField operator+(double c, const ScalarField& f) { return ScalarField::constant(c) + f; }
inline ScalarField operator/(double c, const ScalarField& f) { return ScalarField::constant(c) / f; }
inline ScalarField operator-(double c, const ScalarField& f) { return ScalarField::constant(c) - f; }

struct FieldNode {
    virtual ~FieldNode() = default;
    virtual double eval(const Env& env) const = 0;
    virtual ScalarField partial(int var) const = 0;
    virtual DerivativeMode mode() const = 0;
    virtual bool depends_on(int var) const = 0;
    virtual std::string describe() const = 0;
};

struct PartialOptions {
    std::optional<DerivativeMode> mode;  // default: the field's own mode
    double h_scale = 1e-4;
    int order = 4;  // 2 or 4
};

// First partial at a point. Symbolic mode differentiates the Expr; FD mode
// uses central differences with step h_scale * max(1, |value|).
double partial(const ScalarField& f, std::string_view var, const Env& point, const PartialOptions& opts = {});

enum class Dependence { Autonomous, ExplicitT, ExplicitX };

// u^i_t = v_i u^i_x for i = 1..n.
struct DiagonalSystem {
    std::string name;
    std::vector<std::string> vars;
    std::vector<int> ids;
    std::vector<ScalarField> speeds;
    Dependence dependence = Dependence::Autonomous;
    std::vector<std::string> labels;

    std::size_t n() const { return speeds.size(); }
    int id(std::size_t i) const { return ids[i]; }
    Env env(const std::vector<double>& u, double t = 0.0, double x = 0.0) const;
    std::vector<double> speeds_at(const Env& env) const;
};

DiagonalSystem make_system(std::vector<std::string> vars, std::vector<ScalarField> speeds,
                           Dependence dep = Dependence::Autonomous, std::string name = "custom");

// v_i = sum_j u^j - u^i, variables u1..un.
DiagonalSystem epsilon_system(int n);
DiagonalSystem constant_speed_system(const std::vector<double>& c);

// u^i_t = sum_j M_ij(u, x, t) u^j_x; the diagonal case has M = diag(v_i).
struct QuasiLinearSystem {
    std::string name;
    std::vector<std::string> vars;
    std::vector<int> ids;
    std::vector<std::vector<ScalarField>> M;

    std::size_t n() const { return vars.size(); }
    Env env(const std::vector<double>& u, double t = 0.0, double x = 0.0) const;
};

QuasiLinearSystem quasi_linear(const DiagonalSystem& sys);

struct HyperbolicReport {
    double min_gap = 0.0;
    int i = -1, j = -1;
    bool pass = false;
};
HyperbolicReport validate_hyperbolic(const DiagonalSystem& sys, const Env& point, double threshold = 1e-10);

// Values of x, t and the fields with their x-derivatives, d[k][i] = d^k u^i / dx^k.
struct JetPoint {
    double x = 0.0, t = 0.0;
    std::vector<std::vector<double>> d;

    int depth() const { return static_cast<int>(d.size()) - 1; }
    double at(int order, std::size_t i) const;
    // Binds name, name_x, name_xx, ... for every component, plus x and t.
    Env env(const std::vector<std::string>& names) const;
};

// "s", 2 -> "s_xx".
std::string jet_name(const std::string& base, int order);

using CoefficientVector = std::vector<ScalarField>;

// Reproducible uniform samples: mt19937_64, top 53 bits scaled to [0, 1).
class Sampler {
public:
    explicit Sampler(std::uint64_t seed = 42) : gen_(seed) {}
    double uniform(double lo, double hi);
    std::vector<double> point(const std::vector<std::pair<double, double>>& box);

private:
    std::mt19937_64 gen_;
};

}  // namespace hydro
