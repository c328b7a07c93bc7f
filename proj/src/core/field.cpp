#include <algorithm>
#include <cmath>

#include "hydro/core.hpp"
#include "hydro/quadrature.hpp"

namespace hydro {

namespace ex = exprlang;

namespace {

void resolve_aux(const ImplicitVars& aux, const Env& env) {
    if (!aux) return;
    for (const auto& a : *aux)
        if (!env.has(a.id) && !env.cached(a.id)) env.cache(a.id, a.resolve(env));
}

double checked(double v, const char* what) {
    if (std::isnan(v)) throw DomainError(std::string("evaluation outside the domain of ") + what);
    return v;
}

struct ExprNode final : FieldNode {
    Expr e;
    ImplicitVars aux;
    ExprNode(Expr e_, ImplicitVars a) : e(std::move(e_)), aux(std::move(a)) {}

    double eval(const Env& env) const override {
        resolve_aux(aux, env);
        double v = e.eval(env);
        if (std::isnan(v)) throw DomainError("expression " + e.str() + " is undefined at this point");
        return v;
    }
    ScalarField partial(int var) const override {
        Expr d = ex::differentiate(e, var);
        if (aux)
            for (const auto& a : *aux) {
                auto p = a.partials.find(var);
                if (p == a.partials.end() || !e.depends_on(a.id)) continue;
                d = d + ex::differentiate(e, a.id) * p->second;
            }
        return ScalarField::from_expr(d, aux);
    }
    DerivativeMode mode() const override { return DerivativeMode::Symbolic; }
    bool depends_on(int var) const override {
        if (e.depends_on(var)) return true;
        if (aux)
            for (const auto& a : *aux)
                if (a.partials.count(var) && e.depends_on(a.id)) return true;
        return false;
    }
    std::string describe() const override { return e.str(); }
};

struct CallbackNode final : FieldNode {
    ScalarField::Callback f;
    std::vector<int> deps;
    std::map<int, ScalarField> gradient;
    double h_scale;

    double eval(const Env& env) const override { return checked(f(env), "a callback field"); }
    ScalarField partial(int var) const override;
    DerivativeMode mode() const override { return DerivativeMode::FiniteDifference; }
    bool depends_on(int var) const override { return std::find(deps.begin(), deps.end(), var) != deps.end(); }
    std::string describe() const override { return "<callback>"; }
};

double central_difference(const ScalarField& f, int var, const Env& env, double h_scale, int order) {
    auto x0 = env.get(var);
    if (!x0) throw ex::UnboundVariable(ex::symbol_name(var));
    double x = *x0;
    double h = h_scale * std::max(1.0, std::fabs(x));
    Env e = env;
    auto at = [&](double v) {
        e.set(var, v);
        return f.eval(e);
    };
    if (order == 2) return (at(x + h) - at(x - h)) / (2.0 * h);
    return (-at(x + 2 * h) + 8.0 * at(x + h) - 8.0 * at(x - h) + at(x - 2 * h)) / (12.0 * h);
}

// Finite-difference partial of another field. Nested partials use a coarser
// step so that the truncation and round-off errors stay balanced.
struct FdNode final : FieldNode {
    ScalarField f;
    int var;
    double h_scale;
    FdNode(ScalarField f_, int v, double h) : f(std::move(f_)), var(v), h_scale(h) {}

    double eval(const Env& env) const override { return central_difference(f, var, env, h_scale, 4); }
    ScalarField partial(int k) const override {
        if (!depends_on(k)) return ScalarField();
        return ScalarField(std::make_shared<FdNode>(ScalarField(shared_self()), k, 1e-3));
    }
    DerivativeMode mode() const override { return DerivativeMode::FiniteDifference; }
    bool depends_on(int k) const override { return f.depends_on(k); }
    std::string describe() const override { return "d/d" + ex::symbol_name(var) + "[" + f.describe() + "]"; }

    std::shared_ptr<const FieldNode> shared_self() const { return self.lock(); }
    std::weak_ptr<const FieldNode> self;
};

ScalarField make_fd(const ScalarField& f, int var, double h) {
    auto n = std::make_shared<FdNode>(f, var, h);
    n->self = n;
    return ScalarField(n);
}

ScalarField CallbackNode::partial(int var) const {
    if (!depends_on(var)) return ScalarField();
    auto g = gradient.find(var);
    if (g != gradient.end()) return g->second;
    // Rebuild a handle to this node; callbacks are cheap to copy.
    auto copy = std::make_shared<CallbackNode>(*this);
    return make_fd(ScalarField(copy), var, h_scale);
}

enum class BinOp { Add, Sub, Mul, Div, Neg };

struct ArithNode final : FieldNode {
    BinOp op;
    ScalarField a, b;
    ArithNode(BinOp o, ScalarField x, ScalarField y) : op(o), a(std::move(x)), b(std::move(y)) {}

    double eval(const Env& env) const override {
        switch (op) {
            case BinOp::Add: return a.eval(env) + b.eval(env);
            case BinOp::Sub: return a.eval(env) - b.eval(env);
            case BinOp::Mul: return a.eval(env) * b.eval(env);
            case BinOp::Div: return a.eval(env) / b.eval(env);
            case BinOp::Neg: return -a.eval(env);
        }
        return 0.0;
    }
    ScalarField partial(int var) const override {
        switch (op) {
            case BinOp::Add: return a.partial(var) + b.partial(var);
            case BinOp::Sub: return a.partial(var) - b.partial(var);
            case BinOp::Mul: return a.partial(var) * b + a * b.partial(var);
            case BinOp::Div: return a.partial(var) / b - a * b.partial(var) / (b * b);
            case BinOp::Neg: return -a.partial(var);
        }
        return ScalarField();
    }
    DerivativeMode mode() const override {
        if (a.mode() == DerivativeMode::FiniteDifference) return DerivativeMode::FiniteDifference;
        if (op != BinOp::Neg && b.mode() == DerivativeMode::FiniteDifference) return DerivativeMode::FiniteDifference;
        return DerivativeMode::Symbolic;
    }
    bool depends_on(int var) const override {
        return a.depends_on(var) || (op != BinOp::Neg && b.depends_on(var));
    }
    std::string describe() const override {
        static const char* s[] = {" + ", " - ", " * ", " / "};
        if (op == BinOp::Neg) return "(-" + a.describe() + ")";
        return "(" + a.describe() + s[static_cast<int>(op)] + b.describe() + ")";
    }
};

struct IntegralNode final : FieldNode {
    ScalarField g;
    int var;
    double lower;
    IntegralNode(ScalarField g_, int v, double lo) : g(std::move(g_)), var(v), lower(lo) {}

    double eval(const Env& env) const override {
        auto x = env.get(var);
        if (!x) throw ex::UnboundVariable(ex::symbol_name(var));
        Env e = env;
        auto f = [&](double tau) {
            e.set(var, tau);
            return g.eval(e);
        };
        return integrate(f, lower, *x);
    }
    ScalarField partial(int k) const override {
        if (k == var) return g;
        ScalarField dg = g.partial(k);
        if (dg.is_zero()) return ScalarField();
        return ScalarField::integral(dg, var, lower);
    }
    DerivativeMode mode() const override { return g.mode(); }
    bool depends_on(int k) const override { return k == var || g.depends_on(k); }
    std::string describe() const override {
        return "int_{" + ex::format_double(lower) + "}^{" + ex::symbol_name(var) + "} " + g.describe();
    }
};

struct PinnedNode final : FieldNode {
    ScalarField f;
    std::map<int, double> values;
    PinnedNode(ScalarField f_, std::map<int, double> v) : f(std::move(f_)), values(std::move(v)) {}

    double eval(const Env& env) const override {
        Env e = env;
        for (const auto& [k, v] : values) e.set(k, v);
        return f.eval(e);
    }
    ScalarField partial(int k) const override {
        if (values.count(k)) return ScalarField();
        ScalarField d = f.partial(k);
        if (d.is_zero()) return d;
        return ScalarField::pinned(d, values);
    }
    DerivativeMode mode() const override { return f.mode(); }
    bool depends_on(int k) const override { return !values.count(k) && f.depends_on(k); }
    std::string describe() const override { return "pinned[" + f.describe() + "]"; }
};

const ExprNode* as_expr(const ScalarField& f) { return dynamic_cast<const ExprNode*>(&f.node()); }

// Two Expr-backed fields can be merged into one Expr when their implicit
// variable sets agree (or one side has none).
bool mergeable(const ScalarField& a, const ScalarField& b, ImplicitVars& out) {
    const ExprNode* x = as_expr(a);
    const ExprNode* y = as_expr(b);
    if (!x || !y) return false;
    if (!x->aux || x->aux == y->aux) {
        out = y->aux ? y->aux : x->aux;
        return true;
    }
    if (!y->aux) {
        out = x->aux;
        return true;
    }
    return false;
}

ScalarField arith(BinOp op, const ScalarField& a, const ScalarField& b) {
    ImplicitVars aux;
    if (mergeable(a, b, aux)) {
        const Expr& x = as_expr(a)->e;
        const Expr& y = as_expr(b)->e;
        switch (op) {
            case BinOp::Add: return ScalarField::from_expr(x + y, aux);
            case BinOp::Sub: return ScalarField::from_expr(x - y, aux);
            case BinOp::Mul: return ScalarField::from_expr(x * y, aux);
            case BinOp::Div: return ScalarField::from_expr(x / y, aux);
            case BinOp::Neg: break;
        }
    }
    return ScalarField(std::make_shared<ArithNode>(op, a, b));
}

}  // namespace

ScalarField::ScalarField() : n_(std::make_shared<ExprNode>(Expr::constant(0.0), nullptr)) {}

ScalarField ScalarField::constant(double v) { return ScalarField(std::make_shared<ExprNode>(Expr::constant(v), nullptr)); }

ScalarField ScalarField::from_expr(const Expr& e, ImplicitVars aux) {
    if (aux) {
        bool used = false;
        for (const auto& a : *aux) used = used || e.depends_on(a.id);
        if (!used) aux = nullptr;
    }
    return ScalarField(std::make_shared<ExprNode>(e, std::move(aux)));
}

ScalarField ScalarField::callback(Callback f, std::vector<int> deps, std::map<int, ScalarField> gradient,
                                  double h_scale) {
    auto n = std::make_shared<CallbackNode>();
    n->f = std::move(f);
    n->deps = std::move(deps);
    n->gradient = std::move(gradient);
    n->h_scale = h_scale;
    return ScalarField(n);
}

ScalarField ScalarField::integral(const ScalarField& integrand, int var, double lower) {
    if (integrand.is_zero()) return ScalarField();
    return ScalarField(std::make_shared<IntegralNode>(integrand, var, lower));
}

ScalarField ScalarField::pinned(const ScalarField& f, const std::map<int, double>& values) {
    const ExprNode* x = as_expr(f);
    if (x && !x->aux) {
        std::map<int, Expr> rep;
        for (const auto& [k, v] : values) rep.emplace(k, Expr::constant(v));
        return from_expr(ex::substitute(x->e, rep));
    }
    bool any = false;
    for (const auto& kv : values) any = any || f.depends_on(kv.first);
    if (!any) return f;
    return ScalarField(std::make_shared<PinnedNode>(f, values));
}

double ScalarField::eval(const Env& env) const { return n_->eval(env); }

ScalarField ScalarField::partial(int var) const {
    if (!n_->depends_on(var)) return ScalarField();
    return n_->partial(var);
}

DerivativeMode ScalarField::mode() const { return n_->mode(); }
bool ScalarField::depends_on(int var) const { return n_->depends_on(var); }

bool ScalarField::is_zero() const {
    auto c = constant_value();
    return c && *c == 0.0;
}

std::optional<double> ScalarField::constant_value() const {
    const ExprNode* x = as_expr(*this);
    if (x && x->e.is_const()) return x->e.const_value();
    return std::nullopt;
}

const Expr* ScalarField::expr() const {
    const ExprNode* x = as_expr(*this);
    return x ? &x->e : nullptr;
}

ImplicitVars ScalarField::aux() const {
    const ExprNode* x = as_expr(*this);
    return x ? x->aux : nullptr;
}

std::string ScalarField::describe() const { return n_->describe(); }

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return arith(BinOp::Add, a, b);
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    return arith(BinOp::Sub, a, b);
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    if (a.is_zero() || b.is_zero()) return ScalarField();
    auto ca = a.constant_value(), cb = b.constant_value();
    if (ca && *ca == 1.0) return b;
    if (cb && *cb == 1.0) return a;
    return arith(BinOp::Mul, a, b);
}

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
    auto cb = b.constant_value();
    if (cb && *cb == 1.0) return a;
    if (a.is_zero() && !(cb && *cb == 0.0)) return ScalarField();
    return arith(BinOp::Div, a, b);
}

ScalarField operator-(const ScalarField& a) {
    if (const ExprNode* x = as_expr(a)) return ScalarField::from_expr(-x->e, x->aux);
    return ScalarField(std::make_shared<ArithNode>(BinOp::Neg, a, ScalarField()));
}

double partial(const ScalarField& f, std::string_view var, const Env& point, const PartialOptions& opts) {
    int id = ex::intern(var);
    DerivativeMode m = opts.mode.value_or(f.mode());
    if (m == DerivativeMode::Symbolic) return f.partial(id).eval(point);
    if (!f.depends_on(id)) return 0.0;
    return central_difference(f, id, point, opts.h_scale, opts.order);
}

}  // namespace hydro
