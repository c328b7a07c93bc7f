#include "hydro/exprlang.hpp"

#include <charconv>
#include <cmath>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace hydro::exprlang {

namespace {

struct SymbolTable {
    std::mutex mu;
    std::unordered_map<std::string, int> ids;
    std::deque<std::string> names;  // deque keeps references stable
};

SymbolTable& symbols() {
    static SymbolTable t;
    return t;
}

std::shared_ptr<const Node> make(Op op, double value, int var, std::shared_ptr<const Node> a,
                                 std::shared_ptr<const Node> b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->var = var;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Expr unary(Op op, const Expr& a) {
    return Expr(make(op, 0.0, -1, a.ptr(), nullptr));
}

Expr binary(Op op, const Expr& a, const Expr& b) {
    return Expr(make(op, 0.0, -1, a.ptr(), b.ptr()));
}

double eval_node(const Node& n, const Env& env) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: {
            if (auto v = env.get(n.var)) return *v;
            if (auto v = env.cached(n.var)) return *v;
            throw UnboundVariable(symbol_name(n.var));
        }
        case Op::Neg: return -eval_node(*n.a, env);
        case Op::Exp: return std::exp(eval_node(*n.a, env));
        case Op::Ln: return std::log(eval_node(*n.a, env));
        case Op::Sqrt: return std::sqrt(eval_node(*n.a, env));
        case Op::Abs: return std::fabs(eval_node(*n.a, env));
        case Op::Sgn: {
            double x = eval_node(*n.a, env);
            return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
        }
        case Op::Add: return eval_node(*n.a, env) + eval_node(*n.b, env);
        case Op::Sub: return eval_node(*n.a, env) - eval_node(*n.b, env);
        case Op::Mul: return eval_node(*n.a, env) * eval_node(*n.b, env);
        case Op::Div: return eval_node(*n.a, env) / eval_node(*n.b, env);
        case Op::Pow: {
            double x = eval_node(*n.a, env);
            if (n.value == 2.0) return x * x;
            return std::pow(x, n.value);
        }
    }
    return 0.0;
}

bool depends(const Node& n, int id) {
    switch (n.op) {
        case Op::Const: return false;
        case Op::Var: return n.var == id;
        default:
            if (n.a && depends(*n.a, id)) return true;
            return n.b && depends(*n.b, id);
    }
}

void collect(const Node& n, std::vector<int>& out) {
    if (n.op == Op::Var) {
        for (int v : out)
            if (v == n.var) return;
        out.push_back(n.var);
        return;
    }
    if (n.a) collect(*n.a, out);
    if (n.b) collect(*n.b, out);
}

std::size_t count(const Node& n) {
    std::size_t c = 1;
    if (n.a) c += count(*n.a);
    if (n.b) c += count(*n.b);
    return c;
}

std::string print_const(double v) {
    std::string s = format_double(v);
    if (v < 0 || (v == 0 && std::signbit(v))) return "(" + s + ")";
    return s;
}

void print(const Node& n, std::string& out) {
    switch (n.op) {
        case Op::Const: out += print_const(n.value); return;
        case Op::Var: out += symbol_name(n.var); return;
        case Op::Neg:
            out += "(-";
            print(*n.a, out);
            out += ")";
            return;
        case Op::Exp:
        case Op::Ln:
        case Op::Sqrt:
        case Op::Abs:
        case Op::Sgn: {
            static const char* names[] = {"exp", "ln", "sqrt", "abs", "sgn"};
            out += names[static_cast<int>(n.op) - static_cast<int>(Op::Exp)];
            out += "(";
            print(*n.a, out);
            out += ")";
            return;
        }
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            static const char* ops[] = {" + ", " - ", " * ", " / "};
            out += "(";
            print(*n.a, out);
            out += ops[static_cast<int>(n.op) - static_cast<int>(Op::Add)];
            print(*n.b, out);
            out += ")";
            return;
        }
        case Op::Pow:
            print(*n.a, out);
            out += "^(";
            out += format_double(n.value);
            out += ")";
            return;
    }
}

}  // namespace

int intern(std::string_view name) {
    auto& t = symbols();
    std::lock_guard<std::mutex> lock(t.mu);
    std::string key(name);
    auto it = t.ids.find(key);
    if (it != t.ids.end()) return it->second;
    int id = static_cast<int>(t.names.size());
    t.names.push_back(key);
    t.ids.emplace(std::move(key), id);
    return id;
}

const std::string& symbol_name(int id) {
    auto& t = symbols();
    std::lock_guard<std::mutex> lock(t.mu);
    return t.names.at(static_cast<std::size_t>(id));
}

ParseError::ParseError(std::size_t offset, const std::string& msg)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + msg), offset_(offset) {}

Env::Env(std::initializer_list<std::pair<std::string, double>> init) {
    for (const auto& [k, v] : init) set(k, v);
}

void Env::set(int id, double v) {
    cache_.clear();
    for (auto& p : vals_)
        if (p.first == id) {
            p.second = v;
            return;
        }
    vals_.emplace_back(id, v);
}

bool Env::has(int id) const {
    for (const auto& p : vals_)
        if (p.first == id) return true;
    return false;
}

std::optional<double> Env::get(int id) const {
    for (const auto& p : vals_)
        if (p.first == id) return p.second;
    return std::nullopt;
}

double Env::at(std::string_view name) const {
    int id = intern(name);
    if (auto v = get(id)) return *v;
    if (auto v = cached(id)) return *v;
    throw UnboundVariable(std::string(name));
}

void Env::cache(int id, double v) const {
    for (auto& p : cache_)
        if (p.first == id) {
            p.second = v;
            return;
        }
    cache_.emplace_back(id, v);
}

std::optional<double> Env::cached(int id) const {
    for (const auto& p : cache_)
        if (p.first == id) return p.second;
    return std::nullopt;
}

Expr::Expr() : n_(make(Op::Const, 0.0, -1, nullptr, nullptr)) {}

Expr Expr::constant(double v) { return Expr(make(Op::Const, v, -1, nullptr, nullptr)); }
Expr Expr::variable(std::string_view name) { return variable(intern(name)); }
Expr Expr::variable(int id) { return Expr(make(Op::Var, 0.0, id, nullptr, nullptr)); }

double Expr::eval(const Env& env) const { return eval_node(*n_, env); }

double Expr::eval_const() const {
    Env empty;
    return eval_node(*n_, empty);
}

bool Expr::depends_on(int id) const { return depends(*n_, id); }

std::vector<int> Expr::variables() const {
    std::vector<int> out;
    collect(*n_, out);
    return out;
}

std::size_t Expr::size() const { return count(*n_); }

std::string Expr::str() const {
    std::string out;
    print(*n_, out);
    return out;
}

// Smart constructors fold constants and drop neutral elements. They never
// change the value of a finite expression.
Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr::constant(a.const_value() + b.const_value());
    if (a.is_const(0.0)) return b;
    if (b.is_const(0.0)) return a;
    if (b.op() == Op::Neg) return a - Expr(b.node().a);
    return Expr(make(Op::Add, 0.0, -1, a.ptr(), b.ptr()));
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr::constant(a.const_value() - b.const_value());
    if (b.is_const(0.0)) return a;
    if (a.is_const(0.0)) return -b;
    if (b.op() == Op::Neg) return a + Expr(b.node().a);
    return Expr(make(Op::Sub, 0.0, -1, a.ptr(), b.ptr()));
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr::constant(a.const_value() * b.const_value());
    if (a.is_const(0.0) || b.is_const(0.0)) return Expr::constant(0.0);
    if (a.is_const(1.0)) return b;
    if (b.is_const(1.0)) return a;
    if (a.is_const(-1.0)) return -b;
    if (b.is_const(-1.0)) return -a;
    return Expr(make(Op::Mul, 0.0, -1, a.ptr(), b.ptr()));
}

Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const() && b.const_value() != 0.0)
        return Expr::constant(a.const_value() / b.const_value());
    if (a.is_const(0.0) && !(b.is_const(0.0))) return Expr::constant(0.0);
    if (b.is_const(1.0)) return a;
    if (b.is_const(-1.0)) return -a;
    return Expr(make(Op::Div, 0.0, -1, a.ptr(), b.ptr()));
}

Expr operator-(const Expr& a) {
    if (a.is_const()) return Expr::constant(-a.const_value());
    if (a.op() == Op::Neg) return Expr(a.node().a);
    return Expr(make(Op::Neg, 0.0, -1, a.ptr(), nullptr));
}

Expr pow(const Expr& base, double exponent) {
    if (exponent == 0.0) return Expr::constant(1.0);
    if (exponent == 1.0) return base;
    if (base.is_const()) return Expr::constant(std::pow(base.const_value(), exponent));
    if (base.op() == Op::Pow) {
        // (x^p)^q = x^(pq) only when it cannot change the branch.
        double p = base.node().value;
        if (std::floor(exponent) == exponent && std::floor(p) == p)
            return pow(Expr(base.node().a), p * exponent);
    }
    return Expr(make(Op::Pow, exponent, -1, base.ptr(), nullptr));
}

Expr exp(const Expr& a) {
    if (a.is_const()) return Expr::constant(std::exp(a.const_value()));
    return unary(Op::Exp, a);
}
Expr ln(const Expr& a) {
    if (a.is_const() && a.const_value() > 0) return Expr::constant(std::log(a.const_value()));
    return unary(Op::Ln, a);
}
Expr sqrt(const Expr& a) {
    if (a.is_const() && a.const_value() >= 0) return Expr::constant(std::sqrt(a.const_value()));
    return unary(Op::Sqrt, a);
}
Expr abs(const Expr& a) {
    if (a.is_const()) return Expr::constant(std::fabs(a.const_value()));
    return unary(Op::Abs, a);
}
Expr sgn(const Expr& a) {
    if (a.is_const()) {
        double x = a.const_value();
        return Expr::constant(x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0));
    }
    return unary(Op::Sgn, a);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {
Expr raw_binary(Op op, const Expr& a, const Expr& b) { return binary(op, a, b); }
Expr raw_unary(Op op, const Expr& a) { return unary(op, a); }
Expr raw_pow(const Expr& a, double p) { return Expr(make(Op::Pow, p, -1, a.ptr(), nullptr)); }
}  // namespace detail

}  // namespace hydro::exprlang
