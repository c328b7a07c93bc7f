#pragma once

// Small expression language: constants, variables, neg/exp/ln/sqrt/abs/sgn,
// + - * / and pow with a constant exponent.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hydro::exprlang {

// Variable names are interned once; nodes and environments carry the ids.
int intern(std::string_view name);
const std::string& symbol_name(int id);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& msg);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class UnboundVariable : public std::runtime_error {
public:
    explicit UnboundVariable(const std::string& name)
        : std::runtime_error("unbound variable '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class UnsupportedAntiderivative : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bindings for evaluation. Primary values are set by the caller; the cache
// holds derived (implicit) variables and is cleared whenever a primary changes.
class Env {
public:
    Env() = default;
    Env(std::initializer_list<std::pair<std::string, double>> init);

    void set(std::string_view name, double v) { set(intern(name), v); }
    void set(int id, double v);
    bool has(int id) const;
    std::optional<double> get(int id) const;
    double at(std::string_view name) const;

    void cache(int id, double v) const;
    std::optional<double> cached(int id) const;

    const std::vector<std::pair<int, double>>& values() const { return vals_; }

private:
    std::vector<std::pair<int, double>> vals_;
    mutable std::vector<std::pair<int, double>> cache_;
};

enum class Op { Const, Var, Neg, Exp, Ln, Sqrt, Abs, Sgn, Add, Sub, Mul, Div, Pow };

struct Node {
    Op op;
    double value = 0.0;  // Const value, or the exponent of Pow
    int var = -1;        // Var id
    std::shared_ptr<const Node> a, b;
};

class Expr {
public:
    Expr();  // the constant 0
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    static Expr constant(double v);
    static Expr variable(std::string_view name);
    static Expr variable(int id);

    const Node& node() const { return *n_; }
    const std::shared_ptr<const Node>& ptr() const { return n_; }
    Op op() const { return n_->op; }
    bool is_const() const { return n_->op == Op::Const; }
    bool is_const(double v) const { return is_const() && n_->value == v; }
    double const_value() const { return n_->value; }

    double eval(const Env& env) const;
    // Throws if any variable is present.
    double eval_const() const;

    bool depends_on(int id) const;
    bool depends_on(std::string_view name) const { return depends_on(intern(name)); }
    std::vector<int> variables() const;
    std::size_t size() const;

    std::string str() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

private:
    std::shared_ptr<const Node> n_;
};

Expr pow(const Expr& base, double exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sqrt(const Expr& a);
Expr abs(const Expr& a);
Expr sgn(const Expr& a);

struct ParseOptions {
    // When set, identifiers outside this list (and outside params) are errors.
    std::optional<std::vector<std::string>> variables;
    // Named constants substituted at parse time.
    std::map<std::string, double> params;
};

Expr parse(std::string_view source, const ParseOptions& opts = {});
Expr parse(std::string_view source, const std::vector<std::string>& variables,
           const std::map<std::string, double>& params = {});

// Exact symbolic derivative with light constant folding. d|a| uses sgn(a),
// which is 0 at 0 (subgradient convention).
Expr differentiate(const Expr& e, std::string_view var);
Expr differentiate(const Expr& e, int var);

// F with dF/dvar = e and F(lower) = 0. Supported: sums of c * var^p (p != -1)
// and c * exp(k var) where c is free of var. Terms with p + 1 <= 0 require a
// nonzero lower limit. Anything else throws UnsupportedAntiderivative.
Expr antiderivative(const Expr& e, std::string_view var, double lower = 0.0);

Expr substitute(const Expr& e, std::string_view var, const Expr& replacement);
Expr substitute(const Expr& e, const std::map<int, Expr>& replacements);

// Shortest decimal that reads back to the same double (at most 17 digits).
std::string format_double(double v);

}  // namespace hydro::exprlang
