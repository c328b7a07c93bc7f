#include <cctype>
#include <cmath>
#include <cstdlib>

#include "hydro/exprlang.hpp"

namespace hydro::exprlang {

namespace detail {
Expr raw_binary(Op op, const Expr& a, const Expr& b);
Expr raw_unary(Op op, const Expr& a);
Expr raw_pow(const Expr& a, double p);
}  // namespace detail

namespace {

// Recursive descent. Precedence, high to low: ^, unary minus, * /, + -.
// All binary operators associate to the left. The tree is kept exactly as
// written except that operations on two constants are folded, so printing and
// re-parsing reproduces the same evaluation.
class Parser {
public:
    Parser(std::string_view src, const ParseOptions& opts) : src_(src), opts_(opts) {}

    Expr run() {
        skip();
        if (pos_ >= src_.size()) fail("empty expression");
        Expr e = expr();
        skip();
        if (pos_ < src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
        return e;
    }

private:
    std::string_view src_;
    const ParseOptions& opts_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) { throw ParseError(at, msg); }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static Expr fold(Op op, const Expr& a, const Expr& b) {
        if (a.is_const() && b.is_const()) {
            double x = a.const_value(), y = b.const_value();
            switch (op) {
                case Op::Add: return Expr::constant(x + y);
                case Op::Sub: return Expr::constant(x - y);
                case Op::Mul: return Expr::constant(x * y);
                case Op::Div: return Expr::constant(x / y);
                default: break;
            }
        }
        return detail::raw_binary(op, a, b);
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = fold(Op::Add, lhs, term());
            else if (accept('-'))
                lhs = fold(Op::Sub, lhs, term());
            else
                return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = fold(Op::Mul, lhs, unary());
            else if (accept('/'))
                lhs = fold(Op::Div, lhs, unary());
            else
                return lhs;
        }
    }

    Expr negate(const Expr& a) {
        if (a.is_const()) return Expr::constant(-a.const_value());
        return detail::raw_unary(Op::Neg, a);
    }

    Expr unary() {
        if (accept('-')) return negate(unary());
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        for (;;) {
            skip();
            if (pos_ >= src_.size() || src_[pos_] != '^') return base;
            ++pos_;
            skip();
            std::size_t at = pos_;
            Expr ex = exponent();
            if (!ex.is_const()) fail_at(at, "exponent of '^' must be a constant expression");
            double p = ex.const_value();
            if (base.is_const())
                base = Expr::constant(std::pow(base.const_value(), p));
            else
                base = detail::raw_pow(base, p);
        }
    }

    Expr exponent() {
        if (accept('-')) return negate(exponent());
        if (accept('+')) return exponent();
        return primary();
    }

    Expr primary() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected '") + c + "'");
    }

    Expr number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) fail_at(start, "malformed number '" + text + "'");
        return Expr::constant(v);
    }

    Expr identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        skip();
        bool call = pos_ < src_.size() && src_[pos_] == '(';
        if (call) {
            Op op;
            if (name == "exp")
                op = Op::Exp;
            else if (name == "ln")
                op = Op::Ln;
            else if (name == "sqrt")
                op = Op::Sqrt;
            else if (name == "abs")
                op = Op::Abs;
            else if (name == "sgn")
                op = Op::Sgn;
            else
                fail_at(start, "unknown function '" + name + "'");
            ++pos_;
            Expr arg = expr();
            if (!accept(')')) fail("expected ')'");
            if (arg.is_const()) {
                double x = arg.const_value();
                switch (op) {
                    case Op::Exp: return Expr::constant(std::exp(x));
                    case Op::Ln: return Expr::constant(std::log(x));
                    case Op::Sqrt: return Expr::constant(std::sqrt(x));
                    case Op::Abs: return Expr::constant(std::fabs(x));
                    default: return Expr::constant(x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0));
                }
            }
            return detail::raw_unary(op, arg);
        }
        auto it = opts_.params.find(name);
        if (it != opts_.params.end()) return Expr::constant(it->second);
        if (opts_.variables) {
            bool known = false;
            for (const auto& v : *opts_.variables)
                if (v == name) known = true;
            if (!known) fail_at(start, "unknown identifier '" + name + "'");
        }
        return Expr::variable(name);
    }
};

}  // namespace

Expr parse(std::string_view source, const ParseOptions& opts) { return Parser(source, opts).run(); }

Expr parse(std::string_view source, const std::vector<std::string>& variables,
           const std::map<std::string, double>& params) {
    ParseOptions o;
    o.variables = variables;
    o.params = params;
    return parse(source, o);
}

}  // namespace hydro::exprlang
