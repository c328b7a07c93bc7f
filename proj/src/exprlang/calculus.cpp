#include <cmath>
#include <unordered_map>

#include "hydro/exprlang.hpp"

namespace hydro::exprlang {

namespace {

using Memo = std::unordered_map<const Node*, Expr>;

Expr diff(const Expr& e, int var, Memo& memo) {
    const Node& n = e.node();
    if (n.op == Op::Const) return Expr::constant(0.0);
    if (n.op == Op::Var) return Expr::constant(n.var == var ? 1.0 : 0.0);
    auto it = memo.find(&n);
    if (it != memo.end()) return it->second;

    Expr a = n.a ? Expr(n.a) : Expr();
    Expr b = n.b ? Expr(n.b) : Expr();
    Expr r;
    switch (n.op) {
        case Op::Neg: r = -diff(a, var, memo); break;
        case Op::Exp: r = e * diff(a, var, memo); break;
        case Op::Ln: r = diff(a, var, memo) / a; break;
        case Op::Sqrt: r = diff(a, var, memo) / (Expr::constant(2.0) * e); break;
        case Op::Abs: r = sgn(a) * diff(a, var, memo); break;
        case Op::Sgn: r = Expr::constant(0.0); break;
        case Op::Add: r = diff(a, var, memo) + diff(b, var, memo); break;
        case Op::Sub: r = diff(a, var, memo) - diff(b, var, memo); break;
        case Op::Mul: r = diff(a, var, memo) * b + a * diff(b, var, memo); break;
        case Op::Div: {
            Expr da = diff(a, var, memo), db = diff(b, var, memo);
            if (db.is_const(0.0))
                r = da / b;
            else
                r = (da * b - a * db) / pow(b, 2.0);
            break;
        }
        case Op::Pow: {
            Expr da = diff(a, var, memo);
            if (da.is_const(0.0))
                r = Expr::constant(0.0);
            else
                r = Expr::constant(n.value) * pow(a, n.value - 1.0) * da;
            break;
        }
        default: break;
    }
    memo.emplace(&n, r);
    return r;
}

// One additive term of the antiderivative class: coef * var^p * E where E is
// a product of exponentials whose log is linear in var with slope rate.
struct Term {
    Expr coef = Expr::constant(1.0);
    double p = 0.0;
    bool has_exp = false;
    Expr ex = Expr::constant(1.0);
    Expr rate = Expr::constant(0.0);
};

[[noreturn]] void unsupported(const Expr& e, int var) {
    throw UnsupportedAntiderivative("no closed-form antiderivative of " + e.str() + " in " + symbol_name(var));
}

Term multiply(const Term& x, const Term& y) {
    Term t;
    t.coef = x.coef * y.coef;
    t.p = x.p + y.p;
    t.has_exp = x.has_exp || y.has_exp;
    t.ex = x.ex * y.ex;
    t.rate = x.rate + y.rate;
    return t;
}

std::vector<Term> terms(const Expr& e, int var, const Expr& whole);

std::vector<Term> product(const std::vector<Term>& xs, const std::vector<Term>& ys) {
    std::vector<Term> out;
    out.reserve(xs.size() * ys.size());
    for (const auto& x : xs)
        for (const auto& y : ys) out.push_back(multiply(x, y));
    return out;
}

std::vector<Term> terms(const Expr& e, int var, const Expr& whole) {
    if (!e.depends_on(var)) {
        Term t;
        t.coef = e;
        return {t};
    }
    const Node& n = e.node();
    Expr a = n.a ? Expr(n.a) : Expr();
    Expr b = n.b ? Expr(n.b) : Expr();
    switch (n.op) {
        case Op::Var: {
            Term t;
            t.p = 1.0;
            return {t};
        }
        case Op::Neg: {
            auto ts = terms(a, var, whole);
            for (auto& t : ts) t.coef = -t.coef;
            return ts;
        }
        case Op::Add:
        case Op::Sub: {
            auto xs = terms(a, var, whole);
            auto ys = terms(b, var, whole);
            for (auto& y : ys) {
                if (n.op == Op::Sub) y.coef = -y.coef;
                xs.push_back(y);
            }
            return xs;
        }
        case Op::Mul: return product(terms(a, var, whole), terms(b, var, whole));
        case Op::Div: {
            auto den = terms(b, var, whole);
            if (den.size() != 1) unsupported(whole, var);
            Term inv;
            inv.coef = Expr::constant(1.0) / den[0].coef;
            inv.p = -den[0].p;
            inv.has_exp = den[0].has_exp;
            inv.ex = Expr::constant(1.0) / den[0].ex;
            inv.rate = -den[0].rate;
            return product(terms(a, var, whole), {inv});
        }
        case Op::Sqrt:
        case Op::Pow: {
            double q = n.op == Op::Sqrt ? 0.5 : n.value;
            auto base = terms(a, var, whole);
            if (base.size() == 1) {
                Term t;
                const Term& s = base[0];
                t.coef = pow(s.coef, q);
                t.p = s.p * q;
                t.has_exp = s.has_exp;
                t.ex = pow(s.ex, q);
                t.rate = Expr::constant(q) * s.rate;
                return {t};
            }
            if (q >= 0 && std::floor(q) == q && q <= 8) {
                std::vector<Term> acc{Term{}};
                for (int i = 0; i < static_cast<int>(q); ++i) acc = product(acc, base);
                return acc;
            }
            unsupported(whole, var);
        }
        case Op::Exp: {
            Expr slope = differentiate(a, var);
            if (slope.depends_on(var)) unsupported(whole, var);
            Term t;
            t.has_exp = true;
            t.ex = e;
            t.rate = slope;
            return {t};
        }
        default: unsupported(whole, var);
    }
}

}  // namespace

Expr differentiate(const Expr& e, int var) {
    Memo memo;
    return diff(e, var, memo);
}

Expr differentiate(const Expr& e, std::string_view var) { return differentiate(e, intern(var)); }

Expr antiderivative(const Expr& e, std::string_view var_name, double lower) {
    int var = intern(var_name);
    auto ts = terms(e, var, e);

    // Merge pure power terms with the same exponent.
    std::vector<Term> merged;
    for (const auto& t : ts) {
        if (t.coef.is_const(0.0)) continue;
        bool done = false;
        if (!t.has_exp)
            for (auto& m : merged)
                if (!m.has_exp && m.p == t.p) {
                    m.coef = m.coef + t.coef;
                    done = true;
                    break;
                }
        if (!done) merged.push_back(t);
    }

    Expr x = Expr::variable(var);
    Expr lo = Expr::constant(lower);
    Expr out = Expr::constant(0.0);
    for (const auto& t : merged) {
        if (t.has_exp && !t.rate.is_const(0.0)) {
            if (t.p != 0.0) unsupported(e, var);
            // d/dx E = rate * E, with rate free of x
            Expr F = t.coef * t.ex / t.rate;
            out = out + (F - substitute(F, var_name, lo));
            continue;
        }
        if (t.has_exp) unsupported(e, var);  // exponentials that cancel syntactically
        const Expr& c = t.coef;
        if (t.p == -1.0) unsupported(e, var);
        double q = t.p + 1.0;
        if (q <= 0.0 && lower == 0.0) unsupported(e, var);
        if (q != std::floor(q) && lower < 0.0) unsupported(e, var);
        Expr upper = pow(x, q);
        Expr at_lower = Expr::constant(std::pow(lower, q));
        Expr F = c * (upper - at_lower) / Expr::constant(q);
        out = out + F;
    }
    return out;
}

namespace {

Expr subst(const Expr& e, const std::map<int, Expr>& rep, Memo& memo) {
    const Node& n = e.node();
    if (n.op == Op::Const) return e;
    if (n.op == Op::Var) {
        auto it = rep.find(n.var);
        return it == rep.end() ? e : it->second;
    }
    auto it = memo.find(&n);
    if (it != memo.end()) return it->second;
    Expr a = n.a ? subst(Expr(n.a), rep, memo) : Expr();
    Expr b = n.b ? subst(Expr(n.b), rep, memo) : Expr();
    Expr r;
    switch (n.op) {
        case Op::Neg: r = -a; break;
        case Op::Exp: r = exp(a); break;
        case Op::Ln: r = ln(a); break;
        case Op::Sqrt: r = sqrt(a); break;
        case Op::Abs: r = abs(a); break;
        case Op::Sgn: r = sgn(a); break;
        case Op::Add: r = a + b; break;
        case Op::Sub: r = a - b; break;
        case Op::Mul: r = a * b; break;
        case Op::Div: r = a / b; break;
        case Op::Pow: r = pow(a, n.value); break;
        default: r = e; break;
    }
    memo.emplace(&n, r);
    return r;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<int, Expr>& replacements) {
    Memo memo;
    return subst(e, replacements, memo);
}

Expr substitute(const Expr& e, std::string_view var, const Expr& replacement) {
    return substitute(e, std::map<int, Expr>{{intern(var), replacement}});
}

}  // namespace hydro::exprlang
