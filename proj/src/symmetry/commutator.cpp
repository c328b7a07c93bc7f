#include <cmath>

#include "hydro/symmetry.hpp"

namespace hydro::symmetry {

namespace ex = exprlang;

namespace {

struct Slot {
    int order;      // -1 for x
    std::size_t i;  // component
    int id;
};

class JetEval {
public:
    JetEval(const JetPoint& p, const std::vector<std::string>& names, double h) : p_(p), names_(names), h_(h) {
        x_id_ = ex::intern("x");
        for (int k = 0; k <= p.depth(); ++k)
            for (std::size_t i = 0; i < names.size(); ++i) slots_.push_back({k, i, ex::intern(jet_name(names[i], k))});
    }

    double eval(const ScalarField& f, const JetPoint& p) const { return f.eval(p.env(names_)); }
    double eval(const ScalarField& f) const { return eval(f, p_); }

    double partial(const ScalarField& f, const Slot& s) const {
        if (!f.depends_on(s.id)) return 0.0;
        JetPoint q = p_;
        double& ref = s.order < 0 ? q.x : q.d[s.order][s.i];
        double v0 = ref, h = h_ * std::max(1.0, std::fabs(v0));
        ref = v0 + h;
        double fp = eval(f, q);
        ref = v0 - h;
        double fm = eval(f, q);
        return (fp - fm) / (2.0 * h);
    }

    double partial(const ScalarField& f, int order, std::size_t i) const {
        return partial(f, Slot{order, i, ex::intern(jet_name(names_[i], order))});
    }

    // D_x f = f_x + sum over jet slots of f_{q^(k)} q^(k+1).
    double total_x(const ScalarField& f) const {
        double acc = partial(f, Slot{-1, 0, x_id_});
        for (const auto& s : slots_) {
            if (!f.depends_on(s.id)) continue;
            if (s.order + 1 > p_.depth())
                throw std::invalid_argument("jet point is too shallow for D_x of '" + f.describe() + "'");
            acc += partial(f, s) * p_.d[s.order + 1][s.i];
        }
        return acc;
    }

private:
    const JetPoint& p_;
    const std::vector<std::string>& names_;
    double h_;
    int x_id_;
    std::vector<Slot> slots_;
};

}  // namespace

std::pair<double, double> commutator2(const Characteristic2& sigma, const Characteristic2& sigma_bar,
                                      const JetPoint& point, const std::vector<std::string>& names, double h) {
    if (names.size() != 2) throw std::invalid_argument("commutator2 needs two component names");
    if (point.depth() < 2) throw std::invalid_argument("commutator2 needs a jet point of depth >= 2");
    JetEval J(point, names, h);
    const ScalarField* s[2] = {&sigma.f, &sigma.g};
    const ScalarField* sb[2] = {&sigma_bar.f, &sigma_bar.g};
    double val[2], val_bar[2], dx[2], dx_bar[2];
    for (int q = 0; q < 2; ++q) {
        val[q] = J.eval(*s[q]);
        val_bar[q] = J.eval(*sb[q]);
        dx[q] = J.total_x(*s[q]);
        dx_bar[q] = J.total_x(*sb[q]);
    }
    double out[2];
    for (int c = 0; c < 2; ++c) {
        double acc = 0.0;
        for (std::size_t q = 0; q < 2; ++q) {
            acc += val_bar[q] * J.partial(*s[c], 0, q) - val[q] * J.partial(*sb[c], 0, q);
            acc += dx_bar[q] * J.partial(*s[c], 1, q) - dx[q] * J.partial(*sb[c], 1, q);
        }
        out[c] = acc;
    }
    return {out[0], out[1]};
}

Characteristic2 hydrodynamic_characteristic(const std::vector<std::string>& names, const ScalarField& a,
                                            const ScalarField& c) {
    if (names.size() != 2) throw std::invalid_argument("hydrodynamic characteristic needs two component names");
    ScalarField sx = ScalarField::from_expr(Expr::variable(jet_name(names[0], 1)));
    ScalarField rx = ScalarField::from_expr(Expr::variable(jet_name(names[1], 1)));
    return {a * sx, c * rx};
}

}  // namespace hydro::symmetry
