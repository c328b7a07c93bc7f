#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "hydro/gasdyn.hpp"
#include "hydro/hodograph.hpp"

using namespace hydro;
using namespace hydro::hodograph;

static ScalarField field(const std::string& s) { return ScalarField::from_expr(exprlang::parse(s)); }

static SolutionGrid gamma3(const ImplicitSystem& imp, std::size_t n, double x0 = 0.0, double t0 = 0.0,
                           std::vector<double> guess = {0.0, 0.2}) {
    SolveOptions opt;
    opt.x0 = x0;
    opt.t0 = t0;
    GridAxes axes{linspace(-0.05, 0.05, n), linspace(0.0, 0.1, n)};
    return solve_grid(imp, axes, guess, opt);
}

TEST_CASE("implicit systems") {
    auto m = gasdyn::polytropic(1.0, 3.0);
    auto sys = gasdyn::riemann_system(m);

    // a + x + t v = 0 with a = s, v = -s: s (1 - t) + x = 0
    auto imp = build_implicit_t(sys, {field("s"), field("r")}, 0.0);
    auto F = imp.eval({0.3, 0.5}, 0.2, 0.4);
    CHECK(F[0] == doctest::Approx(0.3 * 0.6 + 0.2));
    CHECK(F[1] == doctest::Approx(0.5 * 0.6 + 0.2));

    // w - t v - x with w = v
    auto eps = epsilon_system(3);
    auto hv = build_implicit(eps, eps.speeds);
    auto G = hv.eval({1.0, 2.0, 4.0}, 0.5, 0.25);
    CHECK(G[0] == doctest::Approx(6.0 * 0.75 - 0.5));
    CHECK(G[2] == doctest::Approx(3.0 * 0.75 - 0.5));

    // certification warns when w is not a symmetry
    std::vector<Env> samples{eps.env({1.0, 2.0, 4.0}), eps.env({0.5, 2.5, 3.5})};
    auto bad = build_implicit(eps, {field("u1^2"), field("u2"), field("u3")}, samples);
    REQUIRE(bad.certification.has_value());
    CHECK(*bad.certification > 1e-6);
    CHECK_FALSE(bad.warnings.empty());

    // explicit t: int_0^t (V_i + t^2) = t V_i + t^3 / 3
    auto shifted = make_system({"u1", "u2", "u3"},
                               {field("u2 + u3 + t^2"), field("u1 + u3 + t^2"), field("u1 + u2 + t^2")},
                               Dependence::ExplicitT);
    auto it = build_implicit_t(shifted, {field("u1"), field("u2"), field("u3")}, 0.0);
    double t = 0.7, x = -0.3;
    auto H = it.eval({1.0, 2.0, 4.0}, x, t);
    CHECK(std::fabs(H[0] - (1.0 + x + t * 6.0 + t * t * t / 3.0)) < 1e-10);
    auto H0 = it.eval({1.0, 2.0, 4.0}, x, 0.0);
    CHECK(H0[1] == doctest::Approx(2.0 + x));
}

TEST_CASE("gamma = 3 closed form") {
    auto m = gasdyn::polytropic(1.0, 3.0);
    auto sys = gasdyn::riemann_system(m);
    auto g = gamma3(build_implicit_t(sys, {field("s"), field("r - 0.2")}, 0.0), 101);
    CHECK(g.converged_fraction() == 1.0);
    for (std::size_t k = 0; k < g.nt(); ++k)
        for (std::size_t j = 0; j < g.nx(); ++j) CHECK(std::fabs(g.at(k, j, 0) - g.x[j] / (g.t[k] - 1.0)) < 1e-12);
    CHECK(residual_pde(sys, g).max_residual < 1e-6);

    // w = -(s, r) in the w - t v - x form gives the same field
    auto h = gamma3(build_implicit(sys, {field("-s"), field("0.2 - r")}), 21);
    CHECK(std::fabs(h.at(20, 20, 0) - h.x[20] / (h.t[20] - 1.0)) < 1e-12);
}

TEST_CASE("continuation does not depend on the sweep") {
    auto m = gasdyn::polytropic(1.0, 1.4);
    auto imp = gasdyn::piston_implicit(m, {});
    auto [s0, r0] = gasdyn::riemann_from_physical(m, 0.5, 1.0);
    GridAxes axes{linspace(0.2, 0.3, 21), linspace(0.45, 0.55, 21)};
    SolveOptions a, b;
    a.x0 = 0.25;
    a.t0 = 0.5;
    auto ga = solve_grid(imp, axes, {s0, r0}, a);
    // seed at the opposite corner, warm-started from the first grid
    b.seed_node = std::make_pair(std::size_t(20), std::size_t(20));
    auto gb = solve_grid(imp, axes, {ga.at(20, 20, 0), ga.at(20, 20, 1)}, b);
    double worst = 0.0;
    for (std::size_t i = 0; i < ga.u.size(); ++i) worst = std::max(worst, std::fabs(ga.u[i] - gb.u[i]));
    CHECK(worst < 1e-10);

    // threads do not change the result
    SolveOptions c = a;
    c.threads = 4;
    auto gc = solve_grid(imp, axes, {s0, r0}, c);
    CHECK(gc.u == ga.u);
}

TEST_CASE("seed failure is an error") {
    auto m = gasdyn::polytropic(1.0, 3.0);
    auto sys = gasdyn::riemann_system(m);
    // s (1 - t) + x = 0 has no root at t = 1, x != 0
    auto imp = build_implicit_t(sys, {field("s"), field("r")}, 0.0);
    SolveOptions opt;
    opt.x0 = 0.5;
    opt.t0 = 1.0;
    GridAxes axes{linspace(0.5, 0.6, 3), linspace(1.0, 1.1, 3)};
    CHECK_THROWS_AS(solve_grid(imp, axes, {0.0, 0.0}, opt), SolveError);
}

TEST_CASE("series coefficients") {
    auto eps = epsilon_system(3);
    geometry::LameGauge gauge;
    gauge.base = {1.0, 2.5, 4.0};
    auto metric = geometry::lame_metric(eps, gauge);
    symmetry::RecursionSpecFirst spec{{field("u1"), field("u2"), field("u3")},
                                      {ScalarField::constant(0.5), ScalarField::constant(0.5),
                                       ScalarField::constant(0.5)}};
    std::vector<Env> samples{eps.env({1.0, 2.0, 4.0}), eps.env({0.5, 2.5, 3.5}), eps.env({1.2, 2.2, 4.4})};
    auto one = series_coefficients(eps, metric, spec, Seed::One, 1, samples);
    auto S = symmetry::first_order_S(metric, spec);
    for (const auto& e : samples)
        for (std::size_t i = 0; i < 3; ++i) CHECK(one.w[i].eval(e) == doctest::Approx(S[i].eval(e)));
    auto v = series_coefficients(eps, metric, spec, Seed::Speeds, 1, samples);
    auto direct = symmetry::recursion_first(metric, spec, eps.speeds);
    for (const auto& e : samples)
        for (std::size_t i = 0; i < 3; ++i) CHECK(v.w[i].eval(e) == doctest::Approx(direct[i].eval(e)));
}

TEST_CASE("PDE residual") {
    auto m = gasdyn::polytropic(1.0, 3.0);
    auto sys = gasdyn::riemann_system(m);
    SolutionGrid flat;
    flat.vars = {"s", "r"};
    flat.x = linspace(0.0, 0.1, 11);
    flat.t = linspace(0.0, 0.1, 11);
    flat.u.assign(11 * 11 * 2, 0.0);
    for (std::size_t k = 0; k < flat.u.size(); k += 2) {
        flat.u[k] = -0.5;
        flat.u[k + 1] = 0.5;
    }
    flat.status.assign(121, NodeStatus::Converged);
    CHECK(residual_pde(sys, flat).max_residual == 0.0);

    auto g = gamma3(build_implicit_t(sys, {field("s"), field("r - 0.2")}, 0.0), 101);
    g.at(50, 40, 0) += 1e-2;
    auto rep = residual_pde(sys, g);
    CHECK(rep.max_residual > 0.1);
    CHECK(std::abs(static_cast<int>(rep.worst_x) - 40) <= 1);
    CHECK(std::abs(static_cast<int>(rep.worst_t) - 50) <= 1);
}

TEST_CASE("serialization round trips") {
    auto m = gasdyn::polytropic(1.0, 3.0);
    auto sys = gasdyn::riemann_system(m);
    auto g = gamma3(build_implicit_t(sys, {field("s"), field("r - 0.2")}, 0.0), 11);
    g.status[3] = NodeStatus::Singular;

    auto back = from_csv(to_csv(g));
    CHECK(back.u == g.u);
    CHECK(back.x == g.x);
    CHECK(back.t == g.t);
    CHECK(back.status == g.status);
    CHECK(to_csv(back) == to_csv(g));

    auto j = from_json(to_json(g, residual_pde(sys, g)));
    CHECK(j.u == g.u);
    CHECK(j.provenance == g.provenance);

    std::string plot = to_plot_csv(g);
    CHECK(plot.rfind("x,t,component,value", 0) == 0);
    for (NodeStatus s : {NodeStatus::Converged, NodeStatus::Singular, NodeStatus::OutOfDomain, NodeStatus::Diverged,
                         NodeStatus::Unsolved})
        CHECK(status_from_name(status_name(s)) == s);
}
