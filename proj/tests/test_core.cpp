#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hydro/core.hpp"
#include "hydro/gasdyn.hpp"

using namespace hydro;

static ScalarField field(const std::string& s) { return ScalarField::from_expr(exprlang::parse(s)); }

TEST_CASE("partial derivatives") {
    Env p{{"u1", 2.0}, {"u2", 5.0}};
    CHECK(partial(field("u1*u2"), "u1", p) == doctest::Approx(5.0));

    Env q{{"u1", 1.0}};
    ScalarField e = field("exp(u1)");
    PartialOptions fd;
    fd.mode = DerivativeMode::FiniteDifference;
    CHECK(std::fabs(partial(e, "u1", q, fd) - partial(e, "u1", q)) < 1e-8);

    // callback field without a gradient falls back to finite differences
    int u1 = exprlang::intern("u1");
    ScalarField cb = ScalarField::callback([u1](const Env& env) { return std::sin(*env.get(u1)); }, {u1});
    CHECK(cb.mode() == DerivativeMode::FiniteDifference);
    CHECK(partial(cb, "u1", q) == doctest::Approx(std::cos(1.0)).epsilon(1e-6));
}

TEST_CASE("gas speed derivative through the implicit density") {
    // gamma = 2, a = 1: phi_r = rho alpha' / (2 alpha) by hand.
    auto m = gasdyn::polytropic(1.0, 2.0, 0.0);
    auto sys = gasdyn::riemann_system(m);
    Env p{{"s", 0.0}, {"r", 4.0}};
    double rho = gasdyn::physical_from_riemann(m, 0.0, 4.0).second;
    double alpha = std::sqrt(2.0) / std::sqrt(rho);
    double dalpha = -0.5 * alpha / rho;
    CHECK(partial(sys.speeds[0], "r", p) == doctest::Approx(rho * dalpha / (2.0 * alpha)));
}

TEST_CASE("hyperbolicity") {
    auto eps = epsilon_system(3);
    auto r = validate_hyperbolic(eps, eps.env({1.0, 2.0, 4.0}));
    CHECK(r.pass);
    CHECK(r.min_gap == doctest::Approx(1.0));

    auto bad = make_system({"u1", "u2"}, {field("u1"), field("u1")});
    CHECK_FALSE(validate_hyperbolic(bad, bad.env({1.0, 2.0})).pass);

    auto m = gasdyn::polytropic(1.0, 1.4);
    auto sys = gasdyn::riemann_system(m);
    Sampler S(3);
    for (int k = 0; k < 20; ++k) {
        double rho = S.uniform(0.3, 3.0), u = S.uniform(-1.0, 1.0);
        auto [s, rr] = gasdyn::riemann_from_physical(m, u, rho);
        Env e{{"s", s}, {"r", rr}};
        CHECK(validate_hyperbolic(sys, e).pass);
        double gap = sys.speeds[0].eval(e) - sys.speeds[1].eval(e);
        CHECK(gap == doctest::Approx(2.0 * rho * m.alpha_at(rho)).epsilon(1e-10));
    }
}

TEST_CASE("sampler is reproducible") {
    Sampler a(42), b(42);
    for (int k = 0; k < 10; ++k) CHECK(a.uniform(-1.0, 1.0) == b.uniform(-1.0, 1.0));
    Sampler c(42);
    double v = c.uniform(2.0, 3.0);
    CHECK(v >= 2.0);
    CHECK(v < 3.0);
}

TEST_CASE("jet points bind derivative names") {
    JetPoint p;
    p.x = 0.5;
    p.t = 1.5;
    p.d = {{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
    Env e = p.env({"s", "r"});
    CHECK(e.at("s_x") == 3.0);
    CHECK(e.at("r_xx") == 6.0);
    CHECK(e.at("t") == 1.5);
    CHECK(jet_name("s", 3) == "s_xxx");
}

TEST_CASE("epsilon and constant systems") {
    auto eps = epsilon_system(4);
    CHECK(eps.n() == 4);
    CHECK(eps.speeds_at(eps.env({1.0, 2.0, 3.0, 4.0})) == std::vector<double>{9.0, 8.0, 7.0, 6.0});
    auto c = constant_speed_system({1.0, 2.0});
    CHECK(c.speeds_at(c.env({7.0, 8.0}))[1] == 2.0);
}
