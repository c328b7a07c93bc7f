#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hydro/gasdyn.hpp"
#include "hydro/geometry.hpp"

using namespace hydro;
using namespace hydro::geometry;

static ScalarField field(const std::string& s) { return ScalarField::from_expr(exprlang::parse(s)); }

TEST_CASE("connection coefficients") {
    auto eps = epsilon_system(3);
    auto G = connection(eps, eps.env({1.0, 2.0, 4.0}));
    CHECK(G[0][1] == doctest::Approx(-1.0));
    CHECK(G[0][2] == doctest::Approx(1.0 / (1.0 - 4.0)));

    auto c = constant_speed_system({1.0, 2.0, 3.0});
    auto Z = connection(c, c.env({0.1, 0.2, 0.3}));
    for (auto& row : Z)
        for (double v : row) CHECK(v == 0.0);

    // gas: v_{1,r} / (v_2 - v_1) works out to -alpha' / (4 alpha^2), which
    // is minus the coefficient of the linear system for (a, c)
    auto m = gasdyn::polytropic(1.0, 1.4);
    auto sys = gasdyn::riemann_system(m);
    auto [s, r] = gasdyn::riemann_from_physical(m, 0.2, 1.3);
    auto Gg = connection(sys, Env{{"s", s}, {"r", r}});
    double a = m.alpha_at(1.3);
    double da = exprlang::differentiate(m.alpha, "rho").eval(Env{{"rho", 1.3}});
    CHECK(Gg[0][1] == doctest::Approx(-da / (4.0 * a * a)));
}

TEST_CASE("Tsarev residual") {
    auto eps = epsilon_system(3);
    Sampler S(1);
    for (int k = 0; k < 20; ++k) {
        Env e = eps.env({S.uniform(0.0, 1.0), S.uniform(2.0, 3.0), S.uniform(4.0, 5.0)});
        CHECK(tsarev_residual(eps, e) < 1e-10);
    }
    auto m = gasdyn::polytropic(1.0, 1.4);
    CHECK(tsarev_residual(gasdyn::riemann_system(m), Env{{"s", -1.0}, {"r", 1.0}}) == 0.0);

    auto pert = make_system({"u1", "u2", "u3"}, {field("u2 + u3 + u2^2*u3"), field("u1 + u3"), field("u1 + u2")});
    Env at = pert.env({1.0, 2.0, 4.0});
    CHECK(tsarev_residual(pert, at) == doctest::Approx(16.0 / 361.0));
    CHECK(curvature_check(pert, at).r_jki > 1e-3);

    // relabeling components leaves the residual unchanged
    auto perm = make_system({"u3", "u1", "u2"}, {field("u1 + u2"), field("u2 + u3 + u2^2*u3"), field("u1 + u3")});
    CHECK(tsarev_residual(perm, at) == doctest::Approx(tsarev_residual(pert, at)));
}

TEST_CASE("curvature form") {
    auto eps = epsilon_system(3);
    auto r = curvature_check(eps, eps.env({1.0, 2.0, 4.0}));
    CHECK(r.r_ikj < 1e-10);
    CHECK(r.r_jki < 1e-10);
    auto c = constant_speed_system({1.0, 2.0, 3.0});
    auto z = curvature_check(c, c.env({0.0, 0.0, 0.0}));
    CHECK(z.r_ikj == 0.0);
    CHECK(z.r_jki == 0.0);
}

TEST_CASE("Lame reconstruction") {
    auto c = constant_speed_system({1.0, 2.0, 3.0});
    LameGauge g0;
    g0.base = {0.0, 0.0, 0.0};
    auto flat = lame_reconstruct(c, g0, c.env({1.0, -1.0, 0.5}));
    for (double p : flat.phi) CHECK(p == 0.0);
    for (double h : flat.H) CHECK(h == 1.0);

    auto eps = epsilon_system(3);
    LameGauge a, b;
    a.base = b.base = {1.0, 2.0, 4.0};
    b.order = {2, 0, 1};
    Env at = eps.env({1.3, 2.4, 3.7});
    auto ra = lame_reconstruct(eps, a, at), rb = lame_reconstruct(eps, b, at);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::fabs(ra.phi[i] - rb.phi[i]) < 1e-8);

    // d_j Phi_i reproduces Gamma^i_ij
    auto metric = lame_metric(eps, a);
    auto G = connection(eps, at);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) CHECK(partial(metric.phi[i], eps.vars[j], at) == doctest::Approx(G[i][j]).epsilon(1e-6));
}

TEST_CASE("Hamiltonian check") {
    auto c = constant_speed_system({1.0, 2.0, 3.0});
    LameGauge g;
    g.base = {0.0, 0.0, 0.0};
    CHECK(hamiltonian_check(lame_metric(c, g), {c.env({0.1, 0.2, 0.3})}).pass);

    auto m = gasdyn::polytropic(1.0, 1.4);
    Sampler S(2);
    std::vector<Env> samples;
    for (int k = 0; k < 10; ++k) {
        auto [s, r] = gasdyn::riemann_from_physical(m, S.uniform(-1.0, 1.0), S.uniform(0.5, 2.0));
        samples.push_back(Env{{"s", s}, {"r", r}});
    }
    CHECK(hamiltonian_check(gasdyn::natural_metric(m), samples).pass);

    // Non-flat metric: Phi_1 = u1 u2 u3, Phi_2 = Phi_3 = 0 has R^1_221 != 0.
    auto bent = metric_from_phi({"u1", "u2", "u3"}, {field("u1*u2*u3"), field("0"), field("0")});
    CHECK_FALSE(hamiltonian_check(bent, {Env{{"u1", 1.0}, {"u2", 2.0}, {"u3", 3.0}}}).pass);
}
