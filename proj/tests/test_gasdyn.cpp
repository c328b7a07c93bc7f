#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hydro/gasdyn.hpp"
#include "hydro/quadrature.hpp"

using namespace hydro;
using namespace hydro::gasdyn;

static ScalarField field(const std::string& s) { return ScalarField::from_expr(exprlang::parse(s)); }

static JetPoint jet(double s, double r, Sampler& S, int depth) {
    JetPoint p;
    p.d.push_back({s, r});
    p.d.push_back({S.uniform(0.5, 2.0), -S.uniform(0.5, 2.0)});
    for (int k = 2; k <= depth; ++k) p.d.push_back({S.uniform(-1.0, 1.0), S.uniform(-1.0, 1.0)});
    return p;
}

TEST_CASE("Riemann invariants") {
    auto m = polytropic(1.0, 1.4, 1.0);
    auto [s, r] = riemann_from_physical(m, 0.3, 1.0);
    CHECK(s == 0.3);
    CHECK(r == 0.3);

    auto m2 = polytropic(1.0, 2.0, 0.0);
    auto [s2, r2] = riemann_from_physical(m2, 0.0, 2.0);
    CHECK(s2 == doctest::Approx(-4.0));
    CHECK(r2 == doctest::Approx(4.0));

    for (const auto& g : {polytropic(1.0, 1.4), chaplygin(1.0), custom_gas("1/(1+rho)")}) {
        Sampler S(8);
        for (int k = 0; k < 20; ++k) {
            double u = S.uniform(-1.0, 1.0), rho = S.uniform(0.3, 3.0);
            auto [a, b] = riemann_from_physical(g, u, rho);
            auto [u2, rho2] = physical_from_riemann(g, a, b);
            CHECK(std::fabs(u2 - u) < 1e-10);
            CHECK(std::fabs(rho2 - rho) < 1e-10);
        }
    }
}

TEST_CASE("Riemann system") {
    auto m3 = polytropic(1.0, 3.0);
    auto sys3 = riemann_system(m3);
    Env e{{"s", -0.4}, {"r", 1.7}};
    CHECK(sys3.speeds[0].eval(e) == doctest::Approx(0.4));
    CHECK(sys3.speeds[1].eval(e) == doctest::Approx(-1.7));

    auto m = polytropic(1.0, 1.4);
    auto sys = riemann_system(m);
    auto [s, r] = riemann_from_physical(m, 0.1, 0.8);
    Env p{{"s", s}, {"r", r}};
    CHECK(sys.speeds[0].eval(p) - sys.speeds[1].eval(p) == doctest::Approx(2.0 * 0.8 * m.alpha_at(0.8)));
    CHECK(validate_hyperbolic(sys, p).pass);
}

TEST_CASE("recursion on jets") {
    auto m3 = polytropic(1.0, 3.0);
    Sampler S(9);
    symmetry::Characteristic2 unit{ScalarField::constant(1.0), ScalarField::constant(1.0)};
    for (int k = 0; k < 10; ++k) {
        JetPoint p = jet(S.uniform(-1.0, 0.0), S.uniform(1.0, 2.0), S, 3);
        auto [f, g] = recursion_apply(m3, unit, p);
        CHECK(f == doctest::Approx(-p.d[2][0] / (p.d[1][0] * p.d[1][0])));
        CHECK(g == doctest::Approx(-p.d[2][1] / (p.d[1][1] * p.d[1][1])));
    }

    // equal first derivatives remove the alpha-dependent part of (f2, g2)
    auto m = polytropic(1.0, 1.4);
    auto closed = closed_form_f2(m);
    JetPoint p = jet(-1.0, 1.0, S, 3);
    p.d[1][1] = p.d[1][0];
    auto [f, g] = characteristic_chain(m, 2, p);
    CHECK(f == doctest::Approx(-p.d[2][0] / (p.d[1][0] * p.d[1][0])));
    CHECK(g == doctest::Approx(-p.d[2][1] / (p.d[1][1] * p.d[1][1])));
    CHECK(f == doctest::Approx(closed.f.eval(p.env({"s", "r"}))));

    // jets that are too shallow are rejected
    JetPoint shallow = jet(-1.0, 1.0, S, 2);
    CHECK_THROWS(characteristic_chain(m, 3, shallow));
}

TEST_CASE("recursion on coefficient pairs") {
    auto m = polytropic(1.0, 1.4);
    auto sys = riemann_system(m);
    Sampler S(10);
    std::vector<Env> samples;
    for (int k = 0; k < 20; ++k) {
        auto [s, r] = riemann_from_physical(m, S.uniform(-1.0, 1.0), S.uniform(0.5, 2.0));
        samples.push_back(Env{{"s", s}, {"r", r}});
    }
    auto [a1, c1] = recursion_ac(m, sys.speeds[0], sys.speeds[1]);
    auto [a2, c2] = recursion_ac(m, a1, c1);
    for (const auto& e : samples) {
        CHECK(a1.eval(e) == doctest::Approx(-1.0));
        CHECK(c1.eval(e) == doctest::Approx(-1.0));
        CHECK(std::fabs(a2.eval(e)) < 1e-12);
        CHECK(std::fabs(c2.eval(e)) < 1e-12);
    }

    // (-alpha, alpha) solves the linear system; so does its image
    auto rho = ScalarField::from_expr(m.alpha, sys.speeds[0].aux());
    CHECK(symmetry::symmetry_residual(sys, {-1.0 * rho, rho}, samples) < 1e-12);
    auto [a, c] = recursion_ac(m, -1.0 * rho, rho);
    CHECK(symmetry::symmetry_residual(sys, {a, c}, samples) < 1e-10);
}

TEST_CASE("kernel of the recursion") {
    for (double gamma : {1.4, 3.0}) {
        auto m = polytropic(1.0, gamma);
        auto j = make_jet(m);
        Sampler S(11);
        for (int N : {1, 2}) {
            auto basis = kernel_basis(m, N);
            CHECK(basis.size() == static_cast<std::size_t>(2 * N));
            symmetry::Characteristic2 comb{ScalarField(), ScalarField()};
            for (const auto& b : basis) {
                double c = S.uniform(-1.0, 1.0);
                comb.f = comb.f + c * b.f;
                comb.g = comb.g + c * b.g;
            }
            for (int k = 0; k < N; ++k) comb = recursion_field(m, j, comb);
            for (int q = 0; q < 5; ++q) {
                auto [s, r] = riemann_from_physical(m, S.uniform(-1.0, 1.0), S.uniform(0.5, 2.0));
                Env e = jet(s, r, S, N + 3).env(j.names);
                CHECK(std::fabs(comb.f.eval(e)) < 1e-8);
                CHECK(std::fabs(comb.g.eval(e)) < 1e-8);
            }
        }
    }
}

TEST_CASE("K chain") {
    auto m = polytropic(1.0, 3.0);
    auto terms = k_chain_terms(m, 3);
    REQUIRE(terms.size() == 6);
    Env e{{"u", 0.7}, {"rho", 1.3}};
    // the c_{2N-3} term is (u, rho)
    CHECK(terms[3].coefficient == 3);
    CHECK(terms[3].A.eval(e) == doctest::Approx(0.7));
    CHECK(terms[3].B.eval(e) == doctest::Approx(1.3));

    // symbolic K against nested quadrature
    auto A = field("u*rho"), B = field("u^2/2 + rho");
    auto [KA, KB] = k_apply(m, A, B);
    auto [nA, nB] = k_apply_numeric(m, A, B, 0.7, 1.3);
    CHECK(std::fabs(KA.eval(e) - nA) < 1e-9);
    CHECK(std::fabs(KB.eval(e) - nB) < 1e-9);
}

TEST_CASE("trivial solution from the first series member") {
    auto m = polytropic(1.0, 1.4);
    auto imp = k_series_implicit(m, 1, {0.2, 0.5});
    double x = 0.4, t = -0.8;
    auto [s, r] = trivial_solution(m, 0.2, 0.5, x, t);
    auto [u, rho] = physical_from_riemann(m, s, r);
    CHECK(u == doctest::Approx((x - 0.2) / t));
    CHECK(rho == doctest::Approx(-0.5 / t));
    auto F = imp.eval({s, r}, x, t);
    CHECK(std::fabs(F[0]) < 1e-12);
    CHECK(std::fabs(F[1]) < 1e-12);
    CHECK_THROWS_AS(trivial_solution(m, 0.2, 0.5, x, 0.8), DomainError);
}
