#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hydro/gasdyn.hpp"
#include "hydro/symmetry.hpp"

using namespace hydro;
using namespace hydro::symmetry;

static ScalarField field(const std::string& s) { return ScalarField::from_expr(exprlang::parse(s)); }
static ScalarField num(double v) { return ScalarField::constant(v); }

static std::vector<Env> epsilon_samples(std::size_t count, std::uint64_t seed = 5) {
    Sampler S(seed);
    std::vector<Env> out;
    for (std::size_t k = 0; k < count; ++k)
        out.push_back(Env{{"u1", S.uniform(0.5, 1.5)}, {"u2", S.uniform(2.0, 3.0)}, {"u3", S.uniform(3.5, 4.5)}});
    return out;
}

static std::vector<Env> gas_samples(const gasdyn::GasModel& m, std::size_t count) {
    Sampler S(6);
    std::vector<Env> out;
    for (std::size_t k = 0; k < count; ++k) {
        auto [s, r] = gasdyn::riemann_from_physical(m, S.uniform(-1.0, 1.0), S.uniform(0.5, 2.0));
        out.push_back(Env{{"s", s}, {"r", r}});
    }
    return out;
}

static geometry::LameMetric epsilon_metric(const DiagonalSystem& eps) {
    geometry::LameGauge g;
    g.base = {1.0, 2.5, 4.0};
    return geometry::lame_metric(eps, g);
}

TEST_CASE("symmetry residual") {
    auto eps = epsilon_system(3);
    auto samples = epsilon_samples(20);
    CHECK(symmetry_residual(eps, {num(1), num(1), num(1)}, samples) < 1e-12);
    CHECK(symmetry_residual(eps, eps.speeds, samples) < 1e-12);
    CHECK(symmetry_residual(eps, {field("u1"), field("u2^2"), field("u3")}, samples) > 1e-3);

    auto m3 = gasdyn::polytropic(1.0, 3.0);
    CHECK(symmetry_residual(gasdyn::riemann_system(m3), {field("s"), field("r")}, gas_samples(m3, 20)) < 1e-12);
}

TEST_CASE("first-order recursion") {
    auto eps = epsilon_system(3);
    auto metric = epsilon_metric(eps);
    auto samples = epsilon_samples(10);

    RecursionSpecFirst id{{num(0), num(0), num(0)}, {num(1), num(1), num(1)}};
    auto w = recursion_first(metric, id, eps.speeds);
    for (const auto& e : samples)
        for (std::size_t i = 0; i < 3; ++i) CHECK(w[i].eval(e) == doctest::Approx(eps.speeds[i].eval(e)));

    RecursionSpecFirst spec{{field("u1"), field("u2"), field("u3")}, {num(0.2), num(0.2), num(0.2)}};
    auto S = first_order_S(metric, spec);
    auto r1 = recursion_first(metric, spec, {num(1), num(1), num(1)});
    for (const auto& e : samples)
        for (std::size_t i = 0; i < 3; ++i) CHECK(r1[i].eval(e) == doctest::Approx(S[i].eval(e)));

    RecursionSpecFirst constant{{num(0), num(0), num(0)}, {num(0.7), num(0.7), num(0.7)}};
    CHECK(existence_first(metric, constant, samples) < 1e-12);

    RecursionSpecFirst random{{field("u1^3"), field("2 + u2"), field("exp(u3/4)")},
                              {field("u1"), num(0.3), field("u3^2")}};
    CHECK(existence_first(metric, random, samples) > 1e-4);
}

TEST_CASE("second-order recursion") {
    auto eps = epsilon_system(3);
    std::vector<ScalarField> phi{field("-ln(abs(u1 - u2)) - ln(abs(u1 - u3))"),
                                 field("-ln(abs(u2 - u1)) - ln(abs(u2 - u3))"),
                                 field("-ln(abs(u3 - u1)) - ln(abs(u3 - u2))")};
    auto metric = geometry::metric_with_phi(eps, phi);
    auto V = field("-ln(abs(u1 - u2)) - ln(abs(u1 - u3)) - ln(abs(u2 - u3))");
    auto samples = epsilon_samples(10);
    CHECK(potential_residual(metric, V, samples) < 1e-10);

    RecursionSpecFirst first{{field("u1"), field("u2"), field("u3")}, {num(0), num(0), num(0)}};
    RecursionSpecSecond reduced{{num(0), num(0), num(0)}, first.c, first.d, V};
    auto a = recursion_first(metric, first, eps.speeds);
    auto b = recursion_second(metric, reduced, eps.speeds);
    for (const auto& e : samples)
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::fabs(a[i].eval(e) - b[i].eval(e)) < 1e-12);
    CHECK(existence_second(metric, reduced, samples) < 1e-10);

    auto B = second_order_B(metric, reduced);
    auto one = recursion_second(metric, reduced, {num(1), num(1), num(1)});
    for (const auto& e : samples)
        for (std::size_t i = 0; i < 3; ++i) CHECK(one[i].eval(e) == doctest::Approx(B[i].eval(e)));

    RecursionSpecSecond random{{field("u1^2"), field("1 + u2"), num(0.5)},
                               {field("u1"), num(2), field("u3^3")},
                               {num(0.1), field("u2"), num(0)},
                               V};
    CHECK(existence_second(metric, random, samples) > 1e-4);

    // n >= 3 needs V
    RecursionSpecSecond missing{reduced.f, reduced.c, reduced.d, std::nullopt};
    CHECK_THROWS(recursion_second(metric, missing, eps.speeds));
}

TEST_CASE("gamma = 3 second-order recursion maps (s, r) to zero") {
    auto m = gasdyn::polytropic(1.0, 3.0);
    auto metric = gasdyn::natural_metric(m);
    RecursionSpecSecond spec{{num(1), num(1)}, {num(0), num(0)}, {num(0), num(0)}, ScalarField()};
    auto w = recursion_second(metric, spec, {field("s"), field("r")});
    for (const auto& e : gas_samples(m, 10)) {
        CHECK(std::fabs(w[0].eval(e)) < 1e-12);
        CHECK(std::fabs(w[1].eval(e)) < 1e-12);
    }
}

TEST_CASE("two-component structure") {
    auto m = gasdyn::polytropic(1.0, 1.4);
    auto sys = gasdyn::riemann_system(m);
    auto [s0, r0] = gasdyn::riemann_from_physical(m, 0.0, 1.0);
    TwoComponentStructure st(sys, s0, r0);
    auto samples = gas_samples(m, 20);
    CHECK(st.invariant_residual(samples) < 1e-10);

    CHECK(inhomogeneous_existence_check(st, num(0), num(0), num(0.4), num(0.4), samples) < 1e-12);
    CHECK(inhomogeneous_existence_check(st, field("s^2"), field("1 + r"), field("s"), num(0.1), samples) > 1e-4);

    auto m3 = gasdyn::polytropic(1.0, 3.0);
    TwoComponentStructure st3(gasdyn::riemann_system(m3), 0.0, 1.0);
    CHECK(inhomogeneous_existence_check(st3, num(0), num(0), field("s^3"), field("exp(r)"), gas_samples(m3, 10)) <
          1e-12);
}

TEST_CASE("commutator of characteristics") {
    std::vector<std::string> names{"s", "r"};
    auto a = hydrodynamic_characteristic(names, field("s*r"), field("r - s"));
    JetPoint p;
    p.x = 0.3;
    p.t = 0.1;
    p.d = {{0.5, 1.5}, {0.7, -1.1}, {0.2, 0.4}, {0.0, 0.1}};
    auto [f, g] = commutator2(a, a, p, names);
    CHECK(std::fabs(f) < 1e-12);
    CHECK(std::fabs(g) < 1e-12);

    // gamma = 3: any a(s), c(r) solves the linear system and the flows commute
    auto b = hydrodynamic_characteristic(names, field("s^2"), field("exp(r)"));
    auto c = hydrodynamic_characteristic(names, field("s"), field("r"));
    auto [f2, g2] = commutator2(b, c, p, names);
    CHECK(std::fabs(f2) < 1e-6);
    CHECK(std::fabs(g2) < 1e-6);
}

TEST_CASE("explicit t dependence") {
    auto eps = epsilon_system(3);
    auto samples = epsilon_samples(10);
    for (auto& e : samples) e.set("t", 0.4);
    auto auton = t_dependence_check(eps, samples);
    CHECK(auton.beta == 0.0);
    CHECK(auton.residual < 1e-12);

    auto shifted = make_system({"u1", "u2", "u3"}, {field("u2 + u3 + t^2"), field("u1 + u3 + t^2"),
                                                    field("u1 + u2 + t^2")},
                               Dependence::ExplicitT);
    auto rep = t_dependence_check(shifted, samples);
    CHECK(std::fabs(rep.beta) < 1e-12);
    CHECK(rep.residual < 1e-12);

    Env at = samples[0];
    at.set("t", 0.8);
    at.set("x", 0.25);
    double T = 0.8, V1 = at.at("u2") + at.at("u3");
    CHECK(time_integral(shifted.speeds[0], at, T) == doctest::Approx(T * V1 + T * T * T / 3.0).epsilon(1e-10));

    auto A = symmetry_coefficients_t(eps, {num(1), num(2), num(3)}, 0.0, 0.5, at);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(A[i] == doctest::Approx((i + 1.0) + 0.5 * (0.25 + T * eps.speeds[i].eval(at))));
    auto plain = symmetry_coefficients_t(eps, {num(1), num(2), num(3)}, 0.0, 0.0, at);
    CHECK(plain == std::vector<double>{1.0, 2.0, 3.0});
}
