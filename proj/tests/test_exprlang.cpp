#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hydro/exprlang.hpp"

using namespace hydro::exprlang;

TEST_CASE("parse and evaluate") {
    CHECK(parse("u1 + 2*u2").eval(Env{{"u1", 1.0}, {"u2", 3.0}}) == doctest::Approx(7.0));
    CHECK(parse("sqrt(2)*rho^(-1/2)").eval(Env{{"rho", 2.0}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(parse("2^3^2").eval({}) == 64.0);       // every binary operator associates left
    CHECK(parse("-2^2").eval({}) == -4.0);        // pow binds tighter than unary minus
    CHECK(parse("8/4/2").eval({}) == 1.0);        // left associative
    CHECK(parse("1 - 2 - 3").eval({}) == -4.0);
    CHECK(parse("2*x + 3*y", {"x", "y"}, {}).eval(Env{{"x", 1.0}, {"y", 2.0}}) == 8.0);
    CHECK(parse("a*x", {"x"}, {{"a", 5.0}}).eval(Env{{"x", 2.0}}) == 10.0);
}

TEST_CASE("parse errors carry offsets") {
    try {
        parse("u1*(");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse("u + w", {"u"}), ParseError);   // unknown identifier
    CHECK_THROWS_AS(parse("u^v", {"u", "v"}), ParseError);  // non-constant exponent
    CHECK_THROWS_AS(parse("foo(u)", {"u"}), ParseError);
    CHECK_THROWS_AS(parse("1 +"), ParseError);
}

TEST_CASE("unbound variables are reported") {
    CHECK_THROWS_AS(parse("u + 1").eval({}), UnboundVariable);
}

TEST_CASE("differentiate") {
    Expr alpha = parse("a*sqrt(g)*rho^((g-3)/2)", {"rho"}, {{"a", 1.0}, {"g", 2.0}});
    CHECK(differentiate(alpha, "rho").eval(Env{{"rho", 1.0}}) == doctest::Approx(-0.5 * std::sqrt(2.0)));
    Expr five = differentiate(parse("5"), "u");
    CHECK(five.is_const(0.0));
    CHECK(differentiate(parse("u^2"), "u").eval(Env{{"u", 3.0}}) == doctest::Approx(6.0));
    CHECK(differentiate(parse("abs(u)"), "u").eval(Env{{"u", 0.0}}) == 0.0);
    CHECK(differentiate(parse("ln(u)*exp(u)"), "u").eval(Env{{"u", 2.0}}) ==
          doctest::Approx(std::exp(2.0) * (0.5 + std::log(2.0))));
}

TEST_CASE("antiderivative") {
    CHECK(antiderivative(parse("1"), "u").eval(Env{{"u", 0.7}}) == doctest::Approx(0.7));
    Expr chap = antiderivative(parse("2*rho^(-4)"), "rho", 1.0);
    for (double rho : {0.5, 1.0, 3.0})
        CHECK(chap.eval(Env{{"rho", rho}}) == doctest::Approx(2.0 * (1.0 - std::pow(rho, -3.0)) / 3.0));
    CHECK_THROWS_AS(antiderivative(parse("ln(u)"), "u"), UnsupportedAntiderivative);
    CHECK_THROWS_AS(antiderivative(parse("u^(-1)"), "u", 1.0), UnsupportedAntiderivative);

    // differentiate undoes antiderivative on the supported class
    for (const char* s : {"3*rho^2 + 0.5*rho^(-1.6) - 2", "k*rho^0.4 + exp(2*rho)", "u*rho^3"}) {
        Expr e = parse(s, {"rho", "u"}, {{"k", 1.7}});
        Expr back = differentiate(antiderivative(e, "rho", 1.0), "rho");
        for (double rho : {0.3, 1.0, 2.5}) {
            Env env{{"rho", rho}, {"u", 0.8}};
            CHECK(back.eval(env) == doctest::Approx(e.eval(env)).epsilon(1e-12));
        }
    }
}

TEST_CASE("print and reparse") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.2, 3.0);
    for (const char* s : {"u1 + 2*u2", "-(u1 - u2)^3 / (1 + u1*u1)", "exp(-u1) * ln(u2) + sqrt(abs(u1 - u2))",
                          "u1^(-1.5) - 0.1*u2", "1/3*u1"}) {
        Expr e = parse(s, {"u1", "u2"});
        Expr back = parse(e.str(), {"u1", "u2"});
        CHECK(back.str() == e.str());
        for (int k = 0; k < 100; ++k) {
            Env b{{"u1", U(rng)}, {"u2", U(rng)}};
            CHECK(back.eval(b) == e.eval(b));
        }
    }
}

TEST_CASE("shortest round-trip decimals") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("substitute") {
    Expr e = substitute(parse("u^2 + rho"), "u", parse("(s + r)/2"));
    CHECK(e.eval(Env{{"s", 1.0}, {"r", 3.0}, {"rho", 0.5}}) == doctest::Approx(4.5));
}
