#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "warpspec/expr.hpp"
#include "warpspec/profile.hpp"

using namespace warpspec;

namespace {

double central_diff(const Expr& e, double r, double h = 1e-5) {
    return (e(r + h) - e(r - h)) / (2.0 * h);
}

struct Sample {
    const char* text;
    double lo, hi; // sane evaluation window
};

const std::vector<Sample> kSamples = {
    {"r^2 - 3*r + 1", 0.5, 8.0},
    {"sin(r)*cos(r) + sinh(r/4)/cosh(r/4)", 0.5, 6.0},
    {"exp(-1.5*r)", 0.5, 10.0},
    {"sqrt(r + 1)/(r + 2)", 0.5, 9.0},
    {"log(r + 2)^1.5*exp(-r)", 0.5, 9.0},
    {"exp(2*r + 2/(4*r))", 0.5, 4.0},
    {"(log(r))^(-0.5)", 1.5, 50.0},
    {"r^(-0.5) + r^3/(1 + r^2)", 0.5, 7.0},
};

} // namespace

TEST_CASE("printing round-trips through the parser") {
    for (const auto& s : kSamples) {
        Expr e = parse_expr(s.text);
        std::string once = e.str();
        Expr reparsed = parse_expr(once);
        REQUIRE(reparsed.str() == once);
        for (double r : {s.lo, 0.5 * (s.lo + s.hi), s.hi}) {
            REQUIRE(reparsed(r) == e(r));
        }
    }
}

TEST_CASE("literals print in shortest round-trip form") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        double v = std::exp(dist(rng)) * (i % 2 ? -1 : 1);
        Expr e = Expr::constant(v);
        REQUIRE(parse_expr(e.str()).constant_value() == v);
    }
}

TEST_CASE("structural derivatives match central finite differences") {
    std::mt19937_64 rng(11);
    for (const auto& s : kSamples) {
        Expr e = parse_expr(s.text);
        Expr d1 = e.derivative();
        Expr d2 = e.second_derivative();
        std::uniform_real_distribution<double> dist(s.lo, s.hi);
        for (int i = 0; i < 100; ++i) {
            double r = dist(rng);
            double fd1 = central_diff(e, r);
            double scale1 = std::max(std::abs(fd1), 1e-3);
            REQUIRE(std::abs(d1(r) - fd1) / scale1 < 1e-6);
            double fd2 = central_diff(d1, r);
            double scale2 = std::max(std::abs(fd2), 1e-3);
            REQUIRE(std::abs(d2(r) - fd2) / scale2 < 1e-5);
        }
    }
}

TEST_CASE("power rule avoids log form for constant exponents") {
    Expr e = pow(Expr::var(), 2.5);
    Expr d = e.derivative();
    // no log() in the derivative tree
    REQUIRE(d.str().find("log") == std::string::npos);
    REQUIRE(d(2.0) == Catch::Approx(2.5 * std::pow(2.0, 1.5)).epsilon(1e-14));
}

TEST_CASE("general power differentiates through the exponent") {
    Expr e = pow(Expr::var(), Expr::var()); // r^r
    Expr d = e.derivative();
    double r = 1.7;
    double expect = std::pow(r, r) * (std::log(r) + 1.0);
    REQUIRE(d(r) == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("parser rejects malformed input") {
    REQUIRE_THROWS_AS(parse_expr("2 +"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_expr("foo(r)"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_expr("sin r"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_expr("(1 + r"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_expr("1..5"), std::invalid_argument);
}

TEST_CASE("blend expressions evaluate cleanly at window endpoints") {
    Expr left = parse_expr("1 - r/10");
    Expr right = parse_expr("exp(-r)");
    Expr blend = blend_expr(left, right, 1.0, 2.0);
    Expr d1 = blend.derivative();
    Expr d2 = blend.second_derivative();

    // exactly at the endpoints the step underflows to a hard 0/1; the
    // zero-product evaluation rule keeps derivatives finite
    REQUIRE(blend(1.0) == Catch::Approx(left(1.0)).margin(1e-15));
    REQUIRE(blend(2.0) == Catch::Approx(right(2.0)).margin(1e-15));
    REQUIRE(d1(1.0) == Catch::Approx(left.derivative()(1.0)).margin(1e-12));
    REQUIRE(d1(2.0) == Catch::Approx(right.derivative()(2.0)).margin(1e-12));
    REQUIRE(std::isfinite(d2(1.0)));
    REQUIRE(std::isfinite(d2(2.0)));

    // interior smoothness vs finite differences
    for (double r : {1.25, 1.5, 1.75}) {
        REQUIRE(std::abs(d1(r) - central_diff(blend, r)) /
                    std::max(std::abs(d1(r)), 1e-3) <
                1e-6);
    }
}
