#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "warpspec/models.hpp"
#include "warpspec/profile.hpp"

using namespace warpspec;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

WarpingProfile euclidean(int n) {
    std::vector<ProfilePiece> pieces;
    pieces.emplace_back(0.0, kInf, Expr::var());
    return WarpingProfile(DomainKind::HalfLine, n, std::move(pieces));
}
} // namespace

TEST_CASE("smooth step endpoints, monotonicity and flatness") {
    REQUIRE(SmoothStep::eval(0.0) == 0.0);
    REQUIRE(SmoothStep::eval(1.0) == 1.0);
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        double v = SmoothStep::eval(i / 100.0);
        REQUIRE(v >= prev);
        prev = v;
    }
    // one-sided derivatives vanish to second order at both ends
    Expr psi = SmoothStep::expr(Expr::var());
    Expr d1 = psi.derivative(), d2 = psi.second_derivative();
    for (double h : {1e-2, 5e-3}) {
        REQUIRE(std::abs(d1(h)) < 1e-30);
        REQUIRE(std::abs(d2(h)) < 1e-25);
        REQUIRE(std::abs(d1(1.0 - h)) < 1e-30);
        REQUIRE(std::abs(d2(1.0 - h)) < 1e-25);
    }
}

TEST_CASE("mean curvature closed forms") {
    // f = sinh r, n = 3: (n-1) coth(r)
    std::vector<ProfilePiece> pieces;
    pieces.emplace_back(0.0, kInf, parse_expr("sinh(r)"));
    WarpingProfile sinh_prof(DomainKind::HalfLine, 3, std::move(pieces));
    REQUIRE(mean_curvature(sinh_prof, 1.0) ==
            Catch::Approx(2.0 / std::tanh(1.0)).epsilon(1e-14));

    REQUIRE(mean_curvature(euclidean(3), 2.0) == Catch::Approx(1.0).epsilon(1e-14));

    // density exp(c r + (1+delta)/(2 c r)), c = 2, delta = 1, n arbitrary:
    // growth rate c - (1+delta)/(2 c r^2) = 1.98 at r = 5
    auto m = build_inverse_square_growth_profile(3, 2.0, 1.0, 1.0);
    REQUIRE(mean_curvature(m.profile, 5.0) == Catch::Approx(1.98).epsilon(1e-13));
}

TEST_CASE("measure density closed forms") {
    REQUIRE(measure_density(euclidean(3), 2.0) == Catch::Approx(4.0).epsilon(1e-14));

    std::vector<ProfilePiece> pieces;
    pieces.emplace_back(0.0, kInf, parse_expr("exp(r)"));
    WarpingProfile expo(DomainKind::HalfLine, 2, std::move(pieces));
    REQUIRE(measure_density(expo, 3.0) == Catch::Approx(std::exp(3.0)).epsilon(1e-14));

    auto m = build_inverse_square_growth_profile(3, 2.0, 1.0, 0.5);
    REQUIRE(measure_density(m.profile, 1.0) == Catch::Approx(std::exp(2.5)).epsilon(1e-12));
}

TEST_CASE("essential spectrum bottom") {
    REQUIRE(ess_spectrum_bottom(2.0) == 1.0);
    REQUIRE(ess_spectrum_bottom(2.0 * std::sqrt(1.0)) == Catch::Approx(1.0));
    REQUIRE(ess_spectrum_bottom(-2.0) == 1.0);
}

TEST_CASE("log-derivative of the density is the mean curvature") {
    auto m = build_inverse_square_growth_profile(4, 2.0, 1.0, 1.0);
    for (double r : {1.5, 2.0, 5.0, 20.0}) {
        double h = 1e-6 * r;
        double ld = (std::log(measure_density(m.profile, r + h)) -
                     std::log(measure_density(m.profile, r - h))) /
                    (2.0 * h);
        REQUIRE(ld == Catch::Approx(mean_curvature(m.profile, r)).epsilon(1e-8));
    }
}

TEST_CASE("glue reproduces its inputs outside the window") {
    Expr left = Expr::constant(1.0);
    Expr right = Expr::constant(0.0);
    PiecewiseExpr g = glue(left, right, 0.0, 1.0);
    REQUIRE(g(0.0) == 1.0);
    REQUIRE(g(1.0) == 0.0);
    REQUIRE(g(-3.0) == 1.0);
    REQUIRE(g(7.0) == 0.0);

    // blend of equal functions is the function
    Expr f = parse_expr("exp(-r) + r^2/10");
    PiecewiseExpr same = glue(f, f, 1.0, 2.0);
    for (double r : {0.5, 1.0, 1.3, 1.9, 2.5})
        REQUIRE(same(r) == Catch::Approx(f(r)).epsilon(1e-15));
}

TEST_CASE("monotone glue of the ball mode into the exponential tail") {
    // decreasing blend scanned on a dense grid
    double lambda = 0.75;
    auto ball = euclidean_ball_mode(3, lambda);
    double a0 = 1.5;
    Expr tail = exp(Expr::constant(-a0) * Expr::var());
    auto glued = glue_monotone(*ball.v1, tail, 0.5 * ball.R0, ball.R0, false, 0.0, kInf);
    REQUIRE(glued.shrinks == 0); // full window works for these parameters
    const Expr& blend = glued.glued.pieces()[1].f;
    Expr dblend = blend.derivative();
    for (int i = 0; i <= 10000; ++i) {
        double r = glued.a + (glued.b - glued.a) * i / 10000.0;
        REQUIRE(dblend(r) < 0.0);
    }
}

TEST_CASE("profile joint and pole validation") {
    auto m = build_inverse_square_growth_profile(3, 2.0, 1.0, 1.0);
    auto v = m.profile.validate();
    REQUIRE(v.positive);
    REQUIRE(v.pole_ok);
    REQUIRE(v.joint_max_rel_err <= 1e-9);
    REQUIRE(v.pole_limit_err <= 1e-6);

    // half-open piece ownership: the joint radius belongs to the right piece
    const auto& pieces = m.profile.fn().pieces();
    double joint = pieces[0].hi;
    REQUIRE(&m.profile.fn().piece_at(joint) == &pieces[1]);

    // a broken profile is caught
    std::vector<ProfilePiece> bad;
    bad.emplace_back(0.0, 1.0, Expr::var());
    bad.emplace_back(1.0, kInf, Expr::constant(5.0)); // value jump at 1
    WarpingProfile broken(DomainKind::HalfLine, 3, std::move(bad));
    REQUIRE(broken.validate().joint_max_rel_err > 1e-3);
}

TEST_CASE("profile spec files round-trip byte-identically") {
    auto m = build_inverse_square_growth_profile(3, 2.0, 1.0, 1.0);
    std::string once = write_profile(m.profile);
    WarpingProfile back = parse_profile(once);
    REQUIRE(write_profile(back) == once);
    for (double r : {0.2, 0.7, 1.5, 30.0})
        REQUIRE(back.f(r) == m.profile.f(r));

    REQUIRE_THROWS_AS(parse_profile("kind rotsym\nn 3\nwobble 2\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_profile("kind rotsym\nn 3\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_profile("n 3\npiece 0 inf r\n"), std::invalid_argument);
}

TEST_CASE("domain and positivity errors") {
    auto eu = euclidean(3);
    REQUIRE_THROWS_AS(eu.f(-1.0), std::domain_error);
    REQUIRE_THROWS_AS(mean_curvature(eu, 0.0), std::domain_error); // f(0) = 0
    REQUIRE_THROWS_AS(glue(Expr::var(), Expr::var(), 2.0, 1.0), std::invalid_argument);
}
