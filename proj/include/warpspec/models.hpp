#pragma once

// Explicit example manifolds with known spectra:
//
//   build_ground_state_manifold    rotationally symmetric, Euclidean near the
//                                  pole, exactly exponential warping past r0,
//                                  with an explicit decaying ground state.
//   build_negative_growth_manifold warped product over a line whose measure
//                                  shrinks at rate c on the right end, with an
//                                  explicit ground state growing like
//                                  exp(alpha_tilde r).
//   build_inverse_square_growth_profile
//                                  growth rate exactly c - (1+delta)/(2 c r^2)
//                                  past the switch radius; essential spectrum
//                                  bottom c^2/4 with eigenvalues accumulating
//                                  below it.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "warpspec/barrier.hpp"
#include "warpspec/expr.hpp"
#include "warpspec/profile.hpp"
#include "warpspec/quadrature.hpp"
#include "warpspec/radial.hpp"

namespace warpspec {

struct BallMode {
    double R0 = 0;           // first Dirichlet radius: lowest eigenvalue equals lambda
    std::optional<Expr> v1;  // closed-form radial mode (odd dimensions)
    RadialSolution samples;  // shooting solution out to just past R0
};

namespace detail {

// v1(t) = (2m+1)!! j_m(y) / y^m with y = sqrt(lambda) t and m = (n-3)/2,
// normalized to v1(0) = 1.  Elementary for odd n via the spherical Bessel
// recurrence.
inline Expr radial_ball_mode_expr(int n, double lambda) {
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("closed-form ball mode needs odd dimension n >= 3");
    int m = (n - 3) / 2;
    Expr y = Expr::constant(std::sqrt(lambda)) * Expr::var();
    Expr jm_prev = sin(y) / y;                    // j_0
    Expr jm = sin(y) / pow(y, 2.0) - cos(y) / y;  // j_1
    if (m == 0) return jm_prev;
    for (int k = 1; k < m; ++k) {
        Expr next = Expr::constant(2.0 * k + 1.0) / y * jm - jm_prev;
        jm_prev = jm;
        jm = next;
    }
    double dfact = 1;
    for (int k = 2 * m + 1; k > 1; k -= 2) dfact *= k;
    return Expr::constant(dfact) * jm / pow(y, double(m));
}

inline WarpingProfile euclidean_profile(int n) {
    std::vector<ProfilePiece> pieces;
    pieces.emplace_back(0.0, std::numeric_limits<double>::infinity(), Expr::var());
    return WarpingProfile(DomainKind::HalfLine, n, std::move(pieces));
}

} // namespace detail

// First Dirichlet mode of the Euclidean n-ball at eigenvalue lambda: the
// regular radial solution and its first zero R0 (so the ball of radius R0
// has first Dirichlet eigenvalue lambda).
inline BallMode euclidean_ball_mode(int n, double lambda) {
    if (!(lambda > 0)) throw std::domain_error("ball mode needs lambda > 0");
    if (n < 2) throw std::invalid_argument("dimension n must be >= 2");
    BallMode out;
    double nu = 0.5 * n - 1.0;
    double zero_guess = (nu + 1.86 * std::cbrt(std::max(nu, 1.0)) + 2.0) / std::sqrt(lambda);
    WarpingProfile eu = detail::euclidean_profile(n);
    double span = 1.5 * zero_guess + 1.0;
    out.samples = integrate_radial(eu, lambda, BoundaryCondition::regular_pole(), 0.0, span, 1e-12);

    // First sign change, then bisection on the interpolant.
    const auto& r = out.samples.r;
    const auto& u = out.samples.u;
    size_t k = 0;
    while (k + 1 < u.size() && !(u[k] > 0 && u[k + 1] <= 0)) ++k;
    if (k + 1 >= u.size()) throw std::runtime_error("ball mode: no zero found in span");
    double lo = r[k], hi = r[k + 1];
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (out.samples.eval(mid) > 0 ? lo : hi) = mid;
    }
    out.R0 = 0.5 * (lo + hi);
    if (n % 2 == 1) out.v1 = detail::radial_ball_mode_expr(n, lambda);
    return out;
}

struct ConstructionChecks {
    ProfileValidation profile;
    double max_residual = 0;      // worst |(-Delta_g - lambda) u| over samples
    double mc_outer_err = 0;      // worst mean-curvature defect on the exact outer region
    bool monotone = true;         // ground state monotone on the checked grid
    double inner_identity_err = 0; // worst |f(r) - r| (half-line) etc.
};

// ---------------------------------------------------------------------------
// Rotationally symmetric manifold with ground state exp(-a0 r) past r0.
// ---------------------------------------------------------------------------

struct GroundStateManifold {
    int n = 3;
    double kappa = 1, lambda0 = 0;
    double R0 = 0;   // Euclidean Dirichlet ball radius for lambda0
    double a0 = 0;   // ground-state decay rate
    double r0 = 0;   // past r0 the warping is exactly C_r0 exp(sqrt(kappa) r)
    double C_r0 = 0;
    double c = 0;    // asymptotic growth rate (n-1) sqrt(kappa)
    double blend_lo = 0, blend_hi = 0;
    PiecewiseExpr v0; // glued ground state
    WarpingProfile profile;
    ConstructionChecks checks;
};

inline GroundStateManifold build_ground_state_manifold(int n, double kappa, double lambda0,
                                                       double fit_tol = 1e-12) {
    if (!(kappa > 0)) throw std::domain_error("kappa must be positive");
    double c = (n - 1) * std::sqrt(kappa);
    if (!(lambda0 > 0 && lambda0 < 0.25 * c * c))
        throw std::domain_error("need 0 < lambda0 < (n-1)^2 kappa / 4");
    if (n % 2 == 0)
        throw std::invalid_argument(
            "even dimensions need an integer-order Bessel mode outside the expression "
            "language; use an odd n");

    GroundStateManifold out;
    out.n = n;
    out.kappa = kappa;
    out.lambda0 = lambda0;
    out.c = c;
    out.a0 = rates(c, lambda0).alpha;

    BallMode ball = euclidean_ball_mode(n, lambda0);
    out.R0 = ball.R0;
    Expr v1 = *ball.v1;
    Expr tail = exp(Expr::constant(-out.a0) * Expr::var());

    // Decreasing glue of the ball mode into the exponential tail.
    auto glued = glue_monotone(v1, tail, 0.5 * out.R0, out.R0, /*increasing=*/false, 0.0,
                               std::numeric_limits<double>::infinity());
    out.v0 = glued.glued;
    out.blend_lo = glued.a;
    out.blend_hi = glued.b;

    // Warping profile: r up to the blend, inverted blend across it, exactly
    // exponential beyond.
    const Expr blend = out.v0.pieces()[1].f;
    auto inv = invert_radial_pieces(blend, lambda0, n, glued.a, glued.a, glued.b, fit_tol);
    std::vector<ProfilePiece> pieces;
    pieces.emplace_back(0.0, glued.a, Expr::var());
    for (auto& p : inv.pieces) pieces.push_back(std::move(p));
    double sqrt_kappa = std::sqrt(kappa);
    out.r0 = glued.b;
    out.C_r0 = std::exp(inv.log_f_end - sqrt_kappa * glued.b);
    pieces.emplace_back(glued.b, std::numeric_limits<double>::infinity(),
                        Expr::constant(out.C_r0) * exp(Expr::constant(sqrt_kappa) * Expr::var()));
    out.profile = WarpingProfile(DomainKind::HalfLine, n, std::move(pieces));

    // Checks: profile invariants, v0 positivity/monotonicity, residual of v0,
    // exact mean curvature past r0, f(r) = r on the inner region.
    out.checks.profile = out.profile.validate();
    for (int i = 1; i <= 2000; ++i) {
        double r = 1e-3 + (out.r0 + 10.0 - 1e-3) * i / 2000.0;
        double val = out.v0(r), der = out.v0.deriv(r);
        if (!(val > 0) || !(der < 0)) out.checks.monotone = false;
    }
    for (const auto& piece : out.v0.pieces()) {
        double lo = std::max(piece.lo, 1e-2);
        double hi = std::isinf(piece.hi) ? out.r0 + 20.0 : piece.hi;
        ResidualFn res(out.profile, lambda0, piece.f);
        for (int i = 0; i < 64; ++i) {
            double r = lo + (hi - lo) * (i + 0.5) / 64.0;
            out.checks.max_residual = std::max(out.checks.max_residual, std::abs(res(r)));
        }
    }
    for (int i = 0; i <= 64; ++i) {
        double r = out.r0 + i;
        out.checks.mc_outer_err =
            std::max(out.checks.mc_outer_err, std::abs(mean_curvature(out.profile, r) - c));
        if (i <= 32) {
            double rr = 1e-3 + (glued.a - 1e-3) * i / 32.0;
            out.checks.inner_identity_err =
                std::max(out.checks.inner_identity_err, std::abs(out.profile.f(rr) - rr));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Warped product over the line: measure growth rate +c on the left end,
// -c on the right end, ground state with eigenvalue lambda.
// ---------------------------------------------------------------------------

struct NegativeGrowthManifold {
    int n = 3;
    double c = 0, lambda = 0, epsilon = 0;
    double R1 = 0;       // quarter period of the middle mode
    double R = 0;        // past R the growth rate is exactly -c
    double c1 = 0;       // left amplitude: phi = c1 exp(rate_left t), t <= 0
    double right_amp = 0; // right amplitude: phi = right_amp exp(rate_right (t - R1))
    double rate_left = 0;  // c/2 + sqrt(c^2/4 - lambda)  (decaying side, t -> -inf)
    double rate_right = 0; // c/2 - sqrt(c^2/4 - lambda)  (growing side, t -> +inf)
    PiecewiseExpr phi;
    WarpingProfile profile;
    ConstructionChecks checks;

    // Mean curvature of the distance to the {t = 0} slice (equals
    // -(n-1) f'/f for t < 0 where the distance runs against t).
    double distance_mean_curvature(double t) const {
        double mc = mean_curvature(profile, t);
        return t >= 0 ? mc : -mc;
    }
};

inline NegativeGrowthManifold build_negative_growth_manifold(double c, double lambda,
                                                             double epsilon = 0, int n = 3,
                                                             double fit_tol = 1e-12) {
    if (!(c > 0 && lambda > 0 && lambda < 0.25 * c * c))
        throw std::domain_error("need 0 < lambda < c^2/4");
    NegativeGrowthManifold out;
    out.n = n;
    out.c = c;
    out.lambda = lambda;
    double sq = std::sqrt(lambda);
    out.R1 = 0.5 * M_PI / sq;
    out.epsilon = epsilon > 0 ? epsilon : 0.25 * out.R1;
    if (!(out.epsilon < out.R1 - out.epsilon))
        throw std::domain_error("gluing margin must satisfy eps < R1 - eps");
    double s = std::sqrt(0.25 * c * c - lambda);
    out.rate_left = 0.5 * c + s;
    out.rate_right = 0.5 * c - s;

    const double eps = out.epsilon, R1 = out.R1;
    const double ap = out.rate_left, am = out.rate_right;

    // Left window (0, eps): phi' blends the exponential slope into the sine
    // slope; blending derivatives keeps phi' > 0 with no window tuning.  The
    // left amplitude c1 enters linearly and is solved from continuity at eps.
    auto stepL = [&](double t) { return SmoothStep::eval(t / eps); };
    auto EL = [&](double t) { return (1.0 - stepL(t)) * ap * std::exp(ap * t); };
    auto SL = [&](double t) { return stepL(t) * sq * std::cos(sq * t); };
    PairFit fitL = cheb_fit_pair(EL, SL, 0.0, eps, 12, fit_tol);
    double IE = 0, IS = 0;
    std::vector<LocalPoly> QE, QS;
    for (size_t k = 0; k < fitL.first.size(); ++k) {
        QE.push_back(fitL.first[k].antiderivative_r());
        QS.push_back(fitL.second[k].antiderivative_r());
        IE += QE.back().eval_x(1.0);
        IS += QS.back().eval_x(1.0);
    }
    out.c1 = (std::sin(sq * eps) - IS) / (1.0 + IE);
    if (!(out.c1 > 0 && out.c1 < std::sin(sq * eps)))
        throw std::runtime_error("left gluing amplitude escaped (0, u1(eps))");

    std::vector<std::pair<double, double>> phi_poly_bounds;
    std::vector<LocalPoly> phi_polys;
    double anchor = out.c1;
    for (size_t k = 0; k < QE.size(); ++k) {
        LocalPoly combined = QS[k];
        for (size_t j = 0; j < combined.coeff.size(); ++j)
            combined.coeff[j] += out.c1 * QE[k].coeff[j];
        combined.coeff[0] += anchor;
        phi_polys.push_back(combined);
        phi_poly_bounds.push_back({QE[k].a, QE[k].b});
        anchor = combined.eval_x(1.0);
    }
    size_t left_poly_count = phi_polys.size();

    // Right window (R1 - eps, R1): same construction toward the right
    // exponential, amplitude solved from continuity at R1.
    auto stepR = [&](double t) { return SmoothStep::eval((t - (R1 - eps)) / eps); };
    auto SR = [&](double t) { return (1.0 - stepR(t)) * sq * std::cos(sq * t); };
    auto ER = [&](double t) { return stepR(t) * am * std::exp(am * (t - R1)); };
    PairFit fitR = cheb_fit_pair(SR, ER, R1 - eps, R1, 12, fit_tol);
    double JS = 0, JE = 0;
    std::vector<LocalPoly> QSr, QEr;
    for (size_t k = 0; k < fitR.first.size(); ++k) {
        QSr.push_back(fitR.first[k].antiderivative_r());
        QEr.push_back(fitR.second[k].antiderivative_r());
        JS += QSr.back().eval_x(1.0);
        JE += QEr.back().eval_x(1.0);
    }
    out.right_amp = (std::sin(sq * (R1 - eps)) + JS) / (1.0 - JE);
    if (!(out.right_amp > 0)) throw std::runtime_error("right gluing amplitude not positive");

    anchor = std::sin(sq * (R1 - eps));
    for (size_t k = 0; k < QSr.size(); ++k) {
        LocalPoly combined = QSr[k];
        for (size_t j = 0; j < combined.coeff.size(); ++j)
            combined.coeff[j] += out.right_amp * QEr[k].coeff[j];
        combined.coeff[0] += anchor;
        phi_polys.push_back(combined);
        phi_poly_bounds.push_back({QSr[k].a, QSr[k].b});
        anchor = combined.eval_x(1.0);
    }

    // Assemble phi.
    const double inf = std::numeric_limits<double>::infinity();
    Expr t = Expr::var();
    std::vector<ProfilePiece> phi_pieces;
    phi_pieces.emplace_back(-inf, 0.0, Expr::constant(out.c1) * exp(Expr::constant(ap) * t));
    for (size_t k = 0; k < left_poly_count; ++k)
        phi_pieces.emplace_back(phi_poly_bounds[k].first, phi_poly_bounds[k].second,
                                phi_polys[k].to_expr());
    phi_pieces.emplace_back(eps, R1 - eps, sin(Expr::constant(sq) * t));
    for (size_t k = left_poly_count; k < phi_polys.size(); ++k)
        phi_pieces.emplace_back(phi_poly_bounds[k].first, phi_poly_bounds[k].second,
                                phi_polys[k].to_expr());
    phi_pieces.emplace_back(R1, inf,
                            Expr::constant(out.right_amp) *
                                exp(Expr::constant(am) * (t - Expr::constant(R1))));
    out.phi = PiecewiseExpr(std::move(phi_pieces));
    out.R = R1;

    // Warping profile by inversion, region by region, chaining log f with
    // f(0) = 1.  Closed-form regions invert exactly: slope ratio c on both
    // exponential regions (so f is exp(-c t/(n-1)) there) and a constant f
    // across the sine region.
    std::vector<ProfilePiece> fp;
    double cn = c / (n - 1);
    fp.emplace_back(-inf, 0.0, exp(Expr::constant(-cn) * t));
    double log_f = 0.0; // log f(0)
    for (size_t k = 0; k < left_poly_count; ++k) {
        auto inv = invert_radial_pieces(phi_polys[k].to_expr(), lambda, n,
                                        phi_poly_bounds[k].first, std::exp(log_f),
                                        phi_poly_bounds[k].second, fit_tol);
        for (auto& p : inv.pieces) fp.push_back(std::move(p));
        log_f = inv.log_f_end;
    }
    double f_mid = std::exp(log_f);
    fp.emplace_back(eps, R1 - eps, Expr::constant(f_mid));
    for (size_t k = left_poly_count; k < phi_polys.size(); ++k) {
        auto inv = invert_radial_pieces(phi_polys[k].to_expr(), lambda, n,
                                        phi_poly_bounds[k].first, std::exp(log_f),
                                        phi_poly_bounds[k].second, fit_tol);
        for (auto& p : inv.pieces) fp.push_back(std::move(p));
        log_f = inv.log_f_end;
    }
    double f_R1 = std::exp(log_f);
    fp.emplace_back(R1, inf,
                    Expr::constant(f_R1) * exp(Expr::constant(-cn) * (t - Expr::constant(R1))));
    out.profile = WarpingProfile(DomainKind::Line, n, std::move(fp));

    // Checks.
    out.checks.profile = out.profile.validate();
    for (int i = 0; i <= 4000; ++i) {
        double tt = -10.0 + 25.0 * i / 4000.0;
        if (!(out.phi.deriv(tt) > 0)) out.checks.monotone = false;
    }
    for (const auto& piece : out.phi.pieces()) {
        double lo = std::isinf(piece.lo) ? -15.0 : piece.lo;
        double hi = std::isinf(piece.hi) ? R1 + 15.0 : piece.hi;
        ResidualFn res(out.profile, lambda, piece.f);
        for (int i = 0; i < 100; ++i) {
            double tt = lo + (hi - lo) * (i + 0.5) / 100.0;
            out.checks.max_residual = std::max(out.checks.max_residual, std::abs(res(tt)));
        }
    }
    for (int i = 0; i <= 64; ++i) {
        double tt = R1 + 20.0 * i / 64.0;
        out.checks.mc_outer_err =
            std::max(out.checks.mc_outer_err, std::abs(out.distance_mean_curvature(tt) + c));
        double tl = -20.0 * i / 64.0;
        out.checks.mc_outer_err =
            std::max(out.checks.mc_outer_err, std::abs(out.distance_mean_curvature(tl) - c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Growth rate exactly c - (1+delta)/(2 c r^2) past the switch radius.
// ---------------------------------------------------------------------------

struct InverseSquareGrowthProfile {
    int n = 3;
    double c = 0, delta = 0, r_switch = 0;
    WarpingProfile profile;
    ConstructionChecks checks;
};

inline InverseSquareGrowthProfile build_inverse_square_growth_profile(int n, double c,
                                                                      double delta,
                                                                      double r_switch = 1.0) {
    if (c == 0.0) throw std::domain_error("growth rate c must be nonzero");
    if (!(delta > 0)) throw std::domain_error("delta must be positive");
    if (!(r_switch > 0)) throw std::domain_error("switch radius must be positive");
    InverseSquareGrowthProfile out;
    out.n = n;
    out.c = c;
    out.delta = delta;
    out.r_switch = r_switch;

    Expr r = Expr::var();
    Expr density_log = Expr::constant(c) * r +
                       Expr::constant(1.0 + delta) / (Expr::constant(2.0 * c) * r);
    Expr f_main = exp(density_log / double(n - 1));

    PiecewiseExpr glued = glue(Expr::var(), f_main, 0.5 * r_switch, r_switch, 0.0,
                               std::numeric_limits<double>::infinity());
    out.profile = WarpingProfile(DomainKind::HalfLine, n, glued.pieces());
    out.checks.profile = out.profile.validate();
    for (int i = 0; i <= 64; ++i) {
        double rr = r_switch + i;
        double expected = c - (1.0 + delta) / (2.0 * c * rr * rr);
        out.checks.mc_outer_err = std::max(
            out.checks.mc_outer_err, std::abs(mean_curvature(out.profile, rr) - expected));
    }
    return out;
}

} // namespace warpspec
