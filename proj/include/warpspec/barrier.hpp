#pragma once

// Growth-rate case table for pointwise eigenfunction bounds.  Each case pins
// a one-sided hypothesis on the measure growth rate Delta_g r, a barrier
// (super- or subsolution candidate near infinity), and the closed-form
// envelope it certifies through the comparison principle:
//
//   residual (-Delta_g - lambda) w >= 0 on [r1, r2]   (supersolution)
//   |v| <= C w  with  C = |v|/w  at the anchor radius (comparison)
//
// All checks are strong-form and pointwise on log-spaced grids; "near
// infinity" is made concrete by scanning for the first radius past which
// the residual sign is uniform.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpspec/expr.hpp"
#include "warpspec/profile.hpp"
#include "warpspec/radial.hpp"

namespace warpspec {

// Characteristic decay rates: the roots of x^2 - c x + lambda = 0.
struct Rates {
    double c = 0, lambda = 0;
    double alpha = 0;       // larger root  c/2 + sqrt(c^2/4 - lambda)
    double alpha_minus = 0; // smaller root c/2 - sqrt(c^2/4 - lambda)
};

inline Rates rates(double c, double lambda) {
    if (!(lambda >= 0.0) || !(lambda < 0.25 * c * c))
        throw std::domain_error("rates: need 0 <= lambda < c^2/4 (real distinct roots)");
    double s = std::sqrt(0.25 * c * c - lambda);
    return Rates{c, lambda, 0.5 * c + s, 0.5 * c - s};
}

// Negative-growth rate  beta/2 - sqrt(beta^2/4 - lambda)  (the slow root).
inline double alpha_tilde(double beta, double lambda) {
    if (!(lambda >= 0.0) || !(lambda < 0.25 * beta * beta))
        throw std::domain_error("alpha_tilde: need 0 <= lambda < beta^2/4");
    return 0.5 * beta - std::sqrt(0.25 * beta * beta - lambda);
}

enum class CaseVariant {
    I, II, III, IV, V, VI, VII, VIII, IX, X, XI,
    GroundLower,    // upper hypothesis on Delta_g r, lower bound on a ground state
    NegativeGrowth, // negative growth rate -beta, growing envelope exp(alpha_tilde r)
};

inline const char* to_string(CaseVariant v) {
    switch (v) {
        case CaseVariant::I: return "i";
        case CaseVariant::II: return "ii";
        case CaseVariant::III: return "iii";
        case CaseVariant::IV: return "iv";
        case CaseVariant::V: return "v";
        case CaseVariant::VI: return "vi";
        case CaseVariant::VII: return "vii";
        case CaseVariant::VIII: return "viii";
        case CaseVariant::IX: return "ix";
        case CaseVariant::X: return "x";
        case CaseVariant::XI: return "xi";
        case CaseVariant::GroundLower: return "ground-lower";
        case CaseVariant::NegativeGrowth: return "negative-growth";
    }
    return "?";
}

inline CaseVariant case_variant_from_string(const std::string& s) {
    for (CaseVariant v : {CaseVariant::I, CaseVariant::II, CaseVariant::III, CaseVariant::IV,
                          CaseVariant::V, CaseVariant::VI, CaseVariant::VII, CaseVariant::VIII,
                          CaseVariant::IX, CaseVariant::X, CaseVariant::XI,
                          CaseVariant::GroundLower, CaseVariant::NegativeGrowth})
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown case variant '" + s + "'");
}

struct GrowthRateCase {
    CaseVariant variant = CaseVariant::I;
    double c = 0;      // asymptotic growth rate (for negative-growth: beta > 0)
    double lambda = 0; // eigenvalue parameter
    double beta = 0;   // case constant beta_k
    double theta = 0;
    double eps = 0;
    double C1 = 0;   // hypothesis excess constant (ground-lower / negative-growth)
    double delta = 0;

    void validate() const {
        Rates rt = base_rates();
        auto require = [&](bool ok, const char* what) {
            if (!ok)
                throw std::domain_error(std::string("case ") + to_string(variant) +
                                        ": parameter range violated: " + what);
        };
        switch (variant) {
            case CaseVariant::I:
                require(rt.alpha_minus < beta && beta < rt.alpha,
                        "beta must lie strictly between the characteristic roots");
                break;
            case CaseVariant::II:
                require(beta >= 0.0 && (beta < rt.alpha_minus || beta > rt.alpha),
                        "beta must avoid [alpha_minus, alpha]");
                break;
            case CaseVariant::III: require(beta > 0 && eps > 0, "need beta > 0, eps > 0"); break;
            case CaseVariant::IV: require(beta > 0, "need beta > 0"); break;
            case CaseVariant::V:
                require(beta > 0 && theta > 0 && theta < 1, "need beta > 0, 0 < theta < 1");
                break;
            case CaseVariant::VI: require(theta > 0 && theta <= 1, "need 0 < theta <= 1"); break;
            case CaseVariant::VII:
                require(beta > 0 && theta > 0 && theta < 1 && eps > 0,
                        "need beta > 0, 0 < theta < 1, eps > 0");
                break;
            case CaseVariant::VIII: require(theta > 0 && eps > 0, "need theta > 0, eps > 0"); break;
            case CaseVariant::IX:
                require(beta > 0 && theta > 0 && theta < 1 && eps > 0,
                        "need beta > 0, 0 < theta < 1, eps > 0");
                break;
            case CaseVariant::X: require(theta > 0 && eps > 0, "need theta > 0, eps > 0"); break;
            case CaseVariant::XI:
                require(beta > 0 && theta > 0 && theta < 1 && eps > 0,
                        "need beta > 0, 0 < theta < 1, eps > 0");
                break;
            case CaseVariant::GroundLower:
                require(C1 > 0 && delta > 0 && eps > 0 && eps < delta,
                        "need C1 > 0, delta > 0, 0 < eps < delta");
                break;
            case CaseVariant::NegativeGrowth:
                require(C1 > 0 && delta > 0 && eps > 0 && eps < delta,
                        "need C1 > 0, delta > 0, 0 < eps < delta");
                break;
        }
    }

    // Rates of the quadratic x^2 - cx + lambda (for negative growth the roots
    // of x^2 - beta x + lambda, with c holding beta).
    Rates base_rates() const { return rates(c, lambda); }

    // One-sided hypothesis on the growth rate: Delta_g r >= bound (LowerBound),
    // Delta_g r <= bound (UpperBound), or Delta_g r -> bound (Limit, case ii).
    enum class HypothesisKind { LowerBound, UpperBound, Limit };
    struct Hypothesis {
        HypothesisKind kind;
        Expr bound;
    };

    Hypothesis hypothesis() const {
        Expr r = Expr::var();
        Rates rt = base_rates();
        double a = rt.alpha, cc = c;
        double gap = 2.0 * a - cc;
        switch (variant) {
            case CaseVariant::I: return {HypothesisKind::LowerBound, Expr::constant(cc)};
            case CaseVariant::II: return {HypothesisKind::Limit, Expr::constant(cc)};
            case CaseVariant::III:
                return {HypothesisKind::LowerBound, cc - beta / (r * pow(log(r), 1.0 + eps))};
            case CaseVariant::IV:
                return {HypothesisKind::LowerBound, cc - beta / (r * log(r))};
            case CaseVariant::V:
                return {HypothesisKind::LowerBound, cc - beta / (r * pow(log(r), theta))};
            case CaseVariant::VI:
                return {HypothesisKind::LowerBound, cc - gap * theta / (a * r)};
            case CaseVariant::VII:
                return {HypothesisKind::LowerBound,
                        cc - (gap * (1.0 - theta) * beta - eps) / (a * pow(r, theta))};
            case CaseVariant::VIII:
                return {HypothesisKind::LowerBound,
                        cc + (gap * theta + eps) / (a * r * log(r))};
            case CaseVariant::IX:
                return {HypothesisKind::LowerBound,
                        cc + (gap * (1.0 - theta) * beta + eps) / (a * r * pow(log(r), theta))};
            case CaseVariant::X:
                return {HypothesisKind::LowerBound, cc + (gap * theta + eps) / (a * r)};
            case CaseVariant::XI:
                return {HypothesisKind::LowerBound,
                        cc + (gap * (1.0 - theta) * beta + eps) / (a * pow(r, theta))};
            case CaseVariant::GroundLower:
                return {HypothesisKind::UpperBound,
                        cc + C1 / (r * pow(log(r + 1.0), 1.0 + delta) + 1.0)};
            case CaseVariant::NegativeGrowth:
                return {HypothesisKind::UpperBound,
                        -cc + C1 / (r * pow(log(r + 1.0), 1.0 + delta) + 1.0)};
        }
        throw std::logic_error("unreachable");
    }
};

struct BoundTemplate {
    enum class Direction { Upper, Lower };
    Direction direction = Direction::Upper;
    double gamma = 0;  // envelope = constant * prefactor(r) * exp(-gamma r)
    Expr prefactor = Expr::constant(1.0);
    double onset_radius = 2.0;
    double constant = 1.0;

    double eval(double r) const { return constant * prefactor(r) * std::exp(-gamma * r); }
    Expr expr() const {
        return Expr::constant(constant) * prefactor * exp(Expr::constant(-gamma) * Expr::var());
    }
};

// The certified envelope shape of each case, with rate and prefactor filled
// from the parameters.
inline BoundTemplate case_bound(const GrowthRateCase& cs) {
    cs.validate();
    Expr r = Expr::var();
    BoundTemplate t;
    if (cs.variant == CaseVariant::II)
        throw std::invalid_argument("variant ii provides subsolutions only, no envelope");
    if (cs.variant == CaseVariant::NegativeGrowth) {
        t.direction = BoundTemplate::Direction::Upper;
        t.gamma = -alpha_tilde(cs.c, cs.lambda); // envelope exp(+alpha_tilde r)
        return t;
    }
    Rates rt = cs.base_rates();
    double a = rt.alpha, gap = 2.0 * a - cs.c;
    t.direction = cs.variant == CaseVariant::GroundLower ? BoundTemplate::Direction::Lower
                                                         : BoundTemplate::Direction::Upper;
    t.gamma = a;
    switch (cs.variant) {
        case CaseVariant::I: t.gamma = cs.beta; break;
        case CaseVariant::III: break; // plain exp(-alpha r)
        case CaseVariant::IV: t.prefactor = pow(log(r + 2.0), a * cs.beta / gap); break;
        case CaseVariant::V:
            t.prefactor = exp(Expr::constant(a * cs.beta / (gap * (1.0 - cs.theta))) *
                              pow(log(r + 1.0), 1.0 - cs.theta));
            break;
        case CaseVariant::VI: t.prefactor = pow(r + 1.0, cs.theta); break;
        case CaseVariant::VII: t.prefactor = exp(Expr::constant(cs.beta) * pow(r, 1.0 - cs.theta)); break;
        case CaseVariant::VIII: t.prefactor = pow(log(r + 2.0), -cs.theta); break;
        case CaseVariant::IX:
            t.prefactor = exp(Expr::constant(-cs.beta) * pow(log(r + 1.0), 1.0 - cs.theta));
            break;
        case CaseVariant::X: t.prefactor = pow(r, -cs.theta); break;
        case CaseVariant::XI:
            t.prefactor = exp(Expr::constant(-cs.beta) * pow(r, 1.0 - cs.theta));
            break;
        case CaseVariant::GroundLower: break; // plain exp(-alpha r)
        default: break;
    }
    return t;
}

// The proof-side barrier: the envelope with the correction that makes the
// residual sign uniform near infinity.
inline Expr barrier_candidate(const GrowthRateCase& cs) {
    cs.validate();
    Expr r = Expr::var();
    switch (cs.variant) {
        case CaseVariant::I:
        case CaseVariant::II:
            return exp(Expr::constant(-cs.beta) * r);
        default: break;
    }
    if (cs.variant == CaseVariant::NegativeGrowth) {
        double at = alpha_tilde(cs.c, cs.lambda);
        return exp(Expr::constant(at) * r - pow(log(r), -cs.eps));
    }
    Rates rt = cs.base_rates();
    double a = rt.alpha, gap = 2.0 * a - cs.c;
    Expr envelope = exp(Expr::constant(-a) * r);
    switch (cs.variant) {
        case CaseVariant::III: {
            double delta1 = a * cs.beta / (cs.eps * gap);
            return exp(Expr::constant(-a) * r - Expr::constant(delta1) * pow(log(r), -cs.eps));
        }
        case CaseVariant::IV: return pow(log(r), a * cs.beta / gap) * envelope;
        case CaseVariant::V:
            return exp(Expr::constant(-a) * r +
                       Expr::constant(a * cs.beta / (gap * (1.0 - cs.theta))) *
                           pow(log(r), 1.0 - cs.theta));
        case CaseVariant::VI: return pow(r, cs.theta) * envelope;
        case CaseVariant::VII:
            return exp(Expr::constant(-a) * r + Expr::constant(cs.beta) * pow(r, 1.0 - cs.theta));
        case CaseVariant::VIII: return pow(log(r), -cs.theta) * envelope;
        case CaseVariant::IX:
            return exp(Expr::constant(-a) * r -
                       Expr::constant(cs.beta) * pow(log(r), 1.0 - cs.theta));
        case CaseVariant::X: return pow(r, -cs.theta) * envelope;
        case CaseVariant::XI:
            return exp(Expr::constant(-a) * r - Expr::constant(cs.beta) * pow(r, 1.0 - cs.theta));
        case CaseVariant::GroundLower:
            return exp(Expr::constant(-rt.alpha) * r + pow(log(r), -cs.eps));
        default: break;
    }
    throw std::logic_error("unreachable");
}

struct SignCheckReport {
    bool pass = false;
    double worst = 0;    // most violating normalized residual (signed)
    double worst_r = 0;
    std::optional<double> first_violation;
    int points = 0;
};

namespace detail {

inline SignCheckReport residual_sign_check(const WarpingProfile& p, double lambda, const Expr& w,
                                           double r1, double r2, int grid_points, bool want_super) {
    if (!(r1 > 0 && r1 < r2)) throw std::invalid_argument("bad check span");
    ResidualFn res(p, lambda, w);
    int npts = grid_points > 0
                   ? grid_points
                   : std::max(1024, int(4096 * std::log10(r2 / r1)));
    SignCheckReport rep;
    rep.pass = true;
    rep.points = npts;
    double worst_norm = std::numeric_limits<double>::infinity();
    const double collar = 1e-6;
    for (int i = 0; i <= npts; ++i) {
        double r = std::exp(std::log(r1) + (std::log(r2) - std::log(r1)) * i / npts);
        bool near_joint = false;
        for (double j : p.joints())
            if (std::abs(r - j) < collar) near_joint = true;
        if (near_joint) continue;
        double wv = w(r);
        if (!(wv > 0.0))
            throw std::domain_error("barrier must be positive on the check span (r = " +
                                    detail::fmt_double(r) + ")");
        double rv = res(r);
        double sc = std::max(res.scale(r), 1e-300);
        double signed_norm = want_super ? rv / sc : -rv / sc;
        if (signed_norm < worst_norm) {
            worst_norm = signed_norm;
            rep.worst = rv / sc;
            rep.worst_r = r;
        }
        if (signed_norm < -1e-12) {
            rep.pass = false;
            if (!rep.first_violation) rep.first_violation = r;
        }
    }
    return rep;
}

} // namespace detail

// Pointwise strong-form check (-Delta_g - lambda) w >= 0 on [r1, r2] on a
// log-spaced grid (default 4096 points per decade); verdict tolerates
// -1e-12 relative to the local term scale.
inline SignCheckReport supersolution_check(const WarpingProfile& p, double lambda, const Expr& w,
                                           double r1, double r2, int grid_points = 0) {
    return detail::residual_sign_check(p, lambda, w, r1, r2, grid_points, true);
}

inline SignCheckReport subsolution_check(const WarpingProfile& p, double lambda, const Expr& w,
                                         double r1, double r2, int grid_points = 0) {
    return detail::residual_sign_check(p, lambda, w, r1, r2, grid_points, false);
}

// First radius past which the residual sign is uniformly the requested one,
// scanning upward from r_start; refuses (nullopt) if none is found at or
// below r_refuse.
inline std::optional<double> residual_sign_onset(const WarpingProfile& p, double lambda,
                                                 const Expr& w, bool want_super,
                                                 double r_start = 2.0, double r_refuse = 1e3,
                                                 double r_scan_to = 1e4) {
    ResidualFn res(p, lambda, w);
    int npts = std::max(2048, int(4096 * std::log10(r_scan_to / r_start)));
    double onset = r_start;
    bool any_ok = false;
    for (int i = 0; i <= npts; ++i) {
        double r = std::exp(std::log(r_start) + (std::log(r_scan_to) - std::log(r_start)) * i / npts);
        double rv = res(r);
        double sc = std::max(res.scale(r), 1e-300);
        double signed_norm = want_super ? rv / sc : -rv / sc;
        if (signed_norm < -1e-12) {
            onset = r;
            any_ok = false;
        } else if (!any_ok) {
            onset = r;
            any_ok = true;
        }
    }
    if (!any_ok || onset > r_refuse) return std::nullopt;
    return onset;
}

struct ComparisonResult {
    BoundTemplate envelope;        // certified template with constant filled
    double comparison_constant = 0; // C at the anchor
    bool pass = false;
    std::optional<double> violation_r;
    double max_ratio = 0; // max |v| / (C w) over the grid, <= 1 + 1e-9 on pass
    bool tail_decays = true;
};

// Numerical comparison principle: anchor C := |v|/w at r_anchor, then check
// |v| <= C w at every grid point >= r_anchor (>= for Upper; mirrored for
// Lower).  The tail proxy checks that v^2 f^{n-1} decays over the last
// stretch of the grid (stand-in for the L^2 growth hypothesis).
inline ComparisonResult comparison_envelope(const WarpingProfile& p, const RadialSolution& v,
                                            const Expr& w, double r_anchor,
                                            BoundTemplate shape = {}) {
    bool lower = shape.direction == BoundTemplate::Direction::Lower;
    double va = v.eval(r_anchor), wa = w(r_anchor);
    if (!(wa > 0)) throw std::domain_error("comparison barrier must be positive at the anchor");
    ComparisonResult out;
    out.comparison_constant = std::abs(va) / wa;
    out.pass = true;
    out.max_ratio = 0;

    if (shape.direction == BoundTemplate::Direction::Upper) {
        // Tail decay proxy on the last quarter of the grid.
        size_t m = v.r.size();
        double prev = std::numeric_limits<double>::infinity();
        for (size_t i = 3 * m / 4; i < m; i += std::max<size_t>(1, m / 64)) {
            double q = v.u[i] * v.u[i] * measure_density(p, v.r[i]);
            if (q > prev * (1.0 + 1e-6)) out.tail_decays = false;
            prev = q;
        }
    }

    for (size_t i = 0; i < v.r.size(); ++i) {
        double r = v.r[i];
        if (r < r_anchor) continue;
        double wv = w(r);
        if (!(wv > 0)) throw std::domain_error("comparison barrier must stay positive");
        if (lower && !(v.u[i] > 0)) {
            out.pass = false;
            if (!out.violation_r) out.violation_r = r;
            continue;
        }
        double ratio = lower ? (out.comparison_constant * wv) / v.u[i]
                             : std::abs(v.u[i]) / (out.comparison_constant * wv);
        out.max_ratio = std::max(out.max_ratio, ratio);
        if (ratio > 1.0 + 1e-9) {
            out.pass = false;
            if (!out.violation_r) out.violation_r = r;
        }
    }

    // Certified template: C * w <= constant * prefactor * exp(-gamma r) on the
    // grid, with the ratio supremum folded into the constant.
    double sup_ratio = 0;
    for (size_t i = 0; i < v.r.size(); ++i) {
        double r = v.r[i];
        if (r < r_anchor) continue;
        double shape_val = shape.prefactor(r) * std::exp(-shape.gamma * r);
        double q = w(r) / shape_val;
        sup_ratio = lower ? (sup_ratio == 0 ? q : std::min(sup_ratio, q))
                          : std::max(sup_ratio, q);
    }
    out.envelope = shape;
    out.envelope.onset_radius = r_anchor;
    out.envelope.constant = out.comparison_constant * (sup_ratio == 0 ? 1.0 : sup_ratio);
    return out;
}

// End profile with Delta_g r == c exactly:  f = exp(c r / (n-1)) on [r_lo, inf).
inline WarpingProfile make_exact_growth_profile(double c, int n, double r_lo = 1.0) {
    std::vector<ProfilePiece> pieces;
    pieces.emplace_back(r_lo, std::numeric_limits<double>::infinity(),
                        exp(Expr::constant(c / (n - 1)) * Expr::var()));
    return WarpingProfile(DomainKind::HalfLine, n, std::move(pieces));
}

// End profile whose growth rate equals the case hypothesis bound exactly
// (margin zero).  Supported for the variants whose bound has an elementary
// antiderivative (i, iii..xi).
inline WarpingProfile make_case_extremal_profile(const GrowthRateCase& cs, int n,
                                                 double r_lo = 2.0) {
    cs.validate();
    Expr r = Expr::var();
    Rates rt = cs.base_rates();
    double a = rt.alpha, gap = 2.0 * a - cs.c, cc = cs.c;
    Expr H_int; // antiderivative of the hypothesis bound
    switch (cs.variant) {
        case CaseVariant::I:
        case CaseVariant::II: H_int = Expr::constant(cc) * r; break;
        case CaseVariant::III:
            H_int = Expr::constant(cc) * r + Expr::constant(cs.beta / cs.eps) * pow(log(r), -cs.eps);
            break;
        case CaseVariant::IV:
            H_int = Expr::constant(cc) * r - Expr::constant(cs.beta) * log(log(r));
            break;
        case CaseVariant::V:
            H_int = Expr::constant(cc) * r -
                    Expr::constant(cs.beta / (1.0 - cs.theta)) * pow(log(r), 1.0 - cs.theta);
            break;
        case CaseVariant::VI:
            H_int = Expr::constant(cc) * r - Expr::constant(gap * cs.theta / a) * log(r);
            break;
        case CaseVariant::VII:
            H_int = Expr::constant(cc) * r -
                    Expr::constant((gap * (1.0 - cs.theta) * cs.beta - cs.eps) /
                                   (a * (1.0 - cs.theta))) *
                        pow(r, 1.0 - cs.theta);
            break;
        case CaseVariant::VIII:
            H_int = Expr::constant(cc) * r + Expr::constant((gap * cs.theta + cs.eps) / a) * log(log(r));
            break;
        case CaseVariant::IX:
            H_int = Expr::constant(cc) * r +
                    Expr::constant((gap * (1.0 - cs.theta) * cs.beta + cs.eps) /
                                   (a * (1.0 - cs.theta))) *
                        pow(log(r), 1.0 - cs.theta);
            break;
        case CaseVariant::X:
            H_int = Expr::constant(cc) * r + Expr::constant((gap * cs.theta + cs.eps) / a) * log(r);
            break;
        case CaseVariant::XI:
            H_int = Expr::constant(cc) * r +
                    Expr::constant((gap * (1.0 - cs.theta) * cs.beta + cs.eps) /
                                   (a * (1.0 - cs.theta))) *
                        pow(r, 1.0 - cs.theta);
            break;
        default:
            throw std::invalid_argument("no elementary extremal profile for this variant");
    }
    std::vector<ProfilePiece> pieces;
    pieces.emplace_back(r_lo, std::numeric_limits<double>::infinity(),
                        exp(H_int / double(n - 1)));
    return WarpingProfile(DomainKind::HalfLine, n, std::move(pieces));
}

// Reference table generated from the case registry.
inline std::string render_case_table() {
    std::string out =
        "# Growth-rate case table\n\n"
        "Hypotheses constrain the measure growth rate Delta_g r near infinity;\n"
        "each row lists the barrier checked by the residual sign test and the\n"
        "envelope certified through the comparison principle.  Rates: alpha =\n"
        "c/2 + sqrt(c^2/4 - lambda) and its mirror root alpha-.\n\n"
        "| variant | hypothesis on Delta_g r | barrier | certified envelope |\n"
        "|---|---|---|---|\n"
        "| i | >= c | exp(-b r), alpha- < b < alpha | C exp(-b r) |\n"
        "| ii | -> c | exp(-b r), b < alpha- or b > alpha (subsolution) | none |\n"
        "| iii | >= c - b/(r log(r)^(1+e)) | exp(-alpha r - d1 log(r)^(-e)), d1 = alpha b/(e(2 alpha - c)) | C exp(-alpha r) |\n"
        "| iv | >= c - b/(r log(r)) | log(r)^(alpha b/(2 alpha - c)) exp(-alpha r) | C log(r+2)^(alpha b/(2 alpha - c)) exp(-alpha r) |\n"
        "| v | >= c - b/(r log(r)^t) | exp(-alpha r + q log(r)^(1-t)), q = alpha b/((2 alpha - c)(1-t)) | C exp(-alpha r + q log(r+1)^(1-t)) |\n"
        "| vi | >= c - (2 alpha - c) t/(alpha r) | r^t exp(-alpha r) | C (r+1)^t exp(-alpha r) |\n"
        "| vii | >= c - ((2 alpha - c)(1-t) b - e)/(alpha r^t) | exp(-alpha r + b r^(1-t)) | C exp(-alpha r + b r^(1-t)) |\n"
        "| viii | >= c + ((2 alpha - c) t + e)/(alpha r log(r)) | log(r)^(-t) exp(-alpha r) | C log(r+2)^(-t) exp(-alpha r) |\n"
        "| ix | >= c + ((2 alpha - c)(1-t) b + e)/(alpha r log(r)^t) | exp(-alpha r - b log(r)^(1-t)) | C exp(-alpha r - b log(r+1)^(1-t)) |\n"
        "| x | >= c + ((2 alpha - c) t + e)/(alpha r) | r^(-t) exp(-alpha r) | C r^(-t) exp(-alpha r) |\n"
        "| xi | >= c + ((2 alpha - c)(1-t) b + e)/(alpha r^t) | exp(-alpha r - b r^(1-t)) | C exp(-alpha r - b r^(1-t)) |\n"
        "| ground-lower | <= c + C1/(r log(r+1)^(1+d) + 1) | exp(-alpha r + log(r)^(-e)), 0 < e < d (subsolution) | ground state >= C exp(-alpha r) |\n"
        "| negative-growth | <= -beta + C1/(r log(r+1)^(1+d) + 1) | exp(at r - log(r)^(-e)), at = beta/2 - sqrt(beta^2/4 - lambda) | C exp(at r) |\n";
    return out;
}

} // namespace warpspec
