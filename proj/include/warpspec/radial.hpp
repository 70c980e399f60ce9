#pragma once

// Radial eigenvalue equation  u'' + (Delta_g r) u' + lambda u = 0  on a
// warping profile: adaptive integration, exact residuals of closed-form
// candidates, decay-rate fitting, and the inverse construction of a profile
// from a prescribed radial solution.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpspec/expr.hpp"
#include "warpspec/ode.hpp"
#include "warpspec/profile.hpp"
#include "warpspec/quadrature.hpp"

namespace warpspec {

enum class RadialBC { RegularPole, ValueSlope, RobinDecay };

inline const char* to_string(RadialBC bc) {
    switch (bc) {
        case RadialBC::RegularPole: return "regular-pole";
        case RadialBC::ValueSlope: return "value-slope";
        case RadialBC::RobinDecay: return "robin-decay";
    }
    return "?";
}

inline RadialBC radial_bc_from_string(const std::string& s) {
    if (s == "regular-pole") return RadialBC::RegularPole;
    if (s == "value-slope") return RadialBC::ValueSlope;
    if (s == "robin-decay") return RadialBC::RobinDecay;
    throw std::invalid_argument("unknown boundary condition tag '" + s + "'");
}

struct BoundaryCondition {
    RadialBC kind = RadialBC::ValueSlope;
    double value = 1.0;
    double slope = 0.0;

    static BoundaryCondition regular_pole(double u0 = 1.0) {
        return {RadialBC::RegularPole, u0, 0.0};
    }
    static BoundaryCondition value_slope(double u, double du) {
        return {RadialBC::ValueSlope, u, du};
    }
    // Decaying far-field direction u'/u = rate (rate < 0 on growing ends).
    static BoundaryCondition robin_decay(double u, double rate) {
        return {RadialBC::RobinDecay, u, rate * u};
    }
};

struct RadialSolution {
    std::vector<double> r, u, du, ddu;
    int n = 3;
    double lambda = 0;
    RadialBC bc = RadialBC::ValueSlope;
    double tol = 1e-10;

    size_t segment(double rr) const {
        if (r.size() < 2 || !(rr >= r.front() && rr <= r.back()))
            throw std::domain_error("radius outside sampled solution range");
        size_t i = std::upper_bound(r.begin(), r.end(), rr) - r.begin();
        if (i == 0) i = 1;
        if (i >= r.size()) i = r.size() - 1;
        return i - 1;
    }
    double eval(double rr) const {
        size_t i = segment(rr);
        return hermite_value(rr, r[i], r[i + 1], u[i], u[i + 1], du[i], du[i + 1]);
    }
    double eval_deriv(double rr) const {
        size_t i = segment(rr);
        return hermite_value(rr, r[i], r[i + 1], du[i], du[i + 1], ddu[i], ddu[i + 1]);
    }
};

namespace detail {

inline std::array<double, 2> radial_rhs(const WarpingProfile& p, double lambda, double r,
                                        const std::array<double, 2>& y) {
    double mc = mean_curvature(p, r);
    return {y[1], -mc * y[1] - lambda * y[0]};
}

} // namespace detail

// Integrates the radial equation over [r_a, r_b].  For a regular-pole start
// the series  u = u0 (1 - lambda r^2 / (2n)),  u' = -u0 lambda r / n  seeds
// the state at r0 = 1e-6 (truncation O(r^4)).
inline RadialSolution integrate_radial(const WarpingProfile& p, double lambda,
                                       const BoundaryCondition& bc, double r_a, double r_b,
                                       double tol = 1e-10) {
    if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
    double start = r_a;
    std::array<double, 2> y0;
    if (bc.kind == RadialBC::RegularPole) {
        if (p.kind() != DomainKind::HalfLine)
            throw std::invalid_argument("regular-pole start needs a half-line profile");
        start = 1e-6;
        double u0 = bc.value;
        y0 = {u0 * (1.0 - lambda * start * start / (2.0 * p.n())),
              -u0 * lambda * start / p.n()};
    } else {
        y0 = {bc.value, bc.slope};
    }
    if (!(start < r_b)) throw std::invalid_argument("integration span is empty");

    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-300;
    auto rhs = [&](double r, const std::array<double, 2>& y) {
        return detail::radial_rhs(p, lambda, r, y);
    };
    auto ode = integrate_ode<2>(rhs, start, r_b, y0, opt);

    RadialSolution sol;
    sol.n = p.n();
    sol.lambda = lambda;
    sol.bc = bc.kind;
    sol.tol = tol;
    sol.r = std::move(ode.t);
    sol.u.reserve(sol.r.size());
    sol.du.reserve(sol.r.size());
    sol.ddu.reserve(sol.r.size());
    for (size_t i = 0; i < sol.r.size(); ++i) {
        double uu = ode.y[i][0], vv = ode.y[i][1];
        sol.u.push_back(uu);
        sol.du.push_back(vv);
        sol.ddu.push_back(-mean_curvature(p, sol.r[i]) * vv - lambda * uu);
    }
    return sol;
}

// Backward companion: integrates from r_b down to r_a with data given at r_b.
// Used where the wanted solution decays toward r_b (backward it dominates,
// so the integration is contamination-free).
inline RadialSolution integrate_radial_backward(const WarpingProfile& p, double lambda,
                                                double u_b, double du_b, double r_a, double r_b,
                                                double tol = 1e-10) {
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-300;
    double c = r_a + r_b; // r = c - s
    auto rhs = [&](double s, const std::array<double, 2>& y) -> std::array<double, 2> {
        double r = c - s;
        double mc = mean_curvature(p, r);
        return {-y[1], mc * y[1] + lambda * y[0]};
    };
    auto ode = integrate_ode<2>(rhs, r_a, r_b, {u_b, du_b}, opt);

    RadialSolution sol;
    sol.n = p.n();
    sol.lambda = lambda;
    sol.bc = RadialBC::ValueSlope;
    sol.tol = tol;
    size_t m = ode.t.size();
    sol.r.resize(m);
    sol.u.resize(m);
    sol.du.resize(m);
    sol.ddu.resize(m);
    for (size_t i = 0; i < m; ++i) {
        size_t j = m - 1 - i;
        double r = c - ode.t[j];
        sol.r[i] = r;
        sol.u[i] = ode.y[j][0];
        sol.du[i] = ode.y[j][1];
        sol.ddu[i] = -mean_curvature(p, r) * sol.du[i] - lambda * sol.u[i];
    }
    return sol;
}

// Re-integrates every stored step with forced half-steps and returns the
// worst arrival defect normalized by max(|u|, |u'|, 1).  The solution
// invariant is  defect <= 10 * tol.
inline double radial_self_check(const WarpingProfile& p, const RadialSolution& sol) {
    double worst = 0;
    auto rhs = [&](double r, const std::array<double, 2>& y) {
        return detail::radial_rhs(p, sol.lambda, r, y);
    };
    for (size_t i = 0; i + 1 < sol.r.size(); ++i) {
        double a = sol.r[i], b = sol.r[i + 1];
        OdeOptions opt;
        opt.rel_tol = sol.tol;
        opt.abs_tol = 1e-300;
        opt.max_step = 0.5 * (b - a);
        auto ode = integrate_ode<2>(rhs, a, b, {sol.u[i], sol.du[i]}, opt);
        double scale = std::max({std::abs(sol.u[i + 1]), std::abs(sol.du[i + 1]), 1.0});
        double d = std::max(std::abs(ode.y.back()[0] - sol.u[i + 1]),
                            std::abs(ode.y.back()[1] - sol.du[i + 1]));
        worst = std::max(worst, d / scale);
    }
    return worst;
}

// (-Delta_g - lambda) w at r, via structural derivatives of w.
class ResidualFn {
public:
    ResidualFn(const WarpingProfile& p, double lambda, Expr w)
        : p_(&p), lambda_(lambda), w_(std::move(w)), dw_(w_.derivative()), ddw_(dw_.derivative()) {}

    double operator()(double r) const {
        return -(ddw_(r) + mean_curvature(*p_, r) * dw_(r)) - lambda_ * w_(r);
    }
    // Magnitude scale of the three residual terms, for relative verdicts.
    double scale(double r) const {
        return std::abs(ddw_(r)) + std::abs(mean_curvature(*p_, r) * dw_(r)) +
               std::abs(lambda_ * w_(r));
    }
    const Expr& w() const { return w_; }

private:
    const WarpingProfile* p_;
    double lambda_;
    Expr w_, dw_, ddw_;
};

inline double residual(const WarpingProfile& p, double lambda, const Expr& w, double r) {
    return ResidualFn(p, lambda, w)(r);
}

struct DecayFit {
    double gamma = 0;               // exponential rate in exp(-gamma r)
    double log_prefactor_power = 0; // power p of (log r)^p
    double r_lo = 0, r_hi = 0;
    double residual_norm = 0; // rms misfit of log u
};

// Least squares of log|u| against {1, r, log log r} on log-spaced samples.
inline DecayFit decay_exponent_fit(const RadialSolution& sol, double r_lo, double r_hi,
                                   int samples = 200) {
    if (!(r_lo > 1.0)) throw std::invalid_argument("fit window must start above r = 1");
    if (!(r_lo < r_hi)) throw std::invalid_argument("empty fit window");
    int grid_inside = 0;
    for (double rr : sol.r) grid_inside += (rr >= r_lo && rr <= r_hi);
    if (grid_inside < 10) throw std::invalid_argument("fit window shorter than 10 grid points");

    std::vector<double> rs(samples), ls(samples);
    double sgn = 0;
    for (int i = 0; i < samples; ++i) {
        double rr = std::exp(std::log(r_lo) + (std::log(r_hi) - std::log(r_lo)) * i / (samples - 1));
        double uu = sol.eval(rr);
        if (uu == 0 || (sgn != 0 && std::signbit(uu) != std::signbit(sgn)))
            throw std::runtime_error("sign change inside fit window at r = " +
                                     detail::fmt_double(rr));
        sgn = uu;
        rs[i] = rr;
        ls[i] = std::log(std::abs(uu));
    }

    // Normal equations for log u = A - gamma r + p log log r.
    double M[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double b[3] = {0, 0, 0};
    for (int i = 0; i < samples; ++i) {
        double phi[3] = {1.0, -rs[i], std::log(std::log(rs[i]))};
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) M[j][k] += phi[j] * phi[k];
            b[j] += phi[j] * ls[i];
        }
    }
    // 3x3 Gaussian elimination with partial pivoting.
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(M[idx[row]][col]) > std::abs(M[idx[piv]][col])) piv = row;
        std::swap(idx[col], idx[piv]);
        for (int row = col + 1; row < 3; ++row) {
            double f = M[idx[row]][col] / M[idx[col]][col];
            for (int k = col; k < 3; ++k) M[idx[row]][k] -= f * M[idx[col]][k];
            b[idx[row]] -= f * b[idx[col]];
        }
    }
    double x[3];
    for (int row = 2; row >= 0; --row) {
        double s = b[idx[row]];
        for (int k = row + 1; k < 3; ++k) s -= M[idx[row]][k] * x[k];
        x[row] = s / M[idx[row]][row];
    }

    DecayFit fit;
    fit.gamma = x[1];
    fit.log_prefactor_power = x[2];
    fit.r_lo = r_lo;
    fit.r_hi = r_hi;
    double rss = 0;
    for (int i = 0; i < samples; ++i) {
        double pred = x[0] - x[1] * rs[i] + x[2] * std::log(std::log(rs[i]));
        rss += (ls[i] - pred) * (ls[i] - pred);
    }
    fit.residual_norm = std::sqrt(rss / samples);
    return fit;
}

struct InvertedProfile {
    WarpingProfile profile;
    double max_residual = 0; // |(-Delta_g - lambda) u| sampled on the result
    int piece_count = 0;
};

struct InvertedPieces {
    std::vector<ProfilePiece> pieces;
    double log_f_end = 0; // log f at r_hi, chained through the piece anchors
};

// Pieces of  f(r) = f0 exp( - int_{r0}^r (u'' + lambda u) / ((n-1) u') )
// over [r0, r_hi].  The log-derivative integrand is interpolated piecewise
// (Chebyshev-Lobatto, exact polynomial antiderivatives, chained anchors),
// which keeps every piece in the expression language and makes sub-joints
// agree to roundoff.
inline InvertedPieces invert_radial_pieces(const Expr& u, double lambda, int n, double r0,
                                           double f0, double r_hi, double fit_tol = 1e-11,
                                           int degree = 12) {
    if (n < 2) throw std::invalid_argument("dimension n must be >= 2");
    Expr du = u.derivative(), ddu = du.derivative();
    auto g = [&](double r) {
        double d = du(r);
        if (std::abs(d) < 1e-14 * (std::abs(u(r)) + 1.0))
            throw std::domain_error("u' vanishes inside the inversion interval at r = " +
                                    detail::fmt_double(r));
        return (ddu(r) + lambda * u(r)) / ((n - 1) * d);
    };
    auto polys = cheb_fit_adaptive(g, r0, r_hi, degree, fit_tol);
    InvertedPieces out;
    double anchor = std::log(f0);
    for (const auto& pg : polys) {
        LocalPoly q = pg.antiderivative_r();
        out.pieces.emplace_back(pg.a, pg.b, exp(Expr::constant(anchor) - q.to_expr()));
        anchor -= q.eval_x(1.0);
    }
    out.log_f_end = anchor;
    return out;
}

// Wraps the inverted pieces as an end profile and reports the worst sampled
// residual of u on it (zero by construction up to the interpolation error).
inline InvertedProfile profile_from_radial_solution(const Expr& u, double lambda, int n,
                                                    double r0, double f0, double r_hi,
                                                    DomainKind kind = DomainKind::HalfLine,
                                                    double fit_tol = 1e-11, int degree = 12) {
    auto inv = invert_radial_pieces(u, lambda, n, r0, f0, r_hi, fit_tol, degree);
    int count = static_cast<int>(inv.pieces.size());
    InvertedProfile out{WarpingProfile(kind, n, std::move(inv.pieces)), 0.0, count};
    ResidualFn res(out.profile, lambda, u);
    for (int i = 0; i < 200; ++i) {
        double r = r0 + (r_hi - r0) * (i + 0.5) / 200.0;
        out.max_residual = std::max(out.max_residual, std::abs(res(r)));
    }
    return out;
}

// int_R^{R+1} u^2 f^{n-1} dr by adaptive quadrature.
inline double integral_decay_profile(const WarpingProfile& p, const RadialSolution& sol,
                                     double R, double rel_tol = 1e-8) {
    if (!(sol.r.front() <= R && sol.r.back() >= R + 1.0))
        throw std::invalid_argument("solution does not cover [R, R+1]");
    return adaptive_simpson(
        [&](double r) {
            double uu = sol.eval(r);
            return uu * uu * measure_density(p, r);
        },
        R, R + 1.0, rel_tol);
}

// CSV export: header comment records the metadata, then r,u,du rows.
inline std::string radial_to_csv(const RadialSolution& sol) {
    std::string out = "# n=" + std::to_string(sol.n) + " lambda=" + detail::fmt_double(sol.lambda) +
                      " bc=" + to_string(sol.bc) + " tol=" + detail::fmt_double(sol.tol) + "\n";
    out += "r,u,du\n";
    for (size_t i = 0; i < sol.r.size(); ++i)
        out += detail::fmt_double(sol.r[i]) + "," + detail::fmt_double(sol.u[i]) + "," +
               detail::fmt_double(sol.du[i]) + "\n";
    return out;
}

inline RadialSolution radial_from_csv(const std::string& text) {
    RadialSolution sol;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "n") sol.n = std::stoi(val);
                else if (key == "lambda") sol.lambda = detail::parse_double(val);
                else if (key == "bc") sol.bc = radial_bc_from_string(val);
                else if (key == "tol") sol.tol = detail::parse_double(val);
            }
            continue;
        }
        if (line == "r,u,du") continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw std::invalid_argument("bad csv row: " + line);
        sol.r.push_back(detail::parse_double(a));
        sol.u.push_back(detail::parse_double(b));
        sol.du.push_back(detail::parse_double(c));
    }
    sol.ddu.assign(sol.r.size(), 0.0);
    return sol;
}

} // namespace warpspec
