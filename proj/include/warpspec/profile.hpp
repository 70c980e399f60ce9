#pragma once

// Warping profiles f defining rotationally symmetric metrics
// dr^2 + f(r)^2 g_{S^{n-1}} on the half line, or warped products
// dt^2 + f(t)^2 g_N on the full line.  A profile is an ordered list of
// half-open pieces [lo, hi) each carrying a closed-form expression; the
// derived geometric quantities are
//
//   mean_curvature   Delta_g r = (n-1) f'/f   (log-derivative of the measure)
//   measure_density  sqrt(g^W) = f^{n-1}
//
// Profiles round-trip through a small text format (see parse_profile).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpspec/expr.hpp"

namespace warpspec {

// C-infinity step built from s(x) = exp(-1/x):  psi = s(x)/(s(x)+s(1-x)).
// psi(0) = 0, psi(1) = 1, strictly increasing on (0,1), flat to all orders
// at both ends.
struct SmoothStep {
    static double eval(double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
        return a / (a + b);
    }
    static Expr expr(const Expr& x) {
        Expr a = exp(Expr::constant(-1.0) / x);
        Expr b = exp(Expr::constant(-1.0) / (Expr::constant(1.0) - x));
        return a / (a + b);
    }
};

struct ProfilePiece {
    double lo = 0, hi = 0;
    Expr f, df, ddf;

    ProfilePiece(double lo_, double hi_, Expr f_)
        : lo(lo_), hi(hi_), f(std::move(f_)), df(f.derivative()), ddf(df.derivative()) {
        if (!(lo < hi)) throw std::invalid_argument("profile piece needs lo < hi");
    }
};

// Blend of two expressions across [a, b]: equals left at a, right at b,
// C-infinity, interpolating with the smooth step.
inline Expr blend_expr(const Expr& left, const Expr& right, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("glue needs a < b");
    Expr x = (Expr::var() - a) / (b - a);
    return left + SmoothStep::expr(x) * (right - left);
}

class PiecewiseExpr {
public:
    PiecewiseExpr() = default;
    explicit PiecewiseExpr(std::vector<ProfilePiece> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw std::invalid_argument("piecewise expression needs pieces");
        for (size_t i = 0; i + 1 < pieces_.size(); ++i)
            if (pieces_[i].hi != pieces_[i + 1].lo)
                throw std::invalid_argument("profile pieces must be contiguous and ordered");
    }

    double lo() const { return pieces_.front().lo; }
    double hi() const { return pieces_.back().hi; }

    // Half-open lookup: the piece owning r satisfies lo <= r < hi.
    const ProfilePiece& piece_at(double r) const {
        if (!(r >= lo() && r < hi()))
            throw std::domain_error("radius " + detail::fmt_double(r) + " outside domain [" +
                                    detail::fmt_double(lo()) + ", " + detail::fmt_double(hi()) + ")");
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), r,
                                   [](double v, const ProfilePiece& p) { return v < p.hi; });
        return *it;
    }

    double operator()(double r) const { return piece_at(r).f(r); }
    double deriv(double r) const { return piece_at(r).df(r); }
    double deriv2(double r) const { return piece_at(r).ddf(r); }

    const std::vector<ProfilePiece>& pieces() const { return pieces_; }

private:
    std::vector<ProfilePiece> pieces_;
};

// glue(left, right, a, b): left of a, right of b, smooth-step blend between.
inline PiecewiseExpr glue(const Expr& left, const Expr& right, double a, double b,
                          double domain_lo = -std::numeric_limits<double>::infinity(),
                          double domain_hi = std::numeric_limits<double>::infinity()) {
    std::vector<ProfilePiece> pieces;
    if (domain_lo < a) pieces.emplace_back(domain_lo, a, left);
    pieces.emplace_back(std::max(a, domain_lo), b, blend_expr(left, right, a, b));
    if (b < domain_hi) pieces.emplace_back(b, domain_hi, right);
    return PiecewiseExpr(std::move(pieces));
}

struct GlueResult {
    PiecewiseExpr glued;
    double a = 0, b = 0; // final blend window after shrinking
    int shrinks = 0;
};

// Glue with a strict-monotonicity guarantee on the blend: the window is
// halved about its midpoint (up to max_shrinks times) until the blend
// derivative has the requested sign on a dense grid.
inline GlueResult glue_monotone(const Expr& left, const Expr& right, double a, double b,
                                bool increasing,
                                double domain_lo = -std::numeric_limits<double>::infinity(),
                                double domain_hi = std::numeric_limits<double>::infinity(),
                                int grid_points = 10000, int max_shrinks = 20) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k <= max_shrinks; ++k) {
        double ak = mid - half, bk = mid + half;
        Expr blend = blend_expr(left, right, ak, bk);
        Expr dblend = blend.derivative();
        bool ok = true;
        for (int i = 0; i <= grid_points && ok; ++i) {
            double r = ak + (bk - ak) * i / grid_points;
            double d = dblend(r);
            if (!std::isfinite(d) || (increasing ? d <= 0.0 : d >= 0.0)) ok = false;
        }
        if (ok) {
            std::vector<ProfilePiece> pieces;
            if (domain_lo < ak) pieces.emplace_back(domain_lo, ak, left);
            pieces.emplace_back(std::max(ak, domain_lo), bk, blend);
            if (bk < domain_hi) pieces.emplace_back(bk, domain_hi, right);
            return GlueResult{PiecewiseExpr(std::move(pieces)), ak, bk, k};
        }
        half *= 0.5;
    }
    throw std::runtime_error("gluing monotonicity unachievable after window shrinking");
}

enum class DomainKind { HalfLine, Line };

struct ProfileValidation {
    bool positive = true;
    bool pole_ok = true;
    double joint_max_rel_err = 0.0;        // worst value/derivative joint mismatch
    double pole_limit_err = 0.0;           // | f(r)/r - 1 | near the pole
    std::optional<double> first_violation; // radius of first positivity failure
    bool ok(double joint_tol = 1e-9) const {
        return positive && pole_ok && joint_max_rel_err <= joint_tol;
    }
};

class WarpingProfile {
public:
    WarpingProfile() = default;
    WarpingProfile(DomainKind kind, int n, std::vector<ProfilePiece> pieces)
        : kind_(kind), n_(n), f_(std::move(pieces)) {
        if (n_ < 2) throw std::invalid_argument("dimension n must be >= 2");
        for (size_t i = 0; i + 1 < f_.pieces().size(); ++i)
            joints_.push_back(f_.pieces()[i].hi);
    }

    DomainKind kind() const { return kind_; }
    int n() const { return n_; }
    double lo() const { return f_.lo(); }
    double hi() const { return f_.hi(); }
    const std::vector<double>& joints() const { return joints_; }
    const PiecewiseExpr& fn() const { return f_; }

    double f(double r) const { return f_(r); }
    double df(double r) const { return f_.deriv(r); }
    double ddf(double r) const { return f_.deriv2(r); }

    // Samples the invariants rather than proving them; see tests for the
    // tolerances this is held to.
    ProfileValidation validate() const {
        ProfileValidation v;
        const auto& ps = f_.pieces();
        for (const auto& p : ps) {
            double a = std::max(p.lo, sample_floor(p));
            double b = std::isinf(p.hi) ? std::max(2.0 * std::abs(a) + 10.0, a + 100.0) : p.hi;
            for (int i = 1; i < 256; ++i) {
                double r = a + (b - a) * i / 256.0;
                double val = p.f(r);
                if (!(val > 0.0) || !std::isfinite(val)) {
                    v.positive = false;
                    if (!v.first_violation) v.first_violation = r;
                    break;
                }
            }
        }
        for (size_t i = 0; i + 1 < ps.size(); ++i) {
            double j = ps[i].hi;
            double fl = ps[i].f(j), fr = ps[i + 1].f(j);
            double dl = ps[i].df(j), dr = ps[i + 1].df(j);
            double scale_f = std::max({std::abs(fl), std::abs(fr), 1e-12});
            double scale_d = std::max({std::abs(dl), std::abs(dr), 1e-12});
            v.joint_max_rel_err = std::max(v.joint_max_rel_err, std::abs(fl - fr) / scale_f);
            v.joint_max_rel_err = std::max(v.joint_max_rel_err, std::abs(dl - dr) / scale_d);
        }
        if (kind_ == DomainKind::HalfLine && f_.lo() == 0.0) {
            for (double r : {1e-3, 1e-4}) {
                double err = std::abs(f_(r) / r - 1.0);
                v.pole_limit_err = std::max(v.pole_limit_err, err);
                if (err > 1e-6) v.pole_ok = false;
            }
        }
        return v;
    }

private:
    static double sample_floor(const ProfilePiece& p) {
        if (std::isinf(p.lo)) return -std::max(2.0 * std::abs(p.hi) + 10.0, p.hi + 100.0);
        return p.lo;
    }

    DomainKind kind_ = DomainKind::HalfLine;
    int n_ = 3;
    PiecewiseExpr f_;
    std::vector<double> joints_;
};

// Delta_g r = (n-1) f'(r) / f(r).
inline double mean_curvature(const WarpingProfile& p, double r) {
    double fr = p.f(r);
    if (!(fr > 0.0)) throw std::domain_error("mean_curvature: nonpositive warping value at r = " +
                                             detail::fmt_double(r));
    return (p.n() - 1) * p.df(r) / fr;
}

// sqrt(g^W) = f(r)^{n-1}.
inline double measure_density(const WarpingProfile& p, double r) {
    return std::pow(p.f(r), p.n() - 1);
}

// Bottom of the essential spectrum when Delta_g r -> c (either sign): c^2/4.
inline double ess_spectrum_bottom(double c) { return 0.25 * c * c; }

// ---------------------------------------------------------------------------
// Profile spec file format.  Canonical form, one item per line:
//
//   kind rotsym|line
//   n <integer>
//   piece <from> <to> <expression>
//   joint <radius>
//
// from/to accept inf and -inf.  parse_profile rejects unknown keys; the
// writer emits the canonical order so write -> parse -> write is the
// identity on bytes.
// ---------------------------------------------------------------------------

inline std::string write_profile(const WarpingProfile& p) {
    std::string out;
    out += "kind ";
    out += p.kind() == DomainKind::HalfLine ? "rotsym" : "line";
    out += "\nn " + std::to_string(p.n()) + "\n";
    auto bound = [](double v) -> std::string {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return detail::fmt_double(v);
    };
    for (const auto& piece : p.fn().pieces())
        out += "piece " + bound(piece.lo) + " " + bound(piece.hi) + " " + piece.f.str() + "\n";
    for (double j : p.joints()) out += "joint " + detail::fmt_double(j) + "\n";
    return out;
}

inline WarpingProfile parse_profile(const std::string& text) {
    std::optional<DomainKind> kind;
    std::optional<int> n;
    std::vector<ProfilePiece> pieces;
    std::vector<double> joints;
    auto parse_bound = [](const std::string& s) -> double {
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return detail::parse_double(s);
    };
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto fail = [&](const std::string& msg) {
            throw std::invalid_argument("profile file line " + std::to_string(lineno) + ": " + msg);
        };
        if (key == "kind") {
            std::string val;
            ls >> val;
            if (val == "rotsym") kind = DomainKind::HalfLine;
            else if (val == "line") kind = DomainKind::Line;
            else fail("kind must be rotsym or line");
        } else if (key == "n") {
            int val = 0;
            if (!(ls >> val)) fail("bad dimension");
            n = val;
        } else if (key == "piece") {
            std::string from, to;
            if (!(ls >> from >> to)) fail("piece needs from, to and an expression");
            std::string rest;
            std::getline(ls, rest);
            size_t start = rest.find_first_not_of(" \t");
            if (start == std::string::npos) fail("piece missing expression");
            pieces.emplace_back(parse_bound(from), parse_bound(to), parse_expr(rest.substr(start)));
        } else if (key == "joint") {
            std::string val;
            ls >> val;
            joints.push_back(detail::parse_double(val));
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!kind) throw std::invalid_argument("profile file: missing kind");
    if (!n) throw std::invalid_argument("profile file: missing n");
    if (pieces.empty()) throw std::invalid_argument("profile file: no pieces");
    WarpingProfile p(*kind, *n, std::move(pieces));
    if (joints != p.joints())
        throw std::invalid_argument("profile file: joint list does not match piece boundaries");
    return p;
}

} // namespace warpspec
