#pragma once

// Discrete spectra of the radial operator -(u'' + (Delta_g r) u'):
// oscillation-counting phase integration, Dirichlet eigenvalues on annuli by
// shooting + bisection, two-sided ground-state search with decay-matched
// Robin truncation, a quadratic-form test function for eigenvalues below the
// essential spectrum, and a symmetric finite-difference oracle.
//
// The phase theta = atan2(u, u') obeys
//   theta' = cos^2 theta + (Delta_g r) sin theta cos theta + lambda sin^2 theta,
// crosses multiples of pi only forward (theta' = 1 there), and its winding
// counts the zeros of u, hence the eigenvalues below lambda.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpspec/ode.hpp"
#include "warpspec/profile.hpp"
#include "warpspec/radial.hpp"

namespace warpspec {

namespace detail {

inline double phase_winding(const WarpingProfile& p, double lambda, double r_a, double r_b,
                            double theta0, double tol = 1e-11) {
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol;
    auto rhs = [&](double r, const std::array<double, 1>& y) -> std::array<double, 1> {
        double s = std::sin(y[0]), c = std::cos(y[0]);
        return {c * c + mean_curvature(p, r) * s * c + lambda * s * s};
    };
    auto sol = integrate_ode<1>(rhs, r_a, r_b, {theta0}, opt);
    return sol.y.back()[0];
}

struct PhaseStart {
    double r;
    double theta;
};

// Start data for counting from the natural left boundary: a regular pole
// gets the series direction at 1e-6, anything else a Dirichlet node.
inline PhaseStart phase_start(const WarpingProfile& p, double lambda) {
    if (p.kind() == DomainKind::HalfLine && p.lo() == 0.0) {
        double r0 = 1e-6;
        double u = 1.0 - lambda * r0 * r0 / (2.0 * p.n());
        double du = -lambda * r0 / p.n();
        return {r0, std::atan2(u, du)};
    }
    return {p.lo(), 0.0};
}

} // namespace detail

// k-th Dirichlet eigenvalue on the annulus (R, S), by phase shooting with
// bisection on lambda; the bracket is grown geometrically up to a cap.
inline double dirichlet_eigenvalue_annulus(const WarpingProfile& p, double R, double S, int k,
                                           double tol = 1e-8, double lambda_cap = 1e6) {
    if (!(R < S) || k < 1) throw std::invalid_argument("need R < S and index k >= 1");
    double target = k * M_PI;
    auto winding = [&](double lambda) {
        return detail::phase_winding(p, lambda, R, S, 0.0, std::min(1e-11, tol * 1e-2));
    };
    double lo = 0.0, hi = std::max(1.0, 2.0 * k * k * M_PI * M_PI / ((S - R) * (S - R)));
    while (winding(hi) < target) {
        hi *= 2.0;
        if (hi > lambda_cap)
            throw std::runtime_error("dirichlet_eigenvalue_annulus: no bracket below cap");
    }
    while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
        double mid = 0.5 * (lo + hi);
        (winding(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Number of Dirichlet eigenvalues below `threshold` on [left boundary, R_max]
// (integer part of the phase sweep; the threshold is nudged down by 1e-9 to
// avoid boundary ambiguity).
inline int count_eigenvalues_below(const WarpingProfile& p, double threshold, double R_max) {
    if (!(threshold > 0)) return 0;
    double lambda = threshold - 1e-9;
    if (!(lambda > 0)) return 0;
    auto start = detail::phase_start(p, lambda);
    double theta = detail::phase_winding(p, lambda, start.r, R_max, start.theta);
    return static_cast<int>(std::floor(theta / M_PI));
}

// Annulus variant with Dirichlet walls at both ends.
inline int count_eigenvalues_below_annulus(const WarpingProfile& p, double threshold, double R,
                                           double S) {
    double lambda = threshold - 1e-9;
    if (!(lambda > 0)) return 0;
    double theta = detail::phase_winding(p, lambda, R, S, 0.0);
    return static_cast<int>(std::floor(theta / M_PI));
}

// ---------------------------------------------------------------------------
// Quadratic-form test for eigenvalues below c^2/4: with the measure density
// W = f^{n-1} and the piecewise-linear cutoff
//   chi = (t-R)/R on [R,2R], 1 on [2R,kR], -(t-2kR)/(kR) on [kR,2kR],
// evaluates  Q = int { (d/dr h)^2 - (c^2/4) h^2 } W dr  for
// h = W^{-1/2} chi r^{1/2}.  Expanding by the growth rate removes W from the
// integrand entirely, so huge densities cost nothing:
//   (1/4) mc^2 r chi^2 + r chi'^2 + chi^2/(4r) - mc r chi chi'
//   - (1/2) mc chi^2 + chi chi' - (c^2/4) r chi^2.
// Negative Q certifies lambda_1^D(E(R, 2kR)) < c^2/4 by the mini-max
// principle.  The analytic majorant 3 - (delta/8) log(k/2) is attached for
// reference.
// ---------------------------------------------------------------------------

struct RayleighTest {
    double R = 0, k = 0, c = 0, delta = 0, r1 = 0;
    double value = 0;    // the quadratic form integral
    double majorant = 0; // 3 - (delta/8) log(k/2)
    double h_lo = 0, h_hi = 0;
};

inline RayleighTest rayleigh_test(const WarpingProfile& p, double c, double R, double k,
                                  double delta, double r1 = 0, double rel_tol = 1e-8) {
    if (!(k > 2)) throw std::invalid_argument("cutoff needs k > 2");
    if (!(R > 0)) throw std::invalid_argument("cutoff needs R > 0");
    RayleighTest out;
    out.R = R;
    out.k = k;
    out.c = c;
    out.delta = delta;
    out.r1 = r1;
    out.h_lo = R;
    out.h_hi = 2.0 * k * R;
    out.majorant = 3.0 - delta / 8.0 * std::log(0.5 * k);

    auto integrand = [&](double r, double chi, double dchi) {
        double mc = mean_curvature(p, r);
        return 0.25 * mc * mc * r * chi * chi + r * dchi * dchi + 0.25 * chi * chi / r -
               mc * r * chi * dchi - 0.5 * mc * chi * chi + chi * dchi -
               0.25 * c * c * chi * chi * r;
    };
    // log substitution keeps the long middle region cheap
    auto piece = [&](double lo, double hi, auto chi_fn, auto dchi_fn) {
        return adaptive_simpson(
            [&](double s) {
                double r = std::exp(s);
                return integrand(r, chi_fn(r), dchi_fn(r)) * r;
            },
            std::log(lo), std::log(hi), rel_tol);
    };
    double kR = k * R;
    out.value =
        piece(R, 2.0 * R, [&](double r) { return (r - R) / R; }, [&](double) { return 1.0 / R; }) +
        piece(2.0 * R, kR, [&](double) { return 1.0; }, [&](double) { return 0.0; }) +
        piece(kR, 2.0 * kR, [&](double r) { return -(r - 2.0 * kR) / kR; },
              [&](double) { return -1.0 / kR; });
    return out;
}

// Doubling sweep for the smallest k with a negative quadratic form.
struct RayleighSweepEntry {
    double k;
    double value;
    double majorant;
};

inline std::vector<RayleighSweepEntry> rayleigh_sweep(const WarpingProfile& p, double c, double R,
                                                      double delta, double k_start = 4,
                                                      double k_cap = 1e8) {
    std::vector<RayleighSweepEntry> out;
    for (double k = k_start; k <= k_cap; k *= 2.0) {
        RayleighTest t = rayleigh_test(p, c, R, k, delta);
        out.push_back({k, t.value, t.majorant});
        if (t.value < 0) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ground-state search: two-sided shooting with decay-matched Robin closure.
// ---------------------------------------------------------------------------

namespace detail {

// L^2-selected characteristic slope at a domain end: with end growth rate h
// (the limit of Delta_g r), the decaying-in-measure solution has
// u'/u = (-h - sqrt(h^2 - 4 lambda))/2 at a right end, mirrored at a left end.
inline double robin_rate(double h, double lambda, bool right_end) {
    double disc = h * h - 4.0 * lambda;
    if (!(disc > 0))
        throw std::domain_error("lambda is not below the essential spectrum bottom at the end");
    double root = std::sqrt(disc);
    return right_end ? 0.5 * (-h - root) : 0.5 * (-h + root);
}

struct TwoSidedShot {
    RadialSolution left, right;
    double mismatch; // normalized Wronskian at the matching radius
};

inline TwoSidedShot two_sided_shot(const WarpingProfile& p, double lambda, double r_left,
                                   double r_match, double r_max, double tol) {
    TwoSidedShot shot;
    if (p.kind() == DomainKind::HalfLine && p.lo() == 0.0) {
        shot.left = integrate_radial(p, lambda, BoundaryCondition::regular_pole(), 0.0, r_match, tol);
    } else {
        double h_l = mean_curvature(p, r_left);
        double rate = robin_rate(h_l, lambda, /*right_end=*/false);
        shot.left = integrate_radial(p, lambda, BoundaryCondition::value_slope(1.0, rate), r_left,
                                     r_match, tol);
    }
    double h_r = mean_curvature(p, r_max);
    double rate_r = robin_rate(h_r, lambda, /*right_end=*/true);
    shot.right = integrate_radial_backward(p, lambda, 1.0, rate_r, r_match, r_max, tol);
    double uL = shot.left.u.back(), duL = shot.left.du.back();
    double uR = shot.right.u.front(), duR = shot.right.du.front();
    double scale = std::sqrt((uL * uL + duL * duL) * (uR * uR + duR * duR));
    shot.mismatch = (uL * duR - uR * duL) / std::max(scale, 1e-300);
    return shot;
}

inline double pick_match_radius(const WarpingProfile& p, double r_left, double r_max) {
    double lo = r_left, hi = r_max;
    double m = lo + 0.5 * (hi - lo);
    if (!p.joints().empty()) {
        double jmax = p.joints().back();
        m = std::min(std::max(jmax + 1.0, lo + 0.3 * (hi - lo)), lo + 0.7 * (hi - lo));
    }
    return m;
}

} // namespace detail

struct GroundStateResult {
    double lambda0 = 0;
    RadialSolution solution; // assembled over [left end, R_max]
    double r_match = 0;
    double drift_rmax = 0; // |lambda0(2 R_max) - lambda0(R_max)|
};

// Bisection on the two-sided matching mismatch inside (lambda_lo, lambda_hi);
// the bracket must contain exactly the wanted eigenvalue.  Stability under
// doubling of R_max is measured and reported.
inline GroundStateResult ground_state_search(const WarpingProfile& p, double lambda_lo,
                                             double lambda_hi, double R_max, double tol = 1e-8,
                                             bool verify_rmax = true) {
    bool pole = p.kind() == DomainKind::HalfLine && p.lo() == 0.0;
    auto solve_at = [&](double rmax) {
        double r_left = pole ? 0.0 : -rmax;
        if (!std::isinf(p.lo())) r_left = std::max(r_left, p.lo());
        double r_match = detail::pick_match_radius(p, pole ? 0.0 : r_left, rmax);
        auto miss = [&](double lambda) {
            return detail::two_sided_shot(p, lambda, r_left, r_match, rmax, std::min(tol, 1e-10))
                .mismatch;
        };
        double lo = lambda_lo, hi = lambda_hi;
        double mlo = miss(lo), mhi = miss(hi);
        if (mlo == 0) return std::pair{lo, r_match};
        if (mhi == 0) return std::pair{hi, r_match};
        if ((mlo > 0) == (mhi > 0))
            throw std::runtime_error("no sign change in bracket (no discrete ground state detected)");
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            double mm = miss(mid);
            if (mm == 0) return std::pair{mid, r_match};
            ((mm > 0) == (mlo > 0) ? lo : hi) = mid;
        }
        return std::pair{0.5 * (lo + hi), r_match};
    };

    auto [lambda0, r_match] = solve_at(R_max);
    GroundStateResult out;
    out.lambda0 = lambda0;
    out.r_match = r_match;
    if (verify_rmax) {
        auto [lambda2, rm2] = solve_at(2.0 * R_max);
        (void)rm2;
        out.drift_rmax = std::abs(lambda2 - lambda0);
    }

    // Assemble the eigenfunction: left and right shots scaled to agree at the
    // matching radius.
    double r_left = pole ? 0.0 : std::max(-R_max, p.lo());
    auto shot = detail::two_sided_shot(p, lambda0, r_left, r_match, R_max, std::min(tol, 1e-10));
    double scale = shot.left.u.back() / shot.right.u.front();
    RadialSolution& sol = out.solution;
    sol = shot.left;
    sol.bc = pole ? RadialBC::RegularPole : RadialBC::ValueSlope;
    for (size_t i = 1; i < shot.right.r.size(); ++i) {
        sol.r.push_back(shot.right.r[i]);
        sol.u.push_back(scale * shot.right.u[i]);
        sol.du.push_back(scale * shot.right.du[i]);
        sol.ddu.push_back(scale * shot.right.ddu[i]);
    }
    return out;
}

// All mismatch sign changes on a lambda grid below the essential bottom,
// refined by bisection: the discrete spectrum under Robin truncation.
inline std::vector<double> discrete_spectrum_below(const WarpingProfile& p, double ess_bottom,
                                                   double R_max, double tol = 1e-8,
                                                   int grid = 96) {
    bool pole = p.kind() == DomainKind::HalfLine && p.lo() == 0.0;
    double r_left = pole ? 0.0 : std::max(-R_max, p.lo());
    double r_match = detail::pick_match_radius(p, pole ? 0.0 : r_left, R_max);
    auto miss = [&](double lambda) {
        return detail::two_sided_shot(p, lambda, r_left, r_match, R_max, std::min(tol, 1e-10))
            .mismatch;
    };
    std::vector<double> found;
    double lo = 1e-4 * ess_bottom, hi = ess_bottom * (1.0 - 1e-9);
    double prev_l = lo, prev_m = miss(lo);
    for (int i = 1; i <= grid; ++i) {
        double l = lo + (hi - lo) * i / grid;
        double m = miss(l);
        if ((prev_m > 0) != (m > 0)) {
            double a = prev_l, b = l;
            while (b - a > tol) {
                double mid = 0.5 * (a + b);
                ((miss(mid) > 0) == (prev_m > 0) ? a : b) = mid;
            }
            found.push_back(0.5 * (a + b));
        }
        prev_l = l;
        prev_m = m;
    }
    return found;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle: P1 elements for int (u'^2 - lambda u^2) W dr with
// lumped mass, symmetric tridiagonal eigenvalues by Sturm bisection.
// ---------------------------------------------------------------------------

enum class FdBoundary { Dirichlet, RobinOuter };

struct FdMatrices {
    std::vector<double> diag, upper, lower; // stiffness (lower kept for the symmetry check)
    std::vector<double> mass;               // lumped
    std::vector<double> nodes;
};

inline FdMatrices fd_assemble(const WarpingProfile& p, double a, double b, FdBoundary bc,
                              int mesh_size, double robin_rate = 0.0) {
    if (mesh_size < 64) throw std::invalid_argument("fd_oracle mesh too coarse (need >= 64)");
    int N = mesh_size;
    double h = (b - a) / N;
    // dofs: interior nodes 1..N-1, plus the outer node for Robin closure
    int dofs = bc == FdBoundary::Dirichlet ? N - 1 : N;
    FdMatrices m;
    m.diag.assign(dofs, 0.0);
    m.upper.assign(dofs - 1, 0.0);
    m.lower.assign(dofs - 1, 0.0);
    m.mass.assign(dofs, 0.0);
    m.nodes.resize(dofs);
    for (int i = 0; i < dofs; ++i) m.nodes[i] = a + (i + 1) * h;
    auto dof_of_node = [&](int node) { return node - 1; }; // node 1..N-? maps to dof
    for (int cell = 0; cell < N; ++cell) {
        double mid = a + (cell + 0.5) * h;
        double w = measure_density(p, mid);
        double kloc = w / h, mloc = 0.5 * w * h;
        int ldof = cell == 0 ? -1 : dof_of_node(cell);
        int rnode = cell + 1;
        int rdof = rnode <= dofs ? dof_of_node(rnode) : -1;
        if (bc == FdBoundary::Dirichlet && rnode == N) rdof = -1;
        if (ldof >= 0) {
            m.diag[ldof] += kloc;
            m.mass[ldof] += mloc;
        }
        if (rdof >= 0) {
            m.diag[rdof] += kloc;
            m.mass[rdof] += mloc;
        }
        if (ldof >= 0 && rdof >= 0) {
            m.upper[ldof] += -kloc;
            m.lower[ldof] += -kloc;
        }
    }
    if (bc == FdBoundary::RobinOuter) {
        double w_b = measure_density(p, b);
        m.diag[dofs - 1] += -robin_rate * w_b;
    }
    return m;
}

namespace detail {

// Eigenvalues of the symmetric tridiagonal (d, e) below x, by the Sturm
// sign-count of the shifted LDL^T recurrence.
inline int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
    int count = 0;
    double q = d[0] - x;
    if (q < 0) ++count;
    for (size_t i = 1; i < d.size(); ++i) {
        double denom = q;
        if (denom == 0.0) denom = 1e-300;
        q = d[i] - x - e[i - 1] * e[i - 1] / denom;
        if (q < 0) ++count;
    }
    return count;
}

} // namespace detail

// Lowest eigenvalues of the assembled generalized problem K u = lambda M u.
inline std::vector<double> fd_oracle(const WarpingProfile& p, double a, double b, FdBoundary bc,
                                     int mesh_size, double robin_rate = 0.0, int n_eigen = 10) {
    FdMatrices m = fd_assemble(p, a, b, bc, mesh_size, robin_rate);
    size_t dofs = m.diag.size();
    std::vector<double> d(dofs), e(dofs - 1);
    for (size_t i = 0; i < dofs; ++i) d[i] = m.diag[i] / m.mass[i];
    for (size_t i = 0; i + 1 < dofs; ++i)
        e[i] = m.upper[i] / std::sqrt(m.mass[i] * m.mass[i + 1]);
    double rad = 0;
    for (size_t i = 0; i < dofs; ++i) {
        double row = std::abs(d[i]);
        if (i > 0) row += std::abs(e[i - 1]);
        if (i + 1 < dofs) row += std::abs(e[i]);
        rad = std::max(rad, row);
    }
    int want = std::min<int>(n_eigen, static_cast<int>(dofs));
    std::vector<double> eigs(want);
    for (int k = 1; k <= want; ++k) {
        double lo = -rad, hi = rad;
        while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
            double mid = 0.5 * (lo + hi);
            (detail::sturm_count(d, e, mid) < k ? lo : hi) = mid;
        }
        eigs[k - 1] = 0.5 * (lo + hi);
    }
    return eigs;
}

// Second-order Richardson extrapolation over meshes N and 2N.
inline double fd_eigen_richardson(const WarpingProfile& p, double a, double b, FdBoundary bc,
                                  int k_index, int N, double robin_rate = 0.0) {
    double c1 = fd_oracle(p, a, b, bc, N, robin_rate, k_index)[k_index - 1];
    double c2 = fd_oracle(p, a, b, bc, 2 * N, robin_rate, k_index)[k_index - 1];
    return c2 + (c2 - c1) / 3.0;
}

struct SpectralReport {
    double ess_bottom = 0;
    std::vector<double> discrete;
    GroundStateResult ground;
    double R_max = 0;
    std::string boundary = "robin-decay";
    std::string method = "shooting";
};

} // namespace warpspec
