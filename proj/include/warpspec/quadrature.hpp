#pragma once

// Adaptive Simpson quadrature and Chebyshev-Lobatto polynomial fitting.
// The fitter produces low-degree monomial polynomials in the local variable
// x = (2r - (a+b))/(b-a), convertible to closed-form expressions, with
// graded bisection for functions that are smooth but have localized detail.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "warpspec/expr.hpp"

namespace warpspec {

namespace detail {

template <typename F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb, double S,
                   double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double Sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double Sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double S2 = Sl + Sr;
    if (depth <= 0) throw std::runtime_error("adaptive quadrature failed to converge");
    if (std::abs(S2 - S) <= 15.0 * tol) return S2 + (S2 - S) / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, Sl, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, Sr, 0.5 * tol, depth - 1);
}

} // namespace detail

// Integrates f over [a, b]; the tolerance is relative to the integral scale
// with an absolute floor.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-8, double abs_floor = 1e-300,
                        int max_depth = 48) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double S = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = std::max(std::abs(S) * rel_tol, abs_floor);
    return detail::simpson_rec(f, a, m, b, fa, fm, fb, S, tol, max_depth);
}

// Polynomial in the local coordinate x = (2r - (a+b))/(b-a), monomial basis.
struct LocalPoly {
    double a = -1, b = 1;
    std::vector<double> coeff; // coeff[k] multiplies x^k

    double x_of(double r) const { return (2.0 * r - (a + b)) / (b - a); }
    double eval_x(double x) const {
        double p = 0;
        for (size_t k = coeff.size(); k-- > 0;) p = p * x + coeff[k];
        return p;
    }
    double operator()(double r) const { return eval_x(x_of(r)); }

    // Antiderivative with respect to r, vanishing at r = a.
    LocalPoly antiderivative_r() const {
        LocalPoly q;
        q.a = a;
        q.b = b;
        q.coeff.assign(coeff.size() + 1, 0.0);
        double half = 0.5 * (b - a);
        for (size_t k = 0; k < coeff.size(); ++k) q.coeff[k + 1] = half * coeff[k] / double(k + 1);
        q.coeff[0] = -q.eval_x(-1.0);
        return q;
    }

    // Closed-form expression, Horner in the local coordinate.
    Expr to_expr() const {
        double mid = 0.5 * (a + b), inv_half = 2.0 / (b - a);
        Expr x = (Expr::var() - Expr::constant(mid)) * Expr::constant(inv_half);
        Expr p = Expr::constant(coeff.empty() ? 0.0 : coeff.back());
        for (size_t k = coeff.size(); k-- > 1;) p = p * x + Expr::constant(coeff[k - 1]);
        return p;
    }
};

// Chebyshev-Lobatto interpolation of degree `degree` on [a, b], returned in
// the monomial basis of the local coordinate (stable for degree <= ~16).
template <typename F>
LocalPoly cheb_fit(F&& f, double a, double b, int degree) {
    const int N = degree;
    std::vector<double> fx(N + 1);
    for (int j = 0; j <= N; ++j) {
        double x = std::cos(M_PI * j / N);
        fx[j] = f(0.5 * (a + b) + 0.5 * (b - a) * x);
    }
    // DCT-I coefficients of the interpolant  p = sum_k c_k T_k.
    std::vector<double> c(N + 1, 0.0);
    for (int k = 0; k <= N; ++k) {
        double s = 0.5 * (fx[0] + (k % 2 == 0 ? fx[N] : -fx[N]));
        for (int j = 1; j < N; ++j) s += fx[j] * std::cos(M_PI * j * k / N);
        c[k] = 2.0 * s / N;
    }
    c[0] *= 0.5;
    c[N] *= 0.5;
    // Chebyshev -> monomial via the T_k recurrence.
    std::vector<double> mono(N + 1, 0.0);
    std::vector<double> Tkm1{1.0}, Tk{0.0, 1.0};
    mono[0] += c[0];
    if (N >= 1)
        for (size_t i = 0; i < Tk.size(); ++i) mono[i] += c[1] * Tk[i];
    for (int k = 2; k <= N; ++k) {
        std::vector<double> Tnext(k + 1, 0.0);
        for (size_t i = 0; i < Tk.size(); ++i) Tnext[i + 1] += 2.0 * Tk[i];
        for (size_t i = 0; i < Tkm1.size(); ++i) Tnext[i] -= Tkm1[i];
        for (size_t i = 0; i < Tnext.size(); ++i) mono[i] += c[k] * Tnext[i];
        Tkm1 = std::move(Tk);
        Tk = std::move(Tnext);
    }
    LocalPoly p;
    p.a = a;
    p.b = b;
    p.coeff = std::move(mono);
    return p;
}

// Two functions fitted on one shared graded subdivision (needed when their
// antiderivatives combine linearly piece by piece).
struct PairFit {
    std::vector<LocalPoly> first, second;
};

template <typename F, typename G>
PairFit cheb_fit_pair(F&& f, G&& g, double a, double b, int degree, double tol,
                      int max_pieces = 512) {
    PairFit out;
    std::vector<std::pair<double, double>> stack{{a, b}};
    int budget = max_pieces;
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        LocalPoly pf = cheb_fit(f, lo, hi, degree);
        LocalPoly pg = cheb_fit(g, lo, hi, degree);
        double err = 0, scale = 1.0;
        for (int i = 0; i <= 3 * degree; ++i) {
            double r = lo + (hi - lo) * (i + 0.5) / (3.0 * degree + 1.0);
            double fv = f(r), gv = g(r);
            err = std::max({err, std::abs(pf(r) - fv), std::abs(pg(r) - gv)});
            scale = std::max({scale, std::abs(fv), std::abs(gv)});
        }
        if (err <= tol * scale || budget <= 0) {
            out.first.push_back(std::move(pf));
            out.second.push_back(std::move(pg));
        } else {
            --budget;
            double mid = 0.5 * (lo + hi);
            stack.push_back({mid, hi});
            stack.push_back({lo, mid});
        }
    }
    auto key = [](const LocalPoly& p) { return p.a; };
    std::sort(out.first.begin(), out.first.end(),
              [&](const LocalPoly& x, const LocalPoly& y) { return key(x) < key(y); });
    std::sort(out.second.begin(), out.second.end(),
              [&](const LocalPoly& x, const LocalPoly& y) { return key(x) < key(y); });
    return out;
}

// Piecewise Chebyshev fit: bisects intervals until the sampled interpolation
// error is below tol (absolute, relative to the local function scale).
template <typename F>
std::vector<LocalPoly> cheb_fit_adaptive(F&& f, double a, double b, int degree, double tol,
                                         int max_pieces = 512) {
    std::vector<LocalPoly> done;
    std::vector<std::pair<double, double>> stack{{a, b}};
    int budget = max_pieces;
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        LocalPoly p = cheb_fit(f, lo, hi, degree);
        double err = 0, scale = 1.0;
        for (int i = 0; i <= 3 * degree; ++i) {
            double r = lo + (hi - lo) * (i + 0.5) / (3.0 * degree + 1.0);
            double fv = f(r);
            err = std::max(err, std::abs(p(r) - fv));
            scale = std::max(scale, std::abs(fv));
        }
        if (err <= tol * scale || budget <= 0) {
            done.push_back(std::move(p));
        } else {
            --budget;
            double mid = 0.5 * (lo + hi);
            stack.push_back({mid, hi});
            stack.push_back({lo, mid});
        }
    }
    std::sort(done.begin(), done.end(),
              [](const LocalPoly& x, const LocalPoly& y) { return x.a < y.a; });
    return done;
}

} // namespace warpspec
