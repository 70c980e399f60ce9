#pragma once

// Embedded Dormand-Prince 5(4) integrator with PI step-size control.
// Fixed-dimension state, forward integration, every accepted node stored.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpspec/expr.hpp"

namespace warpspec {

struct StepUnderflow : std::runtime_error {
    double where;
    explicit StepUnderflow(double t)
        : std::runtime_error("step size underflow at t = " + detail::fmt_double(t)), where(t) {}
};

template <std::size_t N>
struct OdeSolution {
    std::vector<double> t;
    std::vector<std::array<double, N>> y;
};

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 10'000'000;
};

// Integrates y' = f(t, y) from t0 to t1 (t0 < t1).
template <std::size_t N, typename RHS>
OdeSolution<N> integrate_ode(RHS&& f, double t0, double t1, std::array<double, N> y0,
                             const OdeOptions& opt = {}) {
    static_assert(N >= 1);
    if (!(t1 > t0)) throw std::invalid_argument("integrate_ode needs t1 > t0");

    using State = std::array<double, N>;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9;

    OdeSolution<N> out;
    out.t.push_back(t0);
    out.y.push_back(y0);

    State k1 = f(t0, y0);
    double fnorm = 0, ynorm = 0;
    for (std::size_t i = 0; i < N; ++i) {
        fnorm = std::max(fnorm, std::abs(k1[i]));
        ynorm = std::max(ynorm, std::abs(y0[i]));
    }
    double span = t1 - t0;
    double h = std::min({span / 100.0, 0.1 * (1.0 + ynorm) / (1.0 + fnorm), opt.max_step});
    h = std::max(h, span * 1e-12);

    double t = t0;
    State y = y0;
    double err_prev = 1.0;
    bool k1_fresh = true;

    for (long step = 0; step < opt.max_steps;) {
        if (t >= t1) return out;
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
            throw StepUnderflow(t);

        if (!k1_fresh) k1 = f(t, y);
        State ytmp;
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        State k2 = f(t + c2 * h, ytmp);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        State k3 = f(t + c3 * h, ytmp);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        State k4 = f(t + c4 * h, ytmp);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        State k5 = f(t + c5 * h, ytmp);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        State k6 = f(t + h, ytmp);
        State y1;
        for (std::size_t i = 0; i < N; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        State k7 = f(t + h, y1);

        double err = 0;
        for (std::size_t i = 0; i < N; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            double q = e / scale;
            err += q * q;
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            t = last ? t1 : t + h;
            y = y1;
            k1 = k7; // FSAL
            k1_fresh = true;
            out.t.push_back(t);
            out.y.push_back(y);
            ++step;
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.17) * std::pow(err_prev, 0.04);
            h = std::min({h * std::min(5.0, std::max(0.2, fac)), opt.max_step});
            err_prev = std::max(err, 1e-10);
        } else {
            double fac = 0.9 * std::pow(err, -0.2);
            h *= std::min(1.0, std::max(0.1, fac));
            k1_fresh = true; // k1 is still f(t, y)
            ++step;
        }
    }
    throw std::runtime_error("integrate_ode: step budget exhausted");
}

// Cubic Hermite value at t inside [t0, t1] given endpoint values and slopes.
inline double hermite_value(double t, double t0, double t1, double y0, double y1, double d0,
                            double d1) {
    double h = t1 - t0, s = (t - t0) / h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
}

inline double hermite_slope(double t, double t0, double t1, double y0, double y1, double d0,
                            double d1) {
    double h = t1 - t0, s = (t - t0) / h;
    double s2 = s * s;
    return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * h * d0 + (-6 * s2 + 6 * s) * y1 +
            (3 * s2 - 2 * s) * h * d1) / h;
}

} // namespace warpspec
