#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "dtvmono/errors.hpp"

namespace dtv {

using cplx = std::complex<double>;

/// Dormand-Prince 5(4) with FSAL and standard step control, over a fixed
/// real parameter interval. State is a flat array of complex components;
/// the right-hand side is called as f(t, y) -> state.
template <std::size_t N, class RHS>
std::array<cplx, N> integrate_dopri5(RHS&& f, std::array<cplx, N> y,
                                     double t0, double t1,
                                     double rtol = 1e-12, double atol = 1e-14) {
    using State = std::array<cplx, N>;
    if (t1 == t0) return y;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double t = t0;
    double h = dir * std::min(0.01 * span, span);
    State k1 = f(t, y);
    long steps = 0;
    const long max_steps = 200000;

    while (dir * (t1 - t) > 0.0) {
        if (++steps > max_steps)
            throw IntegratorFailure("integrate_dopri5: step budget exhausted");
        if (std::abs(h) < 1e-14 * span)
            throw IntegratorFailure("integrate_dopri5: step size underflow (singular right-hand side?)");
        if (dir * (t + h - t1) > 0.0) h = t1 - t;

        State w;
        for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * a21 * k1[i];
        const State k2 = f(t + c2 * h, w);
        for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State k3 = f(t + c3 * h, w);
        for (std::size_t i = 0; i < N; ++i)
            w[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State k4 = f(t + c4 * h, w);
        for (std::size_t i = 0; i < N; ++i)
            w[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State k5 = f(t + c5 * h, w);
        for (std::size_t i = 0; i < N; ++i)
            w[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const State k6 = f(t + h, w);
        State ynew;
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const State k7 = f(t + h, ynew);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const cplx de = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                 e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = std::abs(de) / sc;
            err += r * r;
        }
        err = std::sqrt(err / double(N));

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7; // FSAL
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
    }
    return y;
}

} // namespace dtv
