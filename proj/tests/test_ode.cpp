#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dtvmono/ode.hpp"

using dtv::cplx;

TEST_CASE("dopri5 reproduces the complex exponential around a full turn") {
    const cplx i{0.0, 1.0};
    auto rhs = [&](double, const std::array<cplx, 1>& y) {
        return std::array<cplx, 1>{i * y[0]};
    };
    const auto y = dtv::integrate_dopri5<1>(rhs, {cplx(1.0, 0.0)}, 0.0, 2.0 * std::numbers::pi);
    CHECK(std::abs(y[0] - 1.0) <= 1e-10);
}

TEST_CASE("dopri5 integrates a coupled linear system against its closed form") {
    // y1' = y2, y2' = -w^2 y1 with w = 3: harmonic oscillator.
    const double w = 3.0;
    auto rhs = [&](double, const std::array<cplx, 2>& y) {
        return std::array<cplx, 2>{y[1], -w * w * y[0]};
    };
    const double T = 2.7;
    const auto y = dtv::integrate_dopri5<2>(rhs, {cplx(1.0, 0.0), cplx(0.0, 0.0)}, 0.0, T);
    CHECK(std::abs(y[0] - std::cos(w * T)) <= 1e-10);
    CHECK(std::abs(y[1] + w * std::sin(w * T)) <= 1e-9);
}

TEST_CASE("dopri5 supports backward integration") {
    auto rhs = [](double t, const std::array<cplx, 1>& y) {
        return std::array<cplx, 1>{2.0 * t * y[0]};
    };
    const auto y = dtv::integrate_dopri5<1>(rhs, {cplx(std::exp(1.0), 0.0)}, 1.0, 0.0);
    CHECK(std::abs(y[0] - 1.0) <= 1e-10);
}

TEST_CASE("dopri5 reports blow-up as IntegratorFailure") {
    auto rhs = [](double, const std::array<cplx, 1>& y) {
        return std::array<cplx, 1>{y[0] * y[0]};
    };
    // y' = y^2, y(0) = 1 blows up at t = 1.
    CHECK_THROWS_AS(dtv::integrate_dopri5<1>(rhs, {cplx(1.0, 0.0)}, 0.0, 2.0),
                    dtv::IntegratorFailure);
}
