#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "dtvmono/elliptic.hpp"
#include "dtvmono/errors.hpp"
#include "dtvmono/index.hpp"

namespace dtv {

/// Coefficients alpha_k = (n_k + 1/2)^2 / 2 of the elliptic Painleve VI
/// right-hand side; the all-zero index gives (1/8, 1/8, 1/8, 1/8).
struct EPVIParams {
    double alpha0, alpha1, alpha2, alpha3;
};

EPVIParams epvi_params(const DTVIndex& n);

/// Solution sample: p is tracked modulo the identification +-p + lattice.
struct PVIPoint {
    cplx tau;
    EllipticPoint p;
    cplx wp_p;
};

/// Hitchin's solution of the all-zero case, at the level of wp(p):
/// wp(p) = wp(r+s*tau) + wp'(r+s*tau) / (2 Z_{r,s}).
cplx hitchin_wp_p0(cplx r, cplx s, const ModularParam& mp);

/// One sample of the closed-form solution for n (all-zero or (1,0,0,0)):
/// wp_p from the matching expression and p = wp^{-1}(wp_p), branch chosen
/// by sign_hint when given.
PVIPoint pvi_point(const DTVIndex& n, cplx r, cplx s, const ModularParam& mp,
                   std::optional<cplx> sign_hint = std::nullopt);

/// The (1,0,0,0) solution, at the level of wp(p): the correction term has
/// denominator 2(Z^3 - 3 wp Z - wp'), so its tau-poles are the zeros of
/// the weight-3 form.
cplx wp_p_1000(cplx r, cplx s, const ModularParam& mp);

/// Residual |p''(tau) - (-1/(4 pi^2)) sum alpha_k wp'(p + omega_k/2)|
/// normalized by 1 + |rhs|, with p(tau) = wp^{-1}(wp_p_fn(tau)) tracked for
/// branch continuity across the five-point stencil.
double epvi_residual(const std::function<cplx(cplx)>& wp_p_fn, const EPVIParams& params,
                     cplx tau, double h = 1e-3);

/// Fractional-linear normalization t = (e3-e1)/(e2-e1),
/// lambda = (wp_p - e1)/(e2-e1).
std::pair<cplx, cplx> t_lambda(const ModularParam& mp, cplx wp_p);

struct FlowSample {
    cplx tau, p, A, B;
};

/// Integrate the coupled Hamiltonian system for (p, A) along the straight
/// segment from tau0 to tau1, sampling `samples` points including both
/// endpoints; B accompanies each sample via its defining constraint.
std::vector<FlowSample> hamiltonian_flow(const DTVIndex& n, cplx p0, cplx A0,
                                         cplx tau0, cplx tau1, int samples = 17);

/// W = (dY1/dtau) Y2 - (dY2/dtau) Y1 with Y1 = dp/dr, Y2 = dp/ds, by nested
/// central differences. Supported: the all-zero index (Hitchin) and
/// (1,0,0,0). Expected value is -1 identically.
cplx linearized_wronskian(const DTVIndex& n, cplx r, cplx s, cplx tau,
                          double h_rs = 1e-3, double h_tau = 1e-3);

} // namespace dtv
