#pragma once

#include <complex>
#include <optional>

#include "dtvmono/elliptic.hpp"
#include "dtvmono/errors.hpp"
#include "dtvmono/index.hpp"

namespace dtv {

/// One realized point of the correspondence (r,s) -> (tau*, B): tau* is a
/// certified zero of Z^n_{r,s} and B is the matching spectral parameter.
struct CorrespondencePoint {
    DTVIndex n;
    cplx r, s;
    cplx tau_star;
    cplx B;
    double residual_Z;    // |Z^n(tau*)|
    double residual_mono; // |tr M1 - 2cos(2 pi s)| + |tr M2 - 2cos(2 pi r)|
};

/// Numeric partials of (tau, B) with respect to (r, s), and how far their
/// determinant sits from the universal constant 8 pi^2.
struct JacobianReport {
    cplx tau_r, tau_s, B_r, B_s;
    cplx det;
    double law_error; // |det - 8 pi^2| / (8 pi^2)
};

struct ClosedFormPartials {
    cplx tau_r, tau_s;
};

/// Solve for tau* near tau_guess, then for B. Lame indices get B in closed
/// form; every other catalog index solves tr M1 = 2cos(2 pi s) over B by a
/// secant iteration seeded from a coarse disc scan (or from B_hint), then
/// cross-checks tr M2.
CorrespondencePoint tau_B_of_rs(const DTVIndex& n, cplx r, cplx s, cplx tau_guess,
                                std::optional<cplx> B_hint = {});

/// Central differences of (tau*, B) over (r +- h, s +- h); each stencil
/// point reuses the center's tau* and B as starting values.
JacobianReport jacobian_rs(const DTVIndex& n, cplx r, cplx s, cplx tau_guess,
                           double step = 1e-4);

/// The displayed partials at a certified point: for (1,0,0,0)
/// tau_r = -4 pi i (wp + eta1)/wp' and tau_s = tau tau_r - 8 pi^2 / wp';
/// for (2,0,0,0) tau_r = -2 pi i (B^2 + 3 eta1 B - (3/2) g2)/C and
/// tau_s = tau_r (tau - 6 pi i B/(B^2 + 3 eta1 B - (3/2) g2)).
ClosedFormPartials closed_form_partials(const DTVIndex& n, cplx r, cplx s,
                                        cplx tau_star, cplx B);

} // namespace dtv
