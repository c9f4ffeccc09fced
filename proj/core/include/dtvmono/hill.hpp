#pragma once

#include <string>

#include "dtvmono/elliptic.hpp"
#include "dtvmono/errors.hpp"
#include "dtvmono/index.hpp"

namespace dtv {

/// Floquet discriminants: traces of the two cycle monodromies, holomorphic
/// in B (delta1 = 2 cos 2 pi s, delta2 = 2 cos 2 pi r on the curve).
struct DiscriminantSample {
    cplx B;
    cplx delta1;
    cplx delta2;
};

DiscriminantSample discriminant(const DTVIndex& n, cplx B, const ModularParam& mp);

/// R0(B) = -2 (B^2 + 3 eta1 B - (3/2) g2), the numerator of
/// tau_r = (pi i / C) R0(B) in the second Lame case.
cplx R0_n2(cplx B, const ModularParam& mp);

struct MultiplicityVerdict {
    cplx B0;
    int d;
    int ord_R0;
    int ord_Q;
    std::string method; // "formula" or "order-fit"
};

/// Algebraic multiplicity of a root B0 of the weight-3 spectral polynomial
/// as an (anti)periodic eigenvalue: d = 2 ord R0 + 2 - ord Q. Vanishing is
/// decided against the natural coefficient scale with relative cutoff
/// threshold_scale; magnitudes landing in (0.5, 2) x cutoff raise
/// ThresholdAmbiguous carrying both candidate multiplicities.
MultiplicityVerdict multiplicity_n2(cplx B0, const ModularParam& mp,
                                    double threshold_scale = 1e-8);

/// Least-squares exponent of |delta1(B)^2 - 4| in |B - B0| over shrinking
/// circles (radii 1e-3 * 2^-j, j = 0..4, eight angles each). Works for any
/// supported index; FitUnstable when the log-log fit leaves RMS > 0.1.
double order_fit(const DTVIndex& n, cplx B0, const ModularParam& mp);

} // namespace dtv
