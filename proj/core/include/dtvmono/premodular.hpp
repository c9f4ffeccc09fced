#pragma once

#include <vector>

#include "dtvmono/elliptic.hpp"
#include "dtvmono/index.hpp"

namespace dtv {

/// Monodromy datum (r,s) up to the identification (r,s) ~ +-(r,s) mod Z^2.
struct MonodromyClass {
    cplx r, s;
    bool canonical = false;
};

/// Distance from (r,s) to the excluded set (1/2)Z^2 (both entries real
/// half-integers), in the Euclidean metric on C^2.
double half_pair_distance(cplx r, cplx s);

/// Canonical representative: reduce mod Z^2 into [0,1)^2 (real parts),
/// then among {(r,s), (-r,-s)} pick the one with Re s in [0,1/2); ties on
/// Re s in {0,1/2} are broken by Re r in [0,1/2).
/// Throws BranchPoint when (r,s) is within 1e-10 of (1/2)Z^2.
MonodromyClass canonicalize(cplx r, cplx s);

/// Z_{r,s}(tau) = zeta(r+s*tau) - (r+s*tau)*eta1 + 2*pi*i*s, the stable
/// form; it agrees with zeta(r+s*tau) - r*eta1 - s*eta2 by Legendre.
cplx Z(cplx r, cplx s, const ModularParam& mp);

/// One catalog monomial: (num/den) Z^pz wp^pwp wp'^pwpp e1^pe1 e2^pe2
/// e3^pe3 g2^pg2 g3^pg3. Coefficients are exact rationals.
struct ZCatalogTerm {
    long long num, den;
    int pz, pwp, pwpp, pe1, pe2, pe3, pg2, pg3;
};

struct ZCatalogForm {
    DTVIndex index;
    std::vector<ZCatalogTerm> terms;
};

/// The supported index set, in catalog order.
const std::vector<DTVIndex>& catalog_indices();

/// Throws UnsupportedIndex for n outside the catalog.
const ZCatalogForm& catalog_form(DTVIndex n);

cplx Z_n(const ZCatalogForm& form, cplx r, cplx s, const ModularParam& mp);
cplx Z_n(DTVIndex n, cplx r, cplx s, const ModularParam& mp);

/// Local magnitude normalizer: sum of |monomial| over the catalog terms
/// at the evaluation point. Residual and derivative thresholds are
/// relative to this.
double Z_n_scale(const ZCatalogForm& form, cplx r, cplx s, const ModularParam& mp);

struct ZPartials {
    cplx dtau; // d/dtau at fixed (r,s)
    cplx dr;   // d/dr at fixed (s,tau)
    cplx ds;   // d/ds at fixed (r,tau)
};

/// Exact chain rule through the catalog polynomial; no finite differences.
ZPartials Z_n_partials(const ZCatalogForm& form, cplx r, cplx s, const ModularParam& mp);

/// Polynomial derivative in the symbol Z, evaluated at the same point.
/// Satisfies ds - tau*dr = 2*pi*i * (this value).
cplx Z_n_dZ(const ZCatalogForm& form, cplx r, cplx s, const ModularParam& mp);

struct ZeroCertificate {
    cplx tau_star;
    double residual;             // |Z^n(tau_star)|
    double derivative_magnitude; // |d/dtau Z^n(tau_star)|
    int newton_iterations;
};

/// Damped Newton on tau -> Z^n(tau) with the exact tau-partial.
/// Pre: (r,s) outside (1/2)Z^2 and Im(tau_guess) >= 0.2.
/// Errors: NoConvergence (50 iterations), LeftDomain (iterates below
/// Im tau = 0.2), NotSimple (vanishing derivative at a converged zero).
ZeroCertificate find_zero_tau(const ZCatalogForm& form, cplx r, cplx s, cplx tau_guess);

struct ScanWindow {
    double re_min, re_max;
    double im_min, im_max;
    double step;
};

/// Grid scan over the window: |Z^n| local minima seed Newton; converged
/// zeros inside the window are deduplicated (basin representatives) and
/// sorted by Im(tau), then Re(tau). An empty result is a valid outcome.
std::vector<ZeroCertificate> scan_zeros(const ZCatalogForm& form, cplx r, cplx s,
                                        const ScanWindow& window);

} // namespace dtv
