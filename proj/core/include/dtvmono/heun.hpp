#pragma once

#include <array>
#include <complex>
#include <variant>
#include <vector>

#include "dtvmono/elliptic.hpp"
#include "dtvmono/errors.hpp"
#include "dtvmono/index.hpp"
#include "dtvmono/premodular.hpp"

namespace dtv {

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

Mat2 mat_mul(const Mat2& a, const Mat2& b);
cplx mat_det(const Mat2& m);
double mat_norm(const Mat2& m); // Frobenius

/// Transfer matrices along the two fundamental cycles, in the basis
/// (value, derivative) at the common base point. det M_j = 1 and
/// [M1, M2] = 0 up to integration error.
struct MonodromyPair {
    Mat2 M1; // z -> z + 1
    Mat2 M2; // z -> z + tau
};

/// Point on the affine spectral curve C^2 = Q_n(B).
struct SpectralData {
    cplx B;
    cplx C;
    int branch_tag; // sign applied to the principal square root
};

/// Integration route: straight segments between consecutive waypoints,
/// every segment at least `clearance` away from the half-lattice points.
struct PathSpec {
    std::vector<cplx> waypoints;
    double clearance;
};

/// Degenerate monodromy with both traces at (2*eps1, 2*eps2).
struct NotCompletelyReducible {
    int eps1;
    int eps2;
};

/// Sum of the four half-period translates of wp weighted by n_k(n_k+1).
/// Even elliptic; poles of order 2 exactly at the half-lattice points with
/// n_k > 0.
cplx potential(const DTVIndex& n, cplx z, const ModularParam& mp);

/// Arithmetic genus of the spectral curve, by the four-case formula on the
/// descending rearrangement of the index.
int genus(const DTVIndex& n);

/// Coefficients of Q_n(B), ascending in B. Supported: (1,0,0,0) with
/// Q1 = (B-e1)(B-e2)(B-e3) and (2,0,0,0) with
/// Q2 = (B^2-3g2)(B^3-(9/4)g2 B+(27/4)g3).
std::vector<cplx> spectral_poly(const DTVIndex& n, const ModularParam& mp);

cplx eval_poly(const std::vector<cplx>& coeffs, cplx B);

/// C = branch * principal sqrt of Q_n(B).
SpectralData spectral_data(const DTVIndex& n, cplx B, const ModularParam& mp,
                           int branch = +1);

/// Admissible polyline from `from` to `to`: the straight segment with a
/// semicircular detour around every half-lattice point it passes too close
/// to. Throws PathTooClose when an endpoint sits inside an exclusion disk.
PathSpec detour_path(cplx from, cplx to, const ModularParam& mp);

/// Default realization of cycle ell_1 (which = 1, z -> z+1) or ell_2
/// (which = 2, z -> z+tau) from the base point (1+tau)/4, perturbed if the
/// default violates clearance.
PathSpec cycle_path(int which, const ModularParam& mp);

/// Fundamental-matrix transfer for y'' = (I_n + B) y along the path.
Mat2 transfer_along(const DTVIndex& n, cplx B, const ModularParam& mp,
                    const PathSpec& path);

MonodromyPair monodromy_ode(const DTVIndex& n, cplx B, const ModularParam& mp);

/// Simultaneous diagonalization: eigenvalues are paired on a shared
/// eigenvector as (e^{-2 pi i s}, e^{2 pi i r}); returns the canonical
/// class, or the degenerate marker when both traces sit at +-2 without a
/// clean eigenbasis.
std::variant<MonodromyClass, NotCompletelyReducible>
extract_rs(const MonodromyPair& pair);

/// Analytic monodromy for n = (1,0,0,0): a = wp^{-1}(B),
/// s = (a eta1 - zeta(a))/(2 pi i), r = a - s tau.
MonodromyClass rs_from_B_n1(cplx B, const ModularParam& mp);

/// Analytic monodromy for n = (2,0,0,0) on the branch C = branch*sqrt(Q2):
/// wp(sigma) and wp'(sigma) are rational in (B, C), Z = 2C/(3(B^2-3g2)),
/// then s = (sigma eta1 - zeta(sigma) + Z)/(2 pi i), r = sigma - s tau.
MonodromyClass rs_from_B_n2(cplx B, const ModularParam& mp, int branch = +1);

} // namespace dtv
