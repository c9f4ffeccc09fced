#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>

#include "dtvmono/errors.hpp"

namespace dtv {

using cplx = std::complex<double>;

/// Lattice data of E_tau = C/(Z + Z tau) with periods 1 and tau:
/// e_k = wp(omega_k/2), quasi-periods eta_k = 2 zeta(omega_k/2), and the
/// invariants g2, g3 of wp'^2 = 4wp^3 - g2 wp - g3.
struct LatticeInvariants {
    cplx e1, e2, e3;
    cplx eta1, eta2;
    cplx eta3; // eta1 + eta2
    cplx g2, g3;
    double legendre_residual; // |tau*eta1 - eta2 - 2*pi*i|
};

/// tau together with the cached nome q = exp(i*pi*tau) and the series
/// truncation order certified for the configured target accuracy.
/// Immutable value type; copies share the underlying data, so it is cheap
/// to pass around and safe to use from several threads.
class ModularParam {
public:
    explicit ModularParam(cplx tau, double target_accuracy = 1e-12);

    cplx tau() const noexcept;
    cplx nome() const noexcept;
    int truncation_order() const noexcept;
    double target_accuracy() const noexcept;

    /// eta1 = 2 zeta(1/2), from the theta constants.
    cplx eta1() const noexcept;
    /// eta2 = 2 zeta(tau/2), evaluated by series (not defined via Legendre,
    /// so the Legendre residual below is a genuine consistency check).
    cplx eta2() const noexcept;

    const LatticeInvariants& invariants() const noexcept;

    struct Data;
    const Data& data() const noexcept { return *d_; }

private:
    std::shared_ptr<const Data> d_;
};

/// z written as reduced + m1 + m2*tau with reduced = a + b*tau,
/// a,b in [0,1). A correction loop drives the reconstruction to the
/// nearest representable result: bit-exact whenever a double
/// representative exists, within one rounding of the final addition
/// otherwise (e.g. tiny z shifted across an exponent range).
struct EllipticPoint {
    cplx z;
    cplx reduced;
    long m1 = 0;
    long m2 = 0;
    double a = 0; // cell coordinates of reduced
    double b = 0;
};

EllipticPoint reduce(cplx z, const ModularParam& mp);

/// Distance from z to the period lattice Lambda_tau.
double distance_to_lattice(cplx z, const ModularParam& mp);

const LatticeInvariants& lattice_invariants(const ModularParam& mp);

cplx wp(cplx z, const ModularParam& mp);
cplx wp_prime(cplx z, const ModularParam& mp);
/// wp'' = (12 wp^2 - g2)/2.
cplx wp_second(cplx z, const ModularParam& mp);
cplx zeta(cplx z, const ModularParam& mp);
cplx sigma(cplx z, const ModularParam& mp);

/// zeta, wp, wp' at the same point from one theta-series pass.
struct EllipticValues {
    cplx zeta, wp, wp_prime;
};
EllipticValues eval_all(cplx z, const ModularParam& mp);

/// Solve wp(u) = w. Exactly two solutions exist mod Lambda (u and -u); with
/// sign_hint the branch is chosen so wp'(u) lies on the hint's side of the
/// two roots of wp'^2 = 4w^3 - g2 w - g3. Result is reduced to the cell.
EllipticPoint wp_inverse(cplx w, const ModularParam& mp,
                         std::optional<cplx> sign_hint = std::nullopt);

/// Fixed-argument tau-derivatives of the basic functions and constants.
struct TauDerivatives {
    cplx dzeta;         // d/dtau zeta(z;tau), z fixed
    cplx dwp;           // d/dtau wp(z;tau)
    cplx dwp_prime;     // d/dtau wp'(z;tau)
    cplx deta1;         // d/dtau eta1(tau)
    std::array<cplx, 3> de; // d/dtau e_k(tau)
};
TauDerivatives tau_derivatives(cplx z, const ModularParam& mp);

/// Half period omega_k/2 for k = 0..3 (omega_0 = 0, omega_1 = 1,
/// omega_2 = tau, omega_3 = 1 + tau).
cplx half_period(int k, const ModularParam& mp);

} // namespace dtv
