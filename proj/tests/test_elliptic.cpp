#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <limits>
#include <vector>

#include "dtvmono/elliptic.hpp"

using dtv::cplx;
using dtv::ModularParam;

namespace {

constexpr double kPi = std::numbers::pi;

// Reference values generated by tests/oracle/gen_elliptic_values.py:
// Lambert/Eisenstein q-series at 30 digits, cross-checked there against
// truncated symmetric lattice sums (agreement ~1e-6, the lattice-sum
// truncation limit). Frozen to 18 digits.
struct LatticeOracle {
    cplx tau;
    cplx eta1, eta2, g2, g3, e1, e2, e3;
    cplx z; // probe point in the convergence strip
    cplx wp, wp_prime, zeta, sigma;
};

const std::vector<LatticeOracle>& oracles() {
    static const std::vector<LatticeOracle> v = {
        {{0.1, 1.2},
         {+3.255897131431991109e+00, -2.473004812583086409e-02},
         {+3.552657708941961423e-01, -2.378581754273780380e+00},
         {+1.433062932218582262e+02, +9.813384480914313812e+00},
         {+2.227121193337425211e+02, -4.612876503574182152e+01},
         {+6.647650702692512681e+00, +4.937524665576879107e-02},
         {-5.057288792850806125e+00, -5.903188283437460493e-01},
         {-1.590361909841706556e+00, +5.409435816879772929e-01},
         {0.31, 0.17},
         {+4.665391647871910408e+00, -5.837311981596255528e+00},
         {+1.088932987506880945e+00, +4.950970351835463390e+01},
         {+2.487770347639632451e+00, -1.471491105441648850e+00},
         {+3.129771225681112212e-01, +1.682711169948415686e-01}},
        {{-0.3, 0.8},
         {+3.458137952786757285e+00, +4.866672688931922286e-01},
         {-1.426775200950580968e+00, -3.662675125618138239e+00},
         {+5.710653186297019346e+01, -1.872751816118550323e+02},
         {+7.328798153932798414e+02, +7.704618746281124686e+02},
         {+6.254196348673840333e+00, -9.813250259700879718e-01},
         {-6.726770784801869851e+00, +5.715123232300148182e+00},
         {+4.725744361280294625e-01, -4.733798206330060765e+00},
         {0.31, 0.17},
         {+4.953854611184810963e+00, -6.864714027876293478e+00},
         {-1.969461686561282843e+00, +4.526748085066920879e+01},
         {+2.379618350890058576e+00, -1.387423066493978618e+00},
         {+3.088478231345316849e-01, +1.665379759402564330e-01}},
        {{0.0, 1.0},
         {+3.141592653589793116e+00, 0.0},
         {0.0, -3.141592653589793116e+00},
         {+1.890727201292338577e+02, 0.0},
         {0.0, 0.0},
         {+6.875185818020372430e+00, 0.0},
         {-6.875185818020372430e+00, 0.0},
         {0.0, 0.0},
         {0.31, 0.17},
         {+4.878821930695618647e+00, -5.742772730321203056e+00},
         {+2.075269701836591540e+00, +4.891879056376097168e+01},
         {+2.473526786832946467e+00, -1.497871636373854232e+00},
         {+3.135111592716623985e-01, +1.674422354508277311e-01}},
        {{0.5, 0.8660254037844386},
         {+3.627598728468435674e+00, 0.0},
         {+1.813799364234217837e+00, -3.141592653589793116e+00},
         {0.0, 0.0},
         {+8.208244370795563327e+02, 0.0},
         {+5.898343969484769467e+00, 0.0},
         {-2.949171984742384733e+00, -5.108115717832557579e+00},
         {-2.949171984742384733e+00, +5.108115717832557579e+00},
         {0.31, 0.17},
         {+4.108117956394553794e+00, -6.332247629188298532e+00},
         {-2.653371486890039765e+00, +5.027162456063380347e+01},
         {+2.506056180086631446e+00, -1.379130337609720591e+00},
         {+3.106291651241096519e-01, +1.702437707925971710e-01}},
    };
    return v;
}

void check_close(cplx got, cplx want, double tol, const char* what) {
    INFO(what << ": got " << got.real() << "+" << got.imag() << "i, want "
              << want.real() << "+" << want.imag() << "i");
    CHECK(std::abs(got - want) <= tol);
}

} // namespace

TEST_CASE("lattice data matches the independent series oracles") {
    for (const auto& o : oracles()) {
        ModularParam mp(o.tau);
        const auto& inv = mp.invariants();
        auto tol = [](cplx v) { return 1e-11 * (1.0 + std::abs(v)); };
        check_close(inv.eta1, o.eta1, tol(o.eta1), "eta1");
        check_close(inv.eta2, o.eta2, tol(o.eta2), "eta2");
        check_close(inv.g2, o.g2, tol(o.g2), "g2");
        check_close(inv.g3, o.g3, tol(o.g3), "g3");
        check_close(inv.e1, o.e1, tol(o.e1), "e1");
        check_close(inv.e2, o.e2, tol(o.e2), "e2");
        check_close(inv.e3, o.e3, tol(o.e3), "e3");
        check_close(inv.eta3, o.eta1 + o.eta2, tol(o.eta1), "eta3");
    }
}

TEST_CASE("point values match the independent series oracles") {
    for (const auto& o : oracles()) {
        ModularParam mp(o.tau);
        auto tol = [](cplx v) { return 1e-11 * (1.0 + std::abs(v)); };
        check_close(dtv::wp(o.z, mp), o.wp, tol(o.wp), "wp");
        check_close(dtv::wp_prime(o.z, mp), o.wp_prime, tol(o.wp_prime), "wp_prime");
        check_close(dtv::zeta(o.z, mp), o.zeta, tol(o.zeta), "zeta");
        check_close(dtv::sigma(o.z, mp), o.sigma, tol(o.sigma), "sigma");
    }
}

TEST_CASE("square and hexagonal lattices have their classical symmetries") {
    ModularParam sq(cplx(0.0, 1.0));
    const auto& si = sq.invariants();
    CHECK(std::abs(si.g3) <= 1e-9);
    CHECK(std::abs(si.e3) <= 1e-10);
    CHECK(std::abs(si.e1 + si.e2) <= 1e-10);
    CHECK(std::abs(si.eta1 - kPi) <= 1e-12);

    ModularParam hex(cplx(0.5, std::sqrt(3.0) / 2.0));
    const auto& hi = hex.invariants();
    CHECK(std::abs(hi.g2) <= 1e-9);
    CHECK(std::abs(hi.eta1 - 2.0 * kPi / std::sqrt(3.0)) <= 1e-12);
}

TEST_CASE("legendre relation holds to 1e-12 across the tau grid") {
    for (int i = 0; i < 20; ++i) {
        const double re = -0.45 + 0.9 * (i % 5) / 4.0;
        const double im = 0.5 + 2.5 * (i / 5) / 3.0;
        ModularParam mp(cplx(re, im));
        INFO("tau = " << re << "+" << im << "i");
        CHECK(mp.invariants().legendre_residual <= 1e-12);
        CHECK(std::abs(mp.tau() * mp.eta1() - mp.eta2() - cplx(0.0, 2.0 * kPi)) <= 1e-12);
    }
}

TEST_CASE("wp satisfies its differential equation on a cell grid") {
    for (const auto& o : oracles()) {
        ModularParam mp(o.tau);
        const auto& inv = mp.invariants();
        for (int ia = 0; ia < 7; ++ia)
            for (int ib = 0; ib < 7; ++ib) {
                const double a = 0.08 + 0.14 * ia;
                const double b = 0.08 + 0.14 * ib;
                const cplx z = a + b * o.tau;
                const auto v = dtv::eval_all(z, mp);
                const cplx lhs = v.wp_prime * v.wp_prime;
                const cplx rhs = 4.0 * v.wp * v.wp * v.wp - inv.g2 * v.wp - inv.g3;
                const double scale = std::pow(std::max(1.0, std::abs(v.wp)), 3);
                INFO("a=" << a << " b=" << b);
                CHECK(std::abs(lhs - rhs) / scale <= 1e-9);
            }
    }
}

TEST_CASE("z-derivative ladder: zeta' = -wp, wp'' closed form, sigma'/sigma = zeta") {
    ModularParam mp(cplx(0.1, 1.2));
    const double h = 1e-5;
    for (cplx z : {cplx(0.31, 0.17), cplx(0.71, 0.52), cplx(-0.43, 0.88)}) {
        const cplx dz = (dtv::zeta(z + h, mp) - dtv::zeta(z - h, mp)) / (2.0 * h);
        CHECK(std::abs(dz + dtv::wp(z, mp)) <= 1e-6 * (1.0 + std::abs(dz)));

        const cplx dwp = (dtv::wp(z + h, mp) - dtv::wp(z - h, mp)) / (2.0 * h);
        CHECK(std::abs(dwp - dtv::wp_prime(z, mp)) <= 1e-6 * (1.0 + std::abs(dwp)));

        const cplx dwpp = (dtv::wp_prime(z + h, mp) - dtv::wp_prime(z - h, mp)) / (2.0 * h);
        CHECK(std::abs(dwpp - dtv::wp_second(z, mp)) <= 1e-6 * (1.0 + std::abs(dwpp)));

        const cplx lds = (dtv::sigma(z + h, mp) - dtv::sigma(z - h, mp)) / (2.0 * h * dtv::sigma(z, mp));
        CHECK(std::abs(lds - dtv::zeta(z, mp)) <= 1e-6 * (1.0 + std::abs(lds)));
    }
}

TEST_CASE("zeta quasi-periodicity over |m|,|n| <= 2") {
    for (const auto& o : oracles()) {
        ModularParam mp(o.tau);
        const cplx z0{0.23, 0.11};
        const cplx base = dtv::zeta(z0, mp);
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
                const cplx shift = double(m) * mp.eta1() + double(n) * mp.eta2();
                const cplx got = dtv::zeta(z0 + double(m) + double(n) * o.tau, mp);
                INFO("m=" << m << " n=" << n);
                CHECK(std::abs(got - base - shift) <= 1e-10 * (1.0 + std::abs(shift)));
            }
    }
}

TEST_CASE("wp and wp_prime are fully periodic") {
    for (const auto& o : oracles()) {
        ModularParam mp(o.tau);
        const cplx z0{0.29, 0.33};
        const cplx p0 = dtv::wp(z0, mp);
        const cplx p1 = dtv::wp_prime(z0, mp);
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
                const cplx z = z0 + double(m) + double(n) * o.tau;
                CHECK(std::abs(dtv::wp(z, mp) - p0) <= 1e-10 * (1.0 + std::abs(p0)));
                CHECK(std::abs(dtv::wp_prime(z, mp) - p1) <= 1e-10 * (1.0 + std::abs(p1)));
            }
    }
}

TEST_CASE("sigma quasi-periodicity with the exponential cocycle") {
    ModularParam mp(cplx(0.1, 1.2));
    const cplx tau = mp.tau();
    const cplx z0{0.27, 0.19};
    const cplx s0 = dtv::sigma(z0, mp);
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) {
            if (m == 0 && n == 0) continue;
            const cplx w = double(m) + double(n) * tau;
            const cplx eta = double(m) * mp.eta1() + double(n) * mp.eta2();
            const double parity = ((m % 2 != 0) || (n % 2 != 0)) ? -1.0 : 1.0;
            const cplx pred = parity * std::exp(eta * (z0 + 0.5 * w)) * s0;
            const cplx got = dtv::sigma(z0 + w, mp);
            INFO("m=" << m << " n=" << n);
            CHECK(std::abs(got - pred) <= 1e-9 * std::abs(pred));
        }
}

TEST_CASE("reduction is exact in double arithmetic and lands in the cell") {
    for (const auto& o : oracles()) {
        ModularParam mp(o.tau);
        for (cplx z : {cplx(0.31, 0.17), cplx(-7.8, 13.2), cplx(42.6, -9.4),
                       cplx(-0.001, 0.001), cplx(1e6, 2e5), cplx(3.0, 0.0)}) {
            const auto p = dtv::reduce(z, mp);
            const cplx back = p.reduced + (double(p.m1) + double(p.m2) * o.tau);
            // Bit-exact whenever a double representative exists; otherwise
            // within one rounding of the final addition.
            const double ulp_scale = std::abs(double(p.m1) + double(p.m2) * o.tau) + std::abs(z) + 1.0;
            CHECK(std::abs(back - z) <= 2.0 * std::numeric_limits<double>::epsilon() * ulp_scale);
            if (std::abs(z) >= 1.0) CHECK(back == z);
            CHECK(p.a >= 0.0);
            CHECK(p.a < 1.0);
            CHECK(p.b >= 0.0);
            CHECK(p.b < 1.0);
            const auto q = dtv::reduce(p.reduced, mp);
            CHECK(q.m1 == 0);
            CHECK(q.m2 == 0);
        }
    }
}

TEST_CASE("wp_inverse round-trips with and without a sign hint") {
    for (const auto& o : oracles()) {
        ModularParam mp(o.tau);
        for (cplx z0 : {cplx(0.31, 0.17), cplx(0.62, 0.81), cplx(0.11, 0.43),
                        cplx(0.87, 0.05), cplx(0.45, 0.95)}) {
            const cplx z = z0.real() + z0.imag() * o.tau;
            const cplx w = dtv::wp(z, mp);
            const cplx wp_p = dtv::wp_prime(z, mp);

            const auto u = dtv::wp_inverse(w, mp, wp_p);
            CHECK(std::abs(dtv::wp(u.reduced, mp) - w) <= 1e-9 * (1.0 + std::abs(w)));
            CHECK(std::abs(dtv::wp_prime(u.reduced, mp) - wp_p) <= 1e-7 * (1.0 + std::abs(wp_p)));
            CHECK(dtv::distance_to_lattice(u.reduced - z, mp) <= 1e-7);

            const auto v1 = dtv::wp_inverse(w, mp);
            const auto v2 = dtv::wp_inverse(w, mp);
            CHECK(v1.reduced == v2.reduced);
            CHECK(std::abs(dtv::wp(v1.reduced, mp) - w) <= 1e-9 * (1.0 + std::abs(w)));
            CHECK(v1.b <= 0.5);
        }
        // Large-argument seed 1/sqrt(w).
        const cplx big{1e6, 3e5};
        const auto u = dtv::wp_inverse(big, mp);
        CHECK(std::abs(dtv::wp(u.reduced, mp) - big) <= 1e-9 * std::abs(big));
    }
}

TEST_CASE("tau derivatives match central differences in tau") {
    const double h = 1e-5;
    for (cplx tau : {cplx(0.1, 1.2), cplx(-0.3, 0.8)}) {
        ModularParam mp(tau);
        ModularParam mp_p(tau + h);
        ModularParam mp_m(tau - h);

        CHECK(std::abs(dtv::tau_derivatives(cplx(0.31, 0.17), mp).deta1 -
                       (mp_p.eta1() - mp_m.eta1()) / (2.0 * h)) <= 1e-6);
        for (int k = 0; k < 3; ++k) {
            const auto pick = [k](const dtv::LatticeInvariants& i) {
                return k == 0 ? i.e1 : (k == 1 ? i.e2 : i.e3);
            };
            const cplx fd = (pick(mp_p.invariants()) - pick(mp_m.invariants())) / (2.0 * h);
            const cplx got = dtv::tau_derivatives(cplx(0.31, 0.17), mp).de[k];
            INFO("k=" << k);
            CHECK(std::abs(got - fd) <= 1e-6 * (1.0 + std::abs(fd)));
        }

        // Includes a point far outside the fundamental cell: the formulas
        // must use the unreduced z throughout.
        for (cplx z : {cplx(0.31, 0.17), cplx(0.71, 0.52), cplx(2.3, 3.1), cplx(-1.7, 0.4)}) {
            const auto d = dtv::tau_derivatives(z, mp);
            const cplx fdz = (dtv::zeta(z, mp_p) - dtv::zeta(z, mp_m)) / (2.0 * h);
            const cplx fdp = (dtv::wp(z, mp_p) - dtv::wp(z, mp_m)) / (2.0 * h);
            const cplx fdpp = (dtv::wp_prime(z, mp_p) - dtv::wp_prime(z, mp_m)) / (2.0 * h);
            INFO("z = " << z.real() << "+" << z.imag() << "i");
            CHECK(std::abs(d.dzeta - fdz) <= 1e-6 * (1.0 + std::abs(fdz)));
            CHECK(std::abs(d.dwp - fdp) <= 1e-6 * (1.0 + std::abs(fdp)));
            CHECK(std::abs(d.dwp_prime - fdpp) <= 1e-6 * (1.0 + std::abs(fdpp)));
        }
    }
}

TEST_CASE("pole and domain errors carry the right kinds") {
    ModularParam mp(cplx(0.1, 1.2));
    CHECK_THROWS_AS(dtv::wp(cplx(0.0, 0.0), mp), dtv::PoleAtLattice);
    CHECK_THROWS_AS(dtv::wp(1.0 + mp.tau(), mp), dtv::PoleAtLattice);
    CHECK_THROWS_AS(dtv::zeta(2.0 + 2.0 * mp.tau() + cplx(1e-12, 0), mp), dtv::PoleAtLattice);
    CHECK_THROWS_AS(dtv::eval_all(cplx(0.0, 0.0), mp), dtv::PoleAtLattice);
    CHECK_THROWS_AS(dtv::half_period(4, mp), dtv::UnsupportedIndex);
    CHECK_THROWS_AS(ModularParam(cplx(0.3, -1.0)), dtv::InvalidTau);
    CHECK_THROWS_AS(ModularParam(cplx(0.3, 0.0)), dtv::InvalidTau);
    CHECK_THROWS_AS(ModularParam(cplx(0.0, 0.001)), dtv::AccuracyUnreachable);

    try {
        dtv::wp(cplx(0.0, 0.0), mp);
    } catch (const dtv::Error& e) {
        CHECK(e.kind() == dtv::ErrorKind::domain);
    }
    try {
        ModularParam bad(cplx(0.0, 0.001));
    } catch (const dtv::Error& e) {
        CHECK(e.kind() == dtv::ErrorKind::convergence);
    }

    // sigma has a zero, not a pole, at lattice points.
    CHECK(std::abs(dtv::sigma(cplx(0.0, 0.0), mp)) <= 1e-12);
}

TEST_CASE("eval_all agrees with the individual functions") {
    ModularParam mp(cplx(-0.3, 0.8));
    for (cplx z : {cplx(0.31, 0.17), cplx(2.3, 3.1), cplx(-1.7, 0.4)}) {
        const auto v = dtv::eval_all(z, mp);
        CHECK(std::abs(v.zeta - dtv::zeta(z, mp)) <= 1e-13 * (1.0 + std::abs(v.zeta)));
        CHECK(std::abs(v.wp - dtv::wp(z, mp)) <= 1e-13 * (1.0 + std::abs(v.wp)));
        CHECK(std::abs(v.wp_prime - dtv::wp_prime(z, mp)) <= 1e-13 * (1.0 + std::abs(v.wp_prime)));
    }
}

TEST_CASE("distance_to_lattice and half periods") {
    ModularParam mp(cplx(0.0, 1.0));
    CHECK(dtv::distance_to_lattice(cplx(0.0, 0.0), mp) == 0.0);
    CHECK(std::abs(dtv::distance_to_lattice(cplx(0.5, 0.0), mp) - 0.5) <= 1e-15);
    CHECK(std::abs(dtv::distance_to_lattice(cplx(3.0, 4.0), mp)) <= 1e-12);
    CHECK(dtv::half_period(0, mp) == cplx(0.0, 0.0));
    CHECK(dtv::half_period(1, mp) == cplx(0.5, 0.0));
    CHECK(dtv::half_period(2, mp) == cplx(0.0, 0.5));
    CHECK(dtv::half_period(3, mp) == cplx(0.5, 0.5));
}
