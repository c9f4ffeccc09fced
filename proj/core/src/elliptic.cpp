#include "dtvmono/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace dtv {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
constexpr double kPoleCutoff = 1e-8;

} // namespace

// All series run in the nome q = exp(i*pi*tau). Terms are paired
// exponentials exp(i*pi*tau*(n+1/2)^2 +- i*(2n+1)*v), so no intermediate
// grows even when Im v is at its maximum pi*Im(tau)/2 after reduction.
struct ModularParam::Data {
    cplx tau;
    double y; // Im tau
    cplx q, q2;
    double target;
    int trunc;
    cplx th1p0;   // theta1'(0)
    cplx th1ppp0; // theta1'''(0)
    cplx eta1, eta2;
    LatticeInvariants inv;
};

namespace {

struct Theta1 {
    cplx t0, t1, t2, t3; // theta1 and its first three v-derivatives
};

// theta1(v|q) = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1)v), summed as
// exponential pairs with rolling products.
Theta1 theta1_all(cplx v, const ModularParam::Data& d) {
    const cplx e2iv = std::exp(2.0 * kI * v);
    const cplx e2iv_inv = std::exp(-2.0 * kI * v);
    cplx pp = std::exp(kI * kPi * d.tau * 0.25 + kI * v);
    cplx pm = std::exp(kI * kPi * d.tau * 0.25 - kI * v);
    cplx gp = d.q2 * e2iv;
    cplx gm = d.q2 * e2iv_inv;

    cplx s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    const double eps = 1e-3 * d.target * (std::abs(pp) + std::abs(pm) + 1e-300);
    int quiet = 0;
    double sign = 1.0;
    for (int n = 0; n <= d.trunc; ++n) {
        const double m = 2.0 * n + 1.0;
        const cplx diff = pp - pm;
        const cplx sum = pp + pm;
        s0 += sign * diff;
        s1 += sign * m * sum;
        s2 += sign * m * m * diff;
        s3 += sign * m * m * m * sum;
        const double w = m * m * m * (std::abs(pp) + std::abs(pm));
        if (w < eps) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
        pp *= gp;
        pm *= gm;
        gp *= d.q2;
        gm *= d.q2;
        sign = -sign;
    }
    // theta1 = sum sign*(pp - pm)/i, and each v-derivative brings down
    // a factor +-i(2n+1).
    Theta1 th;
    th.t0 = -kI * s0;
    th.t1 = s1;
    th.t2 = kI * s2;
    th.t3 = -s3;
    return th;
}

// Centered reduction: z = zc + M1 + M2*tau with zc = a + b*tau,
// a,b in [-1/2, 1/2). Only used internally; keeps |Im(pi*zc)| within
// pi*Im(tau)/2 where the series converge like exp(-pi*Im(tau)*n^2).
struct Centered {
    cplx zc;
    long M1, M2;
};

Centered centered_reduce(cplx z, const ModularParam::Data& d) {
    const double b = z.imag() / d.y;
    const double a = z.real() - b * d.tau.real();
    const double m2 = std::floor(b + 0.5);
    const double m1 = std::floor(a + 0.5);
    Centered c;
    c.M1 = static_cast<long>(m1);
    c.M2 = static_cast<long>(m2);
    c.zc = z - (m1 + m2 * d.tau);
    return c;
}

double dist_to_lattice_centered(cplx zc, const ModularParam::Data& d) {
    double best = std::abs(zc);
    for (int m1 = -1; m1 <= 1; ++m1)
        for (int m2 = -1; m2 <= 1; ++m2) {
            if (m1 == 0 && m2 == 0) continue;
            best = std::min(best, std::abs(zc - (double(m1) + double(m2) * d.tau)));
        }
    return best;
}

cplx quasi_shift(long M1, long M2, const ModularParam::Data& d) {
    return double(M1) * d.eta1 + double(M2) * d.eta2;
}

struct RawValues {
    cplx zeta_c, wp, wp_prime; // zeta at the centered point, wp/wp' lattice-invariant
};

RawValues raw_eval(cplx zc, const ModularParam::Data& d) {
    const Theta1 th = theta1_all(kPi * zc, d);
    const cplx L1 = th.t1 / th.t0;
    const cplx L2 = th.t2 / th.t0 - L1 * L1;
    const cplx L3 = th.t3 / th.t0 - 3.0 * (th.t2 / th.t0) * L1 + 2.0 * L1 * L1 * L1;
    RawValues r;
    r.zeta_c = d.eta1 * zc + kPi * L1;
    r.wp = -d.eta1 - kPi * kPi * L2;
    r.wp_prime = -kPi * kPi * kPi * L3;
    return r;
}

void require_off_lattice(cplx zc, const ModularParam::Data& d, const char* who) {
    if (dist_to_lattice_centered(zc, d) < kPoleCutoff)
        throw PoleAtLattice(std::string(who) + ": argument within pole cutoff of the period lattice");
}

} // namespace

ModularParam::ModularParam(cplx tau, double target_accuracy) {
    if (!(tau.imag() > 0.0))
        throw InvalidTau("ModularParam: Im(tau) must be positive");
    if (!(target_accuracy > 0.0))
        throw InvalidTau("ModularParam: target accuracy must be positive");

    auto d = std::make_shared<Data>();
    d->tau = tau;
    d->y = tau.imag();
    d->q = std::exp(kI * kPi * tau);
    d->q2 = d->q * d->q;
    d->target = target_accuracy;

    // A-priori truncation: term n carries weight (2n+1)^3 and magnitude
    // exp(-pi*y*(n^2 - 1/4)) relative to the leading term; pick the first
    // n below a hundredth of the target.
    const int cap = 96;
    int n = 2;
    while (n < cap) {
        const double m = 2.0 * n + 1.0;
        const double bound = 3.0 * std::log(m) - kPi * d->y * (double(n) * n - 0.25);
        if (bound < std::log(0.01 * target_accuracy)) break;
        ++n;
    }
    if (n >= cap)
        throw AccuracyUnreachable("ModularParam: truncation order cap reached; Im(tau) too small for target accuracy");
    d->trunc = n + 3;

    // Theta constants at v = 0: the paired exponentials coincide.
    {
        cplx p = std::exp(kI * kPi * tau * 0.25);
        cplx g = d->q2;
        cplx s1 = 0, s3 = 0;
        double sign = 1.0;
        for (int k = 0; k <= d->trunc; ++k) {
            const double m = 2.0 * k + 1.0;
            s1 += sign * m * p;
            s3 += sign * m * m * m * p;
            p *= g;
            g *= d->q2;
            sign = -sign;
        }
        d->th1p0 = 2.0 * s1;
        d->th1ppp0 = -2.0 * s3;
    }
    d->eta1 = -(kPi * kPi / 3.0) * d->th1ppp0 / d->th1p0;

    // eta2 = 2 zeta(tau/2) straight from the series; Legendre then holds as
    // a computed identity, not by construction.
    {
        const Theta1 th = theta1_all(kPi * tau * 0.5, *d);
        d->eta2 = d->eta1 * tau + 2.0 * kPi * th.t1 / th.t0;
    }

    LatticeInvariants& inv = d->inv;
    inv.eta1 = d->eta1;
    inv.eta2 = d->eta2;
    inv.eta3 = d->eta1 + d->eta2;
    inv.e1 = raw_eval(cplx(0.5, 0.0), *d).wp;
    inv.e2 = raw_eval(tau * 0.5, *d).wp;
    inv.e3 = raw_eval(0.5 + tau * 0.5, *d).wp;
    inv.g2 = -4.0 * (inv.e1 * inv.e2 + inv.e2 * inv.e3 + inv.e3 * inv.e1);
    inv.g3 = 4.0 * inv.e1 * inv.e2 * inv.e3;
    inv.legendre_residual = std::abs(tau * d->eta1 - d->eta2 - 2.0 * kPi * kI);

    d_ = std::move(d);
}

cplx ModularParam::tau() const noexcept { return d_->tau; }
cplx ModularParam::nome() const noexcept { return d_->q; }
int ModularParam::truncation_order() const noexcept { return d_->trunc; }
double ModularParam::target_accuracy() const noexcept { return d_->target; }
cplx ModularParam::eta1() const noexcept { return d_->eta1; }
cplx ModularParam::eta2() const noexcept { return d_->eta2; }
const LatticeInvariants& ModularParam::invariants() const noexcept { return d_->inv; }

const LatticeInvariants& lattice_invariants(const ModularParam& mp) {
    return mp.invariants();
}

EllipticPoint reduce(cplx z, const ModularParam& mp) {
    const auto& d = mp.data();
    const double b_full = z.imag() / d.y;
    const double a_full = z.real() - b_full * d.tau.real();
    double m1 = std::floor(a_full);
    double m2 = std::floor(b_full);

    EllipticPoint p;
    p.z = z;
    for (int pass = 0; pass < 4; ++pass) {
        const cplx w = m1 + m2 * d.tau;
        p.reduced = z - w;
        p.b = p.reduced.imag() / d.y;
        p.a = p.reduced.real() - p.b * d.tau.real();
        if (p.b < 0.0) { m2 -= 1; continue; }
        if (p.b >= 1.0) { m2 += 1; continue; }
        if (p.a < 0.0) { m1 -= 1; continue; }
        if (p.a >= 1.0) { m1 += 1; continue; }
        break;
    }
    // Drive the reconstruction to the nearest representable value. The
    // loop reaches bit-exactness whenever some double does; when none
    // does (tiny z shifted across an exponent range) it stalls within
    // one rounding of the final addition.
    const cplx w = m1 + m2 * d.tau;
    for (int pass = 0; pass < 3; ++pass) {
        const cplx back = p.reduced + w;
        if (back == z) break;
        p.reduced += z - back;
    }
    p.m1 = static_cast<long>(m1);
    p.m2 = static_cast<long>(m2);
    return p;
}

double distance_to_lattice(cplx z, const ModularParam& mp) {
    const auto c = centered_reduce(z, mp.data());
    return dist_to_lattice_centered(c.zc, mp.data());
}

cplx wp(cplx z, const ModularParam& mp) {
    const auto& d = mp.data();
    const auto c = centered_reduce(z, d);
    require_off_lattice(c.zc, d, "wp");
    return raw_eval(c.zc, d).wp;
}

cplx wp_prime(cplx z, const ModularParam& mp) {
    const auto& d = mp.data();
    const auto c = centered_reduce(z, d);
    require_off_lattice(c.zc, d, "wp_prime");
    return raw_eval(c.zc, d).wp_prime;
}

cplx wp_second(cplx z, const ModularParam& mp) {
    const cplx p = wp(z, mp);
    return (12.0 * p * p - lattice_invariants(mp).g2) * 0.5;
}

cplx zeta(cplx z, const ModularParam& mp) {
    const auto& d = mp.data();
    const auto c = centered_reduce(z, d);
    require_off_lattice(c.zc, d, "zeta");
    return raw_eval(c.zc, d).zeta_c + quasi_shift(c.M1, c.M2, d);
}

cplx sigma(cplx z, const ModularParam& mp) {
    const auto& d = mp.data();
    const auto c = centered_reduce(z, d);
    const Theta1 th = theta1_all(kPi * c.zc, d);
    const cplx sig_c = std::exp(d.eta1 * c.zc * c.zc * 0.5) * th.t0 / (kPi * d.th1p0);
    if (c.M1 == 0 && c.M2 == 0) return sig_c;
    // sigma(zc + M1 + M2 tau) =
    //   (-1)^{M1+M2+M1*M2} exp((M1 eta1 + M2 eta2)(zc + (M1 + M2 tau)/2)) sigma(zc)
    const cplx shift = double(c.M1) + double(c.M2) * d.tau;
    const cplx factor = std::exp(quasi_shift(c.M1, c.M2, d) * (c.zc + 0.5 * shift));
    const bool odd = ((c.M1 % 2 != 0) + (c.M2 % 2 != 0) + ((c.M1 % 2 != 0) && (c.M2 % 2 != 0))) % 2 != 0;
    return (odd ? -factor : factor) * sig_c;
}

EllipticValues eval_all(cplx z, const ModularParam& mp) {
    const auto& d = mp.data();
    const auto c = centered_reduce(z, d);
    require_off_lattice(c.zc, d, "eval_all");
    const RawValues r = raw_eval(c.zc, d);
    EllipticValues v;
    v.zeta = r.zeta_c + quasi_shift(c.M1, c.M2, d);
    v.wp = r.wp;
    v.wp_prime = r.wp_prime;
    return v;
}

cplx half_period(int k, const ModularParam& mp) {
    switch (k) {
        case 0: return cplx(0.0, 0.0);
        case 1: return cplx(0.5, 0.0);
        case 2: return mp.tau() * 0.5;
        case 3: return 0.5 + mp.tau() * 0.5;
        default: throw UnsupportedIndex("half_period: k must be 0..3");
    }
}

EllipticPoint wp_inverse(cplx w, const ModularParam& mp, std::optional<cplx> sign_hint) {
    const auto& d = mp.data();
    const auto& inv = mp.invariants();
    const double wscale = std::max(1.0, std::abs(w));
    const double tol = std::max(mp.target_accuracy(), 1e-13) * wscale;

    std::vector<cplx> seeds;
    const double emax = std::max({std::abs(inv.e1), std::abs(inv.e2), std::abs(inv.e3), 1.0});
    if (std::abs(w) > 3.0 * emax) seeds.push_back(1.0 / std::sqrt(w));
    for (double a : {0.13, 0.34, 0.57, 0.81})
        for (double b : {0.13, 0.34, 0.57, 0.81})
            seeds.push_back(a + b * d.tau);
    std::stable_sort(seeds.begin(), seeds.end(), [&](cplx u1, cplx u2) {
        double f1, f2;
        try { f1 = std::abs(wp(u1, mp) - w); } catch (const Error&) { f1 = 1e300; }
        try { f2 = std::abs(wp(u2, mp) - w); } catch (const Error&) { f2 = 1e300; }
        return f1 < f2;
    });

    const double step_cap = 0.35 * std::min(1.0, std::abs(d.tau));
    for (const cplx seed : seeds) {
        cplx u = seed;
        double fmag = 1e300;
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            cplx f, fp;
            try {
                const auto c = centered_reduce(u, d);
                if (dist_to_lattice_centered(c.zc, d) < 10 * kPoleCutoff) break;
                const RawValues r = raw_eval(c.zc, d);
                f = r.wp - w;
                fp = r.wp_prime;
            } catch (const Error&) {
                break;
            }
            fmag = std::abs(f);
            if (fmag <= tol) { ok = true; break; }
            if (std::abs(fp) == 0.0) break;
            cplx du = f / fp;
            if (std::abs(du) > step_cap) du *= step_cap / std::abs(du);
            // Damped step: halve until the residual does not grow.
            cplx u_next = u - du;
            bool accepted = false;
            for (int half = 0; half < 6; ++half) {
                double fnew;
                try {
                    fnew = std::abs(wp(u_next, mp) - w);
                } catch (const Error&) {
                    fnew = 1e300;
                }
                if (fnew < fmag || fnew <= tol) { accepted = true; break; }
                du *= 0.5;
                u_next = u - du;
            }
            if (!accepted) break;
            u = u_next;
        }
        if (!ok) continue;

        // Canonical representative: among {u, -u} pick the one whose cell
        // coordinate b lies in [0, 1/2); the hint, when present, overrides.
        EllipticPoint p = reduce(u, mp);
        EllipticPoint q = reduce(-p.reduced, mp);
        if (sign_hint) {
            const cplx wp_at = wp_prime(p.reduced, mp);
            if ((conj(*sign_hint) * wp_at).real() < 0.0) p = q;
        } else if (q.b < p.b || (q.b == p.b && q.a < p.a)) {
            p = q;
        }
        EllipticPoint out = reduce(p.reduced, mp);
        return out;
    }
    throw NoConvergence("wp_inverse: Newton failed from every seed");
}

TauDerivatives tau_derivatives(cplx z, const ModularParam& mp) {
    const auto& inv = mp.invariants();
    const EllipticValues v = eval_all(z, mp);
    const cplx eta1 = inv.eta1;
    const cplx g2 = inv.g2;
    const cplx zmz = v.zeta - z * eta1;

    TauDerivatives out;
    out.dzeta = (kI / (4.0 * kPi)) *
                (v.wp_prime + 2.0 * zmz * v.wp + 2.0 * eta1 * v.zeta - z * g2 / 6.0);
    out.dwp = (-kI / (4.0 * kPi)) *
              (2.0 * zmz * v.wp_prime + 4.0 * (v.wp - eta1) * v.wp - (2.0 / 3.0) * g2);
    out.dwp_prime = (-kI / (4.0 * kPi)) *
                    (6.0 * (v.wp - eta1) * v.wp_prime + zmz * (12.0 * v.wp * v.wp - g2));
    out.deta1 = (kI / (24.0 * kPi)) * (12.0 * eta1 * eta1 - g2);
    const std::array<cplx, 3> es{inv.e1, inv.e2, inv.e3};
    for (int k = 0; k < 3; ++k)
        out.de[k] = (kI / kPi) * (g2 / 6.0 + eta1 * es[k] - es[k] * es[k]);
    return out;
}

} // namespace dtv
