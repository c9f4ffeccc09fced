#include "dtvmono/painleve.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dtvmono/ode.hpp"
#include "dtvmono/premodular.hpp"

namespace dtv {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kTwoPiI(0.0, 2.0 * kPi);
const cplx kIOver4Pi(0.0, 1.0 / (4.0 * kPi));

constexpr double kHalfPairCutoff = 1e-10;
constexpr double kPoleGuard = 1e-8;
constexpr double kJumpTol = 0.1;
// Distance from p to the half lattice (1/2)Lambda below which the
// Hamiltonian right-hand side is refused.
constexpr double kCollisionCutoff = 0.01;

std::array<int, 4> entries(const DTVIndex& n) {
    return {n.n0, n.n1, n.n2, n.n3};
}

void require_nonnegative(const DTVIndex& n, const char* who) {
    if (n.n0 < 0 || n.n1 < 0 || n.n2 < 0 || n.n3 < 0)
        throw UnsupportedIndex(std::string(who) + ": negative index entry in " + to_string(n));
}

/// Z_{r,s}(tau) together with the cancellation scale of its evaluation.
struct ZValue {
    cplx z;
    double scale;
    EllipticValues at_u; // zeta, wp, wp' at u = r + s*tau
};

ZValue z_value(cplx r, cplx s, const ModularParam& mp) {
    const cplx u = r + s * mp.tau();
    ZValue out;
    out.at_u = eval_all(u, mp);
    const cplx ue = u * mp.eta1();
    const cplx ts = kTwoPiI * s;
    out.z = out.at_u.zeta - ue + ts;
    out.scale = std::abs(out.at_u.zeta) + std::abs(ue) + std::abs(ts);
    return out;
}

/// Nearest image of q to anchor under q -> +-q + m1 + m2*tau, |m_i| <= 2.
cplx track_to(cplx q, cplx anchor, cplx tau, double jump_tol) {
    cplx best = q;
    double best_d = std::abs(q - anchor);
    for (int sign = 0; sign < 2; ++sign) {
        const cplx base = sign ? -q : q;
        for (int m1 = -2; m1 <= 2; ++m1)
            for (int m2 = -2; m2 <= 2; ++m2) {
                const cplx cand = base + cplx(double(m1), 0.0) + double(m2) * tau;
                const double d = std::abs(cand - anchor);
                if (d < best_d) {
                    best_d = d;
                    best = cand;
                }
            }
    }
    if (best_d > jump_tol)
        throw BranchJump("branch tracking: nearest image of the new point is " +
                         std::to_string(best_d) + " away from the previous one");
    return best;
}

cplx weighted_wp_sum(const DTVIndex& n, cplx p, const ModularParam& mp) {
    cplx acc = 0.0;
    const auto nk = entries(n);
    for (int k = 0; k < 4; ++k) {
        if (nk[k] == 0) continue;
        acc += double(nk[k] * (nk[k] + 1)) * wp(p + half_period(k, mp), mp);
    }
    return acc;
}

cplx weighted_wp_prime_sum(const DTVIndex& n, cplx p, const ModularParam& mp) {
    cplx acc = 0.0;
    const auto nk = entries(n);
    for (int k = 0; k < 4; ++k) {
        if (nk[k] == 0) continue;
        acc += double(nk[k] * (nk[k] + 1)) * wp_prime(p + half_period(k, mp), mp);
    }
    return acc;
}

/// Accessory value attached to a flow state: B = A^2 - zeta(2p) A
/// - (3/4) wp(2p) - sum(k) n_k(n_k+1) wp(p + omega_k/2).
cplx accessory_of_state(const DTVIndex& n, cplx p, cplx A, const ModularParam& mp) {
    const EllipticValues v2 = eval_all(2.0 * p, mp);
    return A * A - v2.zeta * A - 0.75 * v2.wp - weighted_wp_sum(n, p, mp);
}

} // namespace

EPVIParams epvi_params(const DTVIndex& n) {
    require_nonnegative(n, "epvi_params");
    auto alpha = [](int nk) {
        const double t = nk + 0.5;
        return 0.5 * t * t;
    };
    return {alpha(n.n0), alpha(n.n1), alpha(n.n2), alpha(n.n3)};
}

cplx hitchin_wp_p0(cplx r, cplx s, const ModularParam& mp) {
    if (half_pair_distance(r, s) < kHalfPairCutoff)
        throw BranchPoint("hitchin_wp_p0: (r,s) lies in (1/2)Z^2");
    const ZValue zv = z_value(r, s, mp);
    if (std::abs(zv.z) < kPoleGuard * zv.scale)
        throw PoleOfSolution("hitchin_wp_p0: Z vanishes at this tau (pole of the solution)");
    return zv.at_u.wp + zv.at_u.wp_prime / (2.0 * zv.z);
}

PVIPoint pvi_point(const DTVIndex& n, cplx r, cplx s, const ModularParam& mp,
                   std::optional<cplx> sign_hint) {
    cplx w;
    if (n == DTVIndex{0, 0, 0, 0})
        w = hitchin_wp_p0(r, s, mp);
    else if (n == DTVIndex{1, 0, 0, 0})
        w = wp_p_1000(r, s, mp);
    else
        throw UnsupportedIndex("pvi_point: supported indices are 0-0-0-0 and 1-0-0-0");
    return {mp.tau(), wp_inverse(w, mp, sign_hint), w};
}

cplx wp_p_1000(cplx r, cplx s, const ModularParam& mp) {
    if (half_pair_distance(r, s) < kHalfPairCutoff)
        throw BranchPoint("wp_p_1000: (r,s) lies in (1/2)Z^2");
    const ZValue zv = z_value(r, s, mp);
    const cplx g2 = lattice_invariants(mp).g2;
    const cplx Zc = zv.z;
    const cplx w = zv.at_u.wp;
    const cplx wprime = zv.at_u.wp_prime;
    const cplx num = 3.0 * wprime * Zc * Zc + (12.0 * w * w - g2) * Zc + 3.0 * w * wprime;
    const cplx den = 2.0 * (Zc * Zc * Zc - 3.0 * w * Zc - wprime);
    // |Z| enters the scale through its cancellation floor, matching the
    // catalog normalizer for the weight-3 form whose zeros these are.
    const double az = std::max(std::abs(Zc), zv.scale);
    const double den_scale = 2.0 * (az * az * az + 3.0 * std::abs(w) * az + std::abs(wprime));
    if (std::abs(den) < kPoleGuard * den_scale)
        throw PoleOfSolution("wp_p_1000: weight-3 denominator vanishes at this tau");
    return w + num / den;
}

double epvi_residual(const std::function<cplx(cplx)>& wp_p_fn, const EPVIParams& params,
                     cplx tau, double h) {
    // Five-point stencil tau + k*h, k = -2..2, filled center-outward so the
    // branch of p = wp^{-1}(wp_p) is chained from the middle sample.
    std::array<cplx, 5> p{};
    ModularParam mp_center(tau);
    p[2] = wp_inverse(wp_p_fn(tau), mp_center).reduced;
    ModularParam mp_prev_up = mp_center;
    ModularParam mp_prev_dn = mp_center;
    for (int step = 1; step <= 2; ++step) {
        {
            const cplx t_up = tau + double(step) * h;
            ModularParam mp(t_up);
            const cplx hint = wp_prime(p[2 + step - 1], mp_prev_up);
            const EllipticPoint q = wp_inverse(wp_p_fn(t_up), mp, hint);
            p[2 + step] = track_to(q.reduced, p[2 + step - 1], t_up, kJumpTol);
            mp_prev_up = mp;
        }
        {
            const cplx t_dn = tau - double(step) * h;
            ModularParam mp(t_dn);
            const cplx hint = wp_prime(p[2 - step + 1], mp_prev_dn);
            const EllipticPoint q = wp_inverse(wp_p_fn(t_dn), mp, hint);
            p[2 - step] = track_to(q.reduced, p[2 - step + 1], t_dn, kJumpTol);
            mp_prev_dn = mp;
        }
    }
    const cplx pdd = (-p[0] + 16.0 * p[1] - 30.0 * p[2] + 16.0 * p[3] - p[4]) / (12.0 * h * h);

    const std::array<double, 4> alpha = {params.alpha0, params.alpha1, params.alpha2,
                                         params.alpha3};
    cplx rhs = 0.0;
    for (int k = 0; k < 4; ++k)
        rhs += alpha[k] * wp_prime(p[2] + half_period(k, mp_center), mp_center);
    rhs *= -1.0 / (4.0 * kPi * kPi);

    return std::abs(pdd - rhs) / (1.0 + std::abs(rhs));
}

std::pair<cplx, cplx> t_lambda(const ModularParam& mp, cplx wp_p) {
    const LatticeInvariants& inv = lattice_invariants(mp);
    const cplx d = inv.e2 - inv.e1;
    return {(inv.e3 - inv.e1) / d, (wp_p - inv.e1) / d};
}

std::vector<FlowSample> hamiltonian_flow(const DTVIndex& n, cplx p0, cplx A0,
                                         cplx tau0, cplx tau1, int samples) {
    require_nonnegative(n, "hamiltonian_flow");
    if (samples < 2) samples = 2;
    const cplx dir = tau1 - tau0;

    auto rhs = [&](double t, const std::array<cplx, 2>& y) -> std::array<cplx, 2> {
        const cplx tau = tau0 + t * dir;
        ModularParam mp(tau);
        const cplx p = y[0], A = y[1];
        // dist(p, (1/2)Lambda) = dist(2p, Lambda)/2; this one guard also
        // protects every lattice-translated evaluation below.
        if (distance_to_lattice(2.0 * p, mp) < 2.0 * kCollisionCutoff)
            throw CollisionWithHalfPeriod("hamiltonian flow: p within " +
                                          std::to_string(kCollisionCutoff) +
                                          " of a half period");
        const EllipticValues v2 = eval_all(2.0 * p, mp);
        const cplx eta1 = mp.eta1();
        const cplx dp = -kIOver4Pi * (2.0 * A - v2.zeta + 2.0 * p * eta1);
        const cplx dA = kIOver4Pi * ((2.0 * v2.wp + 2.0 * eta1) * A - 1.5 * v2.wp_prime -
                                     weighted_wp_prime_sum(n, p, mp));
        return {dir * dp, dir * dA};
    };

    std::vector<FlowSample> out;
    out.reserve(size_t(samples));
    std::array<cplx, 2> y = {p0, A0};
    for (int j = 0; j < samples; ++j) {
        const double t = double(j) / double(samples - 1);
        if (j > 0)
            y = integrate_dopri5<2>(rhs, y, double(j - 1) / double(samples - 1), t);
        const cplx tau = tau0 + t * dir;
        ModularParam mp(tau);
        out.push_back({tau, y[0], y[1], accessory_of_state(n, y[0], y[1], mp)});
    }
    return out;
}

cplx linearized_wronskian(const DTVIndex& n, cplx r, cplx s, cplx tau,
                          double h_rs, double h_tau) {
    cplx (*fn)(cplx, cplx, const ModularParam&) = nullptr;
    if (n == DTVIndex{0, 0, 0, 0})
        fn = hitchin_wp_p0;
    else if (n == DTVIndex{1, 0, 0, 0})
        fn = wp_p_1000;
    else
        throw UnsupportedIndex("linearized_wronskian: supported indices are 0-0-0-0 and 1-0-0-0");

    auto wronskian_at = [&](double hr, double ht) -> cplx {
        ModularParam mp_center(tau);
        const cplx anchor = wp_inverse(fn(r, s, mp_center), mp_center).reduced;
        auto p_at = [&](cplx rr, cplx ss, cplx tt) -> cplx {
            ModularParam mp(tt);
            const EllipticPoint q = wp_inverse(fn(rr, ss, mp), mp);
            return track_to(q.reduced, anchor, tt, kJumpTol);
        };
        auto Y1 = [&](cplx tt) {
            return (p_at(r + hr, s, tt) - p_at(r - hr, s, tt)) / (2.0 * hr);
        };
        auto Y2 = [&](cplx tt) {
            return (p_at(r, s + hr, tt) - p_at(r, s - hr, tt)) / (2.0 * hr);
        };
        const cplx Y1c = Y1(tau);
        const cplx Y2c = Y2(tau);
        const cplx Y1p = (Y1(tau + ht) - Y1(tau - ht)) / (2.0 * ht);
        const cplx Y2p = (Y2(tau + ht) - Y2(tau - ht)) / (2.0 * ht);
        return Y1p * Y2c - Y2p * Y1c;
    };

    const cplx coarse = wronskian_at(h_rs, h_tau);
    const cplx fine = wronskian_at(0.5 * h_rs, 0.5 * h_tau);
    const double diff = std::abs(coarse - fine);
    if (diff > 0.3 * std::max(std::abs(coarse), std::abs(fine)))
        throw NoiseDominated("linearized wronskian: halving the steps moved the estimate by " +
                             std::to_string(diff));
    return fine;
}

} // namespace dtv
