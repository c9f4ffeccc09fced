#include "dtvmono/universal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dtvmono/heun.hpp"
#include "dtvmono/premodular.hpp"

namespace dtv {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
constexpr double kEightPiSq = 8.0 * kPi * kPi;

cplx two_cos(cplx x) { return 2.0 * std::cos(2.0 * kPi * x); }

bool lame1(const DTVIndex& n) { return n == DTVIndex{1, 0, 0, 0}; }
bool lame2(const DTVIndex& n) { return n == DTVIndex{2, 0, 0, 0}; }

struct SolvedB {
    cplx B;
    double residual_mono;
};

// tr M1 as a function of B along a fixed path realization.
struct TraceProbe {
    const DTVIndex& n;
    const ModularParam& mp;
    PathSpec p1, p2;

    cplx tr1(cplx B) const {
        const Mat2 m = transfer_along(n, B, mp, p1);
        return m[0] + m[3];
    }
    cplx tr2(cplx B) const {
        const Mat2 m = transfer_along(n, B, mp, p2);
        return m[0] + m[3];
    }
};

// Secant iteration on g(B) = tr M1(B) - target. Returns the root or nothing.
std::optional<cplx> secant_root(const TraceProbe& probe, cplx target, cplx b0,
                                double tol) {
    cplx bp = b0;
    cplx bc = b0 + 0.01 * (1.0 + std::abs(b0));
    cplx gp = probe.tr1(bp) - target;
    cplx gc = probe.tr1(bc) - target;
    for (int it = 0; it < 40; ++it) {
        if (std::abs(gc) <= tol) return bc;
        const cplx denom = gc - gp;
        if (std::abs(denom) < 1e-300) return std::nullopt;
        const cplx bn = bc - gc * (bc - bp) / denom;
        bp = bc;
        gp = gc;
        bc = bn;
        gc = probe.tr1(bc) - target;
    }
    return (std::abs(gc) <= tol) ? std::optional<cplx>(bc) : std::nullopt;
}

SolvedB solve_B_by_traces(const DTVIndex& n, cplx r, cplx s, const ModularParam& mp,
                          std::optional<cplx> hint) {
    const cplx target1 = two_cos(s);
    const cplx target2 = two_cos(r);
    const double tol = 1e-10 * (1.0 + std::abs(target1));
    TraceProbe probe{n, mp, cycle_path(1, mp), cycle_path(2, mp)};

    std::vector<cplx> seeds;
    if (hint) {
        seeds.push_back(*hint);
    } else {
        const auto& inv = mp.invariants();
        const double radius =
            10.0 * std::max({1.0, std::abs(inv.e1), std::abs(inv.e2), std::abs(inv.e3)});
        std::vector<std::pair<double, cplx>> scored;
        for (int k = 0; k < 40; ++k) {
            const cplx B = radius * std::sqrt((k + 0.5) / 40.0) *
                           std::polar(1.0, 2.0 * kPi * 0.381966011 * k);
            scored.emplace_back(std::abs(probe.tr1(B) - target1), B);
        }
        std::sort(scored.begin(), scored.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (int k = 0; k < 6; ++k) seeds.push_back(scored[std::size_t(k)].second);
    }

    std::optional<SolvedB> found;
    for (const cplx& seed : seeds) {
        const auto root = secant_root(probe, target1, seed, tol);
        if (!root) continue;
        const double miss2 = std::abs(probe.tr2(*root) - target2);
        if (miss2 > 1e-6) continue; // a tr1 root on the wrong tr2 sheet
        const double res = std::abs(probe.tr1(*root) - target1) + miss2;
        if (found) {
            if (std::abs(*root - found->B) > 1e-4 * (1.0 + std::abs(found->B)))
                throw AmbiguousB("solve_B_by_traces: two distinct B match both traces");
            continue;
        }
        found = SolvedB{*root, res};
        if (hint) break; // continuation mode: no ambiguity sweep
    }
    if (!found)
        throw NoConvergence("solve_B_by_traces: no B seed matched both traces");
    return *found;
}

// (tau*, B) without the optional ODE verification pass; the stencil of
// jacobian_rs runs through here.
struct SolvedPoint {
    cplx tau_star;
    cplx B;
    double residual_Z;
};

SolvedPoint solve_point(const DTVIndex& n, cplx r, cplx s, cplx tau_guess,
                        std::optional<cplx> B_hint, double* mono_out) {
    const auto& form = catalog_form(n);
    const auto cert = find_zero_tau(form, r, s, tau_guess);
    ModularParam mp(cert.tau_star);

    cplx B;
    double mono = -1.0;
    if (lame1(n)) {
        B = wp(r + s * mp.tau(), mp);
    } else if (lame2(n)) {
        const cplx Zv = Z(r, s, mp);
        B = 3.0 * (Zv * Zv - wp(r + s * mp.tau(), mp));
    } else {
        const SolvedB sb = solve_B_by_traces(n, r, s, mp, B_hint);
        B = sb.B;
        mono = sb.residual_mono;
    }
    if (mono_out) *mono_out = mono;
    return {cert.tau_star, B, cert.residual};
}

} // namespace

CorrespondencePoint tau_B_of_rs(const DTVIndex& n, cplx r, cplx s, cplx tau_guess,
                                std::optional<cplx> B_hint) {
    double mono = -1.0;
    const SolvedPoint sp = solve_point(n, r, s, tau_guess, B_hint, &mono);
    if (mono < 0.0) {
        ModularParam mp(sp.tau_star);
        const MonodromyPair pair = monodromy_ode(n, sp.B, mp);
        mono = std::abs(pair.M1[0] + pair.M1[3] - two_cos(s)) +
               std::abs(pair.M2[0] + pair.M2[3] - two_cos(r));
    }
    return {n, r, s, sp.tau_star, sp.B, sp.residual_Z, mono};
}

JacobianReport jacobian_rs(const DTVIndex& n, cplx r, cplx s, cplx tau_guess,
                           double step) {
    const SolvedPoint center = solve_point(n, r, s, tau_guess, {}, nullptr);
    const cplx tau0 = center.tau_star;
    const bool ode_matched = !lame1(n) && !lame2(n);
    const std::optional<cplx> hint =
        ode_matched ? std::optional<cplx>(center.B) : std::nullopt;

    auto at = [&](cplx dr, cplx ds) {
        return solve_point(n, r + dr, s + ds, tau0, hint, nullptr);
    };
    const SolvedPoint rp = at(step, 0.0), rm = at(-step, 0.0);
    const SolvedPoint sp = at(0.0, step), sm = at(0.0, -step);

    JacobianReport rep;
    rep.tau_r = (rp.tau_star - rm.tau_star) / (2.0 * step);
    rep.tau_s = (sp.tau_star - sm.tau_star) / (2.0 * step);
    rep.B_r = (rp.B - rm.B) / (2.0 * step);
    rep.B_s = (sp.B - sm.B) / (2.0 * step);
    rep.det = rep.tau_r * rep.B_s - rep.tau_s * rep.B_r;
    rep.law_error = std::abs(rep.det - kEightPiSq) / kEightPiSq;
    return rep;
}

ClosedFormPartials closed_form_partials(const DTVIndex& n, cplx r, cplx s,
                                        cplx tau_star, cplx B) {
    ModularParam mp(tau_star);
    const auto& inv = mp.invariants();
    if (lame1(n)) {
        const cplx u = r + s * tau_star;
        const cplx P = wp(u, mp);
        const cplx Pp = wp_prime(u, mp);
        if (std::abs(Pp) < 1e-8 * std::pow(1.0 + std::abs(P), 1.5))
            throw DivisionGuard("closed_form_partials: wp' vanishes at the point");
        const cplx tau_r = -4.0 * kPi * kI * (P + inv.eta1) / Pp;
        const cplx tau_s = tau_star * tau_r - kEightPiSq / Pp;
        return {tau_r, tau_s};
    }
    if (lame2(n)) {
        const cplx b2 = B * B - 3.0 * inv.g2;
        const cplx Zv = Z(r, s, mp);
        const cplx C = 1.5 * Zv * b2; // inverts Z = 2C/(3(B^2-3g2)), fixing the branch
        const cplx den = B * B + 3.0 * inv.eta1 * B - 1.5 * inv.g2;
        const double scale = 1.0 + std::abs(B * B) + 3.0 * std::abs(inv.eta1 * B) +
                             1.5 * std::abs(inv.g2);
        if (std::abs(C) < 1e-8 * (1.0 + std::abs(b2)))
            throw DivisionGuard("closed_form_partials: C vanishes (branch point)");
        if (std::abs(den) < 1e-8 * scale)
            throw DivisionGuard("closed_form_partials: B^2 + 3 eta1 B - (3/2) g2 vanishes");
        const cplx tau_r = -2.0 * kPi * kI * den / C;
        const cplx tau_s = tau_r * (tau_star - 6.0 * kPi * kI * B / den);
        return {tau_r, tau_s};
    }
    throw UnsupportedIndex("closed_form_partials: only the two Lame indices");
}

} // namespace dtv
