#include "dtvmono/premodular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dtv {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
const cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};
constexpr double kHalfPairCutoff = 1e-10;

cplx ipow(cplx b, int p) {
    cplx out{1.0, 0.0};
    for (int i = 0; i < p; ++i) out *= b;
    return out;
}

double frac_part(double x) {
    const double f = x - std::floor(x);
    return (f >= 1.0) ? 0.0 : f; // floor(x) can round up for tiny negatives
}

// Building-block values at u = r + s*tau, plus lattice data.
struct Ctx {
    cplx tau, eta1;
    cplx Zv, wp, wpp; // Z_{r,s}, wp(u), wp'(u)
    cplx e1, e2, e3, g2, g3;
    double zmag; // cancellation scale of Zv: sum of the magnitudes summed into it
};

Ctx make_ctx(cplx r, cplx s, const ModularParam& mp) {
    const cplx u = r + s * mp.tau();
    const EllipticValues v = eval_all(u, mp);
    const auto& inv = mp.invariants();
    Ctx c;
    c.tau = mp.tau();
    c.eta1 = inv.eta1;
    c.Zv = v.zeta - u * inv.eta1 + kTwoPiI * s;
    c.zmag = std::abs(v.zeta) + std::abs(u * inv.eta1) + std::abs(kTwoPiI * s);
    c.wp = v.wp;
    c.wpp = v.wp_prime;
    c.e1 = inv.e1;
    c.e2 = inv.e2;
    c.e3 = inv.e3;
    c.g2 = inv.g2;
    c.g3 = inv.g3;
    return c;
}

cplx term_tail(const ZCatalogTerm& t, const Ctx& c) {
    return ipow(c.wp, t.pwp) * ipow(c.wpp, t.pwpp) * ipow(c.e1, t.pe1) *
           ipow(c.e2, t.pe2) * ipow(c.e3, t.pe3) * ipow(c.g2, t.pg2) *
           ipow(c.g3, t.pg3);
}

double coeff(const ZCatalogTerm& t) { return double(t.num) / double(t.den); }

// Horner in Z with scale = sum of |monomial| at the point.
struct ValueScale {
    cplx value;
    double scale;
};

ValueScale eval_form(const ZCatalogForm& form, const Ctx& c) {
    int deg = 0;
    for (const auto& t : form.terms) deg = std::max(deg, t.pz);
    std::vector<cplx> cz(std::size_t(deg) + 1, cplx{0.0, 0.0});
    double scale = 0.0;
    // |Z| is replaced by its cancellation scale so that near a zero of Z the
    // scale still reflects the roundoff floor of the Z evaluation itself.
    const double absZ = std::max(std::abs(c.Zv), c.zmag);
    for (const auto& t : form.terms) {
        const cplx tail = coeff(t) * term_tail(t, c);
        cz[std::size_t(t.pz)] += tail;
        scale += std::abs(tail) * std::pow(absZ, t.pz);
    }
    cplx v = cz[std::size_t(deg)];
    for (int k = deg - 1; k >= 0; --k) v = v * c.Zv + cz[std::size_t(k)];
    return {v, std::max(scale, std::numeric_limits<double>::min())};
}

// Forward-mode derivative bundle: value plus partials in (tau | r | s).
// dt is at fixed (r,s) (the composite tau-derivative along u = r+s*tau);
// dr, ds are at fixed tau.
struct D3 {
    cplx v, dt, dr, ds;
};

D3 operator+(const D3& a, const D3& b) { return {a.v + b.v, a.dt + b.dt, a.dr + b.dr, a.ds + b.ds}; }
D3 operator*(const D3& a, const D3& b) {
    return {a.v * b.v, a.dt * b.v + a.v * b.dt, a.dr * b.v + a.v * b.dr,
            a.ds * b.v + a.v * b.ds};
}
D3 operator*(double c, const D3& a) { return {c * a.v, c * a.dt, c * a.dr, c * a.ds}; }

D3 dpow(const D3& b, int p) {
    D3 out{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    for (int i = 0; i < p; ++i) out = out * b;
    return out;
}

struct Seeds {
    D3 Z, wp, wpp, e1, e2, e3, g2, g3;
};

Seeds make_seeds(const Ctx& c) {
    Seeds s;
    const cplx Z = c.Zv, P = c.wp, Pp = c.wpp;
    const cplx eta1 = c.eta1, g2 = c.g2, tau = c.tau;

    // Composite tau-derivatives at fixed (r,s).
    const cplx dZ_dtau = (kI / (4.0 * kPi)) * Pp + (kI / (2.0 * kPi)) * (P + eta1) * Z;
    const cplx dP_dtau = (-kI / (2.0 * kPi)) * (Z * Pp + 2.0 * P * P - 2.0 * P * eta1 - g2 / 3.0);
    const cplx dPp_dtau = (-kI / (4.0 * kPi)) * (Z * (12.0 * P * P - g2) + 6.0 * (P - eta1) * Pp);

    const cplx dZ_dr = -(P + eta1);
    const cplx dP_dr = Pp;
    const cplx dPp_dr = 6.0 * P * P - g2 / 2.0;

    s.Z = {Z, dZ_dtau, dZ_dr, tau * dZ_dr + kTwoPiI};
    s.wp = {P, dP_dtau, dP_dr, tau * dP_dr};
    s.wpp = {Pp, dPp_dtau, dPp_dr, tau * dPp_dr};

    auto ek_seed = [&](cplx ek) {
        const cplx dek = (kI / kPi) * (g2 / 6.0 + eta1 * ek - ek * ek);
        return D3{ek, dek, {0.0, 0.0}, {0.0, 0.0}};
    };
    s.e1 = ek_seed(c.e1);
    s.e2 = ek_seed(c.e2);
    s.e3 = ek_seed(c.e3);

    const cplx d1 = s.e1.dt, d2 = s.e2.dt, d3 = s.e3.dt;
    const cplx dg2 = -4.0 * (d1 * (c.e2 + c.e3) + d2 * (c.e1 + c.e3) + d3 * (c.e1 + c.e2));
    const cplx dg3 = 4.0 * (d1 * c.e2 * c.e3 + c.e1 * d2 * c.e3 + c.e1 * c.e2 * d3);
    s.g2 = {c.g2, dg2, {0.0, 0.0}, {0.0, 0.0}};
    s.g3 = {c.g3, dg3, {0.0, 0.0}, {0.0, 0.0}};
    return s;
}

const std::vector<ZCatalogForm>& catalog() {
    // num den  pz pwp pwpp pe1 pe2 pe3 pg2 pg3
    static const std::vector<ZCatalogForm> forms = {
        {{1, 0, 0, 0},
         {{1, 1, 1, 0, 0, 0, 0, 0, 0, 0}}},
        {{2, 0, 0, 0},
         {{1, 1, 3, 0, 0, 0, 0, 0, 0, 0},
          {-3, 1, 1, 1, 0, 0, 0, 0, 0, 0},
          {-1, 1, 0, 0, 1, 0, 0, 0, 0, 0}}},
        {{3, 0, 0, 0},
         {{1, 1, 6, 0, 0, 0, 0, 0, 0, 0},
          {-15, 1, 4, 1, 0, 0, 0, 0, 0, 0},
          {-20, 1, 3, 0, 1, 0, 0, 0, 0, 0},
          {27, 4, 2, 0, 0, 0, 0, 0, 1, 0},
          {-45, 1, 2, 2, 0, 0, 0, 0, 0, 0},
          {-12, 1, 1, 1, 1, 0, 0, 0, 0, 0},
          {-5, 4, 0, 0, 2, 0, 0, 0, 0, 0}}},
        {{4, 0, 0, 0},
         {{1, 1, 10, 0, 0, 0, 0, 0, 0, 0},
          {-45, 1, 8, 1, 0, 0, 0, 0, 0, 0},
          {-120, 1, 7, 0, 1, 0, 0, 0, 0, 0},
          {399, 4, 6, 0, 0, 0, 0, 0, 1, 0},
          {-630, 1, 6, 2, 0, 0, 0, 0, 0, 0},
          {-504, 1, 5, 1, 1, 0, 0, 0, 0, 0},
          {-1050, 1, 4, 3, 0, 0, 0, 0, 0, 0},
          {735, 4, 4, 1, 0, 0, 0, 0, 1, 0},
          {1725, 4, 4, 0, 0, 0, 0, 0, 0, 1},
          {165, 1, 3, 0, 1, 0, 0, 0, 1, 0},
          {-360, 1, 3, 2, 1, 0, 0, 0, 0, 0},
          {-315, 1, 2, 4, 0, 0, 0, 0, 0, 0},
          {2205, 4, 2, 2, 0, 0, 0, 0, 1, 0},
          {-855, 2, 2, 1, 0, 0, 0, 0, 0, 1},
          {-189, 4, 2, 0, 0, 0, 0, 0, 2, 0},
          {-40, 1, 1, 3, 1, 0, 0, 0, 0, 0},
          {163, 1, 1, 1, 1, 0, 0, 0, 1, 0},
          {-125, 1, 1, 0, 1, 0, 0, 0, 0, 1},
          {75, 4, 0, 0, 2, 0, 0, 0, 1, 0},
          {-9, 4, 0, 2, 2, 0, 0, 0, 0, 0}}},
        {{1, 1, 0, 0},
         {{1, 1, 2, 0, 0, 0, 0, 0, 0, 0},
          {-1, 1, 0, 1, 0, 0, 0, 0, 0, 0},
          {1, 1, 0, 0, 0, 1, 0, 0, 0, 0}}},
        {{1, 0, 1, 0},
         {{1, 1, 2, 0, 0, 0, 0, 0, 0, 0},
          {-1, 1, 0, 1, 0, 0, 0, 0, 0, 0},
          {1, 1, 0, 0, 0, 0, 1, 0, 0, 0}}},
        {{1, 0, 0, 1},
         {{1, 1, 2, 0, 0, 0, 0, 0, 0, 0},
          {-1, 1, 0, 1, 0, 0, 0, 0, 0, 0},
          {1, 1, 0, 0, 0, 0, 0, 1, 0, 0}}},
        {{2, 1, 0, 0},
         {{1, 1, 4, 0, 0, 0, 0, 0, 0, 0},
          {3, 1, 2, 0, 0, 1, 0, 0, 0, 0},
          {-6, 1, 2, 1, 0, 0, 0, 0, 0, 0},
          {-4, 1, 1, 0, 1, 0, 0, 0, 0, 0},
          {-3, 1, 0, 2, 0, 0, 0, 0, 0, 0},
          {-3, 1, 0, 1, 0, 1, 0, 0, 0, 0},
          {-3, 1, 0, 0, 0, 2, 0, 0, 0, 0},
          {3, 4, 0, 0, 0, 0, 0, 0, 1, 0}}},
        {{2, 0, 1, 0},
         {{1, 1, 4, 0, 0, 0, 0, 0, 0, 0},
          {3, 1, 2, 0, 0, 0, 1, 0, 0, 0},
          {-6, 1, 2, 1, 0, 0, 0, 0, 0, 0},
          {-4, 1, 1, 0, 1, 0, 0, 0, 0, 0},
          {-3, 1, 0, 2, 0, 0, 0, 0, 0, 0},
          {-3, 1, 0, 1, 0, 0, 1, 0, 0, 0},
          {-3, 1, 0, 0, 0, 0, 2, 0, 0, 0},
          {3, 4, 0, 0, 0, 0, 0, 0, 1, 0}}},
        {{2, 0, 0, 1},
         {{1, 1, 4, 0, 0, 0, 0, 0, 0, 0},
          {3, 1, 2, 0, 0, 0, 0, 1, 0, 0},
          {-6, 1, 2, 1, 0, 0, 0, 0, 0, 0},
          {-4, 1, 1, 0, 1, 0, 0, 0, 0, 0},
          {-3, 1, 0, 2, 0, 0, 0, 0, 0, 0},
          {-3, 1, 0, 1, 0, 0, 0, 1, 0, 0},
          {-3, 1, 0, 0, 0, 0, 0, 2, 0, 0},
          {3, 4, 0, 0, 0, 0, 0, 0, 1, 0}}},
    };
    return forms;
}

} // namespace

double half_pair_distance(cplx r, cplx s) {
    const double dr = r.real() - std::round(2.0 * r.real()) / 2.0;
    const double ds = s.real() - std::round(2.0 * s.real()) / 2.0;
    return std::sqrt(dr * dr + r.imag() * r.imag() + ds * ds + s.imag() * s.imag());
}

MonodromyClass canonicalize(cplx r, cplx s) {
    if (half_pair_distance(r, s) < kHalfPairCutoff)
        throw BranchPoint("canonicalize: (r,s) within cutoff of half-integer pairs");

    auto reduced = [](cplx r0, cplx s0) {
        return std::pair<cplx, cplx>{cplx(frac_part(r0.real()), r0.imag()),
                                     cplx(frac_part(s0.real()), s0.imag())};
    };
    const auto [ra, sa] = reduced(r, s);
    const auto [rb, sb] = reduced(-r, -s);

    auto in_half = [](double x) { return x >= 0.0 && x < 0.5; };
    auto tie = [](double x) { return std::abs(x) < 1e-12 || std::abs(x - 0.5) < 1e-12; };

    bool pick_a;
    if (tie(sa.real()) && tie(sb.real())) {
        if (tie(ra.real()) && tie(rb.real())) {
            // Purely imaginary corner: fall back to a deterministic sign rule.
            pick_a = (sa.imag() > 0.0) || (sa.imag() == 0.0 && ra.imag() >= 0.0);
        } else {
            pick_a = in_half(ra.real());
        }
    } else {
        pick_a = in_half(sa.real());
    }
    return {pick_a ? ra : rb, pick_a ? sa : sb, true};
}

cplx Z(cplx r, cplx s, const ModularParam& mp) {
    const cplx u = r + s * mp.tau();
    return zeta(u, mp) - u * mp.eta1() + kTwoPiI * s;
}

const std::vector<DTVIndex>& catalog_indices() {
    static const std::vector<DTVIndex> idx = [] {
        std::vector<DTVIndex> v;
        for (const auto& f : catalog()) v.push_back(f.index);
        return v;
    }();
    return idx;
}

const ZCatalogForm& catalog_form(DTVIndex n) {
    for (const auto& f : catalog())
        if (f.index == n) return f;
    throw UnsupportedIndex("catalog_form: no explicit form for n = " + to_string(n));
}

cplx Z_n(const ZCatalogForm& form, cplx r, cplx s, const ModularParam& mp) {
    return eval_form(form, make_ctx(r, s, mp)).value;
}

cplx Z_n(DTVIndex n, cplx r, cplx s, const ModularParam& mp) {
    return Z_n(catalog_form(n), r, s, mp);
}

double Z_n_scale(const ZCatalogForm& form, cplx r, cplx s, const ModularParam& mp) {
    return eval_form(form, make_ctx(r, s, mp)).scale;
}

ZPartials Z_n_partials(const ZCatalogForm& form, cplx r, cplx s, const ModularParam& mp) {
    const Ctx c = make_ctx(r, s, mp);
    const Seeds sd = make_seeds(c);
    D3 acc{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    for (const auto& t : form.terms) {
        D3 term = dpow(sd.Z, t.pz) * dpow(sd.wp, t.pwp) * dpow(sd.wpp, t.pwpp) *
                  dpow(sd.e1, t.pe1) * dpow(sd.e2, t.pe2) * dpow(sd.e3, t.pe3) *
                  dpow(sd.g2, t.pg2) * dpow(sd.g3, t.pg3);
        acc = acc + coeff(t) * term;
    }
    return {acc.dt, acc.dr, acc.ds};
}

cplx Z_n_dZ(const ZCatalogForm& form, cplx r, cplx s, const ModularParam& mp) {
    const Ctx c = make_ctx(r, s, mp);
    cplx acc{0.0, 0.0};
    for (const auto& t : form.terms) {
        if (t.pz == 0) continue;
        acc += coeff(t) * double(t.pz) * ipow(c.Zv, t.pz - 1) * term_tail(t, c);
    }
    return acc;
}

ZeroCertificate find_zero_tau(const ZCatalogForm& form, cplx r, cplx s, cplx tau_guess) {
    if (half_pair_distance(r, s) < kHalfPairCutoff)
        throw BranchPoint("find_zero_tau: (r,s) within cutoff of half-integer pairs");
    if (tau_guess.imag() < 0.2)
        throw LeftDomain("find_zero_tau: initial guess below Im(tau) = 0.2");

    cplx tau = tau_guess;
    for (int it = 0; it < 50; ++it) {
        ModularParam mp(tau);
        const Ctx c = make_ctx(r, s, mp);
        const auto [val, scale] = eval_form(form, c);
        const double res = std::abs(val);
        const ZPartials parts = Z_n_partials(form, r, s, mp);
        const double dmag = std::abs(parts.dtau);

        if (res <= 1e-12 * scale) {
            if (dmag < 1e-8 * scale)
                throw NotSimple("find_zero_tau: |dZ/dtau| below 1e-8*scale at converged zero");
            return {tau, res, dmag, it};
        }
        if (dmag < 1e-14 * scale)
            throw NoConvergence("find_zero_tau: tau-derivative vanished away from a certified zero");

        cplx step = -val / parts.dtau;
        bool accepted = false;
        int out_of_domain = 0, tried = 0;
        for (int h = 0; h < 8; ++h) {
            const cplx tn = tau + step;
            ++tried;
            if (tn.imag() < 0.2) {
                ++out_of_domain;
                step *= 0.5;
                continue;
            }
            double rn;
            try {
                ModularParam mpn(tn);
                rn = std::abs(eval_form(form, make_ctx(r, s, mpn)).value);
            } catch (const Error&) {
                step *= 0.5;
                continue;
            }
            if (rn < res || rn <= 1e-12 * scale) {
                tau = tn;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (out_of_domain == tried)
                throw LeftDomain("find_zero_tau: iterates left Im(tau) >= 0.2");
            throw NoConvergence("find_zero_tau: damping failed to reduce |Z^n|");
        }
    }
    throw NoConvergence("find_zero_tau: iteration cap (50) reached");
}

std::vector<ZeroCertificate> scan_zeros(const ZCatalogForm& form, cplx r, cplx s,
                                        const ScanWindow& w) {
    if (!(w.step > 0.0) || !(w.re_max >= w.re_min) || !(w.im_max >= w.im_min))
        throw InvalidTau("scan_zeros: degenerate window or nonpositive step");

    const int nx = int(std::floor((w.re_max - w.re_min) / w.step)) + 1;
    const int ny = int(std::floor((w.im_max - w.im_min) / w.step)) + 1;
    std::vector<std::vector<double>> mag(std::size_t(nx),
                                         std::vector<double>(std::size_t(ny),
                                                             std::numeric_limits<double>::infinity()));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const cplx tau{w.re_min + i * w.step, w.im_min + j * w.step};
            if (tau.imag() < 0.2) continue;
            try {
                ModularParam mp(tau);
                mag[std::size_t(i)][std::size_t(j)] = std::abs(Z_n(form, r, s, mp));
            } catch (const Error&) {
            }
        }

    std::vector<ZeroCertificate> found;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const double v = mag[std::size_t(i)][std::size_t(j)];
            if (!std::isfinite(v)) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1 && is_min; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int a = i + di, b = j + dj;
                    if (a < 0 || a >= nx || b < 0 || b >= ny) continue;
                    if (mag[std::size_t(a)][std::size_t(b)] < v) is_min = false;
                }
            if (!is_min) continue;

            const cplx seed{w.re_min + i * w.step, w.im_min + j * w.step};
            try {
                const ZeroCertificate cert = find_zero_tau(form, r, s, seed);
                const cplx t = cert.tau_star;
                if (t.real() < w.re_min - 1e-9 || t.real() > w.re_max + 1e-9 ||
                    t.imag() < w.im_min - 1e-9 || t.imag() > w.im_max + 1e-9)
                    continue;
                bool dup = false;
                for (auto& f : found)
                    if (std::abs(f.tau_star - t) < 1e-6) {
                        if (cert.residual < f.residual) f = cert;
                        dup = true;
                        break;
                    }
                if (!dup) found.push_back(cert);
            } catch (const Error&) {
            }
        }

    std::sort(found.begin(), found.end(), [](const ZeroCertificate& a, const ZeroCertificate& b) {
        if (a.tau_star.imag() != b.tau_star.imag()) return a.tau_star.imag() < b.tau_star.imag();
        return a.tau_star.real() < b.tau_star.real();
    });
    return found;
}

} // namespace dtv
