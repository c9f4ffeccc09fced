#include "dtvmono/heun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dtvmono/ode.hpp"

namespace dtv {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kTwoPiI{0.0, 2.0 * kPi};
constexpr double kSingularCutoff = 1e-8;

cplx half_shift(int k, const ModularParam& mp) {
    switch (k) {
        case 0: return {0.0, 0.0};
        case 1: return {0.5, 0.0};
        case 2: return mp.tau() * 0.5;
        default: return (1.0 + mp.tau()) * 0.5;
    }
}

// Half-lattice points (m1 + m2*tau)/2 within `margin` of the rectangle
// spanned by the points in `hull`.
std::vector<cplx> half_lattice_near(const std::vector<cplx>& hull, double margin,
                                    const ModularParam& mp) {
    const cplx tau = mp.tau();
    double re_min = hull[0].real(), re_max = hull[0].real();
    double im_min = hull[0].imag(), im_max = hull[0].imag();
    for (const cplx& z : hull) {
        re_min = std::min(re_min, z.real());
        re_max = std::max(re_max, z.real());
        im_min = std::min(im_min, z.imag());
        im_max = std::max(im_max, z.imag());
    }
    // m2 range from the imaginary part alone, m1 from what is left over.
    const double y = tau.imag();
    const int m2_lo = int(std::floor(2.0 * (im_min - margin) / y));
    const int m2_hi = int(std::ceil(2.0 * (im_max + margin) / y));
    std::vector<cplx> pts;
    for (int m2 = m2_lo; m2 <= m2_hi; ++m2) {
        const double re_off = 0.5 * m2 * tau.real();
        const int m1_lo = int(std::floor(2.0 * (re_min - margin - re_off)));
        const int m1_hi = int(std::ceil(2.0 * (re_max + margin - re_off)));
        for (int m1 = m1_lo; m1 <= m1_hi; ++m1)
            pts.push_back(0.5 * (double(m1) + double(m2) * tau));
    }
    return pts;
}

double point_segment_distance(cplx p, cplx a, cplx b, double& t_out) {
    const cplx d = b - a;
    const double dd = std::norm(d);
    double t = (dd > 0.0) ? ((p - a).real() * d.real() + (p - a).imag() * d.imag()) / dd : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    t_out = t;
    return std::abs(a + t * d - p);
}

struct Mat2RHS {
    const DTVIndex& n;
    cplx B;
    const ModularParam& mp;
    cplx a, d; // segment start and direction

    std::array<cplx, 4> operator()(double t, const std::array<cplx, 4>& y) const {
        const cplx z = a + t * d;
        const cplx q = (potential(n, z, mp) + B) * d;
        return {d * y[1], q * y[0], d * y[3], q * y[2]};
    }
};

cplx mat_trace(const Mat2& m) { return m[0] + m[3]; }

// Largest-component ratio (M v)_i / v_i; residual reports how far v is from
// an actual eigenvector.
cplx rayleigh_ratio(const Mat2& m, const std::array<cplx, 2>& v, double& residual) {
    const cplx w0 = m[0] * v[0] + m[1] * v[1];
    const cplx w1 = m[2] * v[0] + m[3] * v[1];
    const int i = (std::abs(v[0]) >= std::abs(v[1])) ? 0 : 1;
    const cplx mu = (i == 0) ? w0 / v[0] : w1 / v[1];
    residual = std::hypot(std::abs(w0 - mu * v[0]), std::abs(w1 - mu * v[1])) /
               std::hypot(std::abs(v[0]), std::abs(v[1]));
    return mu;
}

std::array<cplx, 2> eigenvector_for(const Mat2& m, cplx lambda) {
    const std::array<cplx, 2> r1{m[1], lambda - m[0]};
    const std::array<cplx, 2> r2{lambda - m[3], m[2]};
    const double n1 = std::hypot(std::abs(r1[0]), std::abs(r1[1]));
    const double n2 = std::hypot(std::abs(r2[0]), std::abs(r2[1]));
    return (n1 >= n2) ? r1 : r2;
}

} // namespace

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

cplx mat_det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

double mat_norm(const Mat2& m) {
    return std::sqrt(std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]) + std::norm(m[3]));
}

cplx potential(const DTVIndex& n, cplx z, const ModularParam& mp) {
    if (!n.valid()) throw UnsupportedIndex("potential: invalid index");
    const int nk[4] = {n.n0, n.n1, n.n2, n.n3};
    cplx acc{0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
        if (nk[k] == 0) continue;
        const cplx zk = z + half_shift(k, mp);
        if (distance_to_lattice(zk, mp) < kSingularCutoff)
            throw PoleAtSingularity("potential: z + omega_k/2 at a lattice point");
        acc += double(nk[k] * (nk[k] + 1)) * wp(zk, mp);
    }
    return acc;
}

int genus(const DTVIndex& n) {
    int m[4] = {n.n0, n.n1, n.n2, n.n3};
    std::sort(m, m + 4, std::greater<int>());
    const int sum = m[0] + m[1] + m[2] + m[3];
    if (sum % 2 == 0) {
        if (m[0] + m[3] >= m[1] + m[2]) return m[0];
        return (m[0] + m[1] + m[2] - m[3]) / 2;
    }
    if (m[0] > m[1] + m[2] + m[3]) return m[0];
    return (sum + 1) / 2;
}

std::vector<cplx> spectral_poly(const DTVIndex& n, const ModularParam& mp) {
    const auto& inv = mp.invariants();
    if (n == DTVIndex{1, 0, 0, 0}) {
        const cplx e1 = inv.e1, e2 = inv.e2, e3 = inv.e3;
        return {-e1 * e2 * e3, e1 * e2 + e1 * e3 + e2 * e3, -(e1 + e2 + e3), {1.0, 0.0}};
    }
    if (n == DTVIndex{2, 0, 0, 0}) {
        const cplx g2 = inv.g2, g3 = inv.g3;
        return {-81.0 / 4.0 * g2 * g3, 27.0 / 4.0 * g2 * g2, 27.0 / 4.0 * g3,
                -21.0 / 4.0 * g2, {0.0, 0.0}, {1.0, 0.0}};
    }
    throw UnsupportedIndex("spectral_poly: only (1,0,0,0) and (2,0,0,0)");
}

cplx eval_poly(const std::vector<cplx>& coeffs, cplx B) {
    cplx v{0.0, 0.0};
    for (std::size_t k = coeffs.size(); k-- > 0;) v = v * B + coeffs[k];
    return v;
}

SpectralData spectral_data(const DTVIndex& n, cplx B, const ModularParam& mp, int branch) {
    const cplx Q = eval_poly(spectral_poly(n, mp), B);
    return {B, double(branch) * std::sqrt(Q), branch};
}

PathSpec detour_path(cplx from, cplx to, const ModularParam& mp) {
    const double c = 0.05 * std::min(1.0, mp.tau().imag());
    const auto sing = half_lattice_near({from, to}, 2.0 * c + 1.0, mp);
    for (const cplx& p : sing)
        if (std::abs(from - p) < c || std::abs(to - p) < c)
            throw PathTooClose("detour_path: endpoint inside an exclusion disk");

    struct Offender {
        cplx p;
        double t;
        double h;
    };
    std::vector<Offender> off;
    for (const cplx& p : sing) {
        double t;
        const double h = point_segment_distance(p, from, to, t);
        if (h < c) off.push_back({p, t, h});
    }
    std::sort(off.begin(), off.end(), [](const Offender& a, const Offender& b) { return a.t < b.t; });
    for (std::size_t k = 1; k < off.size(); ++k)
        if (std::abs(off[k].p - off[k - 1].p) < 2.2 * c)
            throw PathTooClose("detour_path: exclusion disks overlap");

    const cplx d = to - from;
    const double len = std::abs(d);
    const cplx dir = d / len;
    // Arc radius inflated so the chords of the sampled semicircle stay at
    // least `c` away from the singular point.
    const double R = c / std::cos(kPi / 12.0);
    std::vector<cplx> wp{from};
    for (const auto& o : off) {
        const double half_chord = std::sqrt(std::max(R * R - o.h * o.h, 0.0));
        const double t_in = std::max(o.t - half_chord / len, 0.0);
        const double t_out = std::min(o.t + half_chord / len, 1.0);
        const cplx entry = from + t_in * d;
        const cplx exit = from + t_out * d;
        double th_in = std::arg(entry - o.p);
        double th_out = std::arg(exit - o.p);
        // Sweep on the side of +i*dir (left of travel): of the two arcs
        // joining entry to exit, take the one whose midpoint lies left.
        double sweep = th_out - th_in;
        while (sweep > kPi) sweep -= 2.0 * kPi;
        while (sweep < -kPi) sweep += 2.0 * kPi;
        const cplx left = cplx(0.0, 1.0) * dir;
        auto mid_left = [&](double sw) {
            const cplx m = std::polar(1.0, th_in + 0.5 * sw);
            return (std::conj(left) * m).real() > 0.0;
        };
        if (!mid_left(sweep)) sweep += (sweep >= 0.0) ? -2.0 * kPi : 2.0 * kPi;
        const int steps = std::max(2, int(std::ceil(std::abs(sweep) / (kPi / 6.0))));
        wp.push_back(entry);
        for (int j = 1; j < steps; ++j)
            wp.push_back(o.p + R * std::polar(1.0, th_in + sweep * j / steps));
        wp.push_back(exit);
    }
    wp.push_back(to);
    return {std::move(wp), c};
}

PathSpec cycle_path(int which, const ModularParam& mp) {
    const cplx tau = mp.tau();
    const double c = 0.05 * std::min(1.0, tau.imag());
    cplx z0 = (1.0 + tau) * 0.25;
    bool ok = false;
    for (int attempt = 0; attempt < 24 && !ok; ++attempt) {
        ok = true;
        for (const cplx& p : half_lattice_near({z0}, 2.0 * c, mp))
            if (std::abs(z0 - p) < 1.1 * c) {
                ok = false;
                break;
            }
        if (!ok) z0 += c * cplx(0.41, 0.23);
    }
    if (!ok) throw PathTooClose("cycle_path: no admissible base point found");
    const cplx omega = (which == 1) ? cplx(1.0, 0.0) : tau;
    return detour_path(z0, z0 + omega, mp);
}

Mat2 transfer_along(const DTVIndex& n, cplx B, const ModularParam& mp, const PathSpec& path) {
    if (path.waypoints.size() < 2)
        throw PathTooClose("transfer_along: path needs at least two waypoints");
    for (std::size_t k = 1; k < path.waypoints.size(); ++k) {
        const cplx a = path.waypoints[k - 1], b = path.waypoints[k];
        for (const cplx& p : half_lattice_near({a, b}, 2.0 * path.clearance, mp)) {
            double t;
            if (point_segment_distance(p, a, b, t) < 0.999 * path.clearance)
                throw PathTooClose("transfer_along: segment violates clearance");
        }
    }
    std::array<cplx, 4> y{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)};
    for (std::size_t k = 1; k < path.waypoints.size(); ++k) {
        const cplx a = path.waypoints[k - 1], b = path.waypoints[k];
        y = integrate_dopri5<4>(Mat2RHS{n, B, mp, a, b - a}, y, 0.0, 1.0);
    }
    return {y[0], y[2], y[1], y[3]};
}

MonodromyPair monodromy_ode(const DTVIndex& n, cplx B, const ModularParam& mp) {
    if (!n.valid()) throw UnsupportedIndex("monodromy_ode: invalid index");
    return {transfer_along(n, B, mp, cycle_path(1, mp)),
            transfer_along(n, B, mp, cycle_path(2, mp))};
}

std::variant<MonodromyClass, NotCompletelyReducible> extract_rs(const MonodromyPair& pair) {
    const cplx t1 = mat_trace(pair.M1);
    const cplx t2 = mat_trace(pair.M2);
    const bool deg1 = std::abs(t1 - 2.0) < 1e-6 || std::abs(t1 + 2.0) < 1e-6;
    const bool deg2 = std::abs(t2 - 2.0) < 1e-6 || std::abs(t2 + 2.0) < 1e-6;

    if (deg1 && deg2) {
        const int eps1 = (std::abs(t1 - 2.0) < 1e-6) ? 1 : -1;
        const int eps2 = (std::abs(t2 - 2.0) < 1e-6) ? 1 : -1;
        // A shared eigenbasis cannot be resolved at +-2 traces: either a
        // Jordan block is present or every vector is an eigenvector.
        return NotCompletelyReducible{eps1, eps2};
    }

    // Anchor on the matrix whose eigenvalues separate better.
    const bool anchor1 = std::abs(t1 * t1 - 4.0) >= std::abs(t2 * t2 - 4.0);
    const Mat2& A = anchor1 ? pair.M1 : pair.M2;
    const cplx ta = anchor1 ? t1 : t2;
    const cplx disc = std::sqrt(ta * ta - 4.0);
    const cplx la_p = (ta + disc) * 0.5;
    const cplx la_m = (ta - disc) * 0.5;
    const auto vp = eigenvector_for(A, la_p);
    const auto vm = eigenvector_for(A, la_m);
    const double np = std::hypot(std::abs(vp[0]), std::abs(vp[1]));
    const double nm = std::hypot(std::abs(vm[0]), std::abs(vm[1]));
    const cplx detv = vp[0] * vm[1] - vp[1] * vm[0];
    if (!(std::abs(detv) * 1e8 > np * nm))
        throw IllConditioned("extract_rs: eigenvector pairing condition number exceeds 1e8");

    double res1, res2;
    const cplx lam = rayleigh_ratio(pair.M1, vp, res1); // e^{-2 pi i s}
    const cplx mu = rayleigh_ratio(pair.M2, vp, res2);  // e^{2 pi i r}
    if (res1 > 1e-6 || res2 > 1e-6)
        throw IllConditioned("extract_rs: shared eigenvector residual too large");
    const cplx s = -std::log(lam) / kTwoPiI;
    const cplx r = std::log(mu) / kTwoPiI;
    return canonicalize(r, s);
}

MonodromyClass rs_from_B_n1(cplx B, const ModularParam& mp) {
    const auto& inv = mp.invariants();
    const double guard = 1e-8 * (1.0 + std::abs(B));
    for (const cplx& e : {inv.e1, inv.e2, inv.e3})
        if (std::abs(B - e) < guard)
            throw BranchPoint("rs_from_B_n1: B within guard of a branch point e_k");
    const cplx a = wp_inverse(B, mp).reduced;
    const cplx s = (a * inv.eta1 - zeta(a, mp)) / kTwoPiI;
    const cplx r = a - s * mp.tau();
    return canonicalize(r, s);
}

MonodromyClass rs_from_B_n2(cplx B, const ModularParam& mp, int branch) {
    const auto& inv = mp.invariants();
    const cplx g2 = inv.g2, g3 = inv.g3;
    const auto q2 = spectral_poly({2, 0, 0, 0}, mp);
    double qscale = 0.0;
    for (std::size_t k = 0; k < q2.size(); ++k)
        qscale += std::abs(q2[k]) * std::pow(std::abs(B), double(k));
    const cplx Q = eval_poly(q2, B);
    const cplx b2 = B * B - 3.0 * g2;
    // checked before the Q2 guard: B^2 = 3 g2 also zeroes Q2, and the more
    // specific refusal should win there
    if (std::abs(b2) < 1e-8 * (1.0 + std::abs(B * B) + 3.0 * std::abs(g2)))
        throw GuardB2("rs_from_B_n2: B^2 - 3 g2 vanishes");
    if (std::abs(Q) < 1e-8 * std::max(qscale, 1.0))
        throw BranchPoint("rs_from_B_n2: B within guard of a zero of Q2");

    const cplx C = double(branch) * std::sqrt(Q);
    const cplx wp_sigma = (B * B * B + 27.0 * g3) / (9.0 * b2);
    const cplx wpp_sigma = C * 2.0 * (B * B * B - 9.0 * g2 * B - 54.0 * g3) / (27.0 * b2 * b2);
    const cplx Zt = 2.0 * C / (3.0 * b2);
    if (std::abs(wpp_sigma) < 1e-8 * std::pow(1.0 + std::abs(wp_sigma), 1.5))
        throw BranchPoint("rs_from_B_n2: wp'(sigma) too small to fix the sigma branch");

    const cplx sigma = wp_inverse(wp_sigma, mp, wpp_sigma).reduced;
    const cplx s = (sigma * inv.eta1 - zeta(sigma, mp) + Zt) / kTwoPiI;
    const cplx r = sigma - s * mp.tau();
    return canonicalize(r, s);
}

} // namespace dtv
