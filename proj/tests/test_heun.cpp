#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "dtvmono/heun.hpp"

using dtv::cplx;
using dtv::DTVIndex;
using dtv::Mat2;
using dtv::ModularParam;

namespace {

constexpr double kPi = std::numbers::pi;

cplx trace(const Mat2& m) { return m[0] + m[3]; }

cplx two_cos(cplx x) { return 2.0 * std::cos(2.0 * kPi * x); }

double class_distance(const dtv::MonodromyClass& a, const dtv::MonodromyClass& b) {
    double best = 1e300;
    for (int sign : {1, -1})
        for (int m1 = -1; m1 <= 1; ++m1)
            for (int m2 = -1; m2 <= 1; ++m2) {
                const cplx dr = a.r - (double(sign) * b.r + double(m1));
                const cplx ds = a.s - (double(sign) * b.s + double(m2));
                best = std::min(best, std::hypot(std::abs(dr), std::abs(ds)));
            }
    return best;
}

void check_pair_invariants(const dtv::MonodromyPair& p) {
    CHECK(std::abs(dtv::mat_det(p.M1) - 1.0) < 1e-9);
    CHECK(std::abs(dtv::mat_det(p.M2) - 1.0) < 1e-9);
    const Mat2 ab = dtv::mat_mul(p.M1, p.M2);
    const Mat2 ba = dtv::mat_mul(p.M2, p.M1);
    Mat2 comm;
    for (int k = 0; k < 4; ++k) comm[std::size_t(k)] = ab[std::size_t(k)] - ba[std::size_t(k)];
    CHECK(dtv::mat_norm(comm) <
          1e-8 * std::max(1.0, dtv::mat_norm(p.M1) * dtv::mat_norm(p.M2)));
}

} // namespace

TEST_CASE("potential is the weighted sum of shifted wp and is even") {
    ModularParam mp(cplx(0.1, 1.2));
    const cplx tau = mp.tau();
    for (cplx z : {cplx(0.31, 0.17), cplx(-0.22, 0.41), cplx(0.13, -0.27)}) {
        const DTVIndex n{1, 2, 0, 3};
        const cplx v = dtv::potential(n, z, mp);
        const cplx w = dtv::potential(n, -z, mp);
        CHECK(std::abs(v - w) <= 1e-9 * (1.0 + std::abs(v)));
        const cplx direct = 2.0 * dtv::wp(z, mp) + 6.0 * dtv::wp(z + 0.5, mp) +
                            12.0 * dtv::wp(z + 0.5 * (1.0 + tau), mp);
        CHECK(std::abs(v - direct) <= 1e-11 * (1.0 + std::abs(v)));
        CHECK(std::abs(dtv::potential({1, 0, 0, 0}, z, mp) - 2.0 * dtv::wp(z, mp)) <=
              1e-12 * (1.0 + std::abs(v)));
    }
    // resummation of the two-term case at z = tau/4
    const cplx z = tau * 0.25;
    CHECK(std::abs(dtv::potential({1, 1, 0, 0}, z, mp) -
                   (2.0 * dtv::wp(z, mp) + 2.0 * dtv::wp(z + 0.5, mp))) <= 1e-11);

    CHECK_THROWS_AS(dtv::potential({0, 0, 1, 0}, tau * 0.5, mp), dtv::PoleAtSingularity);
    CHECK_THROWS_AS(dtv::potential({1, 0, 0, 0}, cplx(0.0, 0.0), mp), dtv::PoleAtSingularity);
    CHECK_NOTHROW(dtv::potential({0, 1, 0, 0}, cplx(0.0, 0.0), mp));
    CHECK_THROWS_AS(dtv::potential({0, 0, 0, 0}, cplx(0.3, 0.1), mp), dtv::UnsupportedIndex);
}

TEST_CASE("genus follows the four-case formula") {
    CHECK(dtv::genus({1, 0, 0, 0}) == 1);
    CHECK(dtv::genus({1, 1, 1, 1}) == 1);
    CHECK(dtv::genus({1, 1, 1, 0}) == 2);
    CHECK(dtv::genus({2, 0, 0, 0}) == 2);
    CHECK(dtv::genus({0, 1, 0, 0}) == 1);     // order does not matter
    CHECK(dtv::genus({2, 1, 1, 0}) == 2);     // even sum, m0+m3 < m1+m2 fails: 2+0 >= 1+1
    CHECK(dtv::genus({2, 2, 1, 1}) == 2);     // even sum, 2+1 >= 2+1
    CHECK(dtv::genus({3, 3, 2, 2}) == 3);     // even sum, 3+2 >= 3+2
    CHECK(dtv::genus({3, 2, 2, 1}) == 3);     // even sum, 3+1 < 2+2 is false: 4 >= 4
    CHECK(dtv::genus({4, 1, 1, 0}) == 4);     // even sum, 4+0 >= 1+1
    CHECK(dtv::genus({2, 2, 2, 0}) == 3);     // even sum, 2+0 < 2+2 -> (2+2+2-0)/2
    CHECK(dtv::genus({3, 2, 1, 1}) == 4);     // odd sum, 3 <= 4 -> (7+1)/2
    CHECK(dtv::genus({4, 0, 0, 0}) == 4);     // even sum, 4+0 >= 0
    CHECK(dtv::genus({3, 1, 1, 0}) == 3);     // odd sum, 3 > 2
}

TEST_CASE("spectral polynomials factor as stated") {
    ModularParam mp(cplx(-0.3, 0.8));
    const auto& inv = mp.invariants();
    const auto q1 = dtv::spectral_poly({1, 0, 0, 0}, mp);
    const auto q2 = dtv::spectral_poly({2, 0, 0, 0}, mp);
    CHECK(q1.size() == 4);
    CHECK(q2.size() == 6);
    CHECK(std::abs(q1[3] - 1.0) == 0.0);
    CHECK(std::abs(q2[5] - 1.0) == 0.0);
    CHECK(std::abs(q2[4]) == 0.0);

    const double s1 = 1.0 + std::abs(inv.e1) + std::abs(inv.e2) + std::abs(inv.e3);
    for (const cplx& e : {inv.e1, inv.e2, inv.e3})
        CHECK(std::abs(dtv::eval_poly(q1, e)) <= 1e-12 * s1 * s1 * s1);

    const cplx root2 = std::sqrt(3.0 * inv.g2);
    const double s2 = std::pow(1.0 + std::abs(root2), 5);
    CHECK(std::abs(dtv::eval_poly(q2, root2)) <= 1e-10 * s2);
    CHECK(std::abs(dtv::eval_poly(q2, -root2)) <= 1e-10 * s2);
    for (const cplx& e : {inv.e1, inv.e2, inv.e3}) {
        const double se = std::pow(1.0 + 3.0 * std::abs(e), 5);
        CHECK(std::abs(dtv::eval_poly(q2, -3.0 * e)) <= 1e-10 * se);
    }

    // quintic equals the displayed product (B^2-3g2) * prod(B+3e_k)
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int k = 0; k < 8; ++k) {
        const cplx B{U(rng), U(rng)};
        const cplx prod = (B * B - 3.0 * inv.g2) * (B + 3.0 * inv.e1) * (B + 3.0 * inv.e2) *
                          (B + 3.0 * inv.e3);
        CHECK(std::abs(dtv::eval_poly(q2, B) - prod) <= 1e-11 * (1.0 + std::abs(prod)));
    }

    const auto sd = dtv::spectral_data({2, 0, 0, 0}, cplx(1.3, 0.4), mp, -1);
    CHECK(sd.branch_tag == -1);
    CHECK(std::abs(sd.C * sd.C - dtv::eval_poly(q2, sd.B)) <=
          1e-9 * (1.0 + std::abs(sd.C * sd.C)));
    CHECK_THROWS_AS(dtv::spectral_poly({1, 1, 0, 0}, mp), dtv::UnsupportedIndex);
}

TEST_CASE("analytic monodromy for the two Lame cases satisfies its defining relations") {
    for (cplx tau : {cplx(0.1, 1.2), cplx(-0.3, 0.8)}) {
        ModularParam mp(tau);
        const auto& inv = mp.invariants();

        const cplx B1 = dtv::wp(cplx(0.31, 0.17), mp);
        const auto c1 = dtv::rs_from_B_n1(B1, mp);
        CHECK(std::abs(dtv::Z(c1.r, c1.s, mp)) <= 1e-9);
        CHECK(c1.canonical);
        CHECK_THROWS_AS(dtv::rs_from_B_n1(inv.e1, mp), dtv::BranchPoint);

        const cplx B2{1.7, 0.6};
        const auto c2p = dtv::rs_from_B_n2(B2, mp, +1);
        const auto c2m = dtv::rs_from_B_n2(B2, mp, -1);
        const auto& form = dtv::catalog_form({2, 0, 0, 0});
        CHECK(std::abs(dtv::Z_n(form, c2p.r, c2p.s, mp)) <=
              1e-9 * dtv::Z_n_scale(form, c2p.r, c2p.s, mp));
        // branch flip lands on (-r,-s), which is the same class
        CHECK(class_distance(c2p, c2m) <= 1e-8);
        // B = 3(Z^2 - wp) reconstruction
        const cplx u = c2p.r + c2p.s * tau;
        const cplx Zv = dtv::Z(c2p.r, c2p.s, mp);
        CHECK(std::abs(3.0 * (Zv * Zv - dtv::wp(u, mp)) - B2) <= 1e-9 * (1.0 + std::abs(B2)));

        const cplx bad = std::sqrt(3.0 * inv.g2);
        CHECK_THROWS_AS(dtv::rs_from_B_n2(bad, mp, +1), dtv::GuardB2);
        CHECK_THROWS_AS(dtv::rs_from_B_n2(-3.0 * inv.e2, mp, +1), dtv::BranchPoint);
    }
}

TEST_CASE("ode monodromy reproduces the analytic traces for 22 random samples") {
    std::mt19937 rng(20260822u);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const std::vector<cplx> taus = {cplx(0.1, 1.2), cplx(-0.3, 0.8), cplx(0.25, 0.9),
                                    cplx(0.0, 1.0), cplx(0.5, 1.1)};
    int done_n1 = 0, done_n2 = 0;
    int guard = 0;
    while ((done_n1 < 12 || done_n2 < 10) && guard < 400) {
        ++guard;
        const bool do_n1 = done_n1 < 12 && (done_n2 >= 10 || guard % 2 == 0);
        const cplx tau = taus[std::size_t(guard) % taus.size()];
        ModularParam mp(tau);
        dtv::MonodromyClass cls{{0, 0}, {0, 0}, false};
        DTVIndex n{1, 0, 0, 0};
        cplx B;
        try {
            if (do_n1) {
                B = dtv::wp(cplx(0.05 + 0.4 * (U(rng) + 1.0), 0.05 + 0.4 * (U(rng) + 1.0) * tau.imag()), mp);
                cls = dtv::rs_from_B_n1(B, mp);
            } else {
                n = DTVIndex{2, 0, 0, 0};
                B = cplx(3.0 * U(rng), 3.0 * U(rng));
                cls = dtv::rs_from_B_n2(B, mp, +1);
            }
        } catch (const dtv::Error&) {
            continue; // guarded draw, try again
        }
        const auto pair = dtv::monodromy_ode(n, B, mp);
        check_pair_invariants(pair);
        const double mismatch = std::abs(trace(pair.M1) - two_cos(cls.s)) +
                                std::abs(trace(pair.M2) - two_cos(cls.r));
        INFO("n=" << dtv::to_string(n) << " tau=" << tau.real() << "+" << tau.imag()
                  << "i B=" << B.real() << "+" << B.imag() << "i");
        CHECK(mismatch < 1e-7);

        const auto ext = dtv::extract_rs(pair);
        REQUIRE(std::holds_alternative<dtv::MonodromyClass>(ext));
        CHECK(class_distance(std::get<dtv::MonodromyClass>(ext), cls) <= 1e-7);

        if (do_n1) ++done_n1; else ++done_n2;
    }
    CHECK(done_n1 == 12);
    CHECK(done_n2 == 10);
}

TEST_CASE("transfer matrices are path independent within the homotopy class") {
    ModularParam mp(cplx(0.1, 1.2));
    const cplx tau = mp.tau();
    const DTVIndex n{2, 0, 0, 0};
    const cplx B{0.9, -0.3};

    const auto base = dtv::cycle_path(1, mp);
    const Mat2 m_base = dtv::transfer_along(n, B, mp, base);

    const cplx z0 = base.waypoints.front();
    const cplx lift{0.0, 0.12};
    const dtv::PathSpec dogleg{{z0, z0 + lift, z0 + lift + 1.0, z0 + 1.0}, base.clearance};
    const Mat2 m_dog = dtv::transfer_along(n, B, mp, dogleg);
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(m_base[std::size_t(k)] - m_dog[std::size_t(k)]) < 1e-9);

    // the ell_2 path built by default also ends where it should
    const auto p2 = dtv::cycle_path(2, mp);
    CHECK(std::abs(p2.waypoints.front() - z0) < 1e-12);
    CHECK(std::abs(p2.waypoints.back() - (z0 + tau)) < 1e-12);
}

TEST_CASE("segments too close to a singular point are rerouted or refused") {
    ModularParam mp(cplx(0.0, 1.0));
    const cplx sing = 0.5 * (1.0 + mp.tau()); // (1+tau)/2

    const auto det = dtv::detour_path(cplx(0.2, 0.5), cplx(0.8, 0.5), mp);
    CHECK(det.waypoints.size() > 2);
    for (const cplx& w : det.waypoints)
        CHECK(std::abs(w - sing) >= det.clearance * (1.0 - 1e-9));

    const DTVIndex n{1, 0, 0, 0};
    const cplx B{0.7, 0.2};
    const Mat2 m_detour = dtv::transfer_along(n, B, mp, det);
    const dtv::PathSpec safe{{cplx(0.2, 0.5), cplx(0.2, 0.62), cplx(0.8, 0.62), cplx(0.8, 0.5)},
                             det.clearance};
    const Mat2 m_safe = dtv::transfer_along(n, B, mp, safe);
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(m_detour[std::size_t(k)] - m_safe[std::size_t(k)]) < 1e-9);

    CHECK_THROWS_AS(dtv::detour_path(sing + cplx(0.01, 0.0), cplx(0.9, 0.5), mp),
                    dtv::PathTooClose);
    const dtv::PathSpec bad{{cplx(0.2, 0.5), cplx(0.8, 0.5)}, det.clearance};
    CHECK_THROWS_AS(dtv::transfer_along(n, B, mp, bad), dtv::PathTooClose);
}

TEST_CASE("extract_rs pairs eigenvalues on a shared eigenvector") {
    const cplx s0{0.31, 0.05};
    const cplx r0{0.17, -0.08};
    const cplx ls = std::exp(cplx(0.0, -2.0 * kPi) * s0);
    const cplx lr = std::exp(cplx(0.0, 2.0 * kPi) * r0);
    const Mat2 M1{ls, 0.0, 0.0, 1.0 / ls};
    const Mat2 M2{lr, 0.0, 0.0, 1.0 / lr};
    const auto got = dtv::extract_rs({M1, M2});
    REQUIRE(std::holds_alternative<dtv::MonodromyClass>(got));
    const auto want = dtv::canonicalize(r0, s0);
    CHECK(class_distance(std::get<dtv::MonodromyClass>(got), want) <= 1e-10);

    // conjugation by a unimodular matrix fixes the class
    Mat2 P{cplx(1.0, 0.2), cplx(0.7, -0.4), cplx(-0.3, 0.5), cplx(1.1, 0.0)};
    const cplx dp = std::sqrt(dtv::mat_det(P));
    for (auto& e : P) e /= dp;
    const Mat2 Pinv{P[3], -P[1], -P[2], P[0]};
    const auto conj = dtv::extract_rs(
        {dtv::mat_mul(P, dtv::mat_mul(M1, Pinv)), dtv::mat_mul(P, dtv::mat_mul(M2, Pinv))});
    REQUIRE(std::holds_alternative<dtv::MonodromyClass>(conj));
    CHECK(class_distance(std::get<dtv::MonodromyClass>(conj), want) <= 1e-9);

    // Jordan block at traces (2, -2)
    const Mat2 J1{1.0, 1.0, 0.0, 1.0};
    const Mat2 J2{-1.0, 0.7, 0.0, -1.0};
    const auto red = dtv::extract_rs({J1, J2});
    REQUIRE(std::holds_alternative<dtv::NotCompletelyReducible>(red));
    CHECK(std::get<dtv::NotCompletelyReducible>(red).eps1 == 1);
    CHECK(std::get<dtv::NotCompletelyReducible>(red).eps2 == -1);

    // nearly parallel eigenvectors
    const double eps = 1e-10;
    const Mat2 Q{1.0, 1.0, 1.0, 1.0 + eps};
    const cplx dq = dtv::mat_det(Q);
    const Mat2 Qinv{Q[3] / dq, -Q[1] / dq, -Q[2] / dq, Q[0] / dq};
    const Mat2 D1{2.0, 0.0, 0.0, 0.5};
    const Mat2 D2{3.0, 0.0, 0.0, 1.0 / 3.0};
    const auto ill1 = dtv::mat_mul(Q, dtv::mat_mul(D1, Qinv));
    const auto ill2 = dtv::mat_mul(Q, dtv::mat_mul(D2, Qinv));
    CHECK_THROWS_AS(dtv::extract_rs({ill1, ill2}), dtv::IllConditioned);
}

TEST_CASE("half-period translation of the potential preserves the traces") {
    ModularParam mp(cplx(0.1, 1.2));
    const cplx B{1.1, 0.4};
    const auto base = dtv::monodromy_ode({1, 0, 0, 0}, B, mp);
    for (const DTVIndex& n : {DTVIndex{0, 1, 0, 0}, DTVIndex{0, 0, 1, 0}, DTVIndex{0, 0, 0, 1}}) {
        const auto moved = dtv::monodromy_ode(n, B, mp);
        CHECK(std::abs(trace(moved.M1) - trace(base.M1)) < 1e-7);
        CHECK(std::abs(trace(moved.M2) - trace(base.M2)) < 1e-7);
    }
    const auto base2 = dtv::monodromy_ode({2, 0, 0, 0}, B, mp);
    const auto moved2 = dtv::monodromy_ode({0, 0, 2, 0}, B, mp);
    CHECK(std::abs(trace(moved2.M1) - trace(base2.M1)) < 1e-7);
    CHECK(std::abs(trace(moved2.M2) - trace(base2.M2)) < 1e-7);
}

TEST_CASE("general indices integrate to a commuting unimodular pair") {
    ModularParam mp(cplx(0.25, 0.9));
    const auto pair = dtv::monodromy_ode({1, 1, 0, 0}, cplx(0.4, 0.9), mp);
    check_pair_invariants(pair);
    const auto pair2 = dtv::monodromy_ode({2, 1, 0, 0}, cplx(-1.2, 0.3), mp);
    check_pair_invariants(pair2);
}
