#include "dtvmono/hill.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dtvmono/heun.hpp"

namespace dtv {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Natural magnitude of B over the root region of the weight-3 spectral
/// polynomial; vanishing tests are relative to powers of this, never to
/// local monomial sums that can themselves collapse at the special points.
double b_scale(const LatticeInvariants& inv) {
    const double emax = std::max({std::abs(inv.e1), std::abs(inv.e2), std::abs(inv.e3)});
    return 1.0 + std::abs(inv.eta1) + std::sqrt(3.0 * std::abs(inv.g2)) + 3.0 * emax;
}

} // namespace

DiscriminantSample discriminant(const DTVIndex& n, cplx B, const ModularParam& mp) {
    const MonodromyPair pair = monodromy_ode(n, B, mp);
    return {B, pair.M1[0] + pair.M1[3], pair.M2[0] + pair.M2[3]};
}

cplx R0_n2(cplx B, const ModularParam& mp) {
    const LatticeInvariants& inv = lattice_invariants(mp);
    return -2.0 * (B * B + 3.0 * inv.eta1 * B - 1.5 * inv.g2);
}

MultiplicityVerdict multiplicity_n2(cplx B0, const ModularParam& mp,
                                    double threshold_scale) {
    const LatticeInvariants& inv = lattice_invariants(mp);
    const double bs = b_scale(inv);

    const std::vector<cplx> q2 = spectral_poly({2, 0, 0, 0}, mp);
    double q_scale = 0.0;
    double p = 1.0;
    for (const cplx& c : q2) {
        q_scale += std::abs(c) * p;
        p *= bs;
    }
    if (std::abs(eval_poly(q2, B0)) > 1e-8 * q_scale)
        throw NotARoot("multiplicity_n2: B0 is not a root of the spectral polynomial");

    const bool g2_zero = std::abs(inv.g2) < 1e-10 * bs * bs;
    const bool b0_zero = std::abs(B0) < 1e-8 * bs;
    const int ord_q = (g2_zero && b0_zero) ? 2 : 1;

    const double r0_mag = std::abs(R0_n2(B0, mp));
    const double r0p_mag = std::abs(-2.0 * (2.0 * B0 + 3.0 * inv.eta1));
    const double cut0 = threshold_scale *
        2.0 * (bs * bs + 3.0 * std::abs(inv.eta1) * bs + 1.5 * std::abs(inv.g2));
    const double cut1 = threshold_scale * 2.0 * (2.0 * bs + 3.0 * std::abs(inv.eta1));

    int ord_r0;
    if (r0_mag >= 2.0 * cut0) {
        ord_r0 = 0;
    } else if (r0_mag > 0.5 * cut0) {
        const int high = r0p_mag < 0.5 * cut1 ? 2 : 1;
        throw ThresholdAmbiguous("multiplicity_n2: |R0(B0)| inside the decision grey zone",
                                 2 * 0 + 2 - ord_q, 2 * high + 2 - ord_q);
    } else if (r0p_mag >= 2.0 * cut1) {
        ord_r0 = 1;
    } else if (r0p_mag > 0.5 * cut1) {
        throw ThresholdAmbiguous("multiplicity_n2: |R0'(B0)| inside the decision grey zone",
                                 2 * 1 + 2 - ord_q, 2 * 2 + 2 - ord_q);
    } else {
        ord_r0 = 2; // leading coefficient -2 never vanishes
    }

    return {B0, 2 * ord_r0 + 2 - ord_q, ord_r0, ord_q, "formula"};
}

double order_fit(const DTVIndex& n, cplx B0, const ModularParam& mp) {
    const PathSpec path = cycle_path(1, mp);
    std::vector<double> xs, ys;
    xs.reserve(40);
    ys.reserve(40);
    for (int j = 0; j <= 4; ++j) {
        const double rad = 1e-3 * std::pow(2.0, -double(j));
        for (int m = 0; m < 8; ++m) {
            // half-step angular offset keeps samples off lattice-symmetry axes
            const double th = 2.0 * kPi * (double(m) + 0.5) / 8.0;
            const Mat2 t = transfer_along(n, B0 + std::polar(rad, th), mp, path);
            const double mag = std::abs((t[0] + t[3]) * (t[0] + t[3]) - 4.0);
            if (!(mag > 0.0))
                throw FitUnstable("order_fit: discriminant sample is exactly degenerate");
            xs.push_back(std::log(rad));
            ys.push_back(std::log(mag));
        }
    }
    const double np = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    const double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / np;
    double rss = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        const double e = ys[k] - (intercept + slope * xs[k]);
        rss += e * e;
    }
    const double rms = std::sqrt(rss / np);
    if (rms > 0.1)
        throw FitUnstable("order_fit: log-log fit RMS " + std::to_string(rms) +
                          " exceeds 0.1");
    return slope;
}

} // namespace dtv
