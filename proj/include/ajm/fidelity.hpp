#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "ajm/ak_two.hpp"
#include "ajm/errors.hpp"
#include "ajm/kernel_table.hpp"

namespace ajm {

/// Single-pass plane integrals entering the direction fidelities. Terms with
/// a 1/|p| factor exclude the disk |p| < dp around the origin; the integrands
/// are bounded there, so the omitted mass is O(dp^2).
struct PlaneFidelityIntegrals {
    double scalar = 0.0;   // Int (e0 f0 p1 + e0 g0 p2) / |p|
    double state_x = 0.0;  // Int (e0^2 + f0^2 + g0^2) p1 / |p|, zero by parity
    double state_y = 0.0;  // Int (e0^2 + f0^2 + g0^2) p2 / |p|, zero by parity
    double fx = 0.0;       // Int (p1 (e0^2 + f0^2 - g0^2) + 2 f0 g0 p2) / |p|
    double fy = 0.0;       // Int (p2 (e0^2 - f0^2 + g0^2) + 2 f0 g0 p1) / |p|
    double norm_plane = 0.0;  // Int (e0^2 + f0^2 + g0^2), equals 1
    double ef_plane = 0.0;    // Int e0 f0, zero by parity
    double eg_plane = 0.0;    // Int e0 g0, zero by parity
};

inline PlaneFidelityIntegrals plane_fidelity_integrals(const KernelTable2& t) {
    PlaneFidelityIntegrals r;
    for (int i = 0; i < t.n; ++i) {
        for (int j = 0; j < t.n; ++j) {
            std::size_t idx = std::size_t(i) * t.n + j;
            double e = t.e0[idx], f = t.f0[idx], g = t.g0[idx];
            double norm = e * e + f * f + g * g;
            r.norm_plane += norm;
            r.ef_plane += e * f;
            r.eg_plane += e * g;
            double pr = std::hypot(t.p[i], t.p[j]);
            if (pr < t.dp) continue;
            double c1 = t.p[i] / pr, c2 = t.p[j] / pr;
            r.scalar += e * f * c1 + e * g * c2;
            r.state_x += norm * c1;
            r.state_y += norm * c2;
            r.fx += c1 * (e * e + f * f - g * g) + 2.0 * f * g * c2;
            r.fy += c2 * (e * e - f * f + g * g) + 2.0 * f * g * c1;
        }
    }
    double cell = t.dp * t.dp;
    r.scalar *= cell;
    r.state_x *= cell;
    r.state_y *= cell;
    r.fx *= cell;
    r.fy *= cell;
    r.norm_plane *= cell;
    r.ef_plane *= cell;
    r.eg_plane *= cell;
    return r;
}

/// Initial-direction fidelity: overlap of the measured sign directions with
/// the spin direction, minimized over initial states. The state terms
/// integrate to zero by parity, leaving the scalar integral.
inline double eta_i_direct(const KernelTable2& t) { return plane_fidelity_integrals(t).scalar; }

/// The same fidelity for a chosen initial state, with the parity-vanishing
/// state terms kept explicitly.
inline double eta_i_with_state(const PlaneFidelityIntegrals& pf, const BlochState& chi) {
    return pf.scalar + chi.x * pf.state_x + chi.y * pf.state_y;
}

/// Closed form of the initial-direction fidelity from the margin sharpness.
/// Meaningful for 0 <= a' <= 2/pi.
inline double eta_i_closed(double a_prime) { return 0.25 * M_PI * a_prime; }

/// Final-direction fidelity: the constant term minus the length of the
/// direction-resolved vector (fx, fy); that vector vanishes by parity, so the
/// value coincides with eta_i. Needs equal detector spreads.
inline double eta_f_direct(const KernelTable2& t) {
    if (std::fabs(t.cfg.sigma1 - t.cfg.sigma2) > 1e-12)
        throw ConfigError("eta_f_direct: needs equal detector spreads");
    PlaneFidelityIntegrals pf = plane_fidelity_integrals(t);
    return pf.scalar - std::hypot(pf.fx, pf.fy);
}

/// Disturbance fidelity: 3/4 of the outcome-density norm minus the length of
/// the plane-integrated cross terms; the cross terms vanish by parity, so the
/// value is 3/4 for every detector pair.
inline double eta_d_direct(const KernelTable2& t) {
    PlaneFidelityIntegrals pf = plane_fidelity_integrals(t);
    return 0.75 * pf.norm_plane - std::hypot(pf.ef_plane, pf.eg_plane);
}

/// Root-mean-square error and disturbance measures for spin 1/2:
/// delta = sqrt(s + s^2 - eta^2) with s = 1/2, and sqrt(2) times that for
/// the disturbance entry.
struct ErrorMeasures {
    double delta_ei = 0.0;
    double delta_ef = 0.0;
    double delta_d = 0.0;
};

inline ErrorMeasures error_measures(double eta_i, double eta_f, double eta_d) {
    auto root = [](double eta, const char* name) {
        double arg = 0.75 - eta * eta;
        if (arg < -1e-12)
            throw ConfigError(std::string("error_measures: ") + name +
                              " exceeds sqrt(3)/2, no real error value");
        return std::sqrt(std::max(0.0, arg));
    };
    return {root(eta_i, "eta_i"), root(eta_f, "eta_f"), std::sqrt(2.0) * root(eta_d, "eta_d")};
}

/// All three fidelities with their error measures and the margin sharpness.
/// For unequal spreads the final-direction entries are NaN (that fidelity is
/// defined through the common sharpness of symmetric detectors).
struct FidelityReport {
    double eta_i = 0.0;
    double eta_f = 0.0;
    double eta_d = 0.0;
    double a_prime = 0.0;
    double delta_ei = 0.0;
    double delta_ef = 0.0;
    double delta_d = 0.0;
    double s = 0.5;
    bool symmetric_detectors = true;
};

inline FidelityReport fidelity_report(const KernelTable2& t) {
    PlaneFidelityIntegrals pf = plane_fidelity_integrals(t);
    FidelityReport rep;
    rep.a_prime = compute_marginals(t).a_prime;
    rep.eta_i = pf.scalar;
    rep.eta_d = 0.75 * pf.norm_plane - std::hypot(pf.ef_plane, pf.eg_plane);
    rep.symmetric_detectors = std::fabs(t.cfg.sigma1 - t.cfg.sigma2) <= 1e-12;
    if (rep.symmetric_detectors) {
        rep.eta_f = pf.scalar - std::hypot(pf.fx, pf.fy);
        ErrorMeasures em = error_measures(rep.eta_i, rep.eta_f, rep.eta_d);
        rep.delta_ei = em.delta_ei;
        rep.delta_ef = em.delta_ef;
        rep.delta_d = em.delta_d;
    } else {
        rep.eta_f = std::numeric_limits<double>::quiet_NaN();
        ErrorMeasures em = error_measures(rep.eta_i, 0.0, rep.eta_d);
        rep.delta_ei = em.delta_ei;
        rep.delta_ef = std::numeric_limits<double>::quiet_NaN();
        rep.delta_d = em.delta_d;
    }
    return rep;
}

/// Direction-resolved POVM density E(theta) = a 1 + b sx + c sy on a midpoint
/// angle grid: radial integrals of the outcome density and its two cross
/// terms along each ray. Cell edges land on multiples of pi/2, so sign
/// effects are exact unions of cells.
struct AnglePovm {
    std::vector<double> theta;  // midpoint grid over [-pi, pi)
    std::vector<double> a, b, c;
    double dtheta = 0.0;
};

inline AnglePovm angle_povm(const KernelTable2& t, int n_theta = 512) {
    if (std::fabs(t.cfg.sigma1 - t.cfg.sigma2) > 1e-12)
        throw ConfigError("angle_povm: needs equal detector spreads");
    if (n_theta < 8 || n_theta % 4 != 0)
        throw ConfigError("angle_povm: angle count must be a multiple of 4, at least 8");
    AnglePovm ap;
    ap.dtheta = 2.0 * M_PI / n_theta;
    ap.theta.resize(n_theta);
    ap.a.resize(n_theta);
    ap.b.resize(n_theta);
    ap.c.resize(n_theta);

    int n_r = std::max(256, t.n);
    double dp_r = t.cfg.grid_extent / n_r;
    KernelPoint k0 = t.eval(0.0, 0.0);
    double norm0 = k0.e * k0.e + k0.f * k0.f + k0.g * k0.g;

    for (int k = 0; k < n_theta; ++k) {
        double th = -M_PI + (k + 0.5) * ap.dtheta;
        double ct = std::cos(th), st = std::sin(th);
        double sa = 0.0, sb = 0.0, sc = 0.0;
        for (int m = 0; m < n_r; ++m) {
            double p = (m + 0.5) * dp_r;
            KernelPoint kp = t.eval(p * ct, p * st);
            double norm = kp.e * kp.e + kp.f * kp.f + kp.g * kp.g;
            sa += norm * p;
            sb += 2.0 * kp.e * kp.f * p;
            sc += 2.0 * kp.e * kp.g * p;
        }
        ap.theta[k] = th;
        // Midpoint sums over [0, inf) carry a boundary-slope excess of
        // dp^2/24 per unit slope at p = 0; the slope of norm * p there is
        // norm(0), while both cross terms have zero slope (f0 = g0 = 0).
        ap.a[k] = sa * dp_r - (dp_r * dp_r / 24.0) * norm0;
        ap.b[k] = sb * dp_r;
        ap.c[k] = sc * dp_r;
    }
    return ap;
}

/// Effect of a wedge of directions: cell sums of the density arrays times
/// dtheta, returned as (gamma, v) with v in the x-y plane.
inline Effect angle_povm_window(const AnglePovm& ap, double theta_lo, double theta_hi) {
    if (!(theta_hi >= theta_lo)) throw ConfigError("angle_povm_window: empty window");
    Effect eff{0.0, {0.0, 0.0, 0.0}};
    int n = int(ap.theta.size());
    for (int k = 0; k < n; ++k) {
        double lo = -M_PI + k * ap.dtheta, hi = lo + ap.dtheta;
        double cover = 0.0;
        // Window clipped against the cell and its 2 pi translates.
        for (double shift : {-2.0 * M_PI, 0.0, 2.0 * M_PI}) {
            double a = std::max(lo + shift, theta_lo), b = std::min(hi + shift, theta_hi);
            if (b > a) cover += b - a;
        }
        if (cover <= 0.0) continue;
        eff.gamma += 2.0 * ap.a[k] * cover;
        eff.v.x += 2.0 * ap.b[k] * cover;
        eff.v.y += 2.0 * ap.c[k] * cover;
    }
    return eff;
}

}  // namespace ajm
