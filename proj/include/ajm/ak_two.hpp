#pragma once

#include <array>
#include <cmath>

#include "ajm/effect.hpp"
#include "ajm/errors.hpp"
#include "ajm/kernel_table.hpp"
#include "ajm/vec3.hpp"

namespace ajm {

/// Bloch vector of a qubit state, rho = (1 + r . sigma) / 2.
struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 vec() const { return {x, y, z}; }
    double norm() const { return vec().norm(); }
    void validate() const {
        if (norm() > 1.0 + kEffectTol)
            throw ConfigError("BlochState: Bloch vector length exceeds 1");
    }
};

/// Sharpness constants of the two half-space margins, with the table
/// configuration they came from.
struct MarginalPair {
    double a_prime = 0.0;
    double b_prime = 0.0;
    DetectorConfig cfg{};
};

/// a' = 4 Int_{p1 >= 0} e0 f0 and b' = 4 Int_{p2 >= 0} e0 g0: the sign of
/// each detector momentum measures one spin component with these strengths.
inline MarginalPair compute_marginals(const KernelTable2& t) {
    return {4.0 * integrate_region2(t, Selector2::EF, Region2::half1(+1)),
            4.0 * integrate_region2(t, Selector2::EG, Region2::half2(+1)), t.cfg};
}

/// Unbiased joint observable whose margins are (1 +- a' sx) / 2 and
/// (1 +- b' sy) / 2.
inline JointObservable2 joint_from_marginals(double a_prime, double b_prime) {
    JointObservable2 j;
    j.m = {a_prime, 0.0, 0.0};
    j.n = {0.0, b_prime, 0.0};
    return j;
}

/// Probabilities of the four sign outcomes in order ++, +-, -+, --.
inline std::array<double, 4> outcome_probabilities(const MarginalPair& mp,
                                                   const BlochState& chi) {
    chi.validate();
    std::array<double, 4> out{};
    int idx = 0;
    for (int a : {+1, -1})
        for (int b : {+1, -1})
            out[idx++] = 0.25 * (1.0 + a * mp.a_prime * chi.x + b * mp.b_prime * chi.y);
    return out;
}

/// Conditional state after reading one sign pair, plus the transverse
/// uncertainty product sqrt((1 - x'^2)(1 - y'^2)) of that state.
struct PostState {
    int a = +1;
    int b = +1;
    double probability = 0.0;
    BlochState state{};
    double magnitude = 0.0;
    double uncertainty_product = 0.0;
};

/// Conditional Bloch vector for outcome (a, b) from the kernel product
/// integrals over that quadrant. With c's the quadrant integrals and
/// ap = 8 c_ef, bp = 8 c_eg (the signed quadrant sharpness constants),
///   x' = (ap/2 + 2x (c_ee + c_ff - c_gg) + 4y c_fg) / (1 + x ap + y bp)
/// and cyclically for y'; z' = 2z (c_ee - c_ff - c_gg) / (same denominator).
/// The outcome probability is the denominator / 4.
inline PostState post_state(const KernelTable2& t, const BlochState& chi, int a, int b) {
    chi.validate();
    if ((a != 1 && a != -1) || (b != 1 && b != -1))
        throw ConfigError("post_state: outcome signs must be +1 or -1");
    QuadrantIntegrals q = quadrant_integrals(t, a, b);
    double ap = 8.0 * q.ef;
    double bp = 8.0 * q.eg;
    double den = 1.0 + chi.x * ap + chi.y * bp;
    double prob = 0.25 * den;
    if (prob <= 1e-12) throw ConfigError("post_state: outcome probability vanishes");
    PostState ps;
    ps.a = a;
    ps.b = b;
    ps.probability = prob;
    ps.state.x = (0.5 * ap + 2.0 * chi.x * (q.ee + q.ff - q.gg) + 4.0 * chi.y * q.fg) / den;
    ps.state.y = (0.5 * bp + 2.0 * chi.y * (q.ee - q.ff + q.gg) + 4.0 * chi.x * q.fg) / den;
    ps.state.z = 2.0 * chi.z * (q.ee - q.ff - q.gg) / den;
    ps.magnitude = ps.state.norm();
    ps.uncertainty_product =
        std::sqrt((1.0 - ps.state.x * ps.state.x) * (1.0 - ps.state.y * ps.state.y));
    return ps;
}

/// POVM elements of the sign pair read along the x axis and along the
/// direction at polar angle theta in the momentum plane, order ++, +-, -+, --.
/// Needs equal detector spreads, where a single sharpness constant governs
/// every direction.
inline std::array<Effect, 4> oblique_effects(double a_prime, double theta) {
    if (!(theta >= 0.0 && theta <= M_PI))
        throw ConfigError("oblique_effects: angle must lie in [0, pi]");
    if (!(a_prime >= 0.0 && a_prime <= 1.0))
        throw ConfigError("oblique_effects: sharpness must lie in [0, 1]");
    double c = std::cos(theta), s = std::sin(theta);
    double tp = theta / M_PI;
    Vec3 vp = 0.5 * a_prime * Vec3{1.0 + c, s, 0.0};
    Vec3 vm = 0.5 * a_prime * Vec3{1.0 - c, -s, 0.0};
    return {Effect{1.0 - tp, vp}, Effect{tp, vm}, Effect{tp, -vm}, Effect{1.0 - tp, -vp}};
}

/// Outcome probabilities of the oblique sign pair, order ++, +-, -+, --.
inline std::array<double, 4> oblique_probabilities(double a_prime, double theta,
                                                   const BlochState& chi) {
    chi.validate();
    std::array<Effect, 4> es = oblique_effects(a_prime, theta);
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[i] = es[i].probability(chi.vec());
    return out;
}

/// Momentum outcome density for initial state chi at grid node (i, j).
/// Only x and y enter: the density is e^2 + f^2 + g^2 + 2ef x + 2eg y.
inline double outcome_density(const KernelTable2& t, const BlochState& chi, int i, int j) {
    std::size_t idx = std::size_t(i) * t.n + j;
    double e = t.e0[idx], f = t.f0[idx], g = t.g0[idx];
    return e * e + f * f + g * g + 2.0 * e * f * chi.x + 2.0 * e * g * chi.y;
}

/// Same density from a direct evaluation at an off-grid momentum point.
inline double outcome_density_at(const KernelTable2& t, const BlochState& chi, double p1,
                                 double p2) {
    KernelPoint k = t.eval(p1, p2);
    return k.e * k.e + k.f * k.f + k.g * k.g + 2.0 * k.e * k.f * chi.x +
           2.0 * k.e * k.g * chi.y;
}

enum class Symmetry { Reflection, Rotation };

/// Largest deviation between the two sides of the covariance identity
/// P_chi(p) = P_{B chi}(T p) on a probe set of momentum points.
/// Reflection: T(p1, p2) = (p1, -p2), B chi = (x, -y, -z), checked over the
/// whole table grid (the reflected node is again a grid node). Rotation by
/// theta: T = R(theta) in the momentum plane, B chi = chi rotated by theta
/// about the z axis, checked on a polar probe grid by direct evaluation;
/// needs equal detector spreads.
inline double symmetry_probe(const KernelTable2& t, const BlochState& chi, Symmetry sym,
                             double theta = 0.0) {
    chi.validate();
    double dev = 0.0;
    if (sym == Symmetry::Reflection) {
        BlochState part{chi.x, -chi.y, -chi.z};
        for (int i = 0; i < t.n; ++i)
            for (int j = 0; j < t.n; ++j)
                dev = std::max(dev, std::fabs(outcome_density(t, chi, i, j) -
                                              outcome_density(t, part, i, t.n - 1 - j)));
        return dev;
    }
    if (std::fabs(t.cfg.sigma1 - t.cfg.sigma2) > 1e-12)
        throw ConfigError("symmetry_probe: rotation probe needs equal detector spreads");
    double c = std::cos(theta), s = std::sin(theta);
    BlochState part{chi.x * c - chi.y * s, chi.x * s + chi.y * c, chi.z};
    const int n_r = 6, n_a = 16;
    double r_max = 0.6 * t.cfg.grid_extent;
    for (int ir = 1; ir <= n_r; ++ir) {
        double r = r_max * ir / n_r;
        for (int ia = 0; ia < n_a; ++ia) {
            double ph = 2.0 * M_PI * (ia + 0.37) / n_a;
            double p1 = r * std::cos(ph), p2 = r * std::sin(ph);
            double lhs = outcome_density_at(t, chi, p1, p2);
            double rhs = outcome_density_at(t, part, c * p1 - s * p2, s * p1 + c * p2);
            dev = std::max(dev, std::fabs(lhs - rhs));
        }
    }
    return dev;
}

}  // namespace ajm
