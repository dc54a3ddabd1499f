#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "ajm/errors.hpp"
#include "ajm/vec3.hpp"

namespace ajm {

inline constexpr double kEffectTol = 1e-12;

/// Qubit effect E = (gamma * 1 + v . sigma) / 2.
/// 0 <= E <= 1 holds iff ||v|| <= gamma <= 2 - ||v||.
struct Effect {
    double gamma = 0.0;
    Vec3 v{};

    /// Outcome probability tr(E rho) for the state with Bloch vector r.
    double probability(const Vec3& r) const { return 0.5 * (gamma + v.dot(r)); }
};

/// Largest amount by which E violates 0 <= E <= 1; non-positive for a valid effect.
inline double effect_violation(const Effect& e) {
    double n = e.v.norm();
    return std::max(n - e.gamma, n - (2.0 - e.gamma));
}

inline bool is_valid_effect(const Effect& e, double tol = kEffectTol) {
    return effect_violation(e) <= tol;
}

/// Two-outcome unsharp observable with effects (1 +- (bias + axis . sigma)) / 2.
/// Both effects are valid iff |bias| + ||axis|| <= 1.
struct UnsharpObservable {
    double bias = 0.0;
    Vec3 axis{};
};

inline std::array<Effect, 2> effects_of(const UnsharpObservable& u) {
    return {Effect{1.0 + u.bias, u.axis}, Effect{1.0 - u.bias, -u.axis}};
}

inline bool unsharp_is_valid(const UnsharpObservable& u, double tol = kEffectTol) {
    return std::fabs(u.bias) + u.axis.norm() <= 1.0 + tol;
}

/// Distance between two-outcome observables:
/// half the Bloch-axis distance plus half the bias difference.
inline double observable_distance(const UnsharpObservable& a, const UnsharpObservable& b) {
    return 0.5 * (a.axis - b.axis).norm() + 0.5 * std::fabs(a.bias - b.bias);
}

/// Largest common distance d such that two sharp axes separated by angle theta
/// both admit approximants at distance d that are jointly measurable.
inline double d0_bound(double theta) {
    return (std::cos(0.5 * theta) + std::sin(0.5 * theta) - 1.0) / std::sqrt(2.0);
}

/// Joint measurability of two unbiased unsharp observables with axes a and b:
/// they admit a joint observable iff ||a + b|| + ||a - b|| <= 2.
inline bool jm_unbiased_ok(const Vec3& a, const Vec3& b, double tol = kEffectTol) {
    return (a + b).norm() + (a - b).norm() <= 2.0 + tol;
}

/// Four-outcome joint observable candidate for a pair of unsharp observables.
/// Outcome (a, b) with a, b in {+1, -1} has effect
///   G_ab = 1/4 [ (1 + a x + b y + a b Z) 1 + (a b z + a m + b n) . sigma ].
/// Its margins are the unsharp observables (x, m) and (y, n) for any (Z, z).
struct JointObservable2 {
    double x = 0.0;
    double y = 0.0;
    Vec3 m{};
    Vec3 n{};
    double Z = 0.0;
    Vec3 z{};
};

inline Effect joint2_effect(const JointObservable2& j, int a, int b) {
    double g = 0.5 * (1.0 + a * j.x + b * j.y + a * b * j.Z);
    Vec3 v = 0.5 * ((a * b) * j.z + double(a) * j.m + double(b) * j.n);
    return {g, v};
}

/// Effects in outcome order (+,+), (+,-), (-,+), (-,-).
inline std::array<Effect, 4> build_joint2(const JointObservable2& j) {
    return {joint2_effect(j, +1, +1), joint2_effect(j, +1, -1),
            joint2_effect(j, -1, +1), joint2_effect(j, -1, -1)};
}

inline double joint2_violation(const JointObservable2& j) {
    double worst = -1e300;
    for (const Effect& e : build_joint2(j)) worst = std::max(worst, effect_violation(e));
    return worst;
}

inline bool joint2_is_valid(const JointObservable2& j, double tol = kEffectTol) {
    return joint2_violation(j) <= tol;
}

/// Closed-form completion for an unbiased pair on the joint-measurability
/// boundary or inside it: z = 0 and Z = (||m + n|| - ||m - n||) / 2.
inline JointObservable2 unbiased_completion(const Vec3& m, const Vec3& n) {
    double Z = 0.5 * ((m + n).norm() - (m - n).norm());
    return {0.0, 0.0, m, n, Z, Vec3{}};
}

struct Joint2Completion {
    bool feasible = false;
    double Z = 0.0;
    Vec3 z{};
    double violation = 0.0;  // smallest max effect violation found
};

/// Search for completion parameters (Z, z) that make the four joint effects
/// valid for given margins. The objective max_outcomes(violation) is convex
/// in (Z, z), so a shrinking coordinate-grid search converges to the optimum.
inline Joint2Completion find_joint2_completion(double x, double y, const Vec3& m, const Vec3& n,
                                               double feas_tol = 1e-5) {
    std::array<double, 4> center = {0.0, 0.0, 0.0, 0.0};  // Z, zx, zy, zz
    std::array<double, 4> halfw = {1.0, 2.0, 2.0, 2.0};
    std::array<double, 4> best = center;
    double best_v = 1e300;
    constexpr int kPts = 7;
    for (int iter = 0; iter < 24; ++iter) {
        for (int i0 = 0; i0 < kPts; ++i0)
            for (int i1 = 0; i1 < kPts; ++i1)
                for (int i2 = 0; i2 < kPts; ++i2)
                    for (int i3 = 0; i3 < kPts; ++i3) {
                        auto coord = [&](int axis, int idx) {
                            return center[axis] + halfw[axis] * (2.0 * idx / (kPts - 1) - 1.0);
                        };
                        JointObservable2 j{x, y, m, n, coord(0, i0),
                                           Vec3{coord(1, i1), coord(2, i2), coord(3, i3)}};
                        double v = joint2_violation(j);
                        if (v < best_v) {
                            best_v = v;
                            best = {j.Z, j.z.x, j.z.y, j.z.z};
                        }
                    }
        center = best;
        for (double& h : halfw) h *= 0.45;
    }
    return {best_v <= feas_tol, best[0], Vec3{best[1], best[2], best[3]}, best_v};
}

/// Eight-outcome joint observable candidate for three unsharp observables.
/// Outcome (a, b, c) has effect
///   G_abc = 1/8 [ (1 + a x + b y + c z + ab Z1 + bc Z2 + ca Z3 + abc Z4) 1
///               + (ab z1 + bc z2 + ca z3 + abc z4 + a l + b m + c n) . sigma ].
struct JointObservable3 {
    double x = 0.0, y = 0.0, z = 0.0;
    Vec3 l{}, m{}, n{};
    double Z1 = 0.0, Z2 = 0.0, Z3 = 0.0, Z4 = 0.0;
    Vec3 z1{}, z2{}, z3{}, z4{};
};

inline Effect joint3_effect(const JointObservable3& j, int a, int b, int c) {
    double g = 0.25 * (1.0 + a * j.x + b * j.y + c * j.z + a * b * j.Z1 + b * c * j.Z2 +
                       c * a * j.Z3 + a * b * c * j.Z4);
    Vec3 v = 0.25 * ((a * b) * j.z1 + (b * c) * j.z2 + (c * a) * j.z3 + (a * b * c) * j.z4 +
                     double(a) * j.l + double(b) * j.m + double(c) * j.n);
    return {g, v};
}

/// Effects in outcome order (a, b, c) = (+++), (++-), (+-+), (+--), (-++), (-+-), (--+), (---).
inline std::array<Effect, 8> build_joint3(const JointObservable3& j) {
    std::array<Effect, 8> out;
    std::size_t k = 0;
    for (int a : {+1, -1})
        for (int b : {+1, -1})
            for (int c : {+1, -1}) out[k++] = joint3_effect(j, a, b, c);
    return out;
}

inline double joint3_violation(const JointObservable3& j) {
    double worst = -1e300;
    for (const Effect& e : build_joint3(j)) worst = std::max(worst, effect_violation(e));
    return worst;
}

inline bool joint3_is_valid(const JointObservable3& j, double tol = kEffectTol) {
    return joint3_violation(j) <= tol;
}

/// Summing joint3 effects over the third outcome leaves a four-outcome joint
/// observable for the first two margins; likewise for the other two pairings.
inline JointObservable2 pair_marginal_12(const JointObservable3& j) {
    return {j.x, j.y, j.l, j.m, j.Z1, j.z1};
}
inline JointObservable2 pair_marginal_23(const JointObservable3& j) {
    return {j.y, j.z, j.m, j.n, j.Z2, j.z2};
}
inline JointObservable2 pair_marginal_31(const JointObservable3& j) {
    return {j.z, j.x, j.n, j.l, j.Z3, j.z3};
}

inline UnsharpObservable single_marginal_1(const JointObservable3& j) { return {j.x, j.l}; }
inline UnsharpObservable single_marginal_2(const JointObservable3& j) { return {j.y, j.m}; }
inline UnsharpObservable single_marginal_3(const JointObservable3& j) { return {j.z, j.n}; }

/// Sphere conditions necessary for an unbiased triple (l, m, n) to admit a
/// valid joint observable with pairwise couplings (Z1, Z2, Z3) and odd part z4.
/// Each line pairs the outcomes (p,q,r) and (-p,-q,-r) with pqr = -1; positivity
/// of both effects bounds the norm of the summed direction by the summed weight:
///   || p l + q m + r n - z4 || <= 1 + pq Z1 + qr Z2 + rp Z3.
/// The four radii always sum to 4, so the norms must sum to at most 4.
struct TripleNecessity {
    std::array<Vec3, 4> centers{};
    std::array<double, 4> lhs{};
    std::array<double, 4> rhs{};
    std::array<bool, 4> holds{};
    double lhs_sum = 0.0;
    bool sum_ok = false;
    bool all_hold = false;
};

inline TripleNecessity necessary_condition_3(const Vec3& l, const Vec3& m, const Vec3& n,
                                             double Z1 = 0.0, double Z2 = 0.0, double Z3 = 0.0,
                                             const Vec3& z4 = Vec3{}, double tol = kEffectTol) {
    constexpr std::array<std::array<int, 3>, 4> signs = {
        {{-1, -1, -1}, {+1, +1, -1}, {+1, -1, +1}, {-1, +1, +1}}};
    TripleNecessity out;
    out.all_hold = true;
    for (std::size_t i = 0; i < 4; ++i) {
        int p = signs[i][0], q = signs[i][1], r = signs[i][2];
        out.centers[i] = double(p) * l + double(q) * m + double(r) * n - z4;
        out.lhs[i] = out.centers[i].norm();
        out.rhs[i] = 1.0 + p * q * Z1 + q * r * Z2 + r * p * Z3;
        out.holds[i] = out.lhs[i] <= out.rhs[i] + tol;
        out.lhs_sum += out.lhs[i];
        out.all_hold = out.all_hold && out.holds[i];
    }
    out.sum_ok = out.lhs_sum <= 4.0 + tol;
    return out;
}

}  // namespace ajm
