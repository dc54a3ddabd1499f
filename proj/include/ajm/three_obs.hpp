#pragma once

#include <array>
#include <cmath>
#include <string>

#include "ajm/effect.hpp"
#include "ajm/errors.hpp"
#include "ajm/geometry_ft.hpp"
#include "ajm/mc.hpp"
#include "ajm/vec3.hpp"

namespace ajm {

/// Monte-Carlo estimates of the three margin sharpness constants, with the
/// detector and sampling configuration they came from.
struct TripleMarginals {
    McEstimate a_prime{};
    McEstimate b_prime{};
    McEstimate c_prime{};
    TripleDetectorConfig cfg{};
    StratifiedSpec spec{};
};

/// a', b', c' of the three-detector model: each is the half-space integral
/// 4 Int_{p_k >= 0} e0 u_k0 estimated on its own substream of the seed.
inline TripleMarginals compute_triple(const TripleDetectorConfig& cfg,
                                      const StratifiedSpec& spec) {
    cfg.validate();
    TripleMarginals tm;
    tm.cfg = cfg;
    tm.spec = spec;
    McEstimate* out[3] = {&tm.a_prime, &tm.b_prime, &tm.c_prime};
    for (int k = 0; k < 3; ++k) {
        StratifiedSpec sk = spec;
        sk.seed = substream_seed(spec.seed, std::uint64_t(k));
        *out[k] = mc_marginal_sharpness(cfg, k, sk);
    }
    return tm;
}

/// Sharpness of the margin read along an arbitrary unit direction: the
/// projection of the half-space vector part onto that direction, combined
/// from the three Cartesian component estimates (independent substreams).
inline McEstimate mc_marginal_along(const TripleDetectorConfig& cfg, const Vec3& dir,
                                    const StratifiedSpec& spec) {
    Vec3 nh = dir.normalized();
    if (nh.norm() == 0.0) throw ConfigError("mc_marginal_along: direction must be nonzero");
    double value = 0.0, var = 0.0;
    std::uint64_t samples = 0;
    double comps[3] = {nh.x, nh.y, nh.z};
    for (int j = 0; j < 3; ++j) {
        if (comps[j] == 0.0) continue;
        StratifiedSpec sj = spec;
        sj.seed = substream_seed(spec.seed, 3 + std::uint64_t(j));
        McEstimate ej = mc_marginal_component(cfg, nh, j, sj);
        value += comps[j] * ej.value;
        var += comps[j] * comps[j] * ej.std_error * ej.std_error;
        samples += ej.samples;
    }
    return {value, std::sqrt(var), samples};
}

namespace detail {

inline std::string outcome_label3(int idx) {
    std::string s;
    for (int bit : {4, 2, 1}) s += (idx & bit) ? '-' : '+';
    return s;
}

}  // namespace detail

/// The eight sign-outcome effects (1 +- a' sx +- b' sy +- c' sz) / 8 in the
/// order +++, ++-, +-+, +--, -++, -+-, --+, ---. Throws if any effect fails
/// positivity, naming the outcome.
inline std::array<Effect, 8> triple_povm(double a_prime, double b_prime, double c_prime) {
    JointObservable3 j;
    j.l = {a_prime, 0.0, 0.0};
    j.m = {0.0, b_prime, 0.0};
    j.n = {0.0, 0.0, c_prime};
    std::array<Effect, 8> effs = build_joint3(j);
    for (int k = 0; k < 8; ++k)
        if (!is_valid_effect(effs[k]))
            throw ConfigError("triple_povm: outcome " + detail::outcome_label3(k) +
                              " is not a valid effect");
    return effs;
}

inline std::array<Effect, 8> triple_povm(const TripleMarginals& tm) {
    return triple_povm(tm.a_prime.value, tm.b_prime.value, tm.c_prime.value);
}

/// Joint-measurability report for three unsharp directions: the minimized
/// distance-sum condition, and for mutually orthogonal directions the
/// equivalent closed-form ball condition on the squared norms.
struct NecessaryReport {
    Vec3 l{}, m{}, n{};
    double min_total = 0.0;
    bool holds = false;
    double max_scale = 0.0;
    bool orthogonal = false;
    double norm2_sum = 0.0;  // |l|^2 + |m|^2 + |n|^2
    FtResult ft{};
};

inline NecessaryReport check_necessary(const Vec3& l, const Vec3& m, const Vec3& n) {
    NecessaryReport r;
    r.l = l;
    r.m = m;
    r.n = n;
    FtCondition c = ft_condition(l, m, n);
    r.min_total = c.min_total;
    r.holds = c.holds;
    r.max_scale = c.max_scale;
    r.ft = c.ft;
    double scale2 = std::max({l.norm2(), m.norm2(), n.norm2(), 1e-300});
    r.orthogonal = std::fabs(l.dot(m)) <= 1e-12 * scale2 &&
                   std::fabs(m.dot(n)) <= 1e-12 * scale2 &&
                   std::fabs(n.dot(l)) <= 1e-12 * scale2;
    r.norm2_sum = l.norm2() + m.norm2() + n.norm2();
    return r;
}

inline NecessaryReport check_necessary(const TripleMarginals& tm) {
    return check_necessary({tm.a_prime.value, 0.0, 0.0}, {0.0, tm.b_prime.value, 0.0},
                           {0.0, 0.0, tm.c_prime.value});
}

}  // namespace ajm
