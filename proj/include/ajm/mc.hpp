#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ajm/errors.hpp"
#include "ajm/parallel.hpp"
#include "ajm/vec3.hpp"

namespace ajm {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Independent stream seed for a numbered substream of a master seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

/// Inverse standard normal CDF: rational initial guess refined by one Halley
/// step against erfc, giving close to full double accuracy on (0, 1).
inline double normal_quantile(double u) {
    u = std::min(std::max(u, 1e-17), 1.0 - 1e-17);
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (u < p_low) {
        double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - p_low) {
        double q = u - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
    double f = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - f / (1.0 + 0.5 * x * f);
}

struct StratifiedSpec {
    std::uint64_t samples = 1ull << 22;
    int strata_per_axis = 8;  // octile strata on the first three sampled axes
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const {
        if (samples < 1024) throw ConfigError("StratifiedSpec: need at least 1024 samples");
        if (strata_per_axis < 1 || strata_per_axis > 64)
            throw ConfigError("StratifiedSpec: strata_per_axis must be in [1, 64]");
    }
};

/// Stratified Monte Carlo mean of f(x) for x with independent centered normal
/// coordinates of the given standard deviations. The first min(3, dims) axes
/// are stratified into equal-probability slices; each stratum draws from its
/// own generator seeded by (seed, stratum index) and results combine in
/// stratum order, so the estimate is identical for any thread count.
template <typename Fn>
McEstimate stratified_normal_mc(int dims, const double* stds, Fn&& f, const StratifiedSpec& spec) {
    spec.validate();
    if (dims < 1 || dims > 8) throw ConfigError("stratified_normal_mc: dims must be in [1, 8]");
    const int spa = spec.strata_per_axis;
    const int sd = std::min(3, dims);
    std::uint64_t n_strata = 1;
    for (int i = 0; i < sd; ++i) n_strata *= std::uint64_t(spa);
    const std::uint64_t n_per = std::max<std::uint64_t>(2, (spec.samples + n_strata - 1) / n_strata);

    std::vector<double> means(n_strata, 0.0), vars(n_strata, 0.0);
    std::atomic<bool> bad{false};
    double bad_x[8] = {};
    parallel_blocks(int(n_strata), spec.threads, [&](int sb, int se) {
        double x[8];
        for (int s = sb; s < se; ++s) {
            if (bad.load(std::memory_order_relaxed)) return;
            std::mt19937_64 eng(substream_seed(spec.seed, std::uint64_t(s)));
            int cell[3] = {0, 0, 0};
            std::uint64_t rem = std::uint64_t(s);
            for (int i = 0; i < sd; ++i) {
                cell[i] = int(rem % spa);
                rem /= spa;
            }
            double m = 0.0, m2 = 0.0;
            for (std::uint64_t k = 0; k < n_per; ++k) {
                for (int i = 0; i < dims; ++i) {
                    double u = double(eng() >> 11) * 0x1.0p-53;
                    if (i < sd) u = (cell[i] + u) / spa;
                    x[i] = stds[i] * normal_quantile(u);
                }
                double val = f(x);
                if (!std::isfinite(val)) {
                    bool expect = false;
                    if (bad.compare_exchange_strong(expect, true))
                        for (int i = 0; i < dims; ++i) bad_x[i] = x[i];
                    return;
                }
                double d = val - m;
                m += d / double(k + 1);
                m2 += d * (val - m);
            }
            means[s] = m;
            vars[s] = m2 / double(n_per - 1);
        }
    });
    if (bad.load()) {
        std::string at = "(";
        for (int i = 0; i < dims; ++i) at += (i ? ", " : "") + std::to_string(bad_x[i]);
        throw NumericalError("stratified_normal_mc: non-finite integrand sample at " + at + ")");
    }

    double est = 0.0, var = 0.0;
    for (std::uint64_t s = 0; s < n_strata; ++s) est += means[s];
    est /= double(n_strata);
    for (std::uint64_t s = 0; s < n_strata; ++s) var += vars[s];
    var /= double(n_strata) * double(n_strata) * double(n_per);
    return {est, std::sqrt(var), n_strata * n_per};
}

/// Three independent detectors with Gaussian probes.
struct TripleDetectorConfig {
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double sigma3 = 1.0;

    void validate() const {
        if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !(sigma3 > 0.0))
            throw ConfigError("TripleDetectorConfig: sigma must be positive");
    }
    std::array<double, 3> sigmas() const { return {sigma1, sigma2, sigma3}; }
    bool isotropic(double tol = 1e-12) const {
        return std::fabs(sigma1 - sigma2) <= tol && std::fabs(sigma2 - sigma3) <= tol;
    }
};

/// Total outcome probability over all of momentum space. Equals 1 exactly
/// (the kernel squares sum to the probe density); estimated with a widened
/// proposal so the Monte Carlo machinery is exercised with real variance.
inline McEstimate mc_norm_total(const TripleDetectorConfig& cfg, const StratifiedSpec& spec) {
    cfg.validate();
    auto s = cfg.sigmas();
    const double widen = 1.15;
    double stds[3] = {widen * s[0], widen * s[1], widen * s[2]};
    auto f = [s, widen](const double* x) {
        double r = 1.0;
        for (int i = 0; i < 3; ++i) {
            double inv = 1.0 / (s[i] * s[i]) - 1.0 / (widen * widen * s[i] * s[i]);
            r *= widen * std::exp(-0.5 * x[i] * x[i] * inv);
        }
        return r;
    };
    return stratified_normal_mc(3, stds, f, spec);
}

namespace detail {

inline double sinc_mc(double x) {
    if (std::fabs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}
inline double sinc_mc_deriv(double x) {
    if (std::fabs(x) < 1e-4) return -x / 3.0 + x * x * x / 30.0;
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}

/// Principal-value pairing along one sampled axis. The half-space momentum
/// integral of (even kernel) x (odd kernel component j) maps back to pointer
/// space through a Hilbert kernel in the coordinate t along the cut axis:
/// sampling two copies t, t' from the doubled-variance profile and
/// antisymmetrizing removes the singularity and every probe factor.
/// value(t, t') returns the integrand whose Gaussian mean is the marginal
/// component 4 Int_{half} e0 u_j0.
struct PvPairing {
    Vec3 axis_dir{};   // unit vector along the cut axis
    Vec3 perp_u{};     // completes the frame; carries sample x[2]
    Vec3 perp_v{};     // carries sample x[3]
    int component = 0; // Cartesian component of the odd kernel vector
    double k2 = 0.0;   // 2 sqrt(2 pi) sigma_axis: leftover probe constant

    double coord(const Vec3& q) const {
        return component == 0 ? q.x : (component == 1 ? q.y : q.z);
    }

    double operator()(const double* x) const {
        double t = x[0], tp = x[1];
        Vec3 base = x[2] * perp_u + x[3] * perp_v;
        Vec3 q = base + t * axis_dir;
        Vec3 qp = base + tp * axis_dir;
        double r = q.norm(), rp = qp.norm();
        double cj = coord(q), cjp = coord(qp);
        double num = std::cos(rp) * cj * sinc_mc(r) - std::cos(r) * cjp * sinc_mc(rp);
        double denom = t - tp;
        double h;
        if (std::fabs(denom) > 1e-8 * (1.0 + std::fabs(t) + std::fabs(tp))) {
            h = num / denom;
        } else if (r < 1e-12) {
            h = coord(axis_dir);
        } else {
            // Confluent limit t' -> t: cos(R) d/dt[q_j sinc(R)] - d/dt[cos(R)] q_j sinc(R).
            double tr = t / r;
            h = std::cos(r) * (coord(axis_dir) * sinc_mc(r) + cj * sinc_mc_deriv(r) * tr) +
                std::sin(r) * tr * cj * sinc_mc(r);
        }
        return (k2 / M_PI) * h;
    }
};

}  // namespace detail

/// Component of the vector part of the half-space marginal effect: the value
/// estimated is 4 Int_{p . n > 0} e0(p) u0_component(p) d^3p. For the cut axis
/// equal to the component axis this is the sharpness of that margin. A
/// non-axis-aligned normal requires equal spreads on all three detectors.
inline McEstimate mc_marginal_component(const TripleDetectorConfig& cfg, const Vec3& half_normal,
                                        int component, const StratifiedSpec& spec) {
    cfg.validate();
    if (component < 0 || component > 2)
        throw ConfigError("mc_marginal_component: component must be 0, 1 or 2");
    if (half_normal.norm() <= 0.0)
        throw ConfigError("mc_marginal_component: half-space normal must be nonzero");
    auto s = cfg.sigmas();

    detail::PvPairing pv;
    pv.component = component;
    double sig_axis, sig_u, sig_v;
    Vec3 n = half_normal.normalized();
    bool aligned[3] = {std::fabs(std::fabs(n.x) - 1.0) < 1e-14,
                       std::fabs(std::fabs(n.y) - 1.0) < 1e-14,
                       std::fabs(std::fabs(n.z) - 1.0) < 1e-14};
    if (aligned[0] || aligned[1] || aligned[2]) {
        int k = aligned[0] ? 0 : (aligned[1] ? 1 : 2);
        int a = (k + 1) % 3, b = (k + 2) % 3;
        Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        double sgn = (k == 0 ? n.x : (k == 1 ? n.y : n.z)) > 0 ? 1.0 : -1.0;
        pv.axis_dir = sgn * axes[k];
        pv.perp_u = axes[a];
        pv.perp_v = axes[b];
        sig_axis = s[k];
        sig_u = s[a];
        sig_v = s[b];
    } else {
        if (!cfg.isotropic())
            throw ConfigError(
                "mc_marginal_component: tilted half-space needs equal detector spreads");
        Frame3 fr = orthonormal_frame(n);
        pv.axis_dir = fr.n;
        pv.perp_u = fr.u;
        pv.perp_v = fr.v;
        sig_axis = sig_u = sig_v = s[0];
    }
    pv.k2 = 2.0 * std::sqrt(2.0 * M_PI) * sig_axis;
    double stds[4] = {std::sqrt(2.0) * sig_axis, std::sqrt(2.0) * sig_axis, sig_u, sig_v};
    return stratified_normal_mc(4, stds, pv, spec);
}

/// Marginal sharpness along coordinate axis k (0, 1, 2): the cut axis and the
/// kernel component coincide.
inline McEstimate mc_marginal_sharpness(const TripleDetectorConfig& cfg, int k,
                                        const StratifiedSpec& spec) {
    Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    if (k < 0 || k > 2) throw ConfigError("mc_marginal_sharpness: axis must be 0, 1 or 2");
    return mc_marginal_component(cfg, axes[k], k, spec);
}

}  // namespace ajm
