#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ajm/detector.hpp"
#include "ajm/errors.hpp"
#include "ajm/parallel.hpp"

namespace ajm {

/// sin(x) / x with the removable singularity filled in.
inline double sinc_unnorm(double x) {
    if (std::fabs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

/// d/dx (sin x / x).
inline double sinc_unnorm_deriv(double x) {
    if (std::fabs(x) < 1e-4) return -x / 3.0 + x * x * x / 30.0;
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}

/// Values of the three momentum kernels at one point. The even kernel is e;
/// f and g are the imaginary parts of the two odd kernels (the kernels are
/// i f and i g; only squares and e-products enter observable quantities).
struct KernelPoint {
    double e = 0.0;
    double f = 0.0;
    double g = 0.0;
};

/// Pointwise kernels of the coupling unitary in the pointer variables:
/// even part cos(R) and odd parts q_i sin(R) / R with R = |(q1, q2)|.
/// The origin limit is (1, 0, 0).
inline KernelPoint unitary_kernels2(double q1, double q2) {
    double r = std::hypot(q1, q2);
    double snc = sinc_unnorm(r);
    return {std::cos(r), q1 * snc, q2 * snc};
}

namespace detail {

struct Qgrid {
    std::vector<double> q;
    double dq = 0.0;
};

/// Midpoint grid covering the Gaussian support [-9 sigma, 9 sigma]. The
/// spacing bound keeps the rectangle-rule Fourier sums alias-free over the
/// momentum window [-extent, extent] plus the kernel bandwidth and tail.
inline Qgrid make_qgrid(double sigma, double extent) {
    double lq = 9.0 * sigma;
    double dq_max = 2.0 * M_PI / (1.15 * (extent + 5.3 / sigma + 1.5));
    int nq = detail::even_at_least(2.0 * lq / dq_max, 16);
    Qgrid g;
    g.dq = 2.0 * lq / nq;
    g.q.resize(nq);
    for (int k = 0; k < nq; ++k) g.q[k] = (double(k - nq / 2) + 0.5) * g.dq;
    return g;
}

}  // namespace detail

enum class Selector2 { EE, FF, GG, EF, EG, FG, Norm };

/// Integration region in the two-detector momentum plane.
struct Region2 {
    enum class Kind { Full, Half1Pos, Half1Neg, Half2Pos, Half2Neg, Quadrant, Wedge };
    Kind kind = Kind::Full;
    int s1 = +1;  // quadrant sign of the first coordinate
    int s2 = +1;  // quadrant sign of the second coordinate
    double theta_lo = 0.0;  // wedge angular range, radians
    double theta_hi = 0.0;

    static Region2 full() { return {}; }
    static Region2 half1(int s) { return {s > 0 ? Kind::Half1Pos : Kind::Half1Neg, s, +1, 0, 0}; }
    static Region2 half2(int s) { return {s > 0 ? Kind::Half2Pos : Kind::Half2Neg, +1, s, 0, 0}; }
    static Region2 quadrant(int s1, int s2) { return {Kind::Quadrant, s1, s2, 0, 0}; }
    static Region2 wedge(double lo, double hi) { return {Kind::Wedge, +1, +1, lo, hi}; }
};

/// Sampled momentum kernels of the two-detector coupling on a shared midpoint
/// grid, plus the analytic boundary data used to correct half-plane and
/// quadrant sums of products that are odd across a coordinate axis.
class KernelTable2 {
public:
    DetectorConfig cfg{};
    int n = 0;
    double dp = 0.0;
    std::vector<double> p;            // midpoint momentum grid, both axes
    std::vector<double> e0, f0, g0;   // n x n, row-major, [i * n + j] = (p1_i, p2_j)

    // Values and first derivatives on the coordinate axes. Functions of p2 at
    // p1 = 0: e0_b1, df0_b1 (d/dp1 of f0), g0_b1. Functions of p1 at p2 = 0:
    // e0_b2, dg0_b2 (d/dp2 of g0), f0_b2.
    std::vector<double> e0_b1, df0_b1, g0_b1;
    std::vector<double> e0_b2, dg0_b2, f0_b2;

    double norm_defect = 0.0;  // |full-plane outcome-density integral - 1|

    double e0_at(int i, int j) const { return e0[std::size_t(i) * n + j]; }
    double f0_at(int i, int j) const { return f0[std::size_t(i) * n + j]; }
    double g0_at(int i, int j) const { return g0[std::size_t(i) * n + j]; }

    /// Direct quadrature evaluation at an arbitrary momentum point.
    KernelPoint eval(double p1, double p2) const {
        int nq1 = int(q1_.size()), nq2 = int(q2_.size());
        std::vector<double> c2(nq2), s2(nq2);
        for (int l = 0; l < nq2; ++l) {
            c2[l] = std::cos(p2 * q2_[l]);
            s2[l] = std::sin(p2 * q2_[l]);
        }
        double e = 0.0, f = 0.0, g = 0.0;
        for (int k = 0; k < nq1; ++k) {
            const double* he = &He_[std::size_t(k) * nq2];
            const double* hf = &Hf_[std::size_t(k) * nq2];
            const double* hg = &Hg_[std::size_t(k) * nq2];
            double de = 0.0, df = 0.0, dg = 0.0;
            for (int l = 0; l < nq2; ++l) {
                de += he[l] * c2[l];
                df += hf[l] * c2[l];
                dg += hg[l] * s2[l];
            }
            double c1 = std::cos(p1 * q1_[k]), s1 = std::sin(p1 * q1_[k]);
            e += c1 * de;
            f += s1 * df;
            g += c1 * dg;
        }
        double w = dq1_ * dq2_ / (2.0 * M_PI);
        return {e * w, f * w, g * w};
    }

    // Quadrature data, kept for point evaluation.
    const std::vector<double>& q1() const { return q1_; }
    const std::vector<double>& q2() const { return q2_; }

private:
    friend KernelTable2 build_kernel_table2(const DetectorConfig&, int);
    std::vector<double> q1_, q2_;
    double dq1_ = 0.0, dq2_ = 0.0;
    std::vector<double> He_, Hf_, Hg_;  // nq1 x nq2
};

namespace detail {

// out[i] += a * row[i] over a contiguous span.
inline void axpy(double a, const double* row, double* out, int len) {
    for (int i = 0; i < len; ++i) out[i] += a * row[i];
}

inline double dot(const double* a, const double* b, int len) {
    double s = 0.0;
    for (int i = 0; i < len; ++i) s += a[i] * b[i];
    return s;
}

/// result(n x n) = A(n x nq1) * H(nq1 x nq2) * B^T(nq2 x n), contracted in the
/// order that keeps the O(n^2) stage on the smaller quadrature axis.
inline std::vector<double> sandwich(const std::vector<double>& A, const std::vector<double>& H,
                                    const std::vector<double>& B, int n, int nq1, int nq2,
                                    int threads) {
    std::vector<double> out(std::size_t(n) * n, 0.0);
    if (nq1 <= nq2) {
        // M = H * B^T (nq1 x n), then out = A * M.
        std::vector<double> M(std::size_t(nq1) * n, 0.0);
        parallel_blocks(nq1, threads, [&](int kb, int ke) {
            for (int k = kb; k < ke; ++k)
                for (int i = 0; i < n; ++i)
                    M[std::size_t(k) * n + i] =
                        dot(&H[std::size_t(k) * nq2], &B[std::size_t(i) * nq2], nq2);
        });
        parallel_blocks(n, threads, [&](int ib, int ie) {
            for (int i = ib; i < ie; ++i)
                for (int k = 0; k < nq1; ++k)
                    axpy(A[std::size_t(i) * nq1 + k], &M[std::size_t(k) * n],
                         &out[std::size_t(i) * n], n);
        });
    } else {
        // M = A * H (n x nq2), then out = M * B^T.
        std::vector<double> M(std::size_t(n) * nq2, 0.0);
        parallel_blocks(n, threads, [&](int ib, int ie) {
            for (int i = ib; i < ie; ++i)
                for (int k = 0; k < nq1; ++k)
                    axpy(A[std::size_t(i) * nq1 + k], &H[std::size_t(k) * nq2],
                         &M[std::size_t(i) * nq2], nq2);
        });
        parallel_blocks(n, threads, [&](int ib, int ie) {
            for (int i = ib; i < ie; ++i)
                for (int j = 0; j < n; ++j)
                    out[std::size_t(i) * n + j] =
                        dot(&M[std::size_t(i) * nq2], &B[std::size_t(j) * nq2], nq2);
        });
    }
    return out;
}

}  // namespace detail

/// Build the momentum kernel tables for a detector pair. Cost is dominated by
/// three dense transforms of size grid_points^2 x min(nq1, nq2).
/// Throws NumericalError if the outcome density integrates away from 1.
inline KernelTable2 build_kernel_table2(const DetectorConfig& cfg_in, int threads = 1) {
    DetectorConfig cfg = cfg_in;
    cfg.validate();
    threads = resolve_threads(threads);

    KernelTable2 t;
    t.cfg = cfg;
    t.n = cfg.grid_points;
    t.dp = cfg.dp();
    t.p.resize(t.n);
    for (int i = 0; i < t.n; ++i) t.p[i] = (double(i - t.n / 2) + 0.5) * t.dp;

    auto g1 = detail::make_qgrid(cfg.sigma1, cfg.grid_extent);
    auto g2 = detail::make_qgrid(cfg.sigma2, cfg.grid_extent);
    t.q1_ = g1.q;
    t.q2_ = g2.q;
    t.dq1_ = g1.dq;
    t.dq2_ = g2.dq;
    int nq1 = int(g1.q.size()), nq2 = int(g2.q.size());

    // Kernels of the coupling in the pointer variables, weighted by the
    // probe amplitudes: even part cos(R), odd parts q_i sin(R) / R.
    t.He_.resize(std::size_t(nq1) * nq2);
    t.Hf_.resize(std::size_t(nq1) * nq2);
    t.Hg_.resize(std::size_t(nq1) * nq2);
    for (int k = 0; k < nq1; ++k) {
        double a1 = gaussian_psi(g1.q[k], cfg.sigma1);
        for (int l = 0; l < nq2; ++l) {
            double amp = a1 * gaussian_psi(g2.q[l], cfg.sigma2);
            KernelPoint u = unitary_kernels2(g1.q[k], g2.q[l]);
            std::size_t idx = std::size_t(k) * nq2 + l;
            t.He_[idx] = u.e * amp;
            t.Hf_[idx] = u.f * amp;
            t.Hg_[idx] = u.g * amp;
        }
    }

    // Fourier transform factors; quadrature weights folded into the matrices.
    std::vector<double> C1(std::size_t(t.n) * nq1), S1(std::size_t(t.n) * nq1);
    std::vector<double> C2(std::size_t(t.n) * nq2), S2(std::size_t(t.n) * nq2);
    for (int i = 0; i < t.n; ++i) {
        for (int k = 0; k < nq1; ++k) {
            double ph = t.p[i] * g1.q[k];
            C1[std::size_t(i) * nq1 + k] = std::cos(ph) * g1.dq;
            S1[std::size_t(i) * nq1 + k] = std::sin(ph) * g1.dq;
        }
        for (int l = 0; l < nq2; ++l) {
            double ph = t.p[i] * g2.q[l];
            C2[std::size_t(i) * nq2 + l] = std::cos(ph) * g2.dq;
            S2[std::size_t(i) * nq2 + l] = std::sin(ph) * g2.dq;
        }
    }

    const double f2pi = 1.0 / (2.0 * M_PI);
    t.e0 = detail::sandwich(C1, t.He_, C2, t.n, nq1, nq2, threads);
    t.f0 = detail::sandwich(S1, t.Hf_, C2, t.n, nq1, nq2, threads);
    t.g0 = detail::sandwich(C1, t.Hg_, S2, t.n, nq1, nq2, threads);
    for (auto* arr : {&t.e0, &t.f0, &t.g0})
        for (double& v : *arr) v *= f2pi;

    // Axis values and derivatives from q-reduced transforms. At p1 = 0 the
    // cosine factor is 1 and d/dp1 of the sine factor is q1.
    auto reduce1 = [&](const std::vector<double>& H, bool weight_q) {
        std::vector<double> r(nq2, 0.0);
        for (int k = 0; k < nq1; ++k) {
            double w = (weight_q ? g1.q[k] : 1.0) * g1.dq;
            for (int l = 0; l < nq2; ++l) r[l] += w * H[std::size_t(k) * nq2 + l];
        }
        return r;
    };
    auto reduce2 = [&](const std::vector<double>& H, bool weight_q) {
        std::vector<double> r(nq1, 0.0);
        for (int k = 0; k < nq1; ++k) {
            double s = 0.0;
            for (int l = 0; l < nq2; ++l)
                s += (weight_q ? g2.q[l] : 1.0) * H[std::size_t(k) * nq2 + l];
            r[k] = s * g2.dq;
        }
        return r;
    };
    auto transform_axis2 = [&](const std::vector<double>& red, bool use_sin) {
        std::vector<double> out(t.n, 0.0);
        for (int i = 0; i < t.n; ++i) {
            const double* row = use_sin ? &S2[std::size_t(i) * nq2] : &C2[std::size_t(i) * nq2];
            out[i] = f2pi * detail::dot(red.data(), row, nq2);
        }
        return out;
    };
    auto transform_axis1 = [&](const std::vector<double>& red, bool use_sin) {
        std::vector<double> out(t.n, 0.0);
        for (int i = 0; i < t.n; ++i) {
            const double* row = use_sin ? &S1[std::size_t(i) * nq1] : &C1[std::size_t(i) * nq1];
            out[i] = f2pi * detail::dot(red.data(), row, nq1);
        }
        return out;
    };
    t.e0_b1 = transform_axis2(reduce1(t.He_, false), false);
    t.df0_b1 = transform_axis2(reduce1(t.Hf_, true), false);
    t.g0_b1 = transform_axis2(reduce1(t.Hg_, false), true);
    t.e0_b2 = transform_axis1(reduce2(t.He_, false), false);
    t.dg0_b2 = transform_axis1(reduce2(t.Hg_, true), false);
    t.f0_b2 = transform_axis1(reduce2(t.Hf_, false), true);

    double total = 0.0;
    for (std::size_t idx = 0; idx < t.e0.size(); ++idx)
        total += t.e0[idx] * t.e0[idx] + t.f0[idx] * t.f0[idx] + t.g0[idx] * t.g0[idx];
    total *= t.dp * t.dp;
    t.norm_defect = std::fabs(total - 1.0);
    if (t.norm_defect > 1e-6)
        throw NumericalError("kernel table normalization defect " +
                             std::to_string(t.norm_defect) + " exceeds 1e-6");
    return t;
}

namespace detail {

inline double selector_product(const KernelTable2& t, Selector2 sel, std::size_t idx) {
    switch (sel) {
        case Selector2::EE: return t.e0[idx] * t.e0[idx];
        case Selector2::FF: return t.f0[idx] * t.f0[idx];
        case Selector2::GG: return t.g0[idx] * t.g0[idx];
        case Selector2::EF: return t.e0[idx] * t.f0[idx];
        case Selector2::EG: return t.e0[idx] * t.g0[idx];
        case Selector2::FG: return t.f0[idx] * t.g0[idx];
        case Selector2::Norm:
            return t.e0[idx] * t.e0[idx] + t.f0[idx] * t.f0[idx] + t.g0[idx] * t.g0[idx];
    }
    return 0.0;
}

inline bool selector_odd_in_p1(Selector2 sel) {
    return sel == Selector2::EF || sel == Selector2::FG;
}
inline bool selector_odd_in_p2(Selector2 sel) {
    return sel == Selector2::EG || sel == Selector2::FG;
}

// d/dp1 of the selector product on the p1 = 0 axis, as a function of p2.
// Only the selectors odd in p1 have a nonzero axis slope.
inline double axis1_slope(const KernelTable2& t, Selector2 sel, int j) {
    if (sel == Selector2::EF) return t.e0_b1[j] * t.df0_b1[j];
    if (sel == Selector2::FG) return t.df0_b1[j] * t.g0_b1[j];
    return 0.0;
}
inline double axis2_slope(const KernelTable2& t, Selector2 sel, int i) {
    if (sel == Selector2::EG) return t.e0_b2[i] * t.dg0_b2[i];
    if (sel == Selector2::FG) return t.f0_b2[i] * t.dg0_b2[i];
    return 0.0;
}

inline bool wedge_contains(double theta, double lo, double span) {
    double d = std::fmod(theta - lo, 2.0 * M_PI);
    if (d < 0.0) d += 2.0 * M_PI;
    return d < span;
}

}  // namespace detail

/// Integral of a kernel product over a region of the momentum plane.
/// Half-plane and quadrant sums of products odd across a coordinate axis get
/// an endpoint-slope correction (the midpoint rule on [0, inf) underestimates
/// by dp^2/24 times the boundary slope); wedge boundaries are resolved by
/// 4 x 4 subsampling of the cells the rays cross.
inline double integrate_region2(const KernelTable2& t, Selector2 sel, const Region2& r) {
    using Kind = Region2::Kind;
    const int n = t.n, half = t.n / 2;
    const double cell = t.dp * t.dp;
    double sum = 0.0;

    auto range1 = [&](int& i0, int& i1, int s) {
        i0 = s > 0 ? half : 0;
        i1 = s > 0 ? n : half;
    };

    switch (r.kind) {
        case Kind::Full: {
            for (std::size_t idx = 0; idx < t.e0.size(); ++idx)
                sum += detail::selector_product(t, sel, idx);
            return sum * cell;
        }
        case Kind::Half1Pos:
        case Kind::Half1Neg: {
            int i0, i1;
            range1(i0, i1, r.kind == Kind::Half1Pos ? +1 : -1);
            for (int i = i0; i < i1; ++i)
                for (int j = 0; j < n; ++j)
                    sum += detail::selector_product(t, sel, std::size_t(i) * n + j);
            sum *= cell;
            if (detail::selector_odd_in_p1(sel)) {
                double slope = 0.0;
                for (int j = 0; j < n; ++j) slope += detail::axis1_slope(t, sel, j);
                double sign = (r.kind == Kind::Half1Pos) ? -1.0 : +1.0;
                sum += sign * (t.dp * t.dp / 24.0) * t.dp * slope;
            }
            return sum;
        }
        case Kind::Half2Pos:
        case Kind::Half2Neg: {
            int j0, j1;
            range1(j0, j1, r.kind == Kind::Half2Pos ? +1 : -1);
            for (int i = 0; i < n; ++i)
                for (int j = j0; j < j1; ++j)
                    sum += detail::selector_product(t, sel, std::size_t(i) * n + j);
            sum *= cell;
            if (detail::selector_odd_in_p2(sel)) {
                double slope = 0.0;
                for (int i = 0; i < n; ++i) slope += detail::axis2_slope(t, sel, i);
                double sign = (r.kind == Kind::Half2Pos) ? -1.0 : +1.0;
                sum += sign * (t.dp * t.dp / 24.0) * t.dp * slope;
            }
            return sum;
        }
        case Kind::Quadrant: {
            int i0, i1, j0, j1;
            range1(i0, i1, r.s1);
            range1(j0, j1, r.s2);
            for (int i = i0; i < i1; ++i)
                for (int j = j0; j < j1; ++j)
                    sum += detail::selector_product(t, sel, std::size_t(i) * n + j);
            sum *= cell;
            if (detail::selector_odd_in_p1(sel)) {
                double slope = 0.0;
                for (int j = j0; j < j1; ++j) slope += detail::axis1_slope(t, sel, j);
                sum += (r.s1 > 0 ? -1.0 : +1.0) * (t.dp * t.dp / 24.0) * t.dp * slope;
            }
            if (detail::selector_odd_in_p2(sel)) {
                double slope = 0.0;
                for (int i = i0; i < i1; ++i) slope += detail::axis2_slope(t, sel, i);
                sum += (r.s2 > 0 ? -1.0 : +1.0) * (t.dp * t.dp / 24.0) * t.dp * slope;
            }
            return sum;
        }
        case Kind::Wedge: {
            double span = r.theta_hi - r.theta_lo;
            if (span < 0.0) throw ConfigError("integrate_region2: wedge span must be non-negative");
            span = std::min(span, 2.0 * M_PI);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    double p1 = t.p[i], p2 = t.p[j];
                    int corners = 0;
                    for (int ci : {-1, +1})
                        for (int cj : {-1, +1})
                            corners += detail::wedge_contains(
                                std::atan2(p2 + cj * 0.5 * t.dp, p1 + ci * 0.5 * t.dp),
                                r.theta_lo, span);
                    double w;
                    if (corners == 4) {
                        w = 1.0;
                    } else if (corners == 0 && !detail::wedge_contains(std::atan2(p2, p1),
                                                                       r.theta_lo, span)) {
                        w = 0.0;
                    } else {
                        int hits = 0;
                        for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b)
                                hits += detail::wedge_contains(
                                    std::atan2(p2 + (b - 1.5) * t.dp / 4.0,
                                               p1 + (a - 1.5) * t.dp / 4.0),
                                    r.theta_lo, span);
                        w = hits / 16.0;
                    }
                    if (w > 0.0)
                        sum += w * detail::selector_product(t, sel, std::size_t(i) * n + j);
                }
            }
            return sum * cell;
        }
    }
    return 0.0;
}

/// The six quadrant product integrals entering conditional-state formulas.
struct QuadrantIntegrals {
    double ee = 0.0, ff = 0.0, gg = 0.0, ef = 0.0, eg = 0.0, fg = 0.0;
};

inline QuadrantIntegrals quadrant_integrals(const KernelTable2& t, int s1, int s2) {
    Region2 q = Region2::quadrant(s1, s2);
    return {integrate_region2(t, Selector2::EE, q), integrate_region2(t, Selector2::FF, q),
            integrate_region2(t, Selector2::GG, q), integrate_region2(t, Selector2::EF, q),
            integrate_region2(t, Selector2::EG, q), integrate_region2(t, Selector2::FG, q)};
}

// ---------------------------------------------------------------------------
// Radial reduction for equal detector spreads.

namespace detail {

inline constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975362316, -0.7966664774136267395, -0.5255324099163289858,
    -0.1834346424956498049, 0.1834346424956498049,  0.5255324099163289858,
    0.7966664774136267395,  0.9602898564975362316};
inline constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903762591, 0.2223810344533744705, 0.3137066458778872873, 0.3626837833783619830,
    0.3626837833783619830, 0.3137066458778872873, 0.2223810344533744705, 0.1012285362903762591};

}  // namespace detail

/// Radial profiles of the momentum kernels for equal spreads sigma. The even
/// kernel reduces to an order-0 Hankel transform and the odd pair to a shared
/// order-1 profile; norms and overlap integrals become 1D integrals. Built by
/// composite 8-point Gauss-Legendre panels, two panels per oscillation period.
struct RadialTable {
    double sigma = 0.0;
    int n = 0;
    double dp = 0.0;
    std::vector<double> p, e1, f1;

    /// 2 pi Int (e1^2 + f1^2) p dp; equals 1 for a faithful build.
    double norm() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += (e1[i] * e1[i] + f1[i] * f1[i]) * p[i];
        return 2.0 * M_PI * s * dp;
    }

    /// Sharpness of either margin, 8 Int e1 f1 p dp.
    double aprime() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += e1[i] * f1[i] * p[i];
        return 8.0 * s * dp;
    }
};

inline RadialTable build_radial_table(double sigma, double p_max = 0.0, int n = 2400) {
    if (!(sigma > 0.0)) throw ConfigError("build_radial_table: sigma must be positive");
    if (p_max <= 0.0) p_max = DetectorConfig::min_extent(sigma, sigma);
    RadialTable rt;
    rt.sigma = sigma;
    rt.n = n;
    rt.dp = p_max / n;
    rt.p.resize(n);
    rt.e1.assign(n, 0.0);
    rt.f1.assign(n, 0.0);

    double lr = 10.0 * sigma + 2.0;
    double fmax = p_max + 5.3 / sigma + 2.0;
    int panels = std::max(8, int(std::ceil(lr * fmax / M_PI)));
    double h = lr / panels;
    double amp2 = 1.0 / std::sqrt(2.0 * M_PI * sigma * sigma);

    std::vector<double> rs, ws;
    rs.reserve(std::size_t(panels) * 8);
    ws.reserve(std::size_t(panels) * 8);
    for (int pan = 0; pan < panels; ++pan) {
        double mid = (pan + 0.5) * h;
        for (int k = 0; k < 8; ++k) {
            rs.push_back(mid + 0.5 * h * detail::kGlNodes[k]);
            ws.push_back(0.5 * h * detail::kGlWeights[k]);
        }
    }
    for (int i = 0; i < n; ++i) {
        rt.p[i] = (i + 0.5) * rt.dp;
        double se = 0.0, sf = 0.0;
        for (std::size_t k = 0; k < rs.size(); ++k) {
            double r = rs[k];
            double prof = amp2 * std::exp(-r * r / (4.0 * sigma * sigma)) * r * ws[k];
            se += std::cos(r) * std::cyl_bessel_j(0, rt.p[i] * r) * prof;
            sf += std::sin(r) * std::cyl_bessel_j(1, rt.p[i] * r) * prof;
        }
        rt.e1[i] = se;
        rt.f1[i] = sf;
    }
    if (std::fabs(rt.norm() - 1.0) > 1e-5)
        throw NumericalError("radial table normalization defect " +
                             std::to_string(std::fabs(rt.norm() - 1.0)));
    return rt;
}

}  // namespace ajm
