#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ajm/errors.hpp"
#include "ajm/vec3.hpp"

namespace ajm {

/// Minimizer of the summed distance to four anchor points.
struct FtResult {
    Vec3 point{};
    bool is_vertex = false;
    int vertex_index = -1;  // -1 when the minimizer is interior
    double total_distance = 0.0;
    int iterations = 0;
    double residual = 0.0;  // interior: |sum of unit vectors|; vertex: resultant norm
};

namespace detail {

inline double ft_total(const std::array<Vec3, 4>& a, const Vec3& z) {
    double s = 0.0;
    for (const Vec3& p : a) s += distance(p, z);
    return s;
}

/// Sum of unit vectors from vertex j toward the other anchors; coincident
/// anchors contribute nothing (their distance term is flat at the vertex).
inline Vec3 ft_resultant(const std::array<Vec3, 4>& a, int j) {
    Vec3 r{};
    for (int i = 0; i < 4; ++i) {
        if (i == j) continue;
        Vec3 d = a[i] - a[j];
        double n = d.norm();
        if (n > 1e-300) r += d / n;
    }
    return r;
}

}  // namespace detail

/// Geometric median of four points by fixed-point iteration from the
/// centroid. An iterate that lands on an anchor is classified by the vertex
/// optimality test (resultant norm <= 1); a failed test restarts along the
/// resultant, which is the descent direction there.
inline FtResult ft_point(const std::array<Vec3, 4>& a, int max_iterations = 10000,
                         double step_tol = 1e-12) {
    double scale = 0.0;
    for (const Vec3& p : a)
        for (const Vec3& q : a) scale = std::max(scale, distance(p, q));
    const double eps_vertex = 1e-10 * (1.0 + scale);

    Vec3 z = 0.25 * (a[0] + a[1] + a[2] + a[3]);
    int escapes = 0;
    for (int it = 1; it <= max_iterations; ++it) {
        int near = -1;
        for (int j = 0; j < 4; ++j)
            if (distance(z, a[j]) <= eps_vertex) near = j;
        if (near >= 0) {
            Vec3 r = detail::ft_resultant(a, near);
            if (r.norm() <= 1.0) {
                FtResult res;
                res.point = a[near];
                res.is_vertex = true;
                res.vertex_index = near;
                res.total_distance = detail::ft_total(a, a[near]);
                res.iterations = it;
                res.residual = r.norm();
                return res;
            }
            double d_min = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 4; ++i)
                if (i != near && distance(a[i], a[near]) > 0.0)
                    d_min = std::min(d_min, distance(a[i], a[near]));
            double step = std::max(1e3 * eps_vertex,
                                   1e-3 * std::pow(0.5, escapes) * d_min);
            z = a[near] + step * r.normalized();
            ++escapes;
            continue;
        }
        Vec3 num{};
        double den = 0.0;
        for (const Vec3& p : a) {
            double w = 1.0 / distance(p, z);
            num += w * p;
            den += w;
        }
        Vec3 znew = num / den;
        double step = distance(znew, z);
        z = znew;
        if (step <= step_tol * (1.0 + z.norm())) {
            FtResult res;
            res.point = z;
            res.total_distance = detail::ft_total(a, z);
            res.iterations = it;
            Vec3 grad{};
            for (const Vec3& p : a) grad += (z - p).normalized();
            res.residual = grad.norm();
            return res;
        }
    }
    throw NumericalError("ft_point: no convergence after " + std::to_string(max_iterations) +
                         " iterations; last iterate (" + std::to_string(z.x) + ", " +
                         std::to_string(z.y) + ", " + std::to_string(z.z) + ")");
}

inline FtResult ft_point(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& a3) {
    return ft_point(std::array<Vec3, 4>{a0, a1, a2, a3});
}

/// Independent check, built from distance-sum evaluations only: a coarse-to-
/// fine grid on the bounding box (three refinement levels of 48 cells per
/// axis, final cell below 1e-4 of the box diagonal), the four anchors as
/// explicit candidates (a vertex minimizer sits on a kink no cell center
/// resolves), and a shrinking axis-step descent from the best candidate.
/// The distance sum is convex, so the descent cannot change basins and the
/// polished point is the global minimizer to the final step size.
inline Vec3 ft_oracle(const std::array<Vec3, 4>& a) {
    Vec3 lo = a[0], hi = a[0];
    for (const Vec3& p : a) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    double diag = distance(lo, hi);
    if (diag == 0.0) return a[0];

    const int n = 48;
    Vec3 center = 0.5 * (lo + hi);
    Vec3 half = 0.5 * (hi - lo);
    Vec3 best = center;
    double best_val = std::numeric_limits<double>::infinity();
    for (int level = 0; level < 3; ++level) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    Vec3 z{center.x - half.x + (2.0 * i + 1.0) * half.x / n,
                           center.y - half.y + (2.0 * j + 1.0) * half.y / n,
                           center.z - half.z + (2.0 * k + 1.0) * half.z / n};
                    double v = detail::ft_total(a, z);
                    if (v < best_val) {
                        best_val = v;
                        best = z;
                    }
                }
            }
        }
        center = best;
        // Next level searches the 3x3x3 block of cells around the winner.
        half = 3.0 / n * half;
    }
    for (const Vec3& p : a) {
        double v = detail::ft_total(a, p);
        if (v < best_val) {
            best_val = v;
            best = p;
        }
    }
    double h = diag / n;
    const double h_stop = 1e-9 * (1.0 + diag);
    while (h > h_stop) {
        bool improved = false;
        for (const Vec3& step : {Vec3{h, 0, 0}, Vec3{-h, 0, 0}, Vec3{0, h, 0}, Vec3{0, -h, 0},
                                 Vec3{0, 0, h}, Vec3{0, 0, -h}}) {
            Vec3 z = best + step;
            double v = detail::ft_total(a, z);
            if (v < best_val) {
                best_val = v;
                best = z;
                improved = true;
            }
        }
        if (!improved) h *= 0.5;
    }
    return best;
}

/// Joint-measurability condition for three unsharp spin directions l, m, n:
/// minimized distance sum from the derived anchor tetrad, the verdict
/// min_total <= 4, and the largest common rescaling of (l, m, n) that keeps
/// the verdict true.
struct FtCondition {
    std::array<Vec3, 4> anchors{};
    FtResult ft{};
    double min_total = 0.0;
    bool holds = false;
    double max_scale = std::numeric_limits<double>::infinity();
};

inline FtCondition ft_condition(const Vec3& l, const Vec3& m, const Vec3& n) {
    FtCondition c;
    c.anchors = {-l - m - n, l + m - n, -l + m + n, l - m + n};
    c.ft = ft_point(c.anchors);
    c.min_total = c.ft.total_distance;
    c.holds = c.min_total <= 4.0;
    if (c.min_total > 0.0) c.max_scale = 4.0 / c.min_total;
    return c;
}

}  // namespace ajm
