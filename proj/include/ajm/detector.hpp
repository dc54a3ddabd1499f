#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "ajm/errors.hpp"

namespace ajm {

/// Normalized Gaussian probe amplitude with position spread sigma,
/// psi(q) = (2 pi sigma^2)^(-1/4) exp(-q^2 / (4 sigma^2)), so that
/// the squared amplitude integrates to 1 and has standard deviation sigma.
inline double gaussian_psi(double q, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian_psi: sigma must be positive");
    return std::pow(2.0 * M_PI * sigma * sigma, -0.25) * std::exp(-q * q / (4.0 * sigma * sigma));
}

namespace detail {
inline int even_at_least(double x, int floor_value) {
    int n = std::max(floor_value, int(std::ceil(x)));
    return n + (n % 2);
}
}  // namespace detail

/// Grid description for the two-detector momentum tables. The stored grid is
/// a shared midpoint grid on [-grid_extent, grid_extent]^2; quadrature grids
/// in pointer-variable space are sized internally per axis.
struct DetectorConfig {
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double grid_extent = 12.0;  // half-width of the momentum grid, both axes
    int grid_points = 256;      // points per axis, even

    /// Smallest admissible half-width: the outcome density of the wider
    /// distribution must be captured to beyond eight standard widths.
    static double min_extent(double s1, double s2) {
        double w = std::max({s1, 1.0 / s1, s2, 1.0 / s2, 1.0});
        return std::max(12.0, 8.0 * w);
    }

    /// Config with automatically chosen extent and point count. The spacing
    /// bound pi / (1.2 max_q_support) keeps midpoint sums of kernel products
    /// exact up to the Gaussian tail (the kernels are band-limited in the
    /// pointer variable, so their products have bounded spectral support).
    static DetectorConfig auto_for(double s1, double s2) {
        if (!(s1 > 0.0) || !(s2 > 0.0)) throw ConfigError("DetectorConfig: sigma must be positive");
        DetectorConfig c;
        c.sigma1 = s1;
        c.sigma2 = s2;
        c.grid_extent = min_extent(s1, s2);
        double lq_max = 9.0 * std::max(s1, s2);
        double dp_bound = M_PI / (1.2 * lq_max);
        c.grid_points = detail::even_at_least(2.0 * c.grid_extent / dp_bound, 256);
        c.validate();
        return c;
    }

    void validate() const {
        if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
            throw ConfigError("DetectorConfig: sigma must be positive");
        if (!(grid_extent > 0.0)) throw ConfigError("DetectorConfig: grid_extent must be positive");
        if (grid_extent + 1e-9 < min_extent(sigma1, sigma2))
            throw ConfigError("DetectorConfig: grid_extent " + std::to_string(grid_extent) +
                              " below required " + std::to_string(min_extent(sigma1, sigma2)));
        if (grid_points < 256 || grid_points % 2 != 0)
            throw ConfigError("DetectorConfig: grid_points must be even and at least 256");
        if (grid_points > 8192)
            throw NumericalError("DetectorConfig: grid_points " + std::to_string(grid_points) +
                                 " exceeds the 8192 budget");
    }

    double dp() const { return 2.0 * grid_extent / grid_points; }
};

}  // namespace ajm
