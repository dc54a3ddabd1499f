#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <set>

#include "ajm/mc.hpp"
#include "support/common.hpp"

using ajm::McEstimate;
using ajm::StratifiedSpec;
using ajm::TripleDetectorConfig;

TEST_CASE("normal quantile inverts the normal CDF", "[mc]") {
    CHECK(ajm::normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
    double prev = -1e300;
    for (double u : {1e-12, 1e-6, 0.02, 0.2425, 0.5, 0.8, 0.97575, 1.0 - 1e-6}) {
        double x = ajm::normal_quantile(u);
        CHECK(x > prev);
        prev = x;
        double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
        CHECK(cdf == Catch::Approx(u).epsilon(1e-12));
    }
    // Symmetric tails.
    CHECK(ajm::normal_quantile(0.1) == Catch::Approx(-ajm::normal_quantile(0.9)).epsilon(1e-12));
}

TEST_CASE("substream seeds are deterministic and distinct", "[mc]") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 256; ++i) seen.insert(ajm::substream_seed(42, i));
    CHECK(seen.size() == 256);
    CHECK(ajm::substream_seed(42, 7) == ajm::substream_seed(42, 7));
    CHECK(ajm::substream_seed(42, 7) != ajm::substream_seed(43, 7));
}

TEST_CASE("stratified sampler reproduces normal moments", "[mc]") {
    StratifiedSpec spec;
    spec.samples = 1u << 16;
    spec.seed = 11;

    double stds[3] = {1.0, 2.0, 0.5};
    McEstimate one = ajm::stratified_normal_mc(
        3, stds, [](const double*) { return 1.0; }, spec);
    CHECK(one.value == 1.0);
    CHECK(one.std_error == 0.0);

    McEstimate mean = ajm::stratified_normal_mc(
        3, stds, [](const double* x) { return x[0]; }, spec);
    CHECK(std::fabs(mean.value) <= std::max(5.0 * mean.std_error, 1e-3));

    McEstimate var = ajm::stratified_normal_mc(
        3, stds, [](const double* x) { return x[1] * x[1]; }, spec);
    CHECK(std::fabs(var.value - 4.0) <= std::max(5.0 * var.std_error, 1e-2));
    CHECK(var.std_error > 0.0);
    CHECK(var.samples >= spec.samples);

    // Unstratified trailing axis still carries the right spread.
    double wide[4] = {1.0, 1.0, 1.0, 3.0};
    McEstimate tail = ajm::stratified_normal_mc(
        4, wide, [](const double* x) { return x[3] * x[3]; }, spec);
    CHECK(std::fabs(tail.value - 9.0) <= 5.0 * tail.std_error);
}

TEST_CASE("stratified sampler is deterministic across thread counts", "[mc]") {
    double stds[2] = {1.0, 1.0};
    auto f = [](const double* x) { return std::exp(-0.5 * x[0] * x[0]) * (1.0 + x[1] * x[1]); };
    StratifiedSpec a;
    a.samples = 1u << 14;
    a.seed = 99;
    a.threads = 1;
    StratifiedSpec b = a;
    b.threads = 4;
    McEstimate ra = ajm::stratified_normal_mc(2, stds, f, a);
    McEstimate rb = ajm::stratified_normal_mc(2, stds, f, b);
    CHECK(ra.value == rb.value);
    CHECK(ra.std_error == rb.std_error);
    McEstimate rc = ajm::stratified_normal_mc(2, stds, f, a);
    CHECK(ra.value == rc.value);
}

TEST_CASE("stratified sampler rejects bad configurations and samples", "[mc]") {
    double stds[3] = {1.0, 1.0, 1.0};
    StratifiedSpec spec;
    spec.samples = 1u << 12;
    auto f = [](const double*) { return 1.0; };

    CHECK_THROWS_AS(ajm::stratified_normal_mc(0, stds, f, spec), ajm::ConfigError);
    CHECK_THROWS_AS(ajm::stratified_normal_mc(9, stds, f, spec), ajm::ConfigError);

    StratifiedSpec small = spec;
    small.samples = 100;
    CHECK_THROWS_AS(ajm::stratified_normal_mc(3, stds, f, small), ajm::ConfigError);
    StratifiedSpec strata = spec;
    strata.strata_per_axis = 0;
    CHECK_THROWS_AS(ajm::stratified_normal_mc(3, stds, f, strata), ajm::ConfigError);

    auto nan_f = [](const double* x) {
        return x[0] > 0.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    };
    CHECK_THROWS_AS(ajm::stratified_normal_mc(3, stds, nan_f, spec), ajm::NumericalError);
}

TEST_CASE("three-detector total probability integrates to one", "[mc]") {
    TripleDetectorConfig cfg;
    cfg.sigma1 = cfg.sigma2 = cfg.sigma3 = 0.8;
    StratifiedSpec spec;
    spec.samples = 1u << 16;
    spec.seed = 5;
    McEstimate n = ajm::mc_norm_total(cfg, spec);
    CHECK(std::fabs(n.value - 1.0) <= std::max(5.0 * n.std_error, 1e-3));

    TripleDetectorConfig bad;
    bad.sigma2 = 0.0;
    CHECK_THROWS_AS(ajm::mc_norm_total(bad, spec), ajm::ConfigError);
}

TEST_CASE("marginal sharpness matches the radial reduction", "[mc]") {
    TripleDetectorConfig cfg;
    cfg.sigma1 = cfg.sigma2 = cfg.sigma3 = 0.7;
    StratifiedSpec spec;
    spec.samples = 1u << 20;
    spec.seed = 17;
    McEstimate a = ajm::mc_marginal_sharpness(cfg, 0, spec);
    // Independent deterministic value for three equal detectors at 0.7.
    CHECK(std::fabs(a.value - 0.459107) <= std::max(5.0 * a.std_error, 2e-3));
    CHECK(a.std_error < 5e-3);

    // Axis exchange: same estimate for axis 1 within combined error.
    McEstimate b = ajm::mc_marginal_sharpness(cfg, 1, spec);
    CHECK(std::fabs(a.value - b.value) <= 5.0 * std::hypot(a.std_error, b.std_error));

    CHECK_THROWS_AS(ajm::mc_marginal_sharpness(cfg, 3, spec), ajm::ConfigError);
}

TEST_CASE("tilted half-space components need equal spreads", "[mc]") {
    StratifiedSpec spec;
    spec.samples = 1u << 18;
    spec.seed = 23;

    TripleDetectorConfig iso;
    iso.sigma1 = iso.sigma2 = iso.sigma3 = 0.7;
    ajm::Vec3 n{1.0, 1.0, 1.0};
    // Rotation invariance for equal spreads: the component along the cut
    // normal equals the axis-aligned sharpness.
    McEstimate ax = ajm::mc_marginal_sharpness(iso, 0, spec);
    ajm::Vec3 nn = n.normalized();
    McEstimate tx = ajm::mc_marginal_component(iso, n, 0, spec);
    McEstimate ty = ajm::mc_marginal_component(iso, n, 1, spec);
    McEstimate tz = ajm::mc_marginal_component(iso, n, 2, spec);
    double along = tx.value * nn.x + ty.value * nn.y + tz.value * nn.z;
    double err = std::sqrt(tx.std_error * tx.std_error + ty.std_error * ty.std_error +
                           tz.std_error * tz.std_error + ax.std_error * ax.std_error);
    CHECK(std::fabs(along - ax.value) <= std::max(5.0 * err, 2e-3));

    TripleDetectorConfig aniso;
    aniso.sigma1 = 0.5;
    aniso.sigma2 = 0.7;
    aniso.sigma3 = 0.9;
    CHECK_THROWS_AS(ajm::mc_marginal_component(aniso, n, 0, spec), ajm::ConfigError);
    CHECK_THROWS_AS(ajm::mc_marginal_component(iso, ajm::Vec3{0, 0, 0}, 0, spec),
                    ajm::ConfigError);
    CHECK_THROWS_AS(ajm::mc_marginal_component(iso, n, -1, spec), ajm::ConfigError);
}
