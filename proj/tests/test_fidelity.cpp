#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ajm/fidelity.hpp"
#include "support/common.hpp"

using ajm::BlochState;
using ajm::Effect;
using ajm::FidelityReport;
using ajm::KernelTable2;
using ajm::PlaneFidelityIntegrals;

TEST_CASE("initial-direction fidelity and its closed form", "[fidelity]") {
    const KernelTable2& t = ajm_test::table07();
    double a_prime = ajm::compute_marginals(t).a_prime;
    double eta = ajm::eta_i_direct(t);
    CHECK(eta == Catch::Approx(0.494558).margin(1e-5));
    CHECK(ajm::eta_i_closed(a_prime) == Catch::Approx(0.25 * M_PI * a_prime));
    // The direct plane integral agrees with pi a' / 4 up to grid resolution.
    CHECK(std::fabs(eta - ajm::eta_i_closed(a_prime)) <= 1e-3);
}

TEST_CASE("state terms of the fidelity vanish by parity", "[fidelity]") {
    PlaneFidelityIntegrals pf = ajm::plane_fidelity_integrals(ajm_test::table07());
    CHECK(std::fabs(pf.state_x) <= 1e-10);
    CHECK(std::fabs(pf.state_y) <= 1e-10);
    CHECK(std::fabs(pf.ef_plane) <= 1e-10);
    CHECK(std::fabs(pf.eg_plane) <= 1e-10);
    CHECK(pf.norm_plane == Catch::Approx(1.0).margin(1e-6));

    ajm_test::TestRng rng(31);
    for (int k = 0; k < 8; ++k) {
        ajm::Vec3 r = 0.9 * rng.normal_vec3().normalized();
        BlochState chi{r.x, r.y, r.z};
        CHECK(ajm::eta_i_with_state(pf, chi) == Catch::Approx(pf.scalar).margin(1e-8));
    }
}

TEST_CASE("final-direction fidelity collapses onto the initial one", "[fidelity]") {
    const KernelTable2& t = ajm_test::table07();
    CHECK(ajm::eta_f_direct(t) == Catch::Approx(ajm::eta_i_direct(t)).margin(1e-10));
    CHECK_THROWS_AS(ajm::eta_f_direct(ajm_test::table_asym()), ajm::ConfigError);
}

TEST_CASE("disturbance fidelity is detector independent", "[fidelity]") {
    CHECK(ajm::eta_d_direct(ajm_test::table07()) == Catch::Approx(0.75).margin(1e-6));
    CHECK(ajm::eta_d_direct(ajm_test::table_asym()) == Catch::Approx(0.75).margin(1e-6));
}

TEST_CASE("error measures from the fidelities", "[fidelity]") {
    ajm::ErrorMeasures em = ajm::error_measures(0.494558, 0.494558, 0.75);
    CHECK(em.delta_ei == Catch::Approx(std::sqrt(0.75 - 0.494558 * 0.494558)));
    CHECK(em.delta_ef == em.delta_ei);
    CHECK(em.delta_d == Catch::Approx(0.612372).margin(1e-6));
    // Fidelities above sqrt(3)/2 have no real error value.
    CHECK_THROWS_AS(ajm::error_measures(0.9, 0.5, 0.75), ajm::ConfigError);
}

TEST_CASE("fidelity report bundles the measures consistently", "[fidelity]") {
    FidelityReport rep = ajm::fidelity_report(ajm_test::table07());
    CHECK(rep.symmetric_detectors);
    CHECK(rep.s == 0.5);
    CHECK(rep.a_prime == Catch::Approx(0.6298190).margin(1e-6));
    CHECK(rep.eta_f == Catch::Approx(rep.eta_i).margin(1e-10));
    CHECK(rep.eta_d == Catch::Approx(0.75).margin(1e-6));
    CHECK(rep.delta_ei == Catch::Approx(std::sqrt(0.75 - rep.eta_i * rep.eta_i)).margin(1e-12));
    CHECK(rep.delta_d == Catch::Approx(std::sqrt(2.0 * (0.75 - rep.eta_d * rep.eta_d))).margin(1e-12));

    FidelityReport asym = ajm::fidelity_report(ajm_test::table_asym());
    CHECK_FALSE(asym.symmetric_detectors);
    CHECK(std::isnan(asym.eta_f));
    CHECK(std::isnan(asym.delta_ef));
    CHECK(asym.eta_d == Catch::Approx(0.75).margin(1e-6));
    CHECK(asym.delta_ei > 0.0);
}

TEST_CASE("direction-resolved density is sinusoidal for equal spreads", "[fidelity]") {
    const KernelTable2& t = ajm_test::table07();
    double a_prime = ajm::compute_marginals(t).a_prime;
    ajm::AnglePovm ap = ajm::angle_povm(t, 128);

    double amp = 0.25 * a_prime;
    double worst_b = 0.0, worst_c = 0.0;
    for (std::size_t k = 0; k < ap.theta.size(); ++k) {
        worst_b = std::max(worst_b, std::fabs(ap.b[k] - amp * std::cos(ap.theta[k])));
        worst_c = std::max(worst_c, std::fabs(ap.c[k] - amp * std::sin(ap.theta[k])));
    }
    CHECK(worst_b <= 5e-6);
    CHECK(worst_c <= 5e-6);

    CHECK_THROWS_AS(ajm::angle_povm(ajm_test::table_asym(), 128), ajm::ConfigError);
    CHECK_THROWS_AS(ajm::angle_povm(t, 130), ajm::ConfigError);
    CHECK_THROWS_AS(ajm::angle_povm(t, 4), ajm::ConfigError);
}

TEST_CASE("angle windows integrate to effects", "[fidelity]") {
    const KernelTable2& t = ajm_test::table07();
    double a_prime = ajm::compute_marginals(t).a_prime;
    // Window sums carry an O(dtheta^2) midpoint factor on the sinusoidal
    // terms, so the checks below need the fine angular grid.
    ajm::AnglePovm ap = ajm::angle_povm(t, 512);

    // The full circle of directions is the identity.
    Effect whole = ajm::angle_povm_window(ap, -M_PI, M_PI);
    CHECK(whole.gamma == Catch::Approx(2.0).margin(1e-5));
    CHECK(whole.v.norm() <= 1e-8);

    // The right half plane is the positive margin effect (1 + a' sx) / 2.
    Effect right = ajm::angle_povm_window(ap, -M_PI / 2.0, M_PI / 2.0);
    CHECK(right.gamma == Catch::Approx(1.0).margin(1e-5));
    CHECK(right.v.x == Catch::Approx(a_prime).margin(1e-5));
    CHECK(std::fabs(right.v.y) <= 1e-8);
    CHECK(ajm::is_valid_effect(right, 1e-5));

    // Complementary windows add up to the identity.
    Effect left = ajm::angle_povm_window(ap, M_PI / 2.0, 3.0 * M_PI / 2.0);
    CHECK(left.gamma + right.gamma == Catch::Approx(whole.gamma).margin(1e-12));
    CHECK(left.v.x + right.v.x == Catch::Approx(whole.v.x).margin(1e-12));

    CHECK_THROWS_AS(ajm::angle_povm_window(ap, 1.0, 0.5), ajm::ConfigError);
}
