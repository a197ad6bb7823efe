#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "udw/kernels.hpp"
#include "udw/specfun.hpp"

using namespace udw;

namespace {
constexpr double pi = std::numbers::pi;
DetectorParams det(double lambda, double eta = 1.0) { return {lambda, eta, 1.0, 0.0}; }
Geometry geo(double l, double t) { return {l, t, 1.0}; }
} // namespace

TEST_CASE("f kernel closed form") {
    CHECK(f_kernel(det(0.0), 1.0) == 1.0);
    CHECK_THAT(f_kernel(det(1.0), 1.0),
               Catch::Matchers::WithinAbs(std::exp(-1.0 / (2.0 * pi * pi)), 1e-16));
    CHECK_THAT(f_kernel(det(1.0), 1.0),
               Catch::Matchers::WithinAbs(0.95060125762662670, 1e-15));
    CHECK(f_kernel(det(100.0), 1.0) < 1e-10);
}

TEST_CASE("f kernel depends on lambda eta / sigma only and decreases") {
    CHECK(f_kernel(det(2.0, 3.0), 1.5) == f_kernel(det(4.0, 1.0), 1.0));
    double prev = 1.0;
    for (double lambda : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double f = f_kernel(det(lambda), 1.0);
        CHECK(f < prev);
        prev = f;
    }
    prev = 1.0;
    for (double eta : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double f = f_kernel(det(1.0, eta), 1.0);
        CHECK(f < prev);
        prev = f;
    }
    CHECK(f_kernel(det(0.0, 5.0), 1.0) == 1.0);
    CHECK(f_kernel(det(5.0), 1.0) < 1.0);
}

TEST_CASE("theta kernel vanishes at zero delay") {
    for (double l : {0.0, 1e-6, 0.5, 1.0, 10.0})
        CHECK(theta_kernel(det(1.0), det(1.0), geo(l, 0.0)) == 0.0);
}

TEST_CASE("theta kernel far-spacelike suppression") {
    CHECK(std::abs(theta_kernel(det(1.0), det(1.0), geo(20.0, 0.1))) < 1e-12);
}

TEST_CASE("theta kernel closed form at the lightlike point") {
    // (1/(4 pi^2)) sqrt(pi/2) [exp(-2) - 1]
    const double expected =
        std::sqrt(pi / 2.0) / (4.0 * pi * pi) * (std::exp(-2.0) - 1.0);
    CHECK_THAT(theta_kernel(det(1.0), det(1.0), geo(1.0, 1.0)),
               Catch::Matchers::WithinRel(expected, 1e-14));
}

TEST_CASE("theta kernel is antisymmetric in the delay") {
    for (double l : {1e-6, 0.3, 1.0, 4.0})
        for (double t : {0.25, 1.0, 2.0, 7.0}) {
            const double plus = theta_kernel(det(1.2), det(0.8), geo(l, t));
            const double minus = theta_kernel(det(1.2), det(0.8), geo(l, -t));
            CHECK(minus == -plus);
        }
}

TEST_CASE("theta and omega kernels scale bilinearly in the couplings") {
    const Geometry g = geo(1.0, 0.7);
    const double base_t = theta_kernel(det(1.0), det(1.0), g);
    const double base_w = omega_kernel(det(1.0), det(1.0), g);
    CHECK_THAT(theta_kernel(det(2.0), det(3.0, 0.5), g),
               Catch::Matchers::WithinRel(base_t * 2.0 * 3.0 * 0.5, 1e-14));
    CHECK_THAT(omega_kernel(det(2.0), det(3.0, 0.5), g),
               Catch::Matchers::WithinRel(base_w * 2.0 * 3.0 * 0.5, 1e-14));
    CHECK(theta_kernel(det(0.0), det(1.0), g) == 0.0);
    CHECK(omega_kernel(det(1.0), det(0.0), g) == 0.0);
}

TEST_CASE("omega kernel sign and closed form at unit separation") {
    const double expected = -(2.0 / (std::numbers::sqrt2 * pi * pi)) *
                            dawson(1.0 / std::numbers::sqrt2);
    const double value = omega_kernel(det(1.0), det(1.0), geo(1.0, 0.0));
    CHECK(value < 0.0);
    CHECK_THAT(value, Catch::Matchers::WithinRel(expected, 1e-14));
}

TEST_CASE("omega kernel L to 0 limit") {
    // D+'(0) = 1 gives -lambda_A lambda_B eta_A eta_B / (pi^2 sigma^2)
    const double limit = -1.0 / (pi * pi);
    const double at_1e3 = omega_kernel(det(1.0), det(1.0), geo(1e-3, 0.0));
    const double at_1e4 = omega_kernel(det(1.0), det(1.0), geo(1e-4, 0.0));
    CHECK_THAT(at_1e3, Catch::Matchers::WithinRel(limit, 1e-6));
    CHECK_THAT(at_1e4, Catch::Matchers::WithinRel(limit, 1e-8));
    CHECK(std::abs(at_1e4 - limit) < std::abs(at_1e3 - limit));
}

TEST_CASE("branch continuity at the small-L switchover") {
    const double seam = 1e-4;
    for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        const double below_t =
            theta_kernel(det(1.0), det(1.0), geo(std::nextafter(seam, 0.0), t));
        const double above_t = theta_kernel(det(1.0), det(1.0), geo(seam, t));
        if (above_t == 0.0)
            CHECK(below_t == 0.0);
        else
            CHECK_THAT(below_t, Catch::Matchers::WithinRel(above_t, 1e-9));
        const double below_w =
            omega_kernel(det(1.0), det(1.0), geo(std::nextafter(seam, 0.0), t));
        const double above_w = omega_kernel(det(1.0), det(1.0), geo(seam, t));
        CHECK_THAT(below_w, Catch::Matchers::WithinRel(above_w, 1e-9));
    }
}

TEST_CASE("kernel argument validation") {
    CHECK_THROWS_AS(f_kernel(det(-1.0), 1.0), validation_error);
    CHECK_THROWS_AS(f_kernel({1.0, 0.0, 1.0, 0.0}, 1.0), validation_error);
    CHECK_THROWS_AS(f_kernel(det(1.0), 0.0), std::domain_error);
    CHECK_THROWS_AS(f_kernel(det(1.0), -2.0), std::domain_error);
    CHECK_THROWS_AS(f_kernel({std::nan(""), 1.0, 1.0, 0.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(theta_kernel(det(1.0), det(1.0), {-1.0, 0.0, 1.0}),
                    validation_error);
    CHECK_THROWS_AS(omega_kernel(det(1.0), det(1.0), {1.0, 0.0, 0.0}),
                    std::domain_error);
}
