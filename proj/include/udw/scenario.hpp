#pragma once

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "kernels.hpp"

namespace udw {

// Initial detector-pair state, one of
//   GroundGround:  alpha |g_A g_B> + sqrt(1-alpha^2) e^{i theta} |e_A e_B>
//   GroundExcited: alpha |g_A e_B> + sqrt(1-alpha^2) e^{i theta} |e_A g_B>
// Separable iff alpha is 0 or 1.
enum class InitialFamily { GroundGround, GroundExcited };

struct InitialState {
    double alpha = 1.0;
    double theta = 0.0; // relative phase, [0, 2 pi)
    InitialFamily family = InitialFamily::GroundGround;
};

struct Scenario {
    DetectorParams detector_a;
    DetectorParams detector_b;
    Geometry geometry;
    InitialState initial;
};

// Enforces every type invariant plus the cross-field ones: detector A
// switches first (delay >= 0) and the absolute switching times agree with
// the geometry's delay. Returns the scenario unchanged.
inline const Scenario& validate(const Scenario& s) {
    detail::check_detector(s.detector_a);
    detail::check_detector(s.detector_b);
    detail::check_geometry(s.geometry);
    if (s.geometry.delay < 0.0)
        throw validation_error(
            "delay dtau must be >= 0: detector A switches first; relabel the detectors");
    if (!(std::isfinite(s.initial.alpha) && std::isfinite(s.initial.theta)))
        throw std::domain_error("initial state parameters must be finite");
    if (s.initial.alpha < 0.0 || s.initial.alpha > 1.0)
        throw validation_error("alpha must lie in [0, 1]");
    if (s.initial.theta < 0.0 || s.initial.theta >= 2.0 * std::numbers::pi)
        throw validation_error("theta must lie in [0, 2 pi)");
    const double scale =
        std::max({1.0, std::abs(s.detector_a.tau0), std::abs(s.detector_b.tau0)});
    if (std::abs((s.detector_b.tau0 - s.detector_a.tau0) - s.geometry.delay) >
        1e-12 * scale)
        throw consistency_error("switching times disagree with geometry delay");
    return s;
}

// Interference angle theta_v = Omega_A tau_A0 + Omega_B tau_B0 - theta,
// reduced to [0, 2 pi). For the GroundExcited family Omega_B enters
// negated: that family is the image of GroundGround under a bit flip on B
// combined with Omega_B -> -Omega_B.
inline double interference_phase(const Scenario& s) {
    validate(s);
    const double wb = s.initial.family == InitialFamily::GroundExcited
                          ? -s.detector_b.omega
                          : s.detector_b.omega;
    const double raw = s.detector_a.omega * s.detector_a.tau0 +
                       wb * s.detector_b.tau0 - s.initial.theta;
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(raw, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0; // fmod rounding at the boundary
    return r;
}

// All four kernels of a validated scenario.
inline KernelValues kernel_values(const Scenario& s) {
    validate(s);
    return KernelValues{
        f_kernel(s.detector_a, s.geometry.sigma),
        f_kernel(s.detector_b, s.geometry.sigma),
        theta_kernel(s.detector_a, s.detector_b, s.geometry),
        omega_kernel(s.detector_a, s.detector_b, s.geometry),
    };
}

// Convenience builder in the units every interface uses: sigma = 1,
// tau_A0 = 0, tau_B0 = dtau. Lengths and times are ratios to sigma and the
// gap is Omega*sigma.
inline Scenario make_scenario(double alpha, double theta, InitialFamily family,
                              double omega, double lambda_a, double lambda_b,
                              double eta, double separation, double delay) {
    Scenario s;
    s.detector_a = DetectorParams{lambda_a, eta, omega, 0.0};
    s.detector_b = DetectorParams{lambda_b, eta, omega, delay};
    s.geometry = Geometry{separation, delay, 1.0};
    s.initial = InitialState{alpha, theta, family};
    validate(s);
    return s;
}

} // namespace udw
