#pragma once

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "specfun.hpp"

namespace udw {

// Two pointlike-in-time detectors with Gaussian spatial profiles of width
// sigma, at rest in flat spacetime. Every kernel value is dimensionless and
// depends on the inputs only through the ratios lambda*eta/sigma, L/sigma
// and dtau/sigma.

struct DetectorParams {
    double lambda = 0.0; // coupling strength, dimensionless, >= 0
    double eta = 1.0;    // switching weight (time units), > 0
    double omega = 0.0;  // energy gap (inverse time)
    double tau0 = 0.0;   // proper time of the switching instant
};

struct Geometry {
    double separation = 0.0; // L = |x_B - x_A|, >= 0
    double delay = 0.0;      // dtau = tau_B0 - tau_A0
    double sigma = 1.0;      // smearing width, > 0
};

struct KernelValues {
    double f_a = 1.0;        // vacuum matrix element <0|exp(+-2 Y_A)|0>
    double f_b = 1.0;
    double theta_comm = 0.0; // commutator (signalling) angle Theta
    double omega_anti = 0.0; // anticommutator (correlation) weight omega
};

namespace detail {

inline void check_detector(const DetectorParams& d) {
    if (!(std::isfinite(d.lambda) && std::isfinite(d.eta) &&
          std::isfinite(d.omega) && std::isfinite(d.tau0)))
        throw std::domain_error("detector parameters must be finite");
    if (d.lambda < 0.0)
        throw validation_error("detector coupling lambda must be >= 0");
    if (!(d.eta > 0.0))
        throw validation_error("detector switching weight eta must be > 0");
}

inline void check_sigma(double sigma) {
    if (!std::isfinite(sigma)) throw std::domain_error("sigma must be finite");
    if (!(sigma > 0.0)) throw std::domain_error("sigma must be > 0");
}

// Kernels accept any finite delay; the dtau >= 0 ordering is a scenario
// boundary condition, not a kernel one.
inline void check_geometry(const Geometry& g) {
    if (!(std::isfinite(g.separation) && std::isfinite(g.delay)))
        throw std::domain_error("geometry must be finite");
    if (g.separation < 0.0)
        throw validation_error("separation L must be >= 0");
    check_sigma(g.sigma);
}

constexpr double pi = std::numbers::pi;
constexpr double small_l = 1e-4; // switch to the Taylor branch below L/sigma = 1e-4

} // namespace detail

// f_j = exp(-lambda^2 eta^2 / (2 pi^2 sigma^2)), the probability amplitude
// factor a single switching event leaves on detector j.
inline double f_kernel(const DetectorParams& d, double sigma) {
    detail::check_detector(d);
    detail::check_sigma(sigma);
    const double x = d.lambda * d.eta / sigma;
    return std::exp(-x * x / (2.0 * detail::pi * detail::pi));
}

// Commutator kernel
//   Theta = (lambda_A lambda_B eta_A eta_B / (4 pi^2 L sigma)) sqrt(pi/2)
//           [exp(-(dtau+L)^2/(2 sigma^2)) - exp(-(dtau-L)^2/(2 sigma^2))].
// Even in L, odd in dtau, zero at dtau = 0. Below L/sigma = 1e-4 the two
// Gaussians cancel to O(L) and direct evaluation loses every significant
// digit, so a second-order expansion in L takes over.
inline double theta_kernel(const DetectorParams& da, const DetectorParams& db,
                           const Geometry& g) {
    detail::check_detector(da);
    detail::check_detector(db);
    detail::check_geometry(g);
    const double p = (da.lambda * da.eta / g.sigma) * (db.lambda * db.eta / g.sigma);
    if (p == 0.0) return 0.0;
    const double l = std::abs(g.separation) / g.sigma;
    const double t = g.delay / g.sigma;
    const double c = p / (4.0 * detail::pi * detail::pi) * std::sqrt(detail::pi / 2.0);
    if (l < detail::small_l) {
        const double gauss = std::exp(-0.5 * t * t);
        return c * gauss * (-2.0 * t + t * (3.0 - t * t) * l * l / 3.0);
    }
    const double up = t + l;
    const double um = t - l;
    return (c / l) * (std::exp(-0.5 * up * up) - std::exp(-0.5 * um * um));
}

// Anticommutator kernel
//   omega = -(lambda_A lambda_B eta_A eta_B / (sqrt(2) pi^2 L sigma))
//           [D+((dtau+L)/(sqrt(2) sigma)) - D+((dtau-L)/(sqrt(2) sigma))],
// with the L -> 0 limit -(lambda_A lambda_B eta_A eta_B/(pi^2 sigma^2)) D+'(dtau/(sqrt(2) sigma)).
// The small-L branch keeps the next order as well, using
// D+'(x) = 1 - 2x D+(x) and D+'''(x) = 4x^2 - 4 + (12x - 8x^3) D+(x).
inline double omega_kernel(const DetectorParams& da, const DetectorParams& db,
                           const Geometry& g) {
    detail::check_detector(da);
    detail::check_detector(db);
    detail::check_geometry(g);
    const double p = (da.lambda * da.eta / g.sigma) * (db.lambda * db.eta / g.sigma);
    if (p == 0.0) return 0.0;
    const double l = std::abs(g.separation) / g.sigma;
    const double t = g.delay / g.sigma;
    const double pi2 = detail::pi * detail::pi;
    if (l < detail::small_l) {
        const double x0 = t / std::numbers::sqrt2;
        const double d0 = dawson(x0);
        const double d1 = 1.0 - 2.0 * x0 * d0;
        const double d3 = 4.0 * x0 * x0 - 4.0 + (12.0 * x0 - 8.0 * x0 * x0 * x0) * d0;
        return -(p / pi2) * (d1 + d3 * l * l / 12.0);
    }
    const double xp = (t + l) / std::numbers::sqrt2;
    const double xm = (t - l) / std::numbers::sqrt2;
    return -(p / (std::numbers::sqrt2 * pi2 * l)) * (dawson(xp) - dawson(xm));
}

} // namespace udw
