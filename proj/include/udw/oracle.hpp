#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "errors.hpp"
#include "kernels.hpp"
#include "linalg4.hpp"

// Verification backends: the kernel integrals evaluated directly in
// momentum space, and a dense Hermitian eigensolver. Nothing here calls
// the closed forms it is meant to check.

namespace udw {

struct QuadratureSettings {
    double max_k = 20.0;     // radial cutoff, units of 1/sigma
    double tolerance = 1e-12; // absolute error target for the dimensionless integral
    int max_depth = 40;      // bisection depth cap per panel
    std::string method = "adaptive-gk15";
};

namespace detail {

inline void check_settings(const QuadratureSettings& q) {
    if (!(std::isfinite(q.max_k) && q.max_k >= 20.0))
        throw validation_error("quadrature cutoff must be at least 20/sigma");
    if (!(std::isfinite(q.tolerance) && q.tolerance > 0.0 && q.tolerance <= 1e-9))
        throw validation_error("quadrature tolerance must lie in (0, 1e-9]");
    if (q.max_depth < 1) throw validation_error("quadrature depth must be positive");
    if (q.method != "adaptive-gk15")
        throw validation_error("unknown quadrature method: " + q.method);
}

// Gauss 7 / Kronrod 15 node pair on [-1, 1].
inline constexpr std::array<double, 8> gk_nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
std::pair<double, double> gk15_panel(const F& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double kron = kronrod_w[7] * f(mid);
    double gauss = gauss_w[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        const double d = h * gk_nodes[i];
        const double pair_sum = f(mid - d) + f(mid + d);
        kron += kronrod_w[i] * pair_sum;
        if (i % 2 == 1) gauss += gauss_w[i / 2] * pair_sum;
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

// Recursive bisection until each panel meets its share of the error
// budget. Returns the integral; accumulates the error estimate actually
// achieved so the caller can compare it with the target.
template <typename F>
double adapt(const F& f, double a, double b, double tol, int depth,
             int max_depth, double& err_sum) {
    const auto [value, err] = gk15_panel(f, a, b);
    if (err <= tol || depth >= max_depth) {
        err_sum += err;
        return value;
    }
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, err_sum) +
           adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, err_sum);
}

template <typename F>
double integrate(const F& f, double a, double b, const QuadratureSettings& q) {
    double err_sum = 0.0;
    const double v = adapt(f, a, b, q.tolerance, 0, q.max_depth, err_sum);
    if (!(err_sum <= q.tolerance * 16.0))
        throw accuracy_error("adaptive quadrature failed to converge", err_sum);
    return v;
}

} // namespace detail

// (1/2) integral of |beta(k)|^2 over momentum space, reduced to the radial
// integral (lambda eta / sigma)^2 / (2 pi^2) * int_0^K du u e^{-u^2/2} in
// the dimensionless variable u = k sigma. exp(-result) is the decoherence
// factor f for this detector.
inline double f_exponent_quadrature(const DetectorParams& d, double sigma,
                                    const QuadratureSettings& q) {
    detail::check_detector(d);
    detail::check_sigma(sigma);
    detail::check_settings(q);
    const double le = d.lambda * d.eta / sigma;
    const double pref = le * le / (2.0 * std::numbers::pi * std::numbers::pi);
    if (pref == 0.0) return 0.0;
    const auto radial = [](double u) { return u * std::exp(-0.5 * u * u); };
    return pref * detail::integrate(radial, 0.0, q.max_k, q);
}

// Commutator kernel as the radial oscillatory integral
//   -(P0 / (2 pi^2 L)) int_0^inf dk e^{-k^2 sigma^2/2} sin(kL) sin(k dtau),
// P0 = lambda_A lambda_B eta_A eta_B, evaluated in u = k sigma.
inline double theta_quadrature(const DetectorParams& da, const DetectorParams& db,
                               const Geometry& g, const QuadratureSettings& q) {
    detail::check_detector(da);
    detail::check_detector(db);
    detail::check_geometry(g);
    detail::check_settings(q);
    if (g.separation <= 0.0)
        throw validation_error("separation must be positive for quadrature");
    const double s2 = g.sigma * g.sigma;
    const double p = da.lambda * da.eta * db.lambda * db.eta / s2;
    if (p == 0.0) return 0.0;
    const double l = g.separation / g.sigma;
    const double t = g.delay / g.sigma;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const auto radial = [l, t](double u) {
        return std::exp(-0.5 * u * u) * std::sin(u * l) * std::sin(u * t);
    };
    return -(p / (2.0 * pi2 * l)) * detail::integrate(radial, 0.0, q.max_k, q);
}

// Anticommutator kernel as the radial integral with the sinc * cos kernel,
//   -(P0 / (pi^2 L)) int_0^inf dk e^{-k^2 sigma^2/2} sin(kL) cos(k dtau).
inline double omega_quadrature(const DetectorParams& da, const DetectorParams& db,
                               const Geometry& g, const QuadratureSettings& q) {
    detail::check_detector(da);
    detail::check_detector(db);
    detail::check_geometry(g);
    detail::check_settings(q);
    if (g.separation <= 0.0)
        throw validation_error("separation must be positive for quadrature");
    const double s2 = g.sigma * g.sigma;
    const double p = da.lambda * da.eta * db.lambda * db.eta / s2;
    if (p == 0.0) return 0.0;
    const double l = g.separation / g.sigma;
    const double t = g.delay / g.sigma;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const auto radial = [l, t](double u) {
        return std::exp(-0.5 * u * u) * std::sin(u * l) * std::cos(u * t);
    };
    return -(p / (pi2 * l)) * detail::integrate(radial, 0.0, q.max_k, q);
}

struct EigenSystem4 {
    std::array<double, 4> values{}; // descending
    Mat4c vectors = lin::identity(); // columns match values
};

namespace detail {

// Cyclic complex Jacobi. Each rotation annihilates one off-diagonal pair;
// the off-diagonal mass falls quadratically, so a handful of sweeps
// reaches machine precision on a 4x4.
inline EigenSystem4 jacobi_hermitian(Mat4c a) {
    Mat4c v = lin::identity();
    const double scale = std::max(1.0, lin::max_abs(a));
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += std::abs(a[p][q]);
        if (off <= 1e-15 * scale) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                const double mag = std::abs(a[p][q]);
                if (mag == 0.0) continue;
                const double phase = std::arg(a[p][q]);
                const double tau = (a[q][q].real() - a[p][p].real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                Mat4c j = lin::identity();
                j[p][p] = c;
                j[q][q] = c;
                j[p][q] = std::polar(s, phase);
                j[q][p] = -std::polar(s, -phase);
                a = lin::mul(lin::adjoint(j), lin::mul(a, j));
                v = lin::mul(v, j);
            }
    }
    EigenSystem4 out;
    std::array<int, 4> order = {0, 1, 2, 3};
    for (int i = 0; i < 4; ++i)
        for (int k = i + 1; k < 4; ++k)
            if (a[order[k]][order[k]].real() > a[order[i]][order[i]].real())
                std::swap(order[i], order[k]);
    for (int i = 0; i < 4; ++i) {
        out.values[i] = a[order[i]][order[i]].real();
        for (int r = 0; r < 4; ++r) out.vectors[r][i] = v[r][order[i]];
    }
    return out;
}

inline void check_hermitian(const Mat4c& m) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (!std::isfinite(m[i][j].real()) || !std::isfinite(m[i][j].imag()))
                throw std::domain_error("matrix entries must be finite");
        }
    if (lin::hermiticity_defect(m) > 1e-12)
        throw std::domain_error("matrix is not Hermitian within 1e-12");
}

} // namespace detail

// Full eigensystem of a 4x4 Hermitian matrix, eigenvalues descending.
inline EigenSystem4 hermitian_eigensystem(const Mat4c& m) {
    detail::check_hermitian(m);
    Mat4c sym;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            sym[i][j] = 0.5 * (m[i][j] + std::conj(m[j][i]));
    return detail::jacobi_hermitian(sym);
}

inline std::array<double, 4> eig_hermitian_4(const Mat4c& m) {
    return hermitian_eigensystem(m).values;
}

} // namespace udw
