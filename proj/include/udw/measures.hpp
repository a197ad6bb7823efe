#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "density.hpp"
#include "errors.hpp"
#include "linalg4.hpp"
#include "oracle.hpp"
#include "scenario.hpp"

namespace udw {

// All entropies in natural-log units (nats).
struct CorrelationReport {
    double concurrence = 0.0;
    double entropy_a = 0.0;
    double entropy_b = 0.0;
    double entropy_joint = 0.0;
    double mutual_information = 0.0;
};

namespace detail {

inline double xlnx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

inline double clamp_probability(double p, double tol, const char* what) {
    if (p < 0.0) {
        if (p < -tol) throw positivity_error(what);
        return 0.0;
    }
    return p;
}

} // namespace detail

// Concurrence of an X-state. Which anti-diagonal entry competes with which
// population pair depends on where the initial coherence sits: the
// GroundGround family keeps it on the outer block (r14 against r22 r33),
// the GroundExcited family on the inner block (r23 against r11 r44).
inline double concurrence_xstate(const TwoQubitXState& x, InitialFamily family) {
    const bool outer = family == InitialFamily::GroundGround;
    const double coherence = std::abs(outer ? x.r14 : x.r23);
    double radicand = outer ? x.r22 * x.r33 : x.r11 * x.r44;
    if (radicand < 0.0) {
        if (radicand < -1e-10) throw positivity_error("negative concurrence radicand");
        radicand = 0.0;
    }
    return 2.0 * std::max(0.0, coherence - std::sqrt(radicand));
}

inline double entropy_single(const SingleDetectorState& p) {
    return -detail::xlnx(p.p_ground) - detail::xlnx(p.p_excited);
}

// Closed-form spectrum of an X-state: each 2x2 block diagonalizes on its
// own, {r11, r44, r14} and {r22, r33, r23}.
inline std::array<double, 4> xstate_eigenvalues(const TwoQubitXState& x) {
    const double mo = 0.5 * (x.r11 + x.r44);
    const double do_ = std::hypot(0.5 * (x.r11 - x.r44), std::abs(x.r14));
    const double mi = 0.5 * (x.r22 + x.r33);
    const double di = std::hypot(0.5 * (x.r22 - x.r33), std::abs(x.r23));
    return {mo + do_, mo - do_, mi + di, mi - di};
}

inline double entropy_joint(const TwoQubitXState& x) {
    double s = 0.0;
    for (double p : xstate_eigenvalues(x))
        s -= detail::xlnx(detail::clamp_probability(p, 1e-10, "negative joint eigenvalue"));
    return s;
}

inline double mutual_information(double entropy_a, double entropy_b,
                                 double entropy_joint) {
    double i = entropy_a + entropy_b - entropy_joint;
    if (i < -1e-10) throw consistency_error("negative mutual information");
    if (std::abs(i) < 1e-14) i = 0.0;
    return std::max(0.0, i);
}

inline CorrelationReport correlation_report(const TwoQubitXState& x,
                                            const Scenario& s,
                                            const KernelValues& k) {
    CorrelationReport r;
    r.concurrence = concurrence_xstate(x, s.initial.family);
    r.entropy_a = entropy_single(reduce_a(x));
    r.entropy_b = entropy_single(reduce_b(x, s, k));
    r.entropy_joint = entropy_joint(x);
    r.mutual_information =
        mutual_information(r.entropy_a, r.entropy_b, r.entropy_joint);
    if (r.concurrence > 1.0 + 1e-12)
        throw consistency_error("concurrence exceeds 1");
    r.concurrence = std::min(r.concurrence, 1.0);
    if (r.mutual_information >
        2.0 * std::min(r.entropy_a, r.entropy_b) + 1e-10)
        throw consistency_error("mutual information exceeds 2 min(S_A, S_B)");
    if (r.entropy_joint > r.entropy_a + r.entropy_b + 1e-12)
        throw consistency_error("joint entropy violates subadditivity");
    return r;
}

// Wootters concurrence of an arbitrary two-qubit state. The spin-flipped
// matrix is rho~ = (sy x sy) rho* (sy x sy); the eigenvalues of rho rho~
// equal those of the Hermitian product sqrt(rho) rho~ sqrt(rho), which the
// 4x4 eigensolver handles directly. Oracle for concurrence_xstate.
namespace detail {

// Singular values by one-sided Jacobi: rotate column pairs until mutually
// orthogonal, then read off the column norms. Keeps full absolute accuracy
// on the small singular values, which a sqrt-of-eigenvalue route loses.
inline std::array<double, 4> singular_values_one_sided(Mat4c a) {
    for (int sweep = 0; sweep < 40; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                cplx g{};
                double app = 0.0, aqq = 0.0;
                for (int k = 0; k < 4; ++k) {
                    g += std::conj(a[k][p]) * a[k][q];
                    app += std::norm(a[k][p]);
                    aqq += std::norm(a[k][q]);
                }
                if (std::abs(g) <= 1e-15 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * std::abs(g));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx phase = g / std::abs(g);
                for (int k = 0; k < 4; ++k) {
                    const cplx cp = a[k][p];
                    const cplx cq = a[k][q];
                    a[k][p] = c * cp - s * std::conj(phase) * cq;
                    a[k][q] = s * phase * cp + c * cq;
                }
            }
        if (!rotated) break;
    }
    std::array<double, 4> w{};
    for (int j = 0; j < 4; ++j) {
        double n2 = 0.0;
        for (int k = 0; k < 4; ++k) n2 += std::norm(a[k][j]);
        w[static_cast<std::size_t>(j)] = std::sqrt(n2);
    }
    return w;
}

} // namespace detail

inline double concurrence_wootters_general(const Mat4c& rho) {
    const EigenSystem4 es = hermitian_eigensystem(rho);
    double trace = 0.0;
    for (double v : es.values) {
        if (v < -1e-10) throw std::domain_error("matrix is not positive semidefinite");
        trace += v;
    }
    if (std::abs(trace - 1.0) > 1e-10)
        throw std::domain_error("matrix is not trace one");

    // The w-values are the singular values of M^T (sigma_y x sigma_y) M for
    // any M with rho = M M^dagger; each eigenvalue square root stays glued
    // to its own column, so a near-zero eigenvalue contributes a near-zero
    // column instead of an ill-conditioned sqrt at the end.
    Mat4c m;
    for (int j = 0; j < 4; ++j) {
        const double s = std::sqrt(std::max(0.0, es.values[static_cast<std::size_t>(j)]));
        for (int i = 0; i < 4; ++i) m[i][j] = s * es.vectors[i][j];
    }
    static constexpr std::array<double, 4> y = {-1.0, 1.0, 1.0, -1.0};
    Mat4c a = lin::zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx acc{};
            for (int k = 0; k < 4; ++k) acc += m[k][i] * y[k] * m[3 - k][j];
            a[i][j] = acc;
        }

    std::array<double, 4> w = detail::singular_values_one_sided(a);
    std::sort(w.begin(), w.end(), std::greater<>());
    return std::max(0.0, w[0] - w[1] - w[2] - w[3]);
}

} // namespace udw
