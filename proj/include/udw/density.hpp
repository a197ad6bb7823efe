#pragma once

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "linalg4.hpp"
#include "scenario.hpp"

namespace udw {

// Post-interaction joint state in the basis {|gg>, |ge>, |eg>, |ee>}.
// Only the diagonal and the anti-diagonal are ever populated; Hermiticity
// is structural (upper coherences stored, lower ones implied).
struct TwoQubitXState {
    double r11 = 0.0;
    double r22 = 0.0;
    double r33 = 0.0;
    double r44 = 0.0;
    cplx r14{};
    cplx r23{};
};

struct SingleDetectorState {
    double p_ground = 0.0;
    double p_excited = 0.0;
};

namespace detail {

inline SingleDetectorState make_single(double pg, double pe) {
    for (double* p : {&pg, &pe}) {
        if (!std::isfinite(*p)) throw std::domain_error("probability must be finite");
        if (*p < 0.0) {
            if (*p < -1e-12) throw positivity_error("negative probability");
            *p = 0.0;
        }
        if (*p > 1.0) {
            if (*p > 1.0 + 1e-12) throw validation_error("probability exceeds 1");
            *p = 1.0;
        }
    }
    if (std::abs(pg + pe - 1.0) > 1e-12)
        throw consistency_error("probabilities must sum to 1");
    return SingleDetectorState{pg, pe};
}

// Kernels must belong to the scenario they are combined with. The f values
// are cheap to recompute, so a sigma-normalization mismatch is caught
// directly; the commutator values are constrained only where they are
// forced (no coupling product means no cross terms), which leaves room for
// tests to feed synthetic Theta/omega.
inline void check_kernels(const Scenario& s, const KernelValues& k) {
    if (!(std::isfinite(k.f_a) && std::isfinite(k.f_b) &&
          std::isfinite(k.theta_comm) && std::isfinite(k.omega_anti)))
        throw std::domain_error("kernel values must be finite");
    if (!(k.f_a > 0.0 && k.f_a <= 1.0 && k.f_b > 0.0 && k.f_b <= 1.0))
        throw consistency_error("f kernels must lie in (0, 1]");
    const double fa = f_kernel(s.detector_a, s.geometry.sigma);
    const double fb = f_kernel(s.detector_b, s.geometry.sigma);
    if (std::abs(k.f_a - fa) > 1e-9 * fa || std::abs(k.f_b - fb) > 1e-9 * fb)
        throw consistency_error("kernel/scenario mismatch: f values disagree");
    const double prod = s.detector_a.lambda * s.detector_b.lambda;
    if (prod == 0.0 && (k.theta_comm != 0.0 || k.omega_anti != 0.0))
        throw consistency_error("kernel/scenario mismatch: cross kernels without coupling");
}

// Element equations for the GroundGround family. r14 carries the physical
// phase of the |gg><ee| channel and r23 the physical phase of the
// |ge><eg| channel, which differ in the sign of the Omega_B term.
inline TwoQubitXState assemble_gg(double alpha, double theta, double omega_a,
                                  double omega_b, double tau_a0, double tau_b0,
                                  const KernelValues& k) {
    const double a2 = 2.0 * alpha * alpha - 1.0;
    const double c = alpha * std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const double phi = omega_a * tau_a0 + omega_b * tau_b0;
    const double psi = omega_a * tau_a0 - omega_b * tau_b0;
    const double vt = phi - theta; // interference angle

    const double fa = k.f_a;
    const double fb = k.f_b;
    const double ch = std::cosh(k.omega_anti);
    const double sh = std::sinh(k.omega_anti);
    const double c2 = std::cos(2.0 * k.theta_comm);
    const double s2 = std::sin(2.0 * k.theta_comm);
    const double x = fa * fb * ch;
    const double P = 1.0 + x;
    const double M = 1.0 - x;
    const double Q = fa + fb * c2;
    const double R = fa - fb * c2;
    const double cv = std::cos(vt);
    const double sv = std::sin(vt);
    const double W = fb * (fa * sh * cv - s2 * sv);
    const double V = fb * (fa * sh * cv + s2 * sv);

    TwoQubitXState r;
    r.r11 = 0.25 * (P + a2 * Q) + 0.5 * c * W;
    r.r22 = 0.25 * (M + a2 * R) - 0.5 * c * W;
    r.r33 = 0.25 * (M - a2 * R) - 0.5 * c * V;
    r.r44 = 0.25 * (P - a2 * Q) + 0.5 * c * V;
    const cplx cross = 0.25 * fb * cplx{fa * sh, a2 * s2};
    const cplx b14 = cross + 0.5 * c * cplx{P * cv, Q * sv};
    const cplx b23 = -cross + 0.5 * c * cplx{M * cv, R * sv};
    r.r14 = std::polar(1.0, -phi) * b14;
    r.r23 = std::polar(1.0, -psi) * b23;
    return r;
}

inline void finalize(TwoQubitXState& x) {
    const double tr = x.r11 + x.r22 + x.r33 + x.r44;
    if (std::abs(tr - 1.0) > 1e-12)
        throw consistency_error("assembled state is not trace one");
    for (double* p : {&x.r11, &x.r22, &x.r33, &x.r44}) {
        if (*p < 0.0) {
            // floating-point noise is clamped, anything worse is a defect
            if (*p < -1e-12) throw positivity_error("negative population");
            *p = 0.0;
        }
    }
    if (std::norm(x.r14) > x.r11 * x.r44 + 1e-10 ||
        std::norm(x.r23) > x.r22 * x.r33 + 1e-10)
        throw positivity_error("coherence exceeds population bound");
}

} // namespace detail

// Closed-form assembly. The GroundExcited family is the GroundGround one
// with Omega_B negated, conjugated by a bit flip on detector B; the flip
// permutes basis slots 1<->2 and 3<->4, which swaps populations pairwise
// and exchanges the two coherences.
inline TwoQubitXState assemble_xstate(const Scenario& s, const KernelValues& k) {
    validate(s);
    detail::check_kernels(s, k);
    const auto& a = s.detector_a;
    const auto& b = s.detector_b;
    TwoQubitXState x;
    if (s.initial.family == InitialFamily::GroundGround) {
        x = detail::assemble_gg(s.initial.alpha, s.initial.theta, a.omega, b.omega,
                                a.tau0, b.tau0, k);
    } else {
        const TwoQubitXState y = detail::assemble_gg(
            s.initial.alpha, s.initial.theta, a.omega, -b.omega, a.tau0, b.tau0, k);
        x = TwoQubitXState{y.r22, y.r11, y.r44, y.r33, y.r23, y.r14};
    }
    detail::finalize(x);
    return x;
}

inline TwoQubitXState assemble_xstate(const Scenario& s) {
    return assemble_xstate(s, kernel_values(s));
}

// Operator-sum assembly. The evolution operator splits into four jump
// terms M_(j,k) (monopole flips on A and/or B) weighted by field matrix
// elements, so the final state is
//   rho = sum_{jklm} f_(jklm) M_(l,m) rho0 M_(j,k)^dagger,
//   f_(jklm) = (1/16) [ (1 + jl + km + jklm)
//                     + (1 + jl)(k + m) f_A
//                     + ((l + jkm) e^{2i Theta} + (j + klm) e^{-2i Theta}) f_B
//                     + ((jk + lm) e^{omega} + (jm + kl) e^{-omega}) f_A f_B ].
// Eight sign patterns vanish identically; they are asserted, not assumed,
// as is the X shape of the result. Shares nothing with assemble_xstate
// beyond the four scalar kernels.
inline TwoQubitXState assemble_xstate_operator_product(const Scenario& s,
                                               const KernelValues& k) {
    validate(s);
    detail::check_kernels(s, k);

    const double fa = k.f_a;
    const double fb = k.f_b;
    const cplx e2t = std::polar(1.0, 2.0 * k.theta_comm);
    const double ew = std::exp(k.omega_anti);

    cplx f[2][2][2][2]; // index 0 <-> sign +1, index 1 <-> sign -1
    static constexpr int sgn[2] = {+1, -1};
    for (int ja = 0; ja < 2; ++ja)
        for (int ka = 0; ka < 2; ++ka)
            for (int la = 0; la < 2; ++la)
                for (int ma = 0; ma < 2; ++ma) {
                    const int j = sgn[ja], kk = sgn[ka], l = sgn[la], m = sgn[ma];
                    const double c0 = 1.0 + j * l + kk * m + j * kk * l * m;
                    const double ca = (1.0 + j * l) * (kk + m);
                    const cplx cb = static_cast<double>(l + j * kk * m) * e2t +
                                    static_cast<double>(j + kk * l * m) * std::conj(e2t);
                    const double cw =
                        (j * kk + l * m) * ew + (j * m + kk * l) / ew;
                    f[ja][ka][la][ma] =
                        (c0 + ca * fa + cb * fb + cw * fa * fb) / 16.0;
                    const bool parity_odd = ((ja + ka + la + ma) % 2) != 0;
                    if (parity_odd && std::abs(f[ja][ka][la][ma]) > 1e-12)
                        throw consistency_error(
                            "odd-parity field moment failed to vanish");
                }

    using M2 = std::array<std::array<cplx, 2>, 2>;
    const M2 id2{{{cplx{1.0}, cplx{}}, {cplx{}, cplx{1.0}}}};
    const auto mu = [](double omega, double tau0) -> M2 {
        // |e><g| e^{i Omega tau0} + |g><e| e^{-i Omega tau0} in the {g, e} basis
        return M2{{{cplx{}, std::polar(1.0, -omega * tau0)},
                   {std::polar(1.0, omega * tau0), cplx{}}}};
    };
    const M2 mu_a = mu(s.detector_a.omega, s.detector_a.tau0);
    const M2 mu_b = mu(s.detector_b.omega, s.detector_b.tau0);

    // first sign switches the mu_B factor, second the mu_A factor
    const Mat4c jump[2][2] = {{lin::identity(), lin::kron2(mu_a, id2)},
                              {lin::kron2(id2, mu_b), lin::kron2(mu_a, mu_b)}};

    const double alpha = s.initial.alpha;
    const cplx beta = std::polar(std::sqrt(std::max(0.0, 1.0 - alpha * alpha)),
                                 s.initial.theta);
    Vec4c psi{};
    if (s.initial.family == InitialFamily::GroundGround) {
        psi[0] = alpha;
        psi[3] = beta;
    } else {
        psi[1] = alpha;
        psi[2] = beta;
    }

    Vec4c w[2][2];
    for (int ja = 0; ja < 2; ++ja)
        for (int ka = 0; ka < 2; ++ka) w[ja][ka] = lin::mul(jump[ja][ka], psi);

    Mat4c rho = lin::zero();
    for (int ja = 0; ja < 2; ++ja)
        for (int ka = 0; ka < 2; ++ka)
            for (int la = 0; la < 2; ++la)
                for (int ma = 0; ma < 2; ++ma)
                    lin::add_outer(rho, f[ja][ka][la][ma], w[la][ma], w[ja][ka]);

    for (int i = 0; i < 4; ++i) {
        if (std::abs(rho[i][i].imag()) > 1e-12)
            throw consistency_error("population acquired an imaginary part");
        for (int j = 0; j < 4; ++j) {
            const bool on_x = (i == j) || (i + j == 3);
            if (!on_x && std::abs(rho[i][j]) > 1e-12)
                throw consistency_error("assembled matrix is not X shaped");
        }
    }

    TwoQubitXState x{rho[0][0].real(), rho[1][1].real(), rho[2][2].real(),
                     rho[3][3].real(), rho[0][3], rho[1][2]};
    detail::finalize(x);
    return x;
}

// Dense 4x4 form of an X-state.
inline Mat4c materialize(const TwoQubitXState& x) {
    Mat4c m = lin::zero();
    m[0][0] = x.r11;
    m[1][1] = x.r22;
    m[2][2] = x.r33;
    m[3][3] = x.r44;
    m[0][3] = x.r14;
    m[3][0] = std::conj(x.r14);
    m[1][2] = x.r23;
    m[2][1] = std::conj(x.r23);
    return m;
}

// Alice's reduced state: trace over B.
inline SingleDetectorState reduce_a(const TwoQubitXState& x) {
    return detail::make_single(x.r11 + x.r22, x.r33 + x.r44);
}

// Bob's reduced state, evaluated through the closed form
//   p_g = (1/2)[1 + (2 alpha^2 - 1) f_B cos(2 Theta)]
//         - alpha sqrt(1-alpha^2) f_B sin(2 Theta) sin(theta_v)
// (signs flip for the GroundExcited family, whose interference angle
// already carries the negated Omega_B) and cross-checked against the
// partial trace of x.
inline SingleDetectorState reduce_b(const TwoQubitXState& x, const Scenario& s,
                                    const KernelValues& k) {
    validate(s);
    detail::check_kernels(s, k);
    const double sign =
        s.initial.family == InitialFamily::GroundGround ? 1.0 : -1.0;
    const double alpha = s.initial.alpha;
    const double a2 = 2.0 * alpha * alpha - 1.0;
    const double c = alpha * std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const double vt = interference_phase(s);
    const double pg = 0.5 * (1.0 + sign * a2 * k.f_b * std::cos(2.0 * k.theta_comm)) -
                      sign * c * k.f_b * std::sin(2.0 * k.theta_comm) * std::sin(vt);
    if (std::abs(pg - (x.r11 + x.r33)) > 1e-12)
        throw consistency_error("closed-form reduction disagrees with the state");
    return detail::make_single(pg, 1.0 - pg);
}

} // namespace udw
