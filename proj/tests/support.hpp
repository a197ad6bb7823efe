#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "udw/density.hpp"
#include "udw/linalg4.hpp"
#include "udw/scenario.hpp"

// Deterministic randomness and tiny reference implementations shared by the
// test binaries. Distribution objects from <random> are not pinned down by
// the standard, so draws go through an explicit 53-bit construction that
// yields the same stream on every platform.

namespace support {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        const double u =
            static_cast<double>(engine_() >> 11) * 0x1.0p-53; // [0, 1)
        return lo + (hi - lo) * u;
    }

    int pick(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  private:
    std::mt19937_64 engine_;
};

// Documented randomized-test ranges: alpha in [0,1], theta in [0, 2 pi),
// Omega sigma in [0,5], lambda in [0,3], eta/sigma in [0.5,2],
// L/sigma in [0.01,12], dtau/sigma in [0,12].
inline udw::Scenario random_scenario(Rng& rng) {
    const double two_pi = 2.0 * std::numbers::pi;
    const udw::InitialFamily family = rng.pick(2) == 0
                                          ? udw::InitialFamily::GroundGround
                                          : udw::InitialFamily::GroundExcited;
    return udw::make_scenario(rng.uniform(0.0, 1.0),
                              rng.uniform(0.0, std::nextafter(two_pi, 0.0)),
                              family,
                              rng.uniform(0.0, 5.0),
                              rng.uniform(0.0, 3.0),
                              rng.uniform(0.0, 3.0),
                              rng.uniform(0.5, 2.0),
                              rng.uniform(0.01, 12.0),
                              rng.uniform(0.0, 12.0));
}

// Power-series Dawson reference, accurate to ~1e-15 for |x| <= 1.5. Kept
// independent of the library's branch logic.
inline double dawson_series(double x) {
    double term = x;
    double sum = x;
    for (int n = 1; n < 60; ++n) {
        term *= -2.0 * x * x / static_cast<double>(2 * n + 1);
        sum += term;
    }
    return sum;
}

// Partial traces of a dense 4x4 in the basis {gg, ge, eg, ee} (Alice's bit
// is the high one).
inline std::array<double, 2> trace_out_b(const udw::Mat4c& m) {
    return {(m[0][0] + m[1][1]).real(), (m[2][2] + m[3][3]).real()};
}

inline std::array<double, 2> trace_out_a(const udw::Mat4c& m) {
    return {(m[0][0] + m[2][2]).real(), (m[1][1] + m[3][3]).real()};
}

// Random unitary via Gram-Schmidt on a random complex matrix; the input
// distribution is immaterial, unitarity is what the tests need.
inline udw::Mat4c random_unitary(Rng& rng) {
    udw::Mat4c m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m[i][j] = udw::cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    for (int c = 0; c < 4; ++c) {
        for (int prev = 0; prev < c; ++prev) {
            udw::cplx dot{};
            for (int r = 0; r < 4; ++r) dot += std::conj(m[r][prev]) * m[r][c];
            for (int r = 0; r < 4; ++r) m[r][c] -= dot * m[r][prev];
        }
        double norm = 0.0;
        for (int r = 0; r < 4; ++r) norm += std::norm(m[r][c]);
        norm = std::sqrt(norm);
        for (int r = 0; r < 4; ++r) m[r][c] /= norm;
    }
    return m;
}

// Random density matrix: normalized Gram matrix of a random complex one.
inline udw::Mat4c random_density(Rng& rng) {
    udw::Mat4c g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g[i][j] = udw::cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    udw::Mat4c rho = udw::lin::mul(g, udw::lin::adjoint(g));
    udw::cplx tr{};
    for (int i = 0; i < 4; ++i) tr += rho[i][i];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho[i][j] /= tr.real();
    return rho;
}

} // namespace support
