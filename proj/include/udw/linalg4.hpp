#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace udw {

using cplx = std::complex<double>;
using Vec4c = std::array<cplx, 4>;
using Mat4c = std::array<std::array<cplx, 4>, 4>;

namespace lin {

inline Mat4c zero() {
    Mat4c m{};
    return m;
}

inline Mat4c identity() {
    Mat4c m{};
    for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
    return m;
}

inline Mat4c adjoint(const Mat4c& a) {
    Mat4c r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i][j] = std::conj(a[j][i]);
    return r;
}

inline Mat4c mul(const Mat4c& a, const Mat4c& b) {
    Mat4c r{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a[i][k];
            if (aik == cplx{}) continue;
            for (int j = 0; j < 4; ++j) r[i][j] += aik * b[k][j];
        }
    return r;
}

inline Vec4c mul(const Mat4c& a, const Vec4c& v) {
    Vec4c r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += a[i][j] * v[j];
    return r;
}

// r += w * u v^dagger
inline void add_outer(Mat4c& r, const cplx& w, const Vec4c& u, const Vec4c& v) {
    for (int i = 0; i < 4; ++i) {
        const cplx wu = w * u[i];
        for (int j = 0; j < 4; ++j) r[i][j] += wu * std::conj(v[j]);
    }
}

// Kronecker product of 2x2 factors, Alice slot first: index = 2*i_A + i_B.
inline Mat4c kron2(const std::array<std::array<cplx, 2>, 2>& a,
                   const std::array<std::array<cplx, 2>, 2>& b) {
    Mat4c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
    return r;
}

inline double max_abs(const Mat4c& a) {
    double m = 0.0;
    for (const auto& row : a)
        for (const auto& e : row) m = std::max(m, std::abs(e));
    return m;
}

inline double hermiticity_defect(const Mat4c& a) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m = std::max(m, std::abs(a[i][j] - std::conj(a[j][i])));
    return m;
}

} // namespace lin
} // namespace udw
