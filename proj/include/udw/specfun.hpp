#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace udw {

namespace detail {

// sum_{n>=0} (-2)^n x^(2n+1) / (2n+1)!!, converges for |x| < 1 well inside
// 40 terms (term ratio is 2x^2/(2n+3)).
inline double dawson_maclaurin(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 40; ++n) {
        term *= -2.0 * x2 / static_cast<double>(2 * n + 1);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Rybicki's sampling series D+(x) = lim_{h->0} (1/sqrt(pi)) sum_{n odd}
// exp(-(x - n h)^2)/n. The sampling error scales as exp(-(pi/(2h))^2);
// h = 0.25 puts it near 7e-18. Terms with |x - n h| > 6.5 contribute
// less than 5e-19 each and are dropped.
inline double dawson_rybicki(double x) {
    constexpr double h = 0.25;
    constexpr double window = 6.5;
    long n = static_cast<long>(std::ceil((x - window) / h));
    if (n % 2 == 0) ++n;
    const long hi = static_cast<long>(std::floor((x + window) / h));
    double sum = 0.0;
    for (; n <= hi; n += 2) {
        const double d = x - static_cast<double>(n) * h;
        sum += std::exp(-d * d) / static_cast<double>(n);
    }
    return sum * std::numbers::inv_sqrtpi;
}

// D+(x) = (1/(2x)) sum_{m>=0} (2m-1)!!/(2x^2)^m for large x; at x = 50 the
// sixth term is already below 1e-18 relative.
inline double dawson_asymptotic(double x) {
    const double r = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m <= 6; ++m) {
        term *= static_cast<double>(2 * m - 1) * r;
        sum += term;
    }
    return sum / (2.0 * x);
}

} // namespace detail

// Dawson integral D+(x) = exp(-x^2) * integral_0^x exp(t^2) dt
//                       = (sqrt(pi)/2) exp(-x^2) erfi(x).
//
// Piecewise evaluation with absolute error <= 1e-12 over |x| <= 50:
// Maclaurin series below |x| = 1, Rybicki sampling series up to |x| = 50,
// asymptotic series beyond. erfi itself overflows for moderate x while D+
// stays within [-0.6, 0.6], so no erfi surface is exposed. Oddness is
// exact: the value is computed for |x| and the sign reflected.
inline double dawson(double x) {
    if (!std::isfinite(x)) throw std::domain_error("dawson: argument must be finite");
    const double ax = std::abs(x);
    double v;
    if (ax < 1.0)
        v = detail::dawson_maclaurin(ax);
    else if (ax <= 50.0)
        v = detail::dawson_rybicki(ax);
    else
        v = detail::dawson_asymptotic(ax);
    return x < 0.0 ? -v : v;
}

} // namespace udw
