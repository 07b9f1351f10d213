#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace krein::detail {

inline double poly_eval(const std::array<double, 4>& c, double x) {
    return ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
}

// Integral of x^k * p(x) over [a, b], exact.
inline double poly_moment(const std::array<double, 4>& c, int k, double a, double b) {
    double ra = 0.0, rb = 0.0;
    for (int j = 0; j < 4; ++j) {
        const int d = j + k + 1;
        ra += c[j] * std::pow(a, d) / d;
        rb += c[j] * std::pow(b, d) / d;
    }
    return rb - ra;
}

inline double poly_integral(const std::array<double, 4>& c, double a, double b) {
    return poly_moment(c, 0, a, b);
}

// Extremum candidates: endpoints plus real critical points inside (a, b).
template <class F>
inline double poly_extremum(const std::array<double, 4>& c, double a, double b, F pick) {
    double m = pick(poly_eval(c, a), poly_eval(c, b));
    const double A = 3.0 * c[3], B = 2.0 * c[2], C = c[1];
    if (A == 0.0) {
        if (B != 0.0) {
            const double r = -C / B;
            if (r > a && r < b) m = pick(m, poly_eval(c, r));
        }
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            for (const double r : {(-B - s) / (2.0 * A), (-B + s) / (2.0 * A)})
                if (r > a && r < b) m = pick(m, poly_eval(c, r));
        }
    }
    return m;
}

inline double poly_min(const std::array<double, 4>& c, double a, double b) {
    return poly_extremum(c, a, b, [](double u, double v) { return std::min(u, v); });
}

inline double poly_max(const std::array<double, 4>& c, double a, double b) {
    return poly_extremum(c, a, b, [](double u, double v) { return std::max(u, v); });
}

} // namespace krein::detail
