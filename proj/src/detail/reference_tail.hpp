#pragma once

// Closed-form reference-spectra machinery shared by the two-spectra
// formulas: stable logs of the classical products prod_{n>K} (1 - z/node_n)
// for the node families
//   quadratic: mu_n = pi^2 (n-1/2)^2 / b^2,  lambda_n = pi^2 n^2 / b^2
//   quartic:   mu_n = pi^4 (n-1/2)^4 / b^4,  lambda_n = pi^4 n^4 / b^4
// whose full products are sin/cos/sinh/cosh expressions.  For z > 0 the
// closed form and the divided-out prefix factor nearest to z both vanish at
// a node; the shared offset delta is computed once so their ratio
// sin(delta)/delta stays accurate to rounding.

#include <cmath>
#include <complex>

namespace krein::detail {

// value = sign * exp(log_abs); sign 0 encodes an exact zero.
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
};

inline double log_sinh(double x) { // x >= 0
    return x > 0.5 ? x + std::log1p(-std::exp(-2.0 * x)) - M_LN2 : std::log(std::sinh(x));
}
inline double log_cosh(double x) {
    x = std::fabs(x);
    return x > 0.5 ? x + std::log1p(std::exp(-2.0 * x)) - M_LN2 : std::log(std::cosh(x));
}

inline std::complex<double> clog_sin(std::complex<double> w) {
    const std::complex<double> iw(-w.imag(), w.real());
    const std::complex<double> twoi(0.0, 2.0);
    if (w.imag() > 0.5) return -iw + std::log((std::exp(2.0 * iw) - 1.0) / twoi);
    if (w.imag() < -0.5) return iw + std::log((1.0 - std::exp(-2.0 * iw)) / twoi);
    return std::log(std::sin(w));
}
inline std::complex<double> clog_cos(std::complex<double> w) {
    const std::complex<double> iw(-w.imag(), w.real());
    if (w.imag() > 0.5) return -iw + std::log((1.0 + std::exp(2.0 * iw)) / 2.0);
    if (w.imag() < -0.5) return iw + std::log((1.0 + std::exp(-2.0 * iw)) / 2.0);
    return std::log(std::cos(w));
}
inline std::complex<double> clog_sinh(std::complex<double> w) {
    if (w.real() > 0.5) return w + std::log((1.0 - std::exp(-2.0 * w)) / 2.0);
    if (w.real() < -0.5) return -w + std::log((std::exp(2.0 * w) - 1.0) / 2.0);
    return std::log(std::sinh(w));
}
inline std::complex<double> clog_cosh(std::complex<double> w) {
    const std::complex<double> a = w.real() >= 0.0 ? w : -w;
    if (a.real() > 0.5) return a + std::log((1.0 + std::exp(-2.0 * a)) / 2.0);
    return std::log(std::cosh(a));
}

enum class NodeFamily { quad_mu, quad_lambda, quart_mu, quart_lambda };

inline bool family_is_quartic(NodeFamily f) {
    return f == NodeFamily::quart_mu || f == NodeFamily::quart_lambda;
}
inline bool family_is_half(NodeFamily f) { // nodes indexed by n - 1/2
    return f == NodeFamily::quad_mu || f == NodeFamily::quart_mu;
}

// pi*n or pi*(n-1/2): position of node n on the s = b z^(1/2 or 1/4) axis.
inline double node_coord(NodeFamily f, long n) {
    return M_PI * (family_is_half(f) ? n - 0.5 : static_cast<double>(n));
}
inline double node_value(NodeFamily f, long n, double b) {
    const double c = node_coord(f, n) / b;
    return family_is_quartic(f) ? c * c * c * c : c * c;
}

// log of prod_{n>K} (1 - z/node_n), real z.  Exact 1 at z = 0.
inline SignedLog ref_tail_log(NodeFamily f, double b, long K, double z) {
    SignedLog out;
    if (z == 0.0) return out;
    const bool quart = family_is_quartic(f);

    if (z < 0.0) { // all factors positive and > 1; pure log arithmetic
        const double v = -z;
        const double s = b * (quart ? std::pow(v, 0.25) : std::sqrt(v));
        switch (f) {
        case NodeFamily::quad_lambda: out.log_abs = log_sinh(s) - std::log(s); break;
        case NodeFamily::quad_mu: out.log_abs = log_cosh(s); break;
        case NodeFamily::quart_lambda: {
            const double x = s / M_SQRT2; // prod = (sin^2 x + sinh^2 x)/s^2
            const double sx = std::sin(x);
            out.log_abs = x > 0.5
                              ? 2.0 * log_sinh(x) + std::log1p(sx * sx / (std::sinh(x) * std::sinh(x)))
                              : std::log(sx * sx + std::sinh(x) * std::sinh(x));
            out.log_abs -= 2.0 * std::log(s);
            break;
        }
        case NodeFamily::quart_mu: {
            const double x = s / M_SQRT2; // prod = cos^2 x + sinh^2 x
            const double cx = std::cos(x);
            out.log_abs = x > 0.5
                              ? 2.0 * log_sinh(x) + std::log1p(cx * cx / (std::sinh(x) * std::sinh(x)))
                              : std::log(cx * cx + std::sinh(x) * std::sinh(x));
            break;
        }
        }
        for (long n = 1; n <= K; ++n) out.log_abs -= std::log1p(v / node_value(f, n, b));
        return out;
    }

    // z > 0: factor out sin(delta)/delta against the nearest node.
    const double s = b * (quart ? std::pow(z, 0.25) : std::sqrt(z));
    const long m = family_is_half(f) ? std::lround(s / M_PI + 0.5) : std::lround(s / M_PI);
    const double delta = s - node_coord(f, m); // |delta| <= pi/2
    const int sd = delta < 0.0 ? -1 : 1;

    // closed form: |sin s| (or |cos s|) == |sin delta|; parity gives the sign
    out.sign = (m % 2 != 0) ? -1 : 1;
    switch (f) {
    case NodeFamily::quad_lambda: out.log_abs = -std::log(s); break;
    case NodeFamily::quad_mu: out.log_abs = 0.0; break;
    case NodeFamily::quart_lambda: out.log_abs = log_sinh(s) - 2.0 * std::log(s); break;
    case NodeFamily::quart_mu: out.log_abs = log_cosh(s); break;
    }

    const bool paired = m >= 1 && m <= K;
    if (paired) {
        const double c = node_coord(f, m);
        const double pair = delta == 0.0 ? 0.0 : std::log(std::fabs(std::sin(delta) / delta));
        out.log_abs += pair - (std::log(c + s) - 2.0 * std::log(c));
        if (quart) out.log_abs -= std::log1p((s / c) * (s / c));
        out.sign *= -1; // sign(sin delta)/sign(-delta) collapses to -1
    } else {
        if (delta == 0.0) return {-HUGE_VAL, 0}; // exactly on a node beyond K
        out.log_abs += std::log(std::fabs(std::sin(delta)));
        out.sign *= sd;
    }

    for (long n = 1; n <= K; ++n) {
        if (paired && n == m) continue;
        const double c = node_coord(f, n);
        const double t = c - s;
        out.log_abs -= std::log(std::fabs(t)) + std::log(c + s) - 2.0 * std::log(c);
        if (quart) out.log_abs -= std::log1p((s / c) * (s / c));
        if (t < 0.0) out.sign = -out.sign;
    }
    return out;
}

// Principal-branch complex log of prod_{n>K} (1 - z/node_n).  Used off the
// positive real axis where no factor vanishes.
inline std::complex<double> ref_tail_clog(NodeFamily f, double b, long K,
                                          std::complex<double> z) {
    const bool quart = family_is_quartic(f);
    const std::complex<double> s =
        b * (quart ? std::pow(z, 0.25) : std::sqrt(z));
    std::complex<double> sum;
    switch (f) {
    case NodeFamily::quad_lambda: sum = clog_sin(s) - std::log(s); break;
    case NodeFamily::quad_mu: sum = clog_cos(s); break;
    case NodeFamily::quart_lambda: sum = clog_sin(s) + clog_sinh(s) - 2.0 * std::log(s); break;
    case NodeFamily::quart_mu: sum = clog_cos(s) + clog_cosh(s); break;
    }
    for (long n = 1; n <= K; ++n) sum -= std::log(1.0 - z / node_value(f, n, b));
    return sum;
}

// Hurwitz zeta(s, a) = sum_{j>=0} (a+j)^{-s} for integer s in {2, 3}:
// direct summation up the tail plus an Euler-Maclaurin remainder.
inline double hurwitz_zeta(int s, double a) {
    double sum = 0.0;
    while (a < 25.0) {
        sum += std::pow(a, -s);
        a += 1.0;
    }
    const double f = std::pow(a, -s);
    const double fp = -s * f / a;
    const double fppp = -static_cast<double>(s) * (s + 1) * (s + 2) * f / (a * a * a);
    return sum + a * f / (s - 1.0) + 0.5 * f - fp / 12.0 + fppp / 720.0;
}

} // namespace krein::detail
