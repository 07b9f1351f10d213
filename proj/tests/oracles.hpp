#pragma once

// Closed-form and brute-force reference values, independent of the library
// internals: textbook formulas evaluated directly, bisection on scalar
// equations, and plain-arithmetic point-mass chains.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

// Homogeneous string M(x) = x: phi = cos(sqrt(lambda) x), psi scaled sine;
// hyperbolic pair for negative lambda.
inline double homog_phi(double x, double lambda) {
    if (lambda >= 0.0) return std::cos(std::sqrt(lambda) * x);
    return std::cosh(std::sqrt(-lambda) * x);
}

inline double homog_psi(double x, double lambda) {
    if (lambda == 0.0) return x;
    if (lambda > 0.0) {
        const double s = std::sqrt(lambda);
        return std::sin(s * x) / s;
    }
    const double s = std::sqrt(-lambda);
    return std::sinh(s * x) / s;
}

// Two-segment string, density 1 on [0,1/2] and 4 on [1/2,1]: hyperbolic
// matching at the junction for lambda = -v, v > 0.
inline double twoseg_phi_neg(double v) {
    const double s = std::sqrt(v);
    return std::cosh(0.5 * s) * std::cosh(s) + 0.5 * std::sinh(0.5 * s) * std::sinh(s);
}

inline double twoseg_psi_neg(double v) {
    const double s = std::sqrt(v);
    return (std::sinh(0.5 * s) / s) * std::cosh(s) +
           std::cosh(0.5 * s) * std::sinh(s) / (2.0 * s);
}

inline double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Roots of f on (0, smax] located by grid scan plus bisection.
inline std::vector<double> scan_roots(const std::function<double(double)>& f,
                                      double smax, double step) {
    std::vector<double> roots;
    double prev_s = step * 1e-6;
    double prev_f = f(prev_s);
    for (double s = step; s <= smax; s += step) {
        const double fs = f(s);
        if ((prev_f < 0.0) != (fs < 0.0)) roots.push_back(bisect(f, prev_s, s));
        prev_s = s;
        prev_f = fs;
    }
    return roots;
}

// Eigenvalue equations of the two-segment string in s = sqrt(lambda):
// free-left spectrum solves (3/4)cos(3s/2) + (1/4)cos(s/2) = 0, fixed-left
// solves 3 sin(3s/2) = sin(s/2).
inline std::vector<double> twoseg_mu(int n) {
    auto f = [](double s) {
        return 0.75 * std::cos(1.5 * s) + 0.25 * std::cos(0.5 * s);
    };
    std::vector<double> roots = scan_roots(f, 2.5 * (n + 2), 0.01);
    roots.resize(n);
    for (double& r : roots) r = r * r;
    return roots;
}

inline std::vector<double> twoseg_lambda(int n) {
    auto f = [](double s) {
        return 3.0 * std::sin(1.5 * s) - std::sin(0.5 * s);
    };
    std::vector<double> roots = scan_roots(f, 2.5 * (n + 2), 0.01);
    roots.resize(n);
    for (double& r : roots) r = r * r;
    return roots;
}

// Fundamental values at L of a pure point-mass chain by direct recursion:
// straight lines between atoms, slope drop lambda*m*y at each atom.
struct ChainAtom {
    double x, m;
};

inline double chain_phi(const std::vector<ChainAtom>& atoms, double L, double lambda) {
    double y = 1.0, yp = 0.0, x = 0.0;
    for (const ChainAtom& a : atoms) {
        y += yp * (a.x - x);
        x = a.x;
        yp -= lambda * a.m * y;
    }
    return y + yp * (L - x);
}

inline double chain_psi(const std::vector<ChainAtom>& atoms, double L, double lambda) {
    double y = 0.0, yp = 1.0, x = 0.0;
    for (const ChainAtom& a : atoms) {
        y += yp * (a.x - x);
        x = a.x;
        yp -= lambda * a.m * y;
    }
    return y + yp * (L - x);
}

// First n eigenvalues of the chain by dense scan over lambda.
inline std::vector<double> chain_eigen(const std::vector<ChainAtom>& atoms, double L,
                                       int n, double lam_max, double step,
                                       bool fixed_left) {
    auto f = [&](double lam) {
        return fixed_left ? chain_psi(atoms, L, lam) : chain_phi(atoms, L, lam);
    };
    std::vector<double> out;
    double prev_l = step * 1e-9;
    double prev_f = f(prev_l);
    for (double lam = step; lam <= lam_max && int(out.size()) < n; lam += step) {
        const double fl = f(lam);
        if ((prev_f < 0.0) != (fl < 0.0)) out.push_back(bisect(f, prev_l, lam));
        prev_l = lam;
        prev_f = fl;
    }
    return out;
}

// 2 sum_{j>n} 1/(pi^2 (j-1/2)^2): direct sum plus integral remainder.
inline double homog_length_tail(int n) {
    const int terms = 100000;
    double s = 0.0;
    for (int j = n + terms; j > n; --j) s += 1.0 / ((j - 0.5) * (j - 0.5));
    s += 1.0 / double(n + terms);
    return 2.0 * s / (pi * pi);
}

// Quartic reference products evaluated through the closed form at z = -v:
// numerator (sin^2 x + sinh^2 x)/u^2, denominator cos^2 x + sinh^2 x with
// u = b v^(1/4), x = u/sqrt(2).
inline double quartic_T_neg(double L, double b, double v) {
    const double u = b * std::pow(v, 0.25);
    const double x = u / std::sqrt(2.0);
    const double num = (std::sin(x) * std::sin(x) + std::sinh(x) * std::sinh(x)) / (u * u);
    const double den = std::cos(x) * std::cos(x) + std::sinh(x) * std::sinh(x);
    return L * num / den;
}

} // namespace oracle
