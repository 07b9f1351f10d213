#include "krein/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace krein {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::converged: return "converged";
        case Verdict::diverged_to_zero: return "diverged-to-zero";
        case Verdict::diverged_to_infinity: return "diverged-to-infinity";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::vector<double> aitken(const std::vector<double>& v) {
    std::vector<double> out(v);
    for (std::size_t i = 2; i < v.size(); ++i) {
        const double a = v[i - 2], b = v[i - 1], c = v[i];
        const double denom = c - 2.0 * b + a;
        const double scale = std::fabs(a) + std::fabs(b) + std::fabs(c);
        if (std::fabs(denom) <= 1e-14 * scale) continue; // keep last value
        const double d = c - b;
        out[i] = c - d * d / denom;
    }
    return out;
}

double slope_fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                        double floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] <= 0.0 || std::fabs(y[i]) <= floor) continue;
        const double lx = std::log(x[i]), ly = std::log(std::fabs(y[i]));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

RichardsonResult richardson_points(const std::vector<double>& h,
                                   const std::vector<double>& values, int order,
                                   double tol) {
    RichardsonResult r;
    const std::size_t n = values.size();
    if (n == 0 || h.size() != n) return r;
    const int jmax = std::min<int>(order, static_cast<int>(n) - 1);
    // table[j][i]: Neville extrapolant at 0 over the window h_i .. h_{i+j}.
    std::vector<std::vector<double>> table(jmax + 1);
    table[0] = values;
    for (int j = 1; j <= jmax; ++j) {
        table[j].resize(n - j);
        for (std::size_t i = 0; i + j < n; ++i) {
            const double denom = h[i] - h[i + j];
            if (denom == 0.0) { table[j][i] = table[j - 1][i + 1]; continue; }
            table[j][i] = (h[i] * table[j - 1][i + 1] - h[i + j] * table[j - 1][i]) / denom;
        }
    }
    r.running.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int j = std::min<int>(jmax, static_cast<int>(i));
        r.running[i] = table[j][i - j];
    }
    r.estimate = r.running.back();
    if (n >= 2) {
        r.last_diff = std::fabs(r.running[n - 1] - r.running[n - 2]);
        r.converged = r.last_diff <= tol * std::max(1.0, std::fabs(r.estimate));
    }
    return r;
}

LimitClassification classify_limit(const std::vector<double>& x,
                                   const std::vector<double>& v, double tol) {
    LimitClassification c;
    const std::size_t n = v.size();
    if (n < 4 || x.size() != n) return c;

    const std::size_t half = n / 2;
    std::vector<double> xt(x.begin() + half, x.end());
    std::vector<double> vt(v.begin() + half, v.end());
    c.slope = slope_fit_loglog(xt, vt);

    const std::vector<double> acc = aitken(v);
    const std::size_t k = std::min<std::size_t>(5, n);
    c.estimate = acc.back();
    double spread = 0.0;
    for (std::size_t i = n - k; i < n; ++i)
        spread = std::max(spread, std::fabs(acc[i] - c.estimate));
    c.spread = spread / std::max(std::fabs(c.estimate), 1e-300);

    double tail_max = 0.0, tail_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = half; i < n; ++i) {
        tail_max = std::max(tail_max, std::fabs(v[i]));
        tail_min = std::min(tail_min, std::fabs(v[i]));
    }
    const double last = std::fabs(v.back());

    if (c.spread <= tol && std::fabs(c.estimate) > 1e-6) {
        c.verdict = Verdict::converged;
    } else if (!std::isnan(c.slope) && c.slope <= -0.15 && last <= 0.8 * tail_max) {
        c.verdict = Verdict::diverged_to_zero;
    } else if (!std::isnan(c.slope) && c.slope >= 0.15 && last >= 1.25 * tail_min) {
        c.verdict = Verdict::diverged_to_infinity;
    } else {
        c.verdict = Verdict::inconclusive;
    }
    return c;
}

} // namespace krein
