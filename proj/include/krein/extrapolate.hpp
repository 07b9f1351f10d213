#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace krein {

enum class Verdict { converged, diverged_to_zero, diverged_to_infinity, inconclusive };

const char* to_string(Verdict v);

// Result of a numerical limit estimation along a parameter sequence.
// Invariant: verdict == converged implies the last two table entries agree
// within `tolerance` (relative to the estimate).
struct AsymptoticReport {
    double estimate = 0.0;
    std::string method;
    std::vector<std::pair<double, double>> table; // (parameter, running estimate)
    Verdict verdict = Verdict::inconclusive;
    double tolerance = 0.0;
    std::string note;
};

// Aitken delta-squared acceleration.  Output has the same length as the
// input; entry i holds the transform of (v[i-2], v[i-1], v[i]) when the
// second difference is resolvable and falls back to v[i] otherwise.
std::vector<double> aitken(const std::vector<double>& v);

// Least-squares slope of log|y| against log(x).  Points with x <= 0 or
// |y| <= floor are skipped; returns NaN when fewer than two points remain.
double slope_fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                        double floor = 1e-300);

// Richardson extrapolation to h = 0 for values f(h_i), h strictly
// decreasing positive, assuming an expansion f = A + c1 h + c2 h^2 + ...
// (Neville tableau evaluated at 0).  running[i] is the extrapolant of the
// highest feasible order (capped at `order`) using data up to index i;
// estimate = running.back(); converged when the last two running values
// agree within tol relative to the estimate.
struct RichardsonResult {
    std::vector<double> running;
    double estimate = 0.0;
    double last_diff = 0.0;
    bool converged = false;
};

RichardsonResult richardson_points(const std::vector<double>& h,
                                   const std::vector<double>& values, int order,
                                   double tol);

// Trend classification of a sampled sequence v(x), x increasing positive.
// Convergence: the Aitken-refined tail (window of 5) has relative spread
// <= tol and the limit is bounded away from 0 (threshold 1e-6).
// Divergence verdicts come from the log-log slope over the trailing half
// (|slope| >= 0.15) combined with overall decline/growth of the tail.
struct LimitClassification {
    Verdict verdict = Verdict::inconclusive;
    double estimate = 0.0;  // refined tail value
    double spread = 0.0;    // relative spread of the decision window
    double slope = 0.0;     // log-log slope over the trailing half
};

LimitClassification classify_limit(const std::vector<double>& x,
                                   const std::vector<double>& v, double tol);

} // namespace krein
