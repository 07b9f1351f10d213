#pragma once

#include <complex>
#include <string>
#include <vector>

#include "krein/extrapolate.hpp"

namespace krein {

// Asymptotic family of the spectra beyond the stored prefix.
enum class TailClass { none, quadratic, quartic };

const char* to_string(TailClass c);
TailClass tail_class_from_string(const std::string& name); // throws InvalidInput

// nodes ~ pi^2 n^2 / b^2 + O(n^beta) (quadratic) or pi^4 n^4 / b^4 +
// O(n^beta) (quartic).  beta in [0,1) resp. [0,3); b > 0 unless none.
struct TailModel {
    TailClass cls = TailClass::none;
    double b = 0.0;
    double beta = 0.0;
};

// Two-spectra data (L, {mu_n}, {lambda_n}) with interlacing
// 0 < mu_1 < lambda_1 < mu_2 < ... over the stored prefix; lambda holds as
// many entries as mu, or one fewer.  `complete` marks finite data that is
// the whole spectrum (a finite chain), as opposed to a truncated prefix.
struct TwoSpectra {
    double L = 0.0;
    std::vector<double> mu;
    std::vector<double> lambda;
    TailModel tail;
    bool complete = false;
};

struct SpectraDiagnostics {
    bool pass = false;
    long first_violation = -1; // 1-based eigenvalue index, -1 if none
    std::string message;
    double fitted_slope_mu = 0.0, fitted_slope_lambda = 0.0;
    double fitted_c_mu = 0.0, fitted_c_lambda = 0.0; // |node - ref| <= C n^beta
};

// Structural checks (positivity, interlacing, tail-model ranges) plus an
// empirical fit of the deviations from the reference nodes: log-log slope
// must not exceed beta + 0.1.  Never throws; problems land in the result.
SpectraDiagnostics validate(const TwoSpectra& S);

// Least-squares fit of the reference scale b over the trailing half of the
// data plus a deviation-exponent estimate, clamped to the class range.
TailModel fit_tail_model(const std::vector<double>& mu, const std::vector<double>& lambda,
                         TailClass cls);

struct ComplianceResult {
    double value = 0.0;
    double bound = 0.0; // |computed - true| bound from tail model + data precision
};

struct ComplianceOptions {
    double data_rel_tol = 1e-11; // assumed relative accuracy of each stored node
};

// Dynamic-compliance product T(z) = L prod (1 - z/lambda_k)/(1 - z/mu_k):
// stored prefix exactly, remainder via the closed-form reference tail, the
// perturbation part bounded with the fitted deviation constants.
// z = 0 returns exactly L.  z at a stored pole mu_k is invalid input.
ComplianceResult compliance_product(const TwoSpectra& S, double z,
                                    const ComplianceOptions& opts = {});

// Same product at complex z (no bound); the real axis z >= 0 must stay off
// the poles.  Symmetric: T(conj z) = conj T(z).
std::complex<double> compliance_product(const TwoSpectra& S, std::complex<double> z);

// Jump rho_j = L (lambda_j - mu_j)(mu_j/lambda_j) prod_{k!=j} (1 -
// mu_j/lambda_k)/(1 - mu_j/mu_k) of the main spectral function at mu_j
// (j 1-based within the stored prefix).
double residue_jump(const TwoSpectra& S, long j, const ComplianceOptions& opts = {});

// Main spectral function as a step function: prefix nodes and jumps, plus
// the massless right tail ell_inf = L - sum rho_j/mu_j (tail of the sum
// estimated through the class-specific decay of rho_j/mu_j).
struct SpectralStep {
    std::vector<double> nodes;
    std::vector<double> jumps;
    double ell_inf = 0.0;
    bool complete = false;   // jumps cover the whole spectrum
    double trusted_max = 0.0; // values beyond the last node are flagged
};

SpectralStep build_spectral_step(const TwoSpectra& S, const ComplianceOptions& opts = {});

struct SpectralValue {
    double tau = 0.0;
    bool beyond_prefix = false;
};

// tau(lam) = sum of jumps at nodes < lam, half the jump exactly at a node;
// tau(0) = 0, constant left of the first node.
SpectralValue spectral_function(const SpectralStep& step, double lam);

// Recover tau(lam) from the boundary values of the compliance product:
// (1/pi) integral_0^lam Im T(t + i eps) dt, extrapolated along eps_grid
// (strictly decreasing positives) to eps -> 0.  Independent check of
// spectral_function away from the nodes.
AsymptoticReport stieltjes_inversion(const TwoSpectra& S, double lam,
                                     const std::vector<double>& eps_grid);

struct BarcilonResult {
    double p0 = 0.0;
    double bound = 0.0;
};

struct BarcilonOptions {
    bool use_tail = true; // false: raw prefix partial product, bound covers the cut tail
    double data_rel_tol = 1e-11;
};

// Density at the left end from the two spectra:
// p(0) = (1/(L^2 mu_1)) prod lambda_n^2/(mu_n mu_{n+1}), prefix times the
// b-independent Wallis-type reference tail (pi^2/4 quadratic, pi^4/16
// quartic as full-product constants).
BarcilonResult barcilon_product(const TwoSpectra& S, const BarcilonOptions& opts = {});

struct GapProbe {
    double x = 0.0;
    double im_u = 0.0;   // arg T(x + i eps)
    int expected = -1;   // 1: pole-zero gap (pi), 0: zero-pole gap (0), -1: n/a
    bool ok = false;
};

struct LogComplianceDiagnostics {
    std::vector<GapProbe> probes;
    bool u_negative_on_negative_axis = false; // log(T(-1)/L) < 0
    double log_sum_mismatch = 0.0; // |log T - sum of factor logs| at z = -1
    bool pass = false;
};

// Boundary behaviour of U = log(T/L): Im U(x + i eps) is pi inside
// (mu_j, lambda_j), 0 inside (lambda_j, mu_{j+1}); U(-1) < 0 and matches
// the sum of individual factor logs.
LogComplianceDiagnostics log_compliance_check(const TwoSpectra& S,
                                              const std::vector<double>& points,
                                              double eps, double tol = 1e-2);

} // namespace krein
