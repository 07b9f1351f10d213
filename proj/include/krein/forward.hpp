#pragma once

#include <complex>
#include <vector>

#include "krein/extrapolate.hpp"
#include "krein/measure.hpp"

namespace krein {

// Fundamental system of the string equation at position x and spectral
// parameter lambda: phi(0) = 1, phi'(0) = 0; psi(0) = 0, psi'(0) = 1.
// Derivatives are right-hand.  Actual values are the stored fields times
// exp(log_scale); the scale is shared by all four components, so ratios
// such as psi/phi are scale-free.  log_scale is 0 unless magnitudes forced
// renormalization.  Invariant: phi*psi' - phi'*psi = exp(-2 log_scale).
struct FundamentalPair {
    double x = 0.0;
    double lambda = 0.0;
    double phi = 1.0, phi_prime = 0.0;
    double psi = 0.0, psi_prime = 1.0;
    double log_scale = 0.0;
    long sign_changes_phi = 0; // zeros of phi(., lambda) in (0, x)
    long sign_changes_psi = 0; // zeros of psi(., lambda) in (0, x)
};

struct PropagateOptions {
    double rel_tol = 1e-10;
    bool count_zeros = false; // meaningful for real lambda > 0
};

// Propagate the fundamental system from 0 to L: linear across massless
// gaps, derivative jump y'+ = y'- - lambda m y at atoms, adaptive embedded
// Runge-Kutta through density segments.
FundamentalPair propagate(const MassDistribution& M, double lambda,
                          const PropagateOptions& opts = {});

struct ComplexFundamentalPair {
    std::complex<double> phi, phi_prime, psi, psi_prime;
    double log_scale = 0.0;
};

ComplexFundamentalPair propagate(const MassDistribution& M, std::complex<double> lambda,
                                 double rel_tol = 1e-10);

struct SpectrumResult {
    std::vector<double> values;
    std::vector<double> residuals;      // |characteristic value| at each root
    std::vector<double> bracket_widths; // final bracket width per root
    bool truncated = false;             // finite chain exhausted before n_max
};

// Zeros of phi(L, .): spectrum of the free-left-end / fixed-right-end
// problem.  Oscillation counting guarantees no root is skipped; tol is the
// relative accuracy of each eigenvalue.
SpectrumResult eigenvalues_s1(const MassDistribution& M, int n_max, double tol = 1e-10);

// Zeros of psi(L, .): both ends fixed.
SpectrumResult eigenvalues_s0(const MassDistribution& M, int n_max, double tol = 1e-10);

// Dynamic compliance T(z) = psi(L, z) / phi(L, z).  Real z must stay away
// from the zeros of phi(L, .); nonreal z is always safe.
double compliance_forward(const MassDistribution& M, double z, double rel_tol = 1e-10);
std::complex<double> compliance_forward(const MassDistribution& M, std::complex<double> z,
                                        double rel_tol = 1e-10);

// Density at the origin from the endpoint ratio
//   (phi(L,-z) / (sqrt(z) psi(L,-z)))^2  as z -> +infinity,
// Richardson-extrapolated in 1/sqrt(z) on the given increasing positive
// grid (>= 4 points).  Pure atom chains are reported as diverged-to-zero
// ("zero density at origin").
AsymptoticReport density_at_origin_limit(const MassDistribution& M,
                                         const std::vector<double>& z_grid,
                                         int order = 3, double tol = 1e-6,
                                         double rel_tol = 1e-10);

} // namespace krein
