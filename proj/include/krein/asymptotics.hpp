#pragma once

#include <functional>
#include <vector>

#include "krein/extrapolate.hpp"
#include "krein/measure.hpp"
#include "krein/twospectra.hpp"

namespace krein {

// B(alpha) = (alpha/(alpha+1)^2)^(alpha/(alpha+1)) / Gamma((2alpha+1)/(alpha+1))^2;
// B(1) = 2/pi.  Relative error <= 1e-12.
double b_alpha(double alpha);

// Maps z > 0 to the compliance value T(-z) on the negative real axis.
using ComplianceSampler = std::function<double(double)>;

ComplianceSampler make_forward_sampler(const MassDistribution& M, double rel_tol = 1e-10);
ComplianceSampler make_product_sampler(const TwoSpectra& S);

// lim_{x->0} M(x)/x^alpha obtained from the decay of the compliance,
//   (B Gamma(1/(a+1)) Gamma((2a+1)/(a+1)))^(a+1) (lim T(-z) z^(1/(a+1)))^-(a+1),
// with the inner limit extrapolated along the increasing z_grid.  A limit
// diverging to zero/infinity maps to the opposite verdict for the mass.
AsymptoticReport kasahara_from_compliance(const ComplianceSampler& T, double alpha,
                                          const std::vector<double>& z_grid,
                                          double tol = 1e-3);

// Same mass limit from the main spectral function along the nodes,
//   (B^-1 lim tau(mu_n + 0) mu_n^(-alpha/(alpha+1)))^-(alpha+1).
AsymptoticReport kasahara_from_tau(const TwoSpectra& S, double alpha, double tol = 1e-3);

// The two empirical hypotheses behind the tau-side limit: the node-indexed
// sequence converges to something finite nonzero, and mu_{n+1}/mu_n -> 1.
struct AlphaConditions {
    AsymptoticReport sequence;
    AsymptoticReport ratio;
    bool pass = false;
};
AlphaConditions check_alpha_conditions(const TwoSpectra& S, double alpha,
                                       double tol = 1e-3);

// lim n/sqrt(mu_n) = (1/pi) integral sqrt(M'(x)) dx (the effective length
// of the absolutely continuous part, divided by pi).
AsymptoticReport krein_effective_length(const std::vector<double>& mu, double tol = 1e-2);

// Companion value computed from the mass distribution itself.
double krein_effective_length(const MassDistribution& M);

enum class DensityClass { positive_density_possible, density_zero_ae, inconclusive };
const char* to_string(DensityClass c);

struct ClassifyOptions {
    double zero_threshold = 0.25; // liminf of n/sqrt(mu_n), relative to its n=1 value
    double trend_margin = 0.05;   // decrease of window minima counted as a trend
};

// Vanishing liminf of n/sqrt(mu_n) means the string carries no absolutely
// continuous mass.  The liminf proxy is the minimum of the normalized
// sequence over the trailing window; a decreasing-minima trend plus a value
// below the threshold reads as zero density, a stable value above it as
// density possible.  Needs >= 10 eigenvalues, inconclusive otherwise.
DensityClass classify_density(const std::vector<double>& mu,
                              const ClassifyOptions& opts = {});

} // namespace krein
