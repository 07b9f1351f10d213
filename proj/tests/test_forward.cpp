#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "krein/errors.hpp"
#include "krein/forward.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>

using namespace krein;

static MassDistribution homog(double L = 1.0) {
    return MassDistribution(L, {DensitySegment{0.0, L, {1.0, 0.0, 0.0, 0.0}}}, {});
}

static MassDistribution twoseg() {
    return MassDistribution(1.0,
                            {DensitySegment{0.0, 0.5, {1.0, 0.0, 0.0, 0.0}},
                             DensitySegment{0.5, 1.0, {4.0, 0.0, 0.0, 0.0}}},
                            {});
}

static MassDistribution single_atom() {
    return MassDistribution(2.0, {}, {PointMass{1.0, 1.0}});
}

TEST_CASE("fundamental pair matches the trigonometric closed form") {
    MassDistribution M = homog();
    for (double lam : {25.0, -25.0, 0.0, 3.7}) {
        FundamentalPair fp = propagate(M, lam);
        const double s = std::exp(fp.log_scale);
        CHECK(fp.phi * s == doctest::Approx(oracle::homog_phi(1.0, lam)).epsilon(1e-9));
        CHECK(fp.psi * s == doctest::Approx(oracle::homog_psi(1.0, lam)).epsilon(1e-9));
    }
}

TEST_CASE("wronskian drift stays within the advertised tolerance") {
    // Residual relative to the product magnitude: once the terms dwarf the
    // Wronskian itself (hyperbolic growth), cancellation is the best any
    // finite arithmetic can certify.
    const double tol = 1e-10;
    for (const MassDistribution& M : {homog(), twoseg(), single_atom()}) {
        for (double lam : {-10000.0, -100.0, -1.0, 0.5, 50.0, 10000.0}) {
            FundamentalPair fp = propagate(M, lam, {tol, false});
            const double w = fp.phi * fp.psi_prime - fp.phi_prime * fp.psi;
            const double expect = std::exp(-2.0 * fp.log_scale);
            const double scale = std::max(expect, std::fabs(fp.phi * fp.psi_prime) +
                                                      std::fabs(fp.phi_prime * fp.psi));
            CHECK(std::fabs(w - expect) <= 10.0 * tol * scale);
        }
    }
}

TEST_CASE("single atom propagates exactly") {
    FundamentalPair fp = propagate(single_atom(), 0.75);
    CHECK(fp.phi == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(fp.phi_prime == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(fp.psi == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(fp.psi_prime == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(fp.log_scale == 0.0);
}

TEST_CASE("zero counting tracks the oscillation") {
    MassDistribution M = homog();
    const double lam = (5.2 * oracle::pi) * (5.2 * oracle::pi);
    FundamentalPair fp = propagate(M, lam, {1e-10, true});
    CHECK(fp.sign_changes_phi == 5); // cos zeros below 5.2 pi
    CHECK(fp.sign_changes_psi == 5); // sin zeros in (0, 5.2 pi)
}

TEST_CASE("homogeneous spectra match the quadratic family") {
    MassDistribution M = homog();
    SpectrumResult s1 = eigenvalues_s1(M, 20);
    SpectrumResult s0 = eigenvalues_s0(M, 20);
    REQUIRE(s1.values.size() == 20);
    REQUIRE(s0.values.size() == 20);
    CHECK(!s1.truncated);
    for (int n = 1; n <= 20; ++n) {
        const double mu = oracle::pi * oracle::pi * (n - 0.5) * (n - 0.5);
        const double lm = oracle::pi * oracle::pi * n * n;
        CHECK(std::fabs(s1.values[n - 1] - mu) <= 1e-8 * mu);
        CHECK(std::fabs(s0.values[n - 1] - lm) <= 1e-8 * lm);
    }
    for (std::size_t i = 0; i < s1.values.size(); ++i)
        CHECK(s1.bracket_widths[i] <= 8e-10 * s1.values[i]);
}

TEST_CASE("two-segment spectra match the scalar eigenvalue equations") {
    MassDistribution M = twoseg();
    SpectrumResult s1 = eigenvalues_s1(M, 10);
    SpectrumResult s0 = eigenvalues_s0(M, 10);
    auto mu = oracle::twoseg_mu(10);
    auto lm = oracle::twoseg_lambda(10);
    for (int i = 0; i < 10; ++i) {
        CHECK(s1.values[i] == doctest::Approx(mu[i]).epsilon(1e-9));
        CHECK(s0.values[i] == doctest::Approx(lm[i]).epsilon(1e-9));
    }
    // interlacing with the fixed-left family
    CHECK(s1.values[0] > 0.0);
    for (int i = 0; i < 10; ++i) {
        CHECK(s1.values[i] < s0.values[i]);
        if (i + 1 < 10) CHECK(s0.values[i] < s1.values[i + 1]);
    }
}

TEST_CASE("two-segment pair matches the hyperbolic closed form") {
    MassDistribution M = twoseg();
    for (double v : {1.0, 9.0, 40.0}) {
        FundamentalPair fp = propagate(M, -v);
        const double s = std::exp(fp.log_scale);
        CHECK(fp.phi * s == doctest::Approx(oracle::twoseg_phi_neg(v)).epsilon(1e-9));
        CHECK(fp.psi * s == doctest::Approx(oracle::twoseg_psi_neg(v)).epsilon(1e-9));
    }
}

TEST_CASE("density eigenvalues agree with a brute-force chain scan") {
    MassDistribution C = discretize(twoseg(), 2000);
    std::vector<oracle::ChainAtom> atoms;
    for (const PointMass& a : C.atoms()) atoms.push_back({a.x, a.m});
    auto chain_mu = oracle::chain_eigen(atoms, 1.0, 3, 30.0, 0.02, false);
    REQUIRE(chain_mu.size() == 3);
    SpectrumResult s1 = eigenvalues_s1(twoseg(), 3);
    for (int i = 0; i < 3; ++i)
        CHECK(std::fabs(s1.values[i] - chain_mu[i]) <= 1e-6 * chain_mu[i]);
}

TEST_CASE("finite chains truncate instead of inventing eigenvalues") {
    MassDistribution C = discretize(homog(), 4);
    SpectrumResult s1 = eigenvalues_s1(C, 10);
    CHECK(s1.truncated);
    REQUIRE(s1.values.size() == 4);
    std::vector<oracle::ChainAtom> atoms;
    for (const PointMass& a : C.atoms()) atoms.push_back({a.x, a.m});
    auto chain_mu = oracle::chain_eigen(atoms, 1.0, 4, 200.0, 0.05, false);
    REQUIRE(chain_mu.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(s1.values[i] == doctest::Approx(chain_mu[i]).epsilon(1e-9));
}

TEST_CASE("compliance has the closed-form values") {
    CHECK(compliance_forward(homog(), -4.0) ==
          doctest::Approx(std::tanh(2.0) / 2.0).epsilon(1e-11));
    CHECK(compliance_forward(single_atom(), -1.0) ==
          doctest::Approx(1.5).epsilon(1e-14));
    // T(0) equals the string length for any distribution
    CHECK(compliance_forward(homog(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(compliance_forward(twoseg(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(compliance_forward(single_atom(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("compliance refuses to evaluate on a pole") {
    const double mu1 = oracle::pi * oracle::pi / 4.0;
    CHECK_THROWS_AS(compliance_forward(homog(), mu1), NumericalFailure);
}

TEST_CASE("complex compliance respects conjugate symmetry and Herglotz sign") {
    MassDistribution M = twoseg();
    const std::complex<double> z(3.0, 2.0);
    const std::complex<double> t = compliance_forward(M, z);
    const std::complex<double> tc = compliance_forward(M, std::conj(z));
    CHECK(std::abs(tc - std::conj(t)) <= 1e-10 * std::abs(t));
    CHECK(t.imag() >= 0.0); // Im z > 0 pushes Im T up
}

TEST_CASE("density at the origin extrapolates to p(0)") {
    const std::vector<double> grid{100.0, 400.0, 1600.0, 6400.0, 25600.0, 102400.0};
    AsymptoticReport rep = density_at_origin_limit(homog(), grid);
    CHECK(rep.verdict == Verdict::converged);
    CHECK(rep.estimate == doctest::Approx(1.0).epsilon(1e-6));

    AsymptoticReport rep2 = density_at_origin_limit(twoseg(), grid);
    CHECK(rep2.verdict == Verdict::converged);
    CHECK(rep2.estimate == doctest::Approx(1.0).epsilon(1e-6));

    AsymptoticReport atom = density_at_origin_limit(single_atom(), grid);
    CHECK(atom.verdict == Verdict::diverged_to_zero);
    CHECK(atom.note.find("zero density") != std::string::npos);

    CHECK_THROWS_AS(density_at_origin_limit(homog(), {1.0, 2.0, 3.0}), InvalidInput);
    CHECK_THROWS_AS(density_at_origin_limit(homog(), {1.0, 2.0, 2.0, 3.0}), InvalidInput);
}

TEST_CASE("input guards reject nonsense") {
    CHECK_THROWS_AS(propagate(homog(), std::nan("")), InvalidInput);
    CHECK_THROWS_AS(eigenvalues_s1(homog(), 0), InvalidInput);
    CHECK_THROWS_AS(eigenvalues_s1(homog(), 5, -1.0), InvalidInput);
}
