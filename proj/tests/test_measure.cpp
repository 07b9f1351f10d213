#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "krein/errors.hpp"
#include "krein/measure.hpp"

#include <cmath>

using namespace krein;

static MassDistribution homog() {
    return MassDistribution(1.0, {DensitySegment{0.0, 1.0, {1.0, 0.0, 0.0, 0.0}}}, {});
}

static MassDistribution twoseg() {
    return MassDistribution(1.0,
                            {DensitySegment{0.0, 0.5, {1.0, 0.0, 0.0, 0.0}},
                             DensitySegment{0.5, 1.0, {4.0, 0.0, 0.0, 0.0}}},
                            {});
}

TEST_CASE("construction validates the geometry") {
    CHECK_THROWS_AS(MassDistribution(0.0, {}, {PointMass{0.0, 1.0}}), InvalidInput);
    CHECK_THROWS_AS(MassDistribution(1.0, {}, {}), InvalidInput); // no mass at all
    CHECK_THROWS_AS(MassDistribution(1.0, {}, {PointMass{0.0, 1.0}}), InvalidInput);
    CHECK_THROWS_AS(MassDistribution(1.0, {}, {PointMass{0.5, -1.0}}), InvalidInput);
    CHECK_THROWS_AS(MassDistribution(1.0, {}, {PointMass{1.5, 1.0}}), InvalidInput);
    CHECK_THROWS_AS(
        MassDistribution(1.0, {DensitySegment{0.0, 0.6, {1.0, 0.0, 0.0, 0.0}},
                               DensitySegment{0.5, 1.0, {1.0, 0.0, 0.0, 0.0}}},
                        {}),
        InvalidInput); // overlap
    CHECK_THROWS_AS(
        MassDistribution(1.0, {DensitySegment{0.0, 1.0, {-1.0, 0.0, 0.0, 0.0}}}, {}),
        InvalidInput); // negative density
    CHECK_NOTHROW(MassDistribution(1.0, {}, {PointMass{1.0, 1.0}})); // atom at L is fine
}

TEST_CASE("eval_mass on a single atom distinguishes the sides") {
    MassDistribution M(2.0, {}, {PointMass{1.0, 1.0}});
    CHECK(eval_mass(M, 1.0, Side::left) == 0.0);
    CHECK(eval_mass(M, 1.0, Side::right) == 1.0);
    CHECK(eval_mass(M, 2.0, Side::right) == 1.0);
    CHECK_THROWS_AS(eval_mass(M, -0.1, Side::left), InvalidInput);
    CHECK_THROWS_AS(eval_mass(M, 2.1, Side::right), InvalidInput);
}

TEST_CASE("eval_mass integrates polynomial densities") {
    MassDistribution M = homog();
    CHECK(eval_mass(M, 0.5, Side::right) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eval_mass(M, 1.0, Side::right) == doctest::Approx(1.0).epsilon(1e-14));

    // density 2x gives mass x^2
    MassDistribution Q(1.0, {DensitySegment{0.0, 1.0, {0.0, 2.0, 0.0, 0.0}}}, {});
    CHECK(eval_mass(Q, 0.25, Side::left) == doctest::Approx(0.0625).epsilon(1e-13));
    CHECK(Q.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("middle-thirds component expands to the expected atoms") {
    MassDistribution M(1.0, {}, {},
                       {CantorComponent{0.0, 1.0, 1.0, 2, 1.0 / 3.0}});
    auto at = M.atoms();
    REQUIRE(at.size() == 4);
    const double expect[4] = {1.0 / 18.0, 5.0 / 18.0, 13.0 / 18.0, 17.0 / 18.0};
    for (int i = 0; i < 4; ++i) {
        CHECK(at[i].x == doctest::Approx(expect[i]).epsilon(1e-14));
        CHECK(at[i].m == doctest::Approx(0.25).epsilon(1e-14));
    }
    CHECK(M.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(MassDistribution(1.0, {}, {},
                                     {CantorComponent{0.0, 1.0, 1.0, 2, 0.6}}),
                    InvalidInput); // ratio must stay below 1/2
    CHECK_THROWS_AS(MassDistribution(1.0, {}, {},
                                     {CantorComponent{0.0, 2.0, 1.0, 2, 1.0 / 3.0}}),
                    InvalidInput); // support leaves [0, L]
}

TEST_CASE("discretize conserves cell masses and centroids") {
    auto c1 = discretize(homog(), 1).atoms();
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].m == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c1[0].x == doctest::Approx(0.5).epsilon(1e-13));

    auto c = discretize(twoseg(), 2).atoms();
    REQUIRE(c.size() == 4);
    const double xs[4] = {0.125, 0.375, 0.625, 0.875};
    const double ms[4] = {0.25, 0.25, 1.0, 1.0};
    for (int i = 0; i < 4; ++i) {
        CHECK(c[i].x == doctest::Approx(xs[i]).epsilon(1e-13));
        CHECK(c[i].m == doctest::Approx(ms[i]).epsilon(1e-13));
    }
}

TEST_CASE("discretize keeps atoms, total mass and first moment") {
    MassDistribution M(2.0, {DensitySegment{0.0, 1.0, {1.0, 0.0, 0.0, 0.0}}},
                       {PointMass{1.5, 3.0}});
    MassDistribution C = discretize(M, 8);
    CHECK(C.atoms_only());
    CHECK(C.total_mass() == doctest::Approx(M.total_mass()).epsilon(1e-13));
    CHECK(moment(C, 1) == doctest::Approx(moment(M, 1)).epsilon(1e-12));
    bool atom_kept = false;
    for (auto& a : C.atoms())
        if (a.x == 1.5 && a.m == 3.0) atom_kept = true;
    CHECK(atom_kept);
}

TEST_CASE("moments match closed-form integrals") {
    MassDistribution M = homog();
    CHECK(moment(M, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(moment(M, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(moment(M, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(moment(M, 4) == doctest::Approx(0.2).epsilon(1e-13));
    CHECK_THROWS_AS(moment(M, 5), InvalidInput);
    CHECK_THROWS_AS(moment(M, -1), InvalidInput);
}

TEST_CASE("sqrt-density integral handles piecewise polynomials") {
    CHECK(sqrt_density_integral(homog()) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(sqrt_density_integral(twoseg()) == doctest::Approx(1.5).epsilon(1e-11));
    // density 2x: integral of sqrt(2x) = 2 sqrt(2)/3
    MassDistribution Q(1.0, {DensitySegment{0.0, 1.0, {0.0, 2.0, 0.0, 0.0}}}, {});
    CHECK(sqrt_density_integral(Q) ==
          doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-9));
    // atoms contribute nothing
    MassDistribution A(2.0, {}, {PointMass{1.0, 1.0}});
    CHECK(sqrt_density_integral(A) == 0.0);
}

TEST_CASE("sup_support tracks the rightmost mass") {
    CHECK(homog().sup_support() == doctest::Approx(1.0));
    MassDistribution A(2.0, {}, {PointMass{0.5, 1.0}});
    CHECK(A.sup_support() == doctest::Approx(0.5));
}
