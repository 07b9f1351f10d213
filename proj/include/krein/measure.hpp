#pragma once

#include <array>
#include <vector>

namespace krein {

enum class Side { left, right };

// Polynomial density p(x) = c0 + c1 x + c2 x^2 + c3 x^3 (global coordinate)
// supported on [x0, x1].  Invariant: p >= 0 on the interval.
struct DensitySegment {
    double x0 = 0.0, x1 = 0.0;
    std::array<double, 4> poly{};
};

struct PointMass {
    double x = 0.0;
    double m = 0.0;
};

// Self-similar singular component on [x0, x1]: two affine contractions of
// ratio r anchored at the endpoints, truncated at the given depth and
// realized as 2^depth equal atoms at the midpoints of the depth-k intervals.
struct CantorComponent {
    double x0 = 0.0, x1 = 0.0;
    double mass = 0.0;
    int depth = 0;
    double ratio = 0.0; // in (0, 1/2)
};

// Nondecreasing mass distribution M on [0, L] described as polynomial
// density segments + point masses + truncated self-similar components.
// Invariants checked at construction: L > 0; segments inside [0, L] with
// disjoint interiors and nonnegative density; atom positions in (0, L] with
// positive mass; total mass positive.  Self-similar components are expanded
// into atoms once and merged with the declared point masses.
class MassDistribution {
public:
    MassDistribution(double length,
                     std::vector<DensitySegment> segments,
                     std::vector<PointMass> point_masses,
                     std::vector<CantorComponent> singular = {});

    double length() const { return length_; }
    const std::vector<DensitySegment>& segments() const { return segments_; }
    const std::vector<PointMass>& point_masses() const { return point_masses_; }
    const std::vector<CantorComponent>& singular() const { return singular_; }

    // Declared atoms plus expanded singular components, merged by position,
    // sorted ascending.  This is what propagation and evaluation use.
    const std::vector<PointMass>& atoms() const { return atoms_; }

    bool atoms_only() const { return density_mass_ == 0.0; }
    double total_mass() const { return density_mass_ + atom_mass_; }
    double sup_support() const { return sup_support_; }

private:
    double length_ = 0.0;
    std::vector<DensitySegment> segments_;   // sorted by x0
    std::vector<PointMass> point_masses_;
    std::vector<CantorComponent> singular_;
    std::vector<PointMass> atoms_;
    double density_mass_ = 0.0;
    double atom_mass_ = 0.0;
    double sup_support_ = 0.0;
};

// M(x -+ 0): cumulative mass strictly left of x (Side::left) or up to and
// including an atom at x (Side::right).  Throws InvalidInput outside [0, L].
double eval_mass(const MassDistribution& M, double x, Side side);

// Replace every density segment by n equal-mass atoms at the mass centroids
// of the equal-mass sub-cells; existing atoms pass through.  Total mass and
// the first moment are preserved to working precision.
MassDistribution discretize(const MassDistribution& M, int n_per_segment);

// Exact integral x^k dM(x), 0 <= k <= 4.
double moment(const MassDistribution& M, int k);

// Integral of sqrt(p(x)) dx over all density segments (adaptive Simpson).
double sqrt_density_integral(const MassDistribution& M, double tol = 1e-11);

} // namespace krein
