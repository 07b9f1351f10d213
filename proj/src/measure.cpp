#include "krein/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "krein/errors.hpp"
#include "detail/poly.hpp"

namespace krein {

namespace {

using detail::poly_eval;
using detail::poly_integral;
using detail::poly_min;
using detail::poly_moment;

void expand_cantor(const CantorComponent& cc, std::vector<PointMass>& out) {
    const long count = 1L << cc.depth;
    const double unit_mass = cc.mass / static_cast<double>(count);
    const double span = cc.x1 - cc.x0;
    const double cell = std::pow(cc.ratio, cc.depth);
    for (long w = 0; w < count; ++w) {
        // Interval start for the binary word of w (most significant digit =
        // first contraction applied): sum of (1-r) r^(i-1) over set digits.
        double start = 0.0, scale = 1.0;
        for (int i = cc.depth - 1; i >= 0; --i) {
            if ((w >> i) & 1) start += (1.0 - cc.ratio) * scale;
            scale *= cc.ratio;
        }
        const double mid = start + 0.5 * cell;
        out.push_back({cc.x0 + span * mid, unit_mass});
    }
}

} // namespace

MassDistribution::MassDistribution(double length,
                                   std::vector<DensitySegment> segments,
                                   std::vector<PointMass> point_masses,
                                   std::vector<CantorComponent> singular)
    : length_(length),
      segments_(std::move(segments)),
      point_masses_(std::move(point_masses)),
      singular_(std::move(singular)) {
    if (!(length_ > 0.0) || !std::isfinite(length_))
        throw InvalidInput("length must be positive and finite");

    std::sort(segments_.begin(), segments_.end(),
              [](const DensitySegment& a, const DensitySegment& b) { return a.x0 < b.x0; });
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const DensitySegment& s = segments_[i];
        if (!(s.x0 >= 0.0 && s.x1 <= length_ && s.x0 < s.x1))
            throw InvalidInput("density segment [" + std::to_string(s.x0) + ", " +
                               std::to_string(s.x1) + "] is not inside [0, L]");
        double scale = 0.0;
        for (double c : s.poly) scale = std::max(scale, std::fabs(c));
        if (poly_min(s.poly, s.x0, s.x1) < -1e-12 * std::max(scale, 1.0))
            throw InvalidInput("density segment starting at " + std::to_string(s.x0) +
                               " has negative density");
        if (i > 0 && segments_[i - 1].x1 > s.x0 + 1e-15 * length_)
            throw InvalidInput("density segments overlap at x = " + std::to_string(s.x0));
        const double w = poly_integral(s.poly, s.x0, s.x1);
        density_mass_ += w;
        if (w > 0.0) sup_support_ = std::max(sup_support_, s.x1);
    }

    atoms_ = point_masses_;
    for (const CantorComponent& cc : singular_) {
        if (!(cc.x0 >= 0.0 && cc.x1 <= length_ && cc.x0 < cc.x1))
            throw InvalidInput("singular component support is not inside [0, L]");
        if (!(cc.mass > 0.0)) throw InvalidInput("singular component mass must be positive");
        if (cc.depth < 0 || cc.depth > 20)
            throw InvalidInput("singular component depth must be in [0, 20]");
        if (!(cc.ratio > 0.0 && cc.ratio < 0.5))
            throw InvalidInput("singular component ratio must be in (0, 1/2)");
        expand_cantor(cc, atoms_);
    }

    std::sort(atoms_.begin(), atoms_.end(),
              [](const PointMass& a, const PointMass& b) { return a.x < b.x; });
    std::vector<PointMass> merged;
    for (const PointMass& a : atoms_) {
        if (!(a.x > 0.0 && a.x <= length_))
            throw InvalidInput("point mass position " + std::to_string(a.x) +
                               " is not in (0, L]");
        if (!(a.m > 0.0) || !std::isfinite(a.m))
            throw InvalidInput("point mass at " + std::to_string(a.x) +
                               " must have positive finite mass");
        if (!merged.empty() && merged.back().x == a.x)
            merged.back().m += a.m;
        else
            merged.push_back(a);
    }
    atoms_ = std::move(merged);
    for (const PointMass& a : atoms_) {
        atom_mass_ += a.m;
        sup_support_ = std::max(sup_support_, a.x);
    }

    if (!(total_mass() > 0.0)) throw InvalidInput("mass distribution is empty");
}

double eval_mass(const MassDistribution& M, double x, Side side) {
    if (!(x >= 0.0 && x <= M.length()))
        throw InvalidInput("eval_mass: x = " + std::to_string(x) + " outside [0, L]");
    double total = 0.0;
    for (const DensitySegment& s : M.segments()) {
        if (x <= s.x0) break;
        total += poly_integral(s.poly, s.x0, std::min(x, s.x1));
    }
    for (const PointMass& a : M.atoms()) {
        if (a.x < x || (side == Side::right && a.x == x))
            total += a.m;
        if (a.x >= x) break;
    }
    return total;
}

MassDistribution discretize(const MassDistribution& M, int n_per_segment) {
    if (n_per_segment < 1) throw InvalidInput("discretize: n_per_segment must be >= 1");
    std::vector<PointMass> atoms = M.atoms();
    for (const DensitySegment& s : M.segments()) {
        const double total = poly_integral(s.poly, s.x0, s.x1);
        if (!(total > 0.0)) continue;
        const double cell_mass = total / n_per_segment;
        double lo = s.x0;
        for (int i = 0; i < n_per_segment; ++i) {
            double hi;
            if (i == n_per_segment - 1) {
                hi = s.x1;
            } else {
                // Bisection for the next equal-mass boundary: the cumulative
                // integral is continuous and nondecreasing.
                const double target = total * (i + 1) / n_per_segment;
                double a = lo, b = s.x1;
                for (int it = 0; it < 100 && b - a > 0.0; ++it) {
                    const double mid = 0.5 * (a + b);
                    if (poly_integral(s.poly, s.x0, mid) < target) a = mid;
                    else b = mid;
                }
                hi = 0.5 * (a + b);
            }
            const double w = poly_integral(s.poly, lo, hi);
            if (w > 0.0)
                atoms.push_back({poly_moment(s.poly, 1, lo, hi) / w, cell_mass});
            lo = hi;
        }
    }
    return MassDistribution(M.length(), {}, std::move(atoms));
}

double moment(const MassDistribution& M, int k) {
    if (k < 0 || k > 4) throw InvalidInput("moment: order must be in [0, 4]");
    double total = 0.0;
    for (const DensitySegment& s : M.segments())
        total += poly_moment(s.poly, k, s.x0, s.x1);
    for (const PointMass& a : M.atoms())
        total += a.m * std::pow(a.x, k);
    return total;
}

namespace {

double sqrt_poly(const std::array<double, 4>& c, double x) {
    return std::sqrt(std::max(poly_eval(c, x), 0.0));
}

double adaptive_simpson(const std::array<double, 4>& c, double a, double b,
                        double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = sqrt_poly(c, lm), frm = sqrt_poly(c, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(c, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(c, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double sqrt_density_integral(const MassDistribution& M, double tol) {
    double total = 0.0;
    for (const DensitySegment& s : M.segments()) {
        const double fa = sqrt_poly(s.poly, s.x0);
        const double fb = sqrt_poly(s.poly, s.x1);
        const double fm = sqrt_poly(s.poly, 0.5 * (s.x0 + s.x1));
        const double whole = (s.x1 - s.x0) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(s.poly, s.x0, s.x1, fa, fm, fb, whole,
                                  tol * std::max(whole, 1e-3), 40);
    }
    return total;
}

} // namespace krein
