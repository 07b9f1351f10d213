#include "krein/forward.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <vector>

#include "detail/poly.hpp"
#include "krein/errors.hpp"
#include "krein/log.hpp"

namespace krein {

namespace {

template <class S>
struct WalkState {
    S y[4] = {S(1), S(0), S(0), S(1)}; // phi, phi', psi, psi'
    double log_scale = 0.0;
    long zc_phi = 0, zc_psi = 0;
};

template <class S>
void maybe_rescale(WalkState<S>& st) {
    double m = 0.0;
    for (const S& v : st.y) m = std::max(m, std::abs(v));
    if (m > 1e150 || (m > 0.0 && m < 1e-150)) {
        for (S& v : st.y) v /= m;
        st.log_scale += std::log(m);
    }
}

inline void count_zero(double prev, double next, double x_next, double L, long& zc) {
    if (prev * next < 0.0) ++zc;
    else if (next == 0.0 && prev != 0.0 && x_next < L) ++zc;
}

template <class S>
void linear_step(WalkState<S>& st, double len, double x_end, double L, bool count) {
    const S phi0 = st.y[0], psi0 = st.y[2];
    st.y[0] += len * st.y[1];
    st.y[2] += len * st.y[3];
    if constexpr (std::is_same_v<S, double>) {
        if (count) {
            count_zero(phi0, st.y[0], x_end, L, st.zc_phi);
            count_zero(psi0, st.y[2], x_end, L, st.zc_psi);
        }
    } else {
        (void)phi0; (void)psi0; (void)x_end; (void)L; (void)count;
    }
}

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695,
                 E4 = B4 - 393.0 / 640, E5 = B5 + 92097.0 / 339200,
                 E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

// y'' = -lambda p(x) y for the (phi, psi) system stacked in u[4].
template <class S>
inline void rhs(const std::array<double, 4>& poly, double x, S lambda, const S* u, S* k) {
    const S q = -lambda * detail::poly_eval(poly, x);
    k[0] = u[1];
    k[1] = q * u[0];
    k[2] = u[3];
    k[3] = q * u[2];
}

// Adaptive embedded step through [a, b] inside one density segment.  Step
// size is capped at a fraction of the local oscillation wavelength when
// zero counting is on, so a step can straddle at most one zero.
template <class S>
void integrate_segment(WalkState<S>& st, const DensitySegment& seg, double a, double b,
                       S lambda, double rel_tol, bool count, double L) {
    const double len = b - a;
    const double pmax = std::max(detail::poly_max(seg.poly, a, b), 0.0);
    if (pmax == 0.0 || lambda == S(0)) {
        linear_step(st, len, b, L, count);
        return;
    }
    const double speed = std::sqrt(std::abs(lambda) * pmax);
    double h_cap = std::min(len, (count ? 0.45 * M_PI : 2.0) / speed);

    S u[4] = {st.y[0], st.y[1], st.y[2], st.y[3]};
    S k1[4], k2[4], k3[4], k4[4], k5[4], k6[4], k7[4], ut[4], u5[4];
    double x = a;
    double h = h_cap;
    while (x < b) {
        h = std::min(h, b - x);
        rhs(seg.poly, x, lambda, u, k1);
        for (int i = 0; i < 4; ++i) ut[i] = u[i] + h * (A21 * k1[i]);
        rhs(seg.poly, x + C2 * h, lambda, ut, k2);
        for (int i = 0; i < 4; ++i) ut[i] = u[i] + h * (A31 * k1[i] + A32 * k2[i]);
        rhs(seg.poly, x + C3 * h, lambda, ut, k3);
        for (int i = 0; i < 4; ++i) ut[i] = u[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        rhs(seg.poly, x + C4 * h, lambda, ut, k4);
        for (int i = 0; i < 4; ++i)
            ut[i] = u[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        rhs(seg.poly, x + C5 * h, lambda, ut, k5);
        for (int i = 0; i < 4; ++i)
            ut[i] = u[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] +
                                A65 * k5[i]);
        rhs(seg.poly, x + h, lambda, ut, k6);
        for (int i = 0; i < 4; ++i)
            u5[i] = u[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        rhs(seg.poly, x + h, lambda, u5, k7);

        // Error control on values and derivatives separately; components of
        // one kind share a floor so a zero crossing cannot starve the scale.
        double vmax = 0.0, dmax = 0.0;
        for (int i : {0, 2}) vmax = std::max({vmax, std::abs(u[i]), std::abs(u5[i])});
        for (int i : {1, 3}) dmax = std::max({dmax, std::abs(u[i]), std::abs(u5[i])});
        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const S e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                             E6 * k6[i] + E7 * k7[i]);
            const double floor = (i == 0 || i == 2) ? vmax : dmax;
            const double sc =
                1e-300 + rel_tol * (std::max(std::abs(u[i]), std::abs(u5[i])) + 0.01 * floor);
            err = std::max(err, std::abs(e) / sc);
        }
        const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        if (err <= 1.0) {
            if constexpr (std::is_same_v<S, double>) {
                if (count) {
                    count_zero(u[0], u5[0], x + h, L, st.zc_phi);
                    count_zero(u[2], u5[2], x + h, L, st.zc_psi);
                }
            }
            x += h;
            for (int i = 0; i < 4; ++i) u[i] = u5[i];
            double m = 0.0;
            for (const S& v : u) m = std::max(m, std::abs(v));
            if (m > 1e150) {
                for (S& v : u) v /= m;
                st.log_scale += std::log(m);
            }
            h = std::min(h * std::clamp(fac, 0.2, 5.0), h_cap);
        } else {
            h *= std::clamp(fac, 0.2, 1.0);
        }
        if (x < b && h < 64.0 * DBL_EPSILON * std::max(std::fabs(x), len))
            throw NumericalFailure("step-size underflow at x = " + std::to_string(x) +
                                   " (requested tolerance unreachable)");
    }
    for (int i = 0; i < 4; ++i) st.y[i] = u[i];
}

template <class S>
WalkState<S> run_walk(const MassDistribution& M, S lambda, double rel_tol, bool count) {
    if (!(rel_tol > 0.0)) throw InvalidInput("rel_tol must be positive");
    // Local steps run tighter than the advertised tolerance so the
    // accumulated drift (e.g. in the Wronskian) stays within rel_tol: the
    // margin scales with the expected oscillatory step count of the walk,
    // which keeps the drift lambda-independent.
    double steps_est = 1.0;
    if (lambda != S(0.0))
        for (const DensitySegment& s : M.segments()) {
            const double pmax = std::max(detail::poly_max(s.poly, s.x0, s.x1), 0.0);
            steps_est += 0.5 * (s.x1 - s.x0) * std::sqrt(std::abs(lambda) * pmax);
        }
    rel_tol = std::max(rel_tol / (16.0 * steps_est), 4.0 * DBL_EPSILON);
    const double L = M.length();
    std::vector<double> bp;
    bp.reserve(M.atoms().size() + 2 * M.segments().size() + 2);
    bp.push_back(0.0);
    bp.push_back(L);
    for (const PointMass& a : M.atoms()) bp.push_back(a.x);
    for (const DensitySegment& s : M.segments()) {
        bp.push_back(s.x0);
        bp.push_back(s.x1);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    WalkState<S> st;
    const auto& atoms = M.atoms();
    const auto& segs = M.segments();
    std::size_t ai = 0, si = 0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double a = bp[i], b = bp[i + 1];
        while (si < segs.size() && segs[si].x1 <= a) ++si;
        const bool covered = si < segs.size() && segs[si].x0 <= a && b <= segs[si].x1;
        if (covered)
            integrate_segment(st, segs[si], a, b, lambda, rel_tol, count, L);
        else
            linear_step(st, b - a, b, L, count);
        while (ai < atoms.size() && atoms[ai].x == b) {
            st.y[1] -= lambda * atoms[ai].m * st.y[0];
            st.y[3] -= lambda * atoms[ai].m * st.y[2];
            ++ai;
            maybe_rescale(st);
        }
    }
    return st;
}

} // namespace

FundamentalPair propagate(const MassDistribution& M, double lambda,
                          const PropagateOptions& opts) {
    if (!std::isfinite(lambda)) throw InvalidInput("lambda must be finite");
    const bool count = opts.count_zeros && lambda > 0.0;
    WalkState<double> st = run_walk<double>(M, lambda, opts.rel_tol, count);
    FundamentalPair fp;
    fp.x = M.length();
    fp.lambda = lambda;
    fp.phi = st.y[0];
    fp.phi_prime = st.y[1];
    fp.psi = st.y[2];
    fp.psi_prime = st.y[3];
    fp.log_scale = st.log_scale;
    fp.sign_changes_phi = st.zc_phi;
    fp.sign_changes_psi = st.zc_psi;
    return fp;
}

ComplexFundamentalPair propagate(const MassDistribution& M, std::complex<double> lambda,
                                 double rel_tol) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw InvalidInput("lambda must be finite");
    WalkState<std::complex<double>> st =
        run_walk<std::complex<double>>(M, lambda, rel_tol, false);
    return {st.y[0], st.y[1], st.y[2], st.y[3], st.log_scale};
}

// --- eigenvalue search -----------------------------------------------------

namespace {

struct CharEval {
    double value = 0.0;
    long count = 0;
};

class Characteristic {
public:
    Characteristic(const MassDistribution& M, bool psi_side, double rel_tol)
        : m_(M), psi_(psi_side), tol_(rel_tol) {}

    CharEval counted(double lam) const {
        const FundamentalPair fp = propagate(m_, lam, {tol_, true});
        return {psi_ ? fp.psi : fp.phi, psi_ ? fp.sign_changes_psi : fp.sign_changes_phi};
    }
    double value(double lam) const {
        const FundamentalPair fp = propagate(m_, lam, {tol_, false});
        return psi_ ? fp.psi : fp.phi;
    }

private:
    const MassDistribution& m_;
    bool psi_;
    double tol_;
};

// Classic Brent root refinement on [a, b] with f(a) f(b) < 0.
template <class F>
double brent_root(const F& f, double a, double b, double fa, double fb, double xtol,
                  double& residual, double& width) {
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = b - a; e = d; }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * DBL_EPSILON * std::fabs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) break;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    residual = std::fabs(fb);
    width = std::fabs(c - b);
    return b;
}

struct SearchAccumulator {
    SpectrumResult out;
    std::size_t target = 0;
    bool done() const { return out.values.size() >= target; }
    void push(double root, double residual, double width) {
        out.values.push_back(root);
        out.residuals.push_back(residual);
        out.bracket_widths.push_back(width);
    }
};

// Refine the unique root inside (a, b) where the oscillation count steps by
// one.  If endpoint values do not show the sign change (value noise near a
// cluster), bisect on the count until they do or the bracket degenerates.
void refine_single(const Characteristic& ch, double a, double fa, long ca, double b,
                   double fb, double xtol, SearchAccumulator& acc) {
    while (fa * fb > 0.0 && b - a > 4.0 * DBL_EPSILON * std::max(b, 1.0)) {
        const double m = 0.5 * (a + b);
        const CharEval em = ch.counted(m);
        if (em.count <= ca) { a = m; fa = em.value; }
        else { b = m; fb = em.value; }
    }
    if (fa * fb > 0.0) {
        acc.push(0.5 * (a + b), std::min(std::fabs(fa), std::fabs(fb)), b - a);
        return;
    }
    double residual = 0.0, width = 0.0;
    const double root = brent_root([&](double x) { return ch.value(x); }, a, b, fa, fb,
                                   xtol, residual, width);
    acc.push(root, residual, width);
}

// Recursively isolate the count increments inside (a, b) and refine the
// roots in ascending order until the accumulator is full.  Brackets that
// cannot be split further (count step > 1 at width floor) are reported as a
// cluster at the common midpoint.
void isolate_range(const Characteristic& ch, double a, double fa, long ca, double b,
                   double fb, long cb, double tol, SearchAccumulator& acc) {
    if (acc.done() || cb <= ca) return;
    if (b - a <= 4.0 * DBL_EPSILON * std::max(b, 1.0)) {
        for (long j = 0; j < cb - ca && !acc.done(); ++j)
            acc.push(0.5 * (a + b), std::min(std::fabs(fa), std::fabs(fb)), b - a);
        return;
    }
    if (cb - ca == 1) {
        refine_single(ch, a, fa, ca, b, fb, tol * std::max(b, DBL_MIN), acc);
        return;
    }
    const double m = 0.5 * (a + b);
    const CharEval em = ch.counted(m);
    isolate_range(ch, a, fa, ca, m, em.value, em.count, tol, acc);
    isolate_range(ch, m, em.value, em.count, b, fb, cb, tol, acc);
}

SpectrumResult eigen_search(const MassDistribution& M, int n_max, double tol,
                            bool psi_side) {
    if (n_max < 1) throw InvalidInput("n_max must be >= 1");
    if (!(tol > 0.0)) throw InvalidInput("tol must be positive");
    const Characteristic ch(M, psi_side, std::min(tol, 1e-10));

    SearchAccumulator acc;
    acc.target = static_cast<std::size_t>(n_max);
    if (M.atoms_only()) {
        long interior = 0;
        for (const PointMass& a : M.atoms())
            if (a.x < M.length()) ++interior;
        if (interior < n_max) {
            acc.target = static_cast<std::size_t>(interior);
            acc.out.truncated = true;
        }
    }
    if (acc.target == 0) return acc.out;

    // Bootstrap: push the upper anchor until it holds the first few roots.
    const long n_first = std::min<long>(5, static_cast<long>(acc.target));
    double lo = 0.0, flo = ch.value(0.0);
    long clo = 0;
    double up = M_PI * M_PI / (4.0 * M.length() * M.total_mass());
    CharEval eu = ch.counted(up);
    for (int guard = 0; eu.count < n_first && guard < 300; ++guard) {
        up *= 2.0;
        eu = ch.counted(up);
    }
    if (eu.count < n_first)
        throw NumericalFailure("eigenvalue search bound exhausted (found 0 of " +
                               std::to_string(acc.target) + ")");
    isolate_range(ch, lo, flo, clo, up, eu.value, eu.count, tol, acc);

    // Predicted anchors from the quadratic fit mu_n ~ A (n - 1/2)^2; overall
    // cap at 4x the fitted prediction for the last requested root, doubled
    // up to 3 times (continuum strings; finite chains always saturate).
    double anchor = up;
    double fanchor = eu.value;
    long canchor = eu.count;
    while (!acc.done()) {
        const std::size_t k = acc.out.values.size();
        const double A = acc.out.values.back() / ((k - 0.5) * (k - 0.5));
        const double cap =
            32.0 * A * (acc.target - 0.5) * (acc.target - 0.5); // 4x prediction, 3 doublings
        double g = std::max(A * (k + 1.0) * (k + 1.0), anchor * 1.0000001);
        int guard = 0;
        CharEval eg = ch.counted(g);
        while (eg.count <= canchor && guard++ < 400) {
            g *= 1.6;
            if (!M.atoms_only() && g > cap)
                throw NumericalFailure("eigenvalue search bound exhausted (found " +
                                       std::to_string(k) + " of " +
                                       std::to_string(acc.target) + ")");
            eg = ch.counted(g);
        }
        if (eg.count <= canchor)
            throw NumericalFailure("eigenvalue search bound exhausted (found " +
                                   std::to_string(k) + " of " + std::to_string(acc.target) +
                                   ")");
        isolate_range(ch, anchor, fanchor, canchor, g, eg.value, eg.count, tol, acc);
        anchor = g;
        fanchor = eg.value;
        canchor = eg.count;
    }
    return acc.out;
}

} // namespace

SpectrumResult eigenvalues_s1(const MassDistribution& M, int n_max, double tol) {
    return eigen_search(M, n_max, tol, false);
}

SpectrumResult eigenvalues_s0(const MassDistribution& M, int n_max, double tol) {
    return eigen_search(M, n_max, tol, true);
}

// --- compliance and the density limit --------------------------------------

double compliance_forward(const MassDistribution& M, double z, double rel_tol) {
    const FundamentalPair fp = propagate(M, z, {rel_tol, false});
    // phi below its own integration-error level cannot be divided through.
    const double ref = std::max(std::fabs(fp.psi), 1e-300);
    const double resolvable = std::max(1e-14, rel_tol) * ref / std::max(M.length(), 1.0);
    if (fp.phi == 0.0 || std::fabs(fp.phi) < resolvable)
        throw NumericalFailure("compliance pole proximity at z = " + std::to_string(z));
    return fp.psi / fp.phi;
}

std::complex<double> compliance_forward(const MassDistribution& M, std::complex<double> z,
                                        double rel_tol) {
    if (z.imag() == 0.0) return {compliance_forward(M, z.real(), rel_tol), 0.0};
    const ComplexFundamentalPair fp = propagate(M, z, rel_tol);
    if (std::abs(fp.phi) == 0.0)
        throw NumericalFailure("compliance pole proximity (phi underflow)");
    return fp.psi / fp.phi;
}

AsymptoticReport density_at_origin_limit(const MassDistribution& M,
                                         const std::vector<double>& z_grid, int order,
                                         double tol, double rel_tol) {
    if (z_grid.size() < 4) throw InvalidInput("z grid needs at least 4 points");
    if (order < 1) throw InvalidInput("extrapolation order must be >= 1");
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        if (!(z_grid[i] > 0.0)) throw InvalidInput("z grid must be positive");
        if (i > 0 && !(z_grid[i] > z_grid[i - 1]))
            throw InvalidInput("z grid must be strictly increasing");
    }
    std::vector<double> h(z_grid.size()), g(z_grid.size());
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        const double z = z_grid[i];
        const FundamentalPair fp = propagate(M, -z, {rel_tol, false});
        if (!(fp.phi > 0.0) || !(fp.psi > 0.0))
            throw NumericalFailure(
                "internal consistency: fundamental solutions not positive at z = " +
                std::to_string(-z));
        const double r = fp.phi / fp.psi; // scale-free
        g[i] = r * r / z;
        h[i] = 1.0 / std::sqrt(z);
    }
    const RichardsonResult rich = richardson_points(h, g, order, tol);
    const LimitClassification cls = classify_limit(z_grid, g, tol);

    AsymptoticReport rep;
    rep.method = "endpoint-ratio extrapolation, order " + std::to_string(order);
    rep.tolerance = tol;
    for (std::size_t i = 0; i < z_grid.size(); ++i)
        rep.table.emplace_back(z_grid[i], rich.running[i]);
    if (cls.verdict == Verdict::diverged_to_zero) {
        rep.verdict = cls.verdict;
        rep.estimate = cls.estimate;
        rep.note = "zero density at origin";
    } else if (cls.verdict == Verdict::diverged_to_infinity) {
        rep.verdict = cls.verdict;
        rep.estimate = cls.estimate;
    } else {
        rep.estimate = rich.estimate;
        rep.verdict = rich.converged ? Verdict::converged : Verdict::inconclusive;
    }
    return rep;
}

} // namespace krein
