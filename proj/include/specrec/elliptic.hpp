#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specrec/errors.hpp"

namespace specrec::elliptic {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// ----------------------------------------------------------------- polynomials

struct Poly {
    std::vector<cplx> c;  // c[k] is the coefficient of x^k

    int degree() const {
        int d = static_cast<int>(c.size()) - 1;
        while (d > 0 && std::abs(c[static_cast<size_t>(d)]) == 0.0) --d;
        return d;
    }
    cplx eval(cplx x) const {
        cplx acc = 0.0;
        for (size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    }
    Poly derivative() const {
        Poly d;
        for (size_t k = 1; k < c.size(); ++k) d.c.push_back(double(k) * c[k]);
        if (d.c.empty()) d.c.push_back(0.0);
        return d;
    }
};

/// Durand-Kerner iteration; adequate for the quartics used here.
inline std::vector<cplx> polyRoots(const Poly& p) {
    int n = p.degree();
    if (n < 1) throw NumericError("root finding needs degree >= 1");
    std::vector<cplx> a(p.c.begin(), p.c.begin() + n + 1);
    cplx lead = a[static_cast<size_t>(n)];
    for (auto& x : a) x /= lead;
    double radius = 1.0;
    for (int k = 0; k < n; ++k)
        radius = std::max(radius, 2.0 * std::pow(std::abs(a[static_cast<size_t>(k)]), 1.0 / (n - k)));
    std::vector<cplx> r(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        r[static_cast<size_t>(k)] = radius * std::polar(0.7, 2.0 * kPi * k / n + 0.4);
    auto eval = [&](cplx x) {
        cplx acc = 0.0;
        for (size_t k = a.size(); k-- > 0;) acc = acc * x + a[k];
        return acc;
    };
    for (int iter = 0; iter < 600; ++iter) {
        double move = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= r[static_cast<size_t>(k)] - r[static_cast<size_t>(j)];
            cplx delta = eval(r[static_cast<size_t>(k)]) / denom;
            r[static_cast<size_t>(k)] -= delta;
            move = std::max(move, std::abs(delta));
        }
        if (move < 1e-15 * std::max(1.0, radius)) break;
    }
    return r;
}

// ----------------------------------------------------------------- quadrature

// forward declaration (defined below)
inline cplx glSegment(const std::function<cplx(cplx)>& f, cplx a, cplx b, double relTol,
                      int maxLevel, int minLevel);

/// Integral of f over the straight segment from a branch-type endpoint `bp`
/// to `far`, where f may carry an integrable z^{-1/2} singularity or a
/// sqrt cusp at bp.  The substitution x = bp + (far - bp) s^2 removes the
/// singularity analytically, after which composite Gauss-Legendre converges
/// spectrally.  minLevel guards against spuriously early convergence when the
/// integrand has a sharp feature just off the path (a nearby branch point of
/// a deformed family member).
inline cplx sqrtSubstSegment(const std::function<cplx(cplx)>& f, cplx bp, cplx far,
                             double relTol = 1e-13, int maxLevel = 9, int minLevel = 1) {
    cplx d = far - bp;
    auto g = [&](cplx s) { return f(bp + d * s * s) * 2.0 * d * s; };
    return glSegment(g, cplx(0.0, 0.0), cplx(1.0, 0.0), relTol, maxLevel, minLevel);
}

/// Gauss-Legendre 16-point rule on [a, b] (integrand analytic on the path).
inline cplx gauss16(const std::function<cplx(cplx)>& f, cplx a, cplx b) {
    static const double xs[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double ws[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx s = 0.0;
    for (int i = 0; i < 8; ++i)
        s += ws[i] * (f(mid + half * xs[i]) + f(mid - half * xs[i]));
    return s * half;
}

/// Composite Gauss-Legendre along a straight segment with 2^level panels,
/// refined until two consecutive levels agree (not before minLevel).
inline cplx glSegment(const std::function<cplx(cplx)>& f, cplx a, cplx b, double relTol = 1e-13,
                      int maxLevel = 8, int minLevel = 1) {
    auto evalAt = [&](int panels) {
        cplx s = 0.0;
        for (int i = 0; i < panels; ++i) {
            cplx pa = a + (b - a) * (double(i) / panels);
            cplx pb = a + (b - a) * (double(i + 1) / panels);
            s += gauss16(f, pa, pb);
        }
        return s;
    };
    int panels = 1;
    cplx prev = evalAt(panels);
    for (int level = 1; level <= maxLevel; ++level) {
        panels *= 2;
        cplx cur = evalAt(panels);
        if (level >= minLevel && std::abs(cur - prev) <= relTol * std::max(1e-30, std::abs(cur)))
            return cur;
        prev = cur;
    }
    return prev;
}

/// (1/2 pi i) * contour integral of f around the circle |t - center| = radius,
/// by the trapezoid rule (geometric convergence for f analytic in an annulus).
inline cplx circleResidue(const std::function<cplx(cplx)>& f, cplx center, double radius,
                          double relTol = 1e-12, int maxNodes = 1 << 14) {
    int n = 64;
    auto evalAt = [&](int N) {
        cplx s = 0.0;
        for (int j = 0; j < N; ++j) {
            double th = 2.0 * kPi * j / N;
            cplx e = std::polar(1.0, th);
            s += f(center + radius * e) * e;
        }
        return s * (radius / double(N));
    };
    cplx prev = evalAt(n);
    while (n < maxNodes) {
        n *= 2;
        cplx cur = evalAt(n);
        if (std::abs(cur - prev) <= relTol * std::max(1e-30, std::abs(cur))) return cur;
        prev = cur;
    }
    throw NumericError("residue-series non-convergence on circle quadrature");
}

// ----------------------------------------------------------------- the curve

/// Genus-1 curve y^2 = q(x) with quartic q; the four branch points are held
/// in cut pairs (b[0], b[1]) and (b[2], b[3]), with b[1] and b[2] the cut
/// endpoints facing each other.  The a-cycle encircles the first cut; the
/// b-cycle runs between the cuts.
struct QuarticCurve {
    Poly q;
    Poly dq;
    std::array<cplx, 4> b{};
    cplx leadSqrt;
    double scale = 1.0;
    bool cubicModel = false;  // flagged but unsupported downstream

    cplx pairSqrt(cplx x, cplx p, cplx r) const {
        // sqrt((x-p)(x-r)) with branch cut exactly on the segment [p, r]
        cplx m = 0.5 * (p + r), h = 0.5 * (r - p);
        cplx w = (x - m) / h;
        return h * w * std::sqrt(1.0 - 1.0 / (w * w));
    }

    cplx y(cplx x) const {
        return leadSqrt * pairSqrt(x, b[0], b[1]) * pairSqrt(x, b[2], b[3]);
    }
    cplx qprime(cplx x) const { return dq.eval(x); }

    /// Point on the curve near branch point b[ai] with local coordinate t = y:
    /// solves q(x) = t^2 by Newton from x = b + t^2/q'(b).
    cplx xOfLocal(int ai, cplx t) const {
        cplx bp = b[static_cast<size_t>(ai)];
        cplx x = bp + t * t / qprime(bp);
        for (int it = 0; it < 40; ++it) {
            cplx fx = q.eval(x) - t * t;
            cplx step = fx / qprime(x);
            x -= step;
            if (std::abs(step) < 1e-16 * scale) break;
        }
        return x;
    }

    double minRootSeparation() const {
        double m = 1e300;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) m = std::min(m, std::abs(b[size_t(i)] - b[size_t(j)]));
        return m;
    }
};

/// Builds the curve from quartic coefficients.  Without a hint the cut
/// pairing minimizes total cut length (deterministic tie-break); with a hint
/// (the base curve of a family) roots are matched by continuity so the cut
/// configuration never jumps across a finite-difference stencil.
inline QuarticCurve makeQuarticCurve(const Poly& q, const std::optional<std::array<cplx, 4>>& hint = {}) {
    QuarticCurve c;
    c.q = q;
    c.dq = q.derivative();
    if (q.degree() == 3) {
        c.cubicModel = true;
        throw InputError(
            "cubic model with a branch point at infinity is flagged but not supported; "
            "use a quartic q(x)");
    }
    if (q.degree() != 4) throw InputError("family curve requires a quartic q(x)");
    std::vector<cplx> roots = polyRoots(q);
    c.leadSqrt = std::sqrt(q.c[4]);
    double sc = 0.0;
    for (auto r : roots) sc = std::max(sc, std::abs(r));
    c.scale = std::max(sc, 1e-12);

    double minsep = 1e300;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) minsep = std::min(minsep, std::abs(roots[size_t(i)] - roots[size_t(j)]));
    if (minsep <= 1e-8 * c.scale)
        throw NumericError("degenerate family: branch points collide (separation " +
                           std::to_string(minsep) + ")");

    if (hint) {
        // continuity matching: each slot takes the nearest remaining root
        std::array<bool, 4> used{};
        for (int slot = 0; slot < 4; ++slot) {
            int best = -1;
            double bd = 1e300;
            for (int j = 0; j < 4; ++j) {
                if (used[size_t(j)]) continue;
                double d = std::abs(roots[size_t(j)] - (*hint)[size_t(slot)]);
                if (d < bd) {
                    bd = d;
                    best = j;
                }
            }
            if (bd > 0.45 * minsep && bd > 0.2 * c.scale)
                throw NumericError("stencil degeneracy: cannot match branch points by continuity");
            used[size_t(best)] = true;
            c.b[size_t(slot)] = roots[size_t(best)];
        }
        return c;
    }

    auto lexLess = [](cplx u, cplx v) {
        if (u.real() != v.real()) return u.real() < v.real();
        return u.imag() < v.imag();
    };
    static const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    int bestP = 0;
    double bestLen = 1e300;
    for (int p = 0; p < 3; ++p) {
        double len = std::abs(roots[size_t(pairings[p][0])] - roots[size_t(pairings[p][1])]) +
                     std::abs(roots[size_t(pairings[p][2])] - roots[size_t(pairings[p][3])]);
        if (len < bestLen - 1e-12 * c.scale) {
            bestLen = len;
            bestP = p;
        }
    }
    std::array<cplx, 2> cut1{roots[size_t(pairings[bestP][0])], roots[size_t(pairings[bestP][1])]};
    std::array<cplx, 2> cut2{roots[size_t(pairings[bestP][2])], roots[size_t(pairings[bestP][3])]};
    cplx m1 = 0.5 * (cut1[0] + cut1[1]), m2 = 0.5 * (cut2[0] + cut2[1]);
    if (!lexLess(m1, m2)) std::swap(cut1, cut2);
    // inner endpoints (b[1], b[2]) face each other: choose the endpoint pair
    // of minimal distance, with a deterministic tie-break that keeps
    // symmetric configurations on symmetric b-paths
    {
        int bi = 0, bj = 0;
        double best = 1e300;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double dcur = std::abs(cut1[size_t(i)] - cut2[size_t(j)]);
                double tie = -(cut1[size_t(i)] + cut2[size_t(j)]).imag() * 1e-7 -
                             (cut1[size_t(i)] + cut2[size_t(j)]).real() * 1e-9;
                if (dcur + tie < best) {
                    best = dcur + tie;
                    bi = i;
                    bj = j;
                }
            }
        if (bi == 0) std::swap(cut1[0], cut1[1]);
        if (bj == 1) std::swap(cut2[0], cut2[1]);
    }
    c.b = {cut1[0], cut1[1], cut2[0], cut2[1]};

    // cuts must not intersect
    auto segDist = [](cplx a1, cplx a2, cplx b1, cplx b2) {
        auto ptSeg = [](cplx p, cplx s1, cplx s2) {
            cplx d = s2 - s1;
            double L2 = std::norm(d);
            double t = L2 == 0 ? 0.0 : std::clamp(((p - s1) * std::conj(d)).real() / L2, 0.0, 1.0);
            return std::abs(p - (s1 + t * d));
        };
        return std::min(std::min(ptSeg(a1, b1, b2), ptSeg(a2, b1, b2)),
                        std::min(ptSeg(b1, a1, a2), ptSeg(b2, a1, a2)));
    };
    if (segDist(c.b[0], c.b[1], c.b[2], c.b[3]) <= 1e-6 * c.scale)
        throw NumericError("degenerate family: branch cuts intersect");
    return c;
}

// ----------------------------------------------------------------- periods

struct PeriodData {
    cplx A;             // a-period of dx/y
    cplx Bp;            // b-period of dx/y (orientation fixed by sB)
    cplx tau;           // Bp / A, with Im tau > 0 at the family base
    int sB = 1;         // b-orientation sign chosen once per family
    double aNormResidual = 0.0;  // | (1/A) * a-period recomputed - 1 |
};

namespace detail {

/// Joukowski ellipse around the segment [p, r] with focal parameter lambda:
/// x(theta) = m + (h/2)(lambda e^{i theta} + e^{-i theta}/lambda).
struct EllipseContour {
    cplx m, h;
    double lambda;
    cplx x(double th) const {
        cplx u = std::polar(lambda, th);
        return m + 0.5 * h * (u + 1.0 / u);
    }
    cplx dx(double th) const {
        cplx u = std::polar(lambda, th);
        return 0.5 * h * kI * (u - 1.0 / u);
    }
};

inline double joukowskiModulus(cplx x, cplx m, cplx h) {
    cplx w = (x - m) / h;
    cplx u = w + std::sqrt(w * w - 1.0);
    double mod = std::abs(u);
    if (mod < 1.0) mod = 1.0 / mod;
    return mod;
}

inline EllipseContour aContour(const QuarticCurve& c, double shrink = 1.0) {
    cplx m = 0.5 * (c.b[0] + c.b[1]);
    cplx h = 0.5 * (c.b[1] - c.b[0]);
    double lam = 1e300;
    for (int j = 2; j < 4; ++j) lam = std::min(lam, joukowskiModulus(c.b[size_t(j)], m, h));
    if (lam < 1.05) throw NumericError("degenerate family: cuts too close for the a-contour");
    double lambda = std::sqrt(lam);
    lambda = 1.0 + (lambda - 1.0) * shrink;
    return EllipseContour{m, h, lambda};
}

inline cplx contourIntegral(const EllipseContour& e, const std::function<cplx(cplx)>& f,
                            double relTol = 1e-13, int maxNodes = 1 << 14) {
    int n = 64;
    auto evalAt = [&](int N) {
        cplx s = 0.0;
        for (int j = 0; j < N; ++j) {
            double th = 2.0 * kPi * j / N;
            s += f(e.x(th)) * e.dx(th);
        }
        return s * (2.0 * kPi / double(N));
    };
    cplx prev = evalAt(n);
    while (n < maxNodes) {
        n *= 2;
        cplx cur = evalAt(n);
        if (std::abs(cur - prev) <= relTol * std::max(1e-30, std::abs(cur))) return cur;
        prev = cur;
    }
    throw NumericError("quadrature non-convergence on the a-contour");
}

/// The b-path from b[1] to b[2], detoured off the straight segment so that
/// slightly deformed curves in a family never place a branch point on it.
struct BPath {
    std::array<cplx, 4> nodes;  // b1, b1+d, b2+d, b2
};

inline BPath bPath(const QuarticCurve& c) {
    cplx d = c.b[2] - c.b[1];
    cplx perp = kI * d / std::abs(d);
    double delta = 0.25 * std::abs(d);
    for (int j : {0, 3}) delta = std::min(delta, 0.45 * std::abs(c.b[size_t(j)] - c.b[1]));
    BPath p;
    p.nodes = {c.b[1], c.b[1] + delta * perp, c.b[2] + delta * perp, c.b[2]};
    return p;
}

/// integral of f dx along the b-path (single sheet); the full b-period of an
/// odd differential is twice this.  The outer legs start and end at branch
/// points of the base cut configuration, so they run through the sqrt
/// substitution.
inline cplx bPathIntegral(const QuarticCurve& c, const std::function<cplx(cplx)>& f,
                          double relTol = 1e-13, int maxLevel = 9, int minLevel = 1) {
    BPath p = bPath(c);
    cplx s = sqrtSubstSegment(f, p.nodes[0], p.nodes[1], relTol, maxLevel, minLevel);
    s += glSegment(f, p.nodes[1], p.nodes[2], relTol, maxLevel, minLevel);
    s -= sqrtSubstSegment(f, p.nodes[3], p.nodes[2], relTol, maxLevel, minLevel);
    return s;
}

}  // namespace detail

/// a- and b-periods of dx/y along contours pinned to the cut configuration;
/// the b-orientation is chosen so Im tau > 0 (pass the base orientation for
/// the other curves of a family stencil).
inline PeriodData computePeriods(const QuarticCurve& c, std::optional<int> orientationHint = {}) {
    PeriodData pd;
    auto invy = [&](cplx x) { return 1.0 / c.y(x); };
    detail::EllipseContour ac = detail::aContour(c);
    pd.A = detail::contourIntegral(ac, invy);
    if (std::abs(pd.A) < 1e-14) throw NumericError("degenerate family: vanishing a-period");
    cplx braw = 2.0 * detail::bPathIntegral(c, invy);
    cplx tau = braw / pd.A;
    pd.sB = orientationHint.value_or(tau.imag() > 0 ? 1 : -1);
    pd.Bp = double(pd.sB) * braw;
    pd.tau = pd.Bp / pd.A;
    if (!orientationHint && pd.tau.imag() <= 0)
        throw NumericError("orientation normalization failed: Im tau <= 0");

    // self-check: re-integrate the normalized differential over a different
    // representative of the a-cycle
    detail::EllipseContour ac2 = detail::aContour(c, 0.6);
    cplx again = detail::contourIntegral(ac2, invy) / pd.A;
    pd.aNormResidual = std::abs(again - 1.0);
    if (pd.aNormResidual > 1e-10)
        throw NumericError("a-period normalization self-check failed: residual " +
                           std::to_string(pd.aNormResidual));
    return pd;
}

// ------------------------------------------------- torus-uniformized kernel

/// Abel map and normalized Bergman kernel of one curve, uniformized on
/// C/(Z + tau Z) by zeta(p) = int_{x0}^p dx/(A y).
class TorusKernel {
public:
    TorusKernel(const QuarticCurve& c, const PeriodData& pd) : c_(c), pd_(pd) {
        x0_ = 0.5 * (c.b[1] + c.b[2]);
        p_ = std::exp(2.0 * kPi * kI * pd.tau);
        // Abel values of the branch points, each along a lifted polyline that
        // cannot touch the cuts: up from the branch point, across, down to
        // the base point.
        cplx across = c_.b[2] - c_.b[1];
        cplx perp = kI * across / std::abs(across);
        auto dAbelF = [&](cplx x) { return 1.0 / (pd_.A * c_.y(x)); };
        for (int i = 0; i < 4; ++i) {
            cplx bp = c_.b[size_t(i)];
            double clear = 1e300;
            for (int j = 0; j < 4; ++j)
                if (j != i) clear = std::min(clear, std::abs(c_.b[size_t(j)] - bp));
            double delta = 0.4 * clear;
            cplx lift = bp + delta * perp;
            cplx over = x0_ + delta * perp;
            cplx val = sqrtSubstSegment(dAbelF, bp, lift, 1e-13);
            val += glSegment(dAbelF, lift, over, 1e-13);
            val += glSegment(dAbelF, over, x0_, 1e-13);
            abelBranch_[size_t(i)] = -val;
        }
        // Self-check: branch-point Abel differences are half-periods.
        for (int i = 1; i < 4; ++i) {
            cplx d = 2.0 * (abelBranch_[size_t(i)] - abelBranch_[0]);
            d -= std::round(d.imag() / pd_.tau.imag()) * pd_.tau;
            d -= std::round(d.real());
            if (std::abs(d) > 1e-9)
                throw NumericError("Abel map self-check failed: branch differences are not "
                                   "half-periods (residual " + std::to_string(std::abs(d)) + ")");
        }
        // Bergman constant from the a-period normalization: the a-cycle's
        // Abel image is a unit shift, so c_B = -int_0^1 P0(s - w) ds for any
        // w off the lattice; verified with a second w.
        cplx w1 = 0.37 + 0.41 * pd_.tau;
        cplx w2 = 0.11 + 0.63 * pd_.tau;
        cB_ = -glSegment([&](cplx s) { return P0(s - w1); }, 0.0, 1.0);
        cplx cB2 = -glSegment([&](cplx s) { return P0(s - w2); }, 0.0, 1.0);
        if (std::abs(cB_ - cB2) > 1e-9 * std::max(1.0, std::abs(cB_)))
            throw NumericError("Bergman normalization constant is not w-independent");
    }

    const QuarticCurve& curve() const { return c_; }
    const PeriodData& periods() const { return pd_; }
    cplx basePoint() const { return x0_; }
    cplx bergmanConstant() const { return cB_; }
    cplx abelAtBranch(int i) const { return abelBranch_[size_t(i)]; }

    /// Doubly periodic kernel with double pole 1/z^2 + O(1) at lattice points
    /// (overall additive constant irrelevant, absorbed into cB):
    ///   P0(z) = pi^2 / sin^2(pi z) - 8 pi^2 sum_k k p^k/(1-p^k) cos(2 pi k z),
    /// valid on |Im z| < Im tau after lattice reduction; the minus sign comes
    /// from csc^2(pi w) = -4 sum_k k e^{2 pi i k w} on the upper half strip.
    cplx P0(cplx z) const {
        double n2 = std::round(z.imag() / pd_.tau.imag());
        z -= n2 * pd_.tau;
        z -= std::round(z.real());
        cplx s = std::sin(kPi * z);
        cplx acc = kPi * kPi / (s * s);
        cplx pk = p_;
        for (int k = 1; k <= 400; ++k) {
            cplx term = 8.0 * kPi * kPi * double(k) * pk / (1.0 - pk) * std::cos(2.0 * kPi * double(k) * z);
            acc -= term;
            if (std::abs(pk) < 1e-18 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(acc))) break;
            pk *= p_;
        }
        return acc;
    }

    /// Abel map of the point (x, y(x)) on the main sheet, along the straight
    /// path from the base point (guarded against cut crossings).
    cplx abelOfX(cplx x) const {
        guardPath(x0_, x);
        return glSegment([&](cplx t) { return 1.0 / (pd_.A * c_.y(t)); }, x0_, x);
    }

    /// Abel map near branch point i in the local coordinate t (= y on the
    /// curve): zeta(b_i) + int_0^t 2 dt' / (A q'(x(t'))).
    cplx abelNearBranch(int i, cplx t) const { return abelBranch_[size_t(i)] + abelLocalOffset(i, t); }

    /// The local part alone, to full relative precision (the difference
    /// zeta(r) - zeta(b_i) must not go through a large-value subtraction when
    /// it feeds the double pole of the kernel).
    cplx abelLocalOffset(int i, cplx t) const {
        return glSegment([&](cplx s) { return 2.0 / (pd_.A * c_.qprime(c_.xOfLocal(i, s))); }, 0.0, t);
    }

    cplx dAbel(cplx x) const { return 1.0 / (pd_.A * c_.y(x)); }

    /// Bergman kernel value kappa(x1, x2) with B = kappa dx1 dx2 (both points
    /// on the main sheet, off the cuts).
    cplx bergman(cplx x1, cplx x2) const {
        return (P0(abelOfX(x1) - abelOfX(x2)) + cB_) * dAbel(x1) * dAbel(x2);
    }

    /// Same with precomputed Abel values.
    cplx bergmanAbel(cplx z1, cplx dz1, cplx z2, cplx dz2) const {
        return (P0(z1 - z2) + cB_) * dz1 * dz2;
    }

    /// Numeric check that the p-slot a-period of B vanishes: integrates over
    /// the a-contour in the x-plane with the Abel map accumulated along the
    /// contour (exercises the geometric pullback, not just the zeta-plane
    /// normalization).
    double aPeriodOfBergman(cplx xq) const {
        detail::EllipseContour e = detail::aContour(c_);
        cplx zq = abelOfX(xq);
        const int N = 256;
        auto dzdth = [&](double th) { return e.dx(th) / (pd_.A * c_.y(e.x(th))); };
        cplx zstart = abelOfX(e.x(0.0));
        cplx total = 0.0;
        double h = 2.0 * kPi / N;
        cplx zarc = zstart;
        for (int j = 0; j < N; ++j) {
            double t0 = h * j;
            // 8-point GL on the arc, with the Abel value advanced to each node
            static const double xs[8] = {-0.9602898564975363, -0.7966664774136267,
                                         -0.5255324099163290, -0.1834346424956498,
                                         0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
            static const double ws[8] = {0.1012285362903763, 0.2223810344533745,
                                         0.3137066458778873, 0.3626837833783620,
                                         0.3626837833783620, 0.3137066458778873,
                                         0.2223810344533745, 0.1012285362903763};
            double prevNode = t0;
            cplx znode = zarc;
            for (int g = 0; g < 8; ++g) {
                double th = t0 + 0.5 * h * (xs[g] + 1.0);
                znode += gauss16([&](cplx s) { return dzdth(s.real()); }, cplx(prevNode, 0.0),
                                 cplx(th, 0.0));
                prevNode = th;
                total += ws[g] * 0.5 * h * (P0(znode - zq) + cB_) * dzdth(th);
            }
            zarc = znode + gauss16([&](cplx s) { return dzdth(s.real()); }, cplx(prevNode, 0.0),
                                   cplx(t0 + h, 0.0));
        }
        return std::abs(total);
    }

private:
    void guardPath(cplx a, cplx b) const {
        auto segSegDist = [](cplx a1, cplx a2, cplx b1, cplx b2) {
            auto ptSeg = [](cplx p, cplx s1, cplx s2) {
                cplx d = s2 - s1;
                double L2 = std::norm(d);
                double t = L2 == 0 ? 0.0 : std::clamp(((p - s1) * std::conj(d)).real() / L2, 0.0, 1.0);
                return std::abs(p - (s1 + t * d));
            };
            return std::min(std::min(ptSeg(a1, b1, b2), ptSeg(a2, b1, b2)),
                            std::min(ptSeg(b1, a1, a2), ptSeg(b2, a1, a2)));
        };
        double d1 = segSegDist(a, b, c_.b[0], c_.b[1]);
        double d2 = segSegDist(a, b, c_.b[2], c_.b[3]);
        if (std::min(d1, d2) < 1e-9 * c_.scale)
            throw NumericError("Abel-map path crosses a branch cut; move the sample point");
    }

    QuarticCurve c_;  // by value: the kernel outlives temporary curves
    PeriodData pd_;
    cplx x0_;
    cplx p_;
    cplx cB_;
    std::array<cplx, 4> abelBranch_{};
};

}  // namespace specrec::elliptic
