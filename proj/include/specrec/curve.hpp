#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specrec/bergman.hpp"
#include "specrec/errors.hpp"
#include "specrec/laurent.hpp"
#include "specrec/rational.hpp"
#include "specrec/series.hpp"

namespace specrec {

enum class ChartKind { Airy, Bessel };

/// Local chart at a ramification point: u = z^2 exactly (so the deck
/// involution is z -> -z) and v expanded as a series in z.  The odd part of v
/// starts at z^{+1} (Airy kind) or z^{-1} (Bessel kind) with a nonzero
/// leading coefficient; this encodes the simple-zero condition on du.
struct PointChart {
    int label = 0;
    TruncSeries vSeries;
    ChartKind kind = ChartKind::Airy;
};

/// Local spectral curve: per-point charts plus the symmetric Bergman
/// correction coefficients phi (zero for the standard genus-0 kernel).
class LocalSpectralCurve {
public:
    LocalSpectralCurve(std::vector<PointChart> charts, BiSeriesSym phi, long truncOrder)
        : points_(std::move(charts)), phi_(std::move(phi)), trunc_(truncOrder) {
        if (points_.empty()) throw InputError("curve needs at least one chart");
        if (!phi_.symmetric()) throw InputError("Bergman corrections must be symmetric");
        for (const auto& pc : points_) validateChart(pc);
    }

    const std::vector<PointChart>& points() const { return points_; }
    const PointChart& chart(int label) const {
        for (const auto& pc : points_)
            if (pc.label == label) return pc;
        throw InputError("unknown point label");
    }
    const BiSeriesSym& bergmanCorrections() const { return phi_; }
    long truncOrder() const { return trunc_; }

    /// Odd part of v at the chart (the kernel denominator ingredient).
    TruncSeries vOdd(int label) const { return chart(label).vSeries.paritySplit().second; }

private:
    static void validateChart(const PointChart& pc) {
        TruncSeries odd = pc.vSeries.paritySplit().second;
        long lead = odd.order();
        long expect = pc.kind == ChartKind::Airy ? 1 : -1;
        if (lead != expect)
            throw InputError(
                "non-simple ramification: odd part of v must start at z^" + std::to_string(expect) +
                " with a nonzero coefficient (found leading exponent " + std::to_string(lead) + ")");
    }

    std::vector<PointChart> points_;
    BiSeriesSym phi_;
    long trunc_;
};

/// Airy curve u = z^2, v = z with the standard kernel (phi = 0).
inline LocalSpectralCurve builtinAiry(long order) {
    if (order < 4) throw InputError("order must be >= 4");
    PointChart pc;
    pc.label = 0;
    pc.vSeries = TruncSeries::monomial(Rat(1), 1, order);
    pc.kind = ChartKind::Airy;
    return LocalSpectralCurve({pc}, BiSeriesSym(order), order);
}

/// Bessel curve u = z^2, v = 1/z with the standard kernel.
inline LocalSpectralCurve builtinBessel(long order) {
    if (order < 4) throw InputError("order must be >= 4");
    PointChart pc;
    pc.label = 0;
    pc.vSeries = TruncSeries::monomial(Rat(1), -1, order);
    pc.kind = ChartKind::Bessel;
    return LocalSpectralCurve({pc}, BiSeriesSym(order), order);
}

/// Disjoint union of standard charts (a product curve: no cross-point Bergman
/// coupling).
inline LocalSpectralCurve builtinProduct(const std::vector<ChartKind>& kinds, long order) {
    if (order < 4) throw InputError("order must be >= 4");
    std::vector<PointChart> charts;
    int label = 0;
    for (ChartKind k : kinds) {
        PointChart pc;
        pc.label = label++;
        pc.kind = k;
        pc.vSeries = TruncSeries::monomial(Rat(1), k == ChartKind::Airy ? 1 : -1, order);
        charts.push_back(pc);
    }
    return LocalSpectralCurve(std::move(charts), BiSeriesSym(order), order);
}

// ------------------------------------------------------------ global input

/// Rational function P/Q with exact coefficients.
struct RationalFunction {
    std::vector<Rat> num;  // num[k] = coefficient of x^k
    std::vector<Rat> den;  // defaults to {1}

    RationalFunction() : den{Rat(1)} {}
    RationalFunction(std::vector<Rat> n, std::vector<Rat> d) : num(std::move(n)), den(std::move(d)) {
        if (den.empty()) den = {Rat(1)};
    }

    static RationalFunction poly(std::vector<Rat> n) { return RationalFunction(std::move(n), {Rat(1)}); }

    /// Taylor expansion around x = a to the requested order.
    TruncSeries expandAt(const Rat& a, long order) const {
        auto shiftPoly = [&](const std::vector<Rat>& p) {
            // p(a + w) as a series in w
            TruncSeries acc = TruncSeries::zero(order, 0);
            TruncSeries base = TruncSeries::fromCoeffs({a, Rat(1)}, 0, order);  // a + w
            TruncSeries pw = TruncSeries::monomial(Rat(1), 0, order);
            for (size_t k = 0; k < p.size(); ++k) {
                if (p[k] != 0) acc = acc + pw.scaled(p[k]);
                if (k + 1 < p.size()) pw = pw * base;
            }
            return acc;
        };
        TruncSeries n = shiftPoly(num), d = shiftPoly(den);
        if (d.knownZero()) throw InputError("rational function has a pole at the expansion point");
        return divide(n, d);
    }

    std::vector<Rat> numDerivativeTimesDenMinus() const {
        // numerator of d/dx (num/den): num' den - num den'
        auto derive = [](const std::vector<Rat>& p) {
            std::vector<Rat> d;
            for (size_t k = 1; k < p.size(); ++k) d.push_back(Rat(static_cast<long long>(k)) * p[k]);
            if (d.empty()) d.push_back(Rat(0));
            return d;
        };
        auto mul = [](const std::vector<Rat>& p, const std::vector<Rat>& q) {
            std::vector<Rat> r(p.size() + q.size() - 1, Rat(0));
            for (size_t i = 0; i < p.size(); ++i)
                for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
            return r;
        };
        std::vector<Rat> a = mul(derive(num), den);
        std::vector<Rat> b = mul(num, derive(den));
        std::vector<Rat> out(std::max(a.size(), b.size()), Rat(0));
        for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
        for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
        return out;
    }
};

namespace detail {

/// All rational roots of an exact polynomial (with multiplicities checked to
/// be simple by the caller); errors if a non-constant factor remains.
inline std::vector<Rat> rationalRootsComplete(std::vector<Rat> p, const std::string& what) {
    // normalize: clear denominators, make integer polynomial
    while (!p.empty() && p.back() == 0) p.pop_back();
    if (p.empty()) throw InputError(what + ": zero polynomial");
    Int lcm = 1;
    for (const Rat& c : p) {
        Int d = denominator(c);
        lcm = lcm / gcd(lcm, d) * d;
    }
    std::vector<Int> ip;
    for (const Rat& c : p) ip.push_back(numerator(c) * (lcm / denominator(c)));
    Int content = 0;
    for (const Int& c : ip) content = gcd(content, c);
    if (content != 0)
        for (Int& c : ip) c /= content;

    std::vector<Rat> roots;
    auto evalAt = [](const std::vector<Int>& q, const Rat& x) {
        Rat acc(0);
        for (size_t k = q.size(); k-- > 0;) acc = acc * x + Rat(q[k]);
        return acc;
    };
    auto deflate = [](std::vector<Int>& q, const Rat& r) {
        // q(x) = (x - r) * s(x) * den(r)-scaled; use synthetic division over Q
        std::vector<Rat> s(q.size() - 1, Rat(0));
        Rat carry(0);
        for (size_t k = q.size(); k-- > 1;) {
            carry = Rat(q[k]) + carry * r;
            s[k - 1] = carry;
        }
        // rescale to integers
        Int lc = 1;
        for (auto& c : s) {
            Int d = denominator(c);
            lc = lc / gcd(lc, d) * d;
        }
        std::vector<Int> out;
        for (auto& c : s) out.push_back(numerator(c) * (lc / denominator(c)));
        q = out;
    };

    while (ip.size() > 1) {
        // rational root theorem: p/q with p | ip[0], q | ip.back()
        Int a0 = abs(ip.front()), an = abs(ip.back());
        bool found = false;
        if (a0 == 0) {
            roots.push_back(Rat(0));
            ip.erase(ip.begin());
            found = true;
        } else {
            auto divisors = [](Int n) {
                std::vector<Int> out;
                for (Int d = 1; d * d <= n; ++d)
                    if (n % d == 0) {
                        out.push_back(d);
                        out.push_back(n / d);
                    }
                return out;
            };
            for (const Int& pnum : divisors(a0)) {
                for (const Int& pden : divisors(an)) {
                    for (int sgn : {1, -1}) {
                        Rat cand(sgn * pnum, pden);
                        if (evalAt(ip, cand) == 0) {
                            roots.push_back(cand);
                            deflate(ip, cand);
                            found = true;
                            break;
                        }
                    }
                    if (found) break;
                }
                if (found) break;
            }
        }
        if (!found) break;
    }
    if (ip.size() > 1)
        throw InputError("non-rational critical point: " + what +
                         " has an irreducible non-rational factor");
    return roots;
}

}  // namespace detail

/// Local spectral curve from globally defined rational u, v: re-expands both
/// in the normalized chart z (u = u(alpha) + z^2) at every critical point of
/// u, and extracts the Bergman corrections phi from the global rational
/// kernel d zeta1 d zeta2 / (zeta1 - zeta2)^2.
///
/// Preconditions: all critical points of u rational and simple, away from
/// poles of u, v and zeros of dv; u''(alpha)/2 must be the square of a
/// rational at every alpha.
inline LocalSpectralCurve fromGlobalRational(const RationalFunction& u, const RationalFunction& v,
                                             long order) {
    if (order < 4) throw InputError("order must be >= 4");
    std::vector<Rat> crit = detail::rationalRootsComplete(u.numDerivativeTimesDenMinus(),
                                                          "numerator of du");
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
    // roots shared with the denominator are poles of u, not critical points
    auto evalPoly = [](const std::vector<Rat>& p, const Rat& x) {
        Rat acc(0);
        for (size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
        return acc;
    };
    std::erase_if(crit, [&](const Rat& a) { return evalPoly(u.den, a) == 0; });
    if (crit.empty()) throw InputError("u has no finite critical points");

    long exOrder = 2 * order + 6;
    std::vector<PointChart> charts;
    std::vector<TruncSeries> zetaOfZ;  // global coordinate offset zeta - alpha as series in z
    for (size_t i = 0; i < crit.size(); ++i) {
        const Rat& alpha = crit[i];
        TruncSeries uLoc = u.expandAt(alpha, exOrder);   // series in w = zeta - alpha
        TruncSeries vLoc = v.expandAt(alpha, exOrder);
        TruncSeries du = uLoc.derivative();
        if (du.order() != 1)
            throw InputError("non-simple ramification: du has a zero of order != 1 at x = " +
                             ratToString(alpha));
        // z = sqrt(u - u(alpha)) as a series in w; invert to get w(z).
        TruncSeries shifted = uLoc - TruncSeries::monomial(uLoc.coeff(0), 0, exOrder);
        TruncSeries zOfW = seriesSqrt(shifted);  // errors "non-square normalization" if needed
        TruncSeries wOfZ = compositionalInverse(zOfW);
        TruncSeries vOfZ = compose(vLoc, wOfZ);

        PointChart pc;
        pc.label = static_cast<int>(i);
        pc.vSeries = truncatedTo(vOfZ, order);
        TruncSeries odd = pc.vSeries.paritySplit().second;
        if (odd.order() != 1)
            throw InputError("non-simple ramification: odd part of v vanishes at z^1 (dv/du "
                             "degenerate at x = " + ratToString(alpha) + ")");
        pc.kind = ChartKind::Airy;
        charts.push_back(pc);
        zetaOfZ.push_back(truncatedTo(wOfZ, order + 2));
    }

    // Bergman corrections: phi^{ab}(z1,z2) = zeta_a'(z1) zeta_b'(z2) /
    // (zeta_a(z1)-zeta_b(z2))^2 - delta_{ab}/(z1-z2)^2, regular at the origin.
    // Computed in total-degree truncation; the diagonal subtraction is
    // performed exactly by dividing out (z1-z2)^2 in sum/difference variables.
    long T = order;
    long TB = T + 2;
    BiSeriesSym phi(T, T);
    for (size_t a = 0; a < charts.size(); ++a)
        for (size_t b = a; b < charts.size(); ++b) {
            detail::BiSeries corr(0);
            if (a == b) {
                detail::BiSeries M = detail::dividedDifference(zetaOfZ[a], TB);
                TruncSeries zp = zetaOfZ[a].derivative();
                detail::BiSeries G = detail::BiSeries::fromUnivariateFirst(zp, TB) *
                                     detail::BiSeries::fromUnivariateSecond(zp, TB) *
                                     (M * M).reciprocal();
                G.at(0, 0) -= Rat(1);
                corr = G.toSumDiff().divideByDSquared().fromSumDiff();
            } else {
                detail::BiSeries D(TB);
                D.at(0, 0) = crit[a] - crit[b];
                for (long k = 1; k <= TB; ++k) {
                    if (zetaOfZ[a].coeffKnown(k)) D.at(k, 0) += zetaOfZ[a].coeff(k);
                    if (zetaOfZ[b].coeffKnown(k)) D.at(0, k) -= zetaOfZ[b].coeff(k);
                }
                TruncSeries zpa = zetaOfZ[a].derivative(), zpb = zetaOfZ[b].derivative();
                corr = detail::BiSeries::fromUnivariateFirst(zpa, TB) *
                       detail::BiSeries::fromUnivariateSecond(zpb, TB) * (D * D).reciprocal();
            }
            for (long k = 0; k <= T && k <= corr.T(); ++k)
                for (long l = 0; k + l <= T && k + l <= corr.T(); ++l)
                    phi.set(int(a), int(b), k, l, corr.at(k, l));
        }

    return LocalSpectralCurve(std::move(charts), std::move(phi), order);
}

}  // namespace specrec
