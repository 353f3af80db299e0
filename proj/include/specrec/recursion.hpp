#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specrec/curve.hpp"
#include "specrec/errors.hpp"
#include "specrec/laurent.hpp"
#include "specrec/rational.hpp"
#include "specrec/series.hpp"

namespace specrec {

/// Label of the auxiliary basis differential e^{point,k}: principal part
/// exactly z^{-k} dz/z at its own point, holomorphic tails everywhere
/// determined by the Bergman corrections.
struct BasisLabel {
    int point = 0;
    long k = 1;

    friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const BasisLabel& l) {
    return os << "(" << l.point << "," << l.k << ")";
}

using LabelTuple = std::vector<BasisLabel>;  // sorted multi-index

inline std::string labelTupleString(const LabelTuple& t) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) os << ",";
        os << t[i];
    }
    os << "]";
    return os.str();
}

struct BasisDifferential {
    BasisLabel label;
    std::map<int, LaurentDifferential> expansions;  // per point chart
};

/// Expansion of e^{alpha,k} at the chart of point beta, as the dz/z series
///   delta_{alpha beta} z^{-k} + sum_{l>=0} (phi^{beta alpha}_{l,k-1} / k) z^{l+1}.
inline TruncSeries basisExpansionSeries(const LocalSpectralCurve& curve, BasisLabel label,
                                        int beta) {
    const BiSeriesSym& phi = curve.bergmanCorrections();
    long tailTop = std::min(curve.truncOrder(), phi.totalBound() - (label.k - 1) + 1);
    if (tailTop < 1)
        throw TruncationError("truncation exhausted: no tail window for basis differential k=" +
                              std::to_string(label.k));
    TruncSeries s = TruncSeries::zero(tailTop, beta == label.point ? -label.k : 1);
    if (beta == label.point)
        s = s + TruncSeries::monomial(Rat(1), -label.k, tailTop);
    for (long l = 0; l + 1 <= tailTop; ++l) {
        Rat c = phi.get(beta, label.point, l, label.k - 1);
        if (c != 0) s = s + TruncSeries::monomial(c / Rat(label.k), l + 1, tailTop);
    }
    return s;
}

inline BasisDifferential basisExpansion(const LocalSpectralCurve& curve, int alpha, long k) {
    if (k < 1) throw InputError("basis differentials need k >= 1");
    BasisDifferential e;
    e.label = BasisLabel{alpha, k};
    for (const auto& pc : curve.points())
        e.expansions.emplace(pc.label,
                             LaurentDifferential(basisExpansionSeries(curve, e.label, pc.label)));
    return e;
}

/// Recursion kernel data at a chart: K(p1, z) = -(1/2) (sum_k 2 z^k e^{alpha,k}(p1))
/// / ((v(z)-v(-z)) du(z)).  `denominatorDz` is the series D with
/// (v(z)-v(-z)) du = D(z) dz, i.e. D = 2 v_odd(z) * 2z.
struct KernelExpansion {
    int point = 0;
    TruncSeries denominatorDz;
    std::vector<std::pair<long, TruncSeries>> coefficientOfBasis;  // (k, -z^k / (z * D(z)))
};

inline KernelExpansion kernelExpansion(const LocalSpectralCurve& curve, int alpha,
                                       long targetOrder) {
    KernelExpansion K;
    K.point = alpha;
    TruncSeries vo = curve.vOdd(alpha);
    if (vo.knownZero())
        throw InputError("degenerate denominator: odd part of v vanishes to truncation order");
    K.denominatorDz = vo.scaled(Rat(2)) * TruncSeries::monomial(Rat(2), 1, curve.truncOrder());
    TruncSeries zD = K.denominatorDz.shifted(1);
    for (long k = 1; k <= targetOrder; k += 2) {
        TruncSeries num = TruncSeries::monomial(Rat(-1), k, curve.truncOrder() + k + 4);
        K.coefficientOfBasis.emplace_back(k, divide(num, zD));
    }
    return K;
}

/// Table of correlators: (h, n) -> symmetric tensor over sorted label tuples.
class CorrelatorTable {
public:
    using Tensor = std::map<LabelTuple, Rat>;

    long chiMax = 0;

    static long poleBound(long h, long n) { return 2 * (3 * h - 3 + n) + 2; }

    bool has(long h, long n) const { return tables_.count({h, n}) != 0; }
    const Tensor& tensor(long h, long n) const {
        static const Tensor empty;
        auto it = tables_.find({h, n});
        return it == tables_.end() ? empty : it->second;
    }
    Rat entry(long h, long n, const LabelTuple& idx) const {
        const Tensor& t = tensor(h, n);
        auto it = t.find(idx);
        return it == t.end() ? Rat(0) : it->second;
    }
    void store(long h, long n, Tensor t) { tables_[{h, n}] = std::move(t); }
    const std::map<std::pair<long, long>, Tensor>& all() const { return tables_; }

private:
    std::map<std::pair<long, long>, Tensor> tables_;
};

struct RecursionOptions {
    /// Constant in front of the residue extraction; -1/4 is the value implied
    /// by the -1/2 of the kernel and the du = 2z dz measure.  Overridable only
    /// as a mutation-test hook for the cross-validation command.
    Rat kernelConstant = Rat(-1, 4);
};

namespace detail {

/// Single-slot expansion of omega_{h,n} at the chart alpha: a map from the
/// sorted (n-1)-tuple of remaining labels to the dz/z series of the
/// distinguished slot.  For (0,2) the remaining slot is tied to alpha:
/// B(., z) = sum_k k z^k (dz/z) (x) e^{alpha,k}.
class SlotExpansion {
public:
    std::map<LabelTuple, TruncSeries> parts;

    const TruncSeries* find(const LabelTuple& rest) const {
        auto it = parts.find(rest);
        return it == parts.end() ? nullptr : &it->second;
    }
};

inline SlotExpansion expandSlot(const LocalSpectralCurve& curve, const CorrelatorTable& table,
                                long h, long n, int alpha) {
    SlotExpansion out;
    if (h == 0 && n == 2) {
        for (long k = 1; k <= curve.truncOrder(); ++k)
            out.parts[{BasisLabel{alpha, k}}] =
                TruncSeries::monomial(Rat(k), k, curve.truncOrder());
        return out;
    }
    std::map<BasisLabel, TruncSeries> eCache;
    auto eAt = [&](BasisLabel L) -> const TruncSeries& {
        auto it = eCache.find(L);
        if (it == eCache.end()) it = eCache.emplace(L, basisExpansionSeries(curve, L, alpha)).first;
        return it->second;
    };
    for (const auto& [tuple, w] : table.tensor(h, n)) {
        for (size_t pos = 0; pos < tuple.size(); ++pos) {
            if (pos > 0 && tuple[pos] == tuple[pos - 1]) continue;
            LabelTuple rest = tuple;
            rest.erase(rest.begin() + static_cast<long>(pos));
            TruncSeries contrib = eAt(tuple[pos]).scaled(w);
            auto it = out.parts.find(rest);
            if (it == out.parts.end())
                out.parts.emplace(std::move(rest), std::move(contrib));
            else
                it->second = it->second + contrib;
        }
    }
    return out;
}

/// B(z, -z) at the chart, in (dz/z)^2 units:
/// -1/4 - sum_{k,l} (-1)^l phi^{aa}_{kl} z^{k+l+2}.
inline TruncSeries bergmanDiagonal(const LocalSpectralCurve& curve, int alpha) {
    const BiSeriesSym& phi = curve.bergmanCorrections();
    long top = std::min(2 * curve.truncOrder(), phi.totalBound()) + 1;
    TruncSeries s = TruncSeries::monomial(Rat(-1, 4), 0, top);
    for (const auto& [key, v] : phi.entries()) {
        auto [a, b, k, l] = key;
        if (a != alpha || b != alpha) continue;
        if (k + l + 2 > top) continue;
        Rat c = (l % 2 == 0 ? v : -v);
        s = s - TruncSeries::monomial(c, k + l + 2, top);
    }
    return s;
}

}  // namespace detail

/// Eynard-Orantin topological recursion on the local curve: all omega_{h,n}
/// with 2h-2+n <= chiMax, exact, stored in the (point,k) basis.  The
/// recursion distinguishes the first slot, so every tensor entry is computed
/// once per distinct label in its index and the results must agree exactly;
/// the pole bound 2(3h-3+n)+2 is verified on a window one notch wider.
inline CorrelatorTable computeCorrelators(const LocalSpectralCurve& curve, long chiMax,
                                          const RecursionOptions& opts = {}) {
    if (chiMax < 1) throw InputError("computeCorrelators requires chiMax >= 1");
    CorrelatorTable table;
    table.chiMax = chiMax;

    for (long chi = 1; chi <= chiMax; ++chi)
        for (long h = 0; 2 * h - 2 <= chi - 1; ++h) {
            long n = chi + 2 - 2 * h;
            if (n < 1) continue;
            long K = CorrelatorTable::poleBound(h, n);

            try {
                // residue coefficients per chart: C^alpha_k[rest] with
                // omega = sum e^{alpha,k} (x) C^alpha_k[rest]
                std::map<BasisLabel, CorrelatorTable::Tensor> cvals;
                for (const auto& pc : curve.points()) {
                    int alpha = pc.label;
                    TruncSeries vodd = curve.vOdd(alpha);

                    // assemble W_alpha(z) per remaining tuple
                    std::map<LabelTuple, TruncSeries> W;
                    auto addW = [&](const LabelTuple& rest, const TruncSeries& s) {
                        auto it = W.find(rest);
                        if (it == W.end())
                            W.emplace(rest, s);
                        else
                            it->second = it->second + s;
                    };

                    // (a) omega_{h-1, n+1}(z, sigma z, rest)
                    if (h >= 1) {
                        if (h - 1 == 0 && n + 1 == 2) {
                            addW({}, detail::bergmanDiagonal(curve, alpha));
                        } else {
                            detail::SlotExpansion T1 =
                                detail::expandSlot(curve, table, h - 1, n + 1, alpha);
                            std::map<BasisLabel, TruncSeries> eFlip;
                            for (const auto& [rest1, s1] : T1.parts) {
                                for (size_t pos = 0; pos < rest1.size(); ++pos) {
                                    if (pos > 0 && rest1[pos] == rest1[pos - 1]) continue;
                                    BasisLabel L = rest1[pos];
                                    auto it = eFlip.find(L);
                                    if (it == eFlip.end())
                                        it = eFlip
                                                 .emplace(L, basisExpansionSeries(curve, L, alpha)
                                                                 .flipped())
                                                 .first;
                                    LabelTuple rest2 = rest1;
                                    rest2.erase(rest2.begin() + static_cast<long>(pos));
                                    addW(rest2, s1 * it->second);
                                }
                            }
                        }
                    }

                    // (b) pair terms: collect candidate rest tuples, then
                    // evaluate the position-subset sum exactly per tuple.
                    std::map<std::pair<long, long>, detail::SlotExpansion> expansions;
                    auto expOf = [&](long hh, long nn) -> const detail::SlotExpansion& {
                        auto key = std::make_pair(hh, nn);
                        auto it = expansions.find(key);
                        if (it == expansions.end())
                            it = expansions.emplace(key, detail::expandSlot(curve, table, hh, nn, alpha))
                                     .first;
                        return it->second;
                    };
                    // pair terms: omega_{0,1} is absent ("not defined, or
                    // equivalently zero"); omega_{0,2} participates.
                    std::set<LabelTuple> pairTargets;
                    for (long h1 = 0; h1 <= h; ++h1) {
                        long h2 = h - h1;
                        for (long n1 = 1; n1 <= n; ++n1) {
                            long n2 = n + 1 - n1;
                            if (n2 < 1) continue;
                            if ((h1 == 0 && n1 == 1) || (h2 == 0 && n2 == 1)) continue;
                            const auto& E1 = expOf(h1, n1);
                            const auto& E2 = expOf(h2, n2);
                            for (const auto& [r1, s1] : E1.parts)
                                for (const auto& [r2, s2] : E2.parts) {
                                    LabelTuple merged;
                                    merged.reserve(r1.size() + r2.size());
                                    std::merge(r1.begin(), r1.end(), r2.begin(), r2.end(),
                                               std::back_inserter(merged));
                                    pairTargets.insert(std::move(merged));
                                }
                        }
                    }
                    for (const LabelTuple& rest : pairTargets) {
                        if (static_cast<long>(rest.size()) != n - 1) continue;
                        TruncSeries acc;
                        bool any = false;
                        size_t nn = rest.size();
                        for (size_t mask = 0; mask < (size_t(1) << nn); ++mask) {
                            LabelTuple r1, r2;
                            for (size_t p = 0; p < nn; ++p)
                                ((mask >> p) & 1 ? r1 : r2).push_back(rest[p]);
                            for (long h1 = 0; h1 <= h; ++h1) {
                                long h2 = h - h1;
                                long n1 = static_cast<long>(r1.size()) + 1;
                                long n2 = static_cast<long>(r2.size()) + 1;
                                if ((h1 == 0 && n1 == 1) || (h2 == 0 && n2 == 1)) continue;
                                const TruncSeries* f1 = expOf(h1, n1).find(r1);
                                if (!f1) continue;
                                const TruncSeries* f2 = expOf(h2, n2).find(r2);
                                if (!f2) continue;
                                TruncSeries term = (*f1) * f2->flipped();
                                acc = any ? acc + term : term;
                                any = true;
                            }
                        }
                        if (any) addW(rest, acc);
                    }

                    // residue extraction: C_k = opts.kernelConstant *
                    // coeff_{z^{2-k}}( W / v_odd )
                    for (auto& [rest, w] : W) {
                        TruncSeries q = divide(w, vodd);
                        for (long k = 1; k <= K + 2; k += 2) {
                            Rat ck = q.coeff(2 - k) * opts.kernelConstant;
                            if (ck == 0) continue;
                            if (k > K)
                                throw ConsistencyError(
                                    "pole bound violated: omega_{" + std::to_string(h) + "," +
                                    std::to_string(n) + "} produced k=" + std::to_string(k));
                            cvals[BasisLabel{alpha, k}][rest] += ck;
                        }
                    }
                }

                // assemble the symmetric tensor and assert slot symmetry
                std::set<LabelTuple> candidates;
                for (const auto& [L, tens] : cvals)
                    for (const auto& [rest, v] : tens) {
                        (void)v;
                        LabelTuple full = rest;
                        full.insert(std::upper_bound(full.begin(), full.end(), L), L);
                        candidates.insert(std::move(full));
                    }
                CorrelatorTable::Tensor out;
                for (const LabelTuple& idx : candidates) {
                    Rat value;
                    bool first = true;
                    for (size_t pos = 0; pos < idx.size(); ++pos) {
                        if (pos > 0 && idx[pos] == idx[pos - 1]) continue;
                        LabelTuple rest = idx;
                        rest.erase(rest.begin() + static_cast<long>(pos));
                        auto itL = cvals.find(idx[pos]);
                        Rat v(0);
                        if (itL != cvals.end()) {
                            auto itR = itL->second.find(rest);
                            if (itR != itL->second.end()) v = itR->second;
                        }
                        if (first) {
                            value = v;
                            first = false;
                        } else if (v != value) {
                            throw ConsistencyError("symmetry violation in omega_{" +
                                                   std::to_string(h) + "," + std::to_string(n) +
                                                   "} at " + labelTupleString(idx));
                        }
                    }
                    if (value != 0) out[idx] = value;
                }
                table.store(h, n, std::move(out));
            } catch (const TruncationError& e) {
                throw TruncationError("truncation exhaustion at omega_{" + std::to_string(h) + "," +
                                      std::to_string(n) + "}: " + e.what() +
                                      " (increase the series order)");
            }
        }
    return table;
}

/// Dilaton equation: sum_alpha Res psi * omega_{h,n+1} == (2h-2+n) omega_{h,n}
/// exactly, with psi the series primitive of v du at each chart; an optional
/// even shift xi(u) may be added to psi (it cannot change the verdict).
inline bool dilatonCheck(const LocalSpectralCurve& curve, const CorrelatorTable& table, long h,
                         long n, const std::optional<TruncSeries>& evenShift = {}) {
    if (!table.has(h, n + 1)) throw InputError("dilaton check needs omega_{h,n+1} in the table");
    CorrelatorTable::Tensor lhs;
    for (const auto& pc : curve.points()) {
        // psi with d psi = v du = 2 z^2 v(z) dz/z
        LaurentDifferential vdu(pc.vSeries.shifted(2).scaled(Rat(2)));
        TruncSeries psi = antiderivative(vdu);
        if (evenShift) psi = psi + *evenShift;
        detail::SlotExpansion T = detail::expandSlot(curve, table, h, n + 1, pc.label);
        for (const auto& [rest, s] : T.parts) {
            Rat r = residueAt0(psi, LaurentDifferential(s));
            if (r != 0) lhs[rest] += r;
        }
    }
    Rat factor(2 * h - 2 + n);
    const CorrelatorTable::Tensor& target = table.tensor(h, n);
    std::set<LabelTuple> keys;
    for (const auto& [k, v] : lhs) {
        (void)v;
        keys.insert(k);
    }
    for (const auto& [k, v] : target) {
        (void)v;
        keys.insert(k);
    }
    for (const LabelTuple& k : keys) {
        auto itL = lhs.find(k);
        Rat l = itL == lhs.end() ? Rat(0) : itL->second;
        auto itR = target.find(k);
        Rat r = itR == target.end() ? Rat(0) : itR->second;
        if (l != factor * r) return false;
    }
    return true;
}

/// Symplectic invariants F_h = (1/(2h-2)) sum_alpha Res psi omega_{h,1},
/// h >= 2; well-defined under psi -> psi + xi(u) for even xi (the optional
/// shift lets tests exercise that directly).
inline Rat freeEnergy(const LocalSpectralCurve& curve, const CorrelatorTable& table, long h,
                      const std::optional<TruncSeries>& evenShift = {}) {
    if (h < 2) throw InputError("undefined for h<2 in this artifact");
    if (!table.has(h, 1)) throw InputError("free energy needs omega_{h,1} in the table");
    Rat acc(0);
    for (const auto& pc : curve.points()) {
        LaurentDifferential vdu(pc.vSeries.shifted(2).scaled(Rat(2)));
        TruncSeries psi = antiderivative(vdu);
        if (evenShift) psi = psi + *evenShift;
        detail::SlotExpansion T = detail::expandSlot(curve, table, h, 1, pc.label);
        if (const TruncSeries* s = T.find({})) acc += residueAt0(psi, LaurentDifferential(*s));
    }
    return acc / Rat(2 * h - 2);
}

}  // namespace specrec
