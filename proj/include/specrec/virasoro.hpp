#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specrec/errors.hpp"
#include "specrec/rational.hpp"

namespace specrec {

enum class TauVariant { KW, BGW };

inline const char* tauVariantName(TauVariant v) { return v == TauVariant::KW ? "kw" : "bgw"; }

/// Monomial hbar^hpow * x^{v_1} ... x^{v_m} in the odd variables x^1, x^3, ...
struct FockMonomial {
    std::vector<int> vars;  // sorted odd labels, with repetition
    int hpow = 0;

    friend auto operator<=>(const FockMonomial&, const FockMonomial&) = default;

    /// Graded weight sum_(v in vars) (v+1)/2, i.e. deg x^{2k+1} = k+1.
    long weight() const {
        long w = 0;
        for (int v : vars) w += (v + 1) / 2;
        return w;
    }

    long multiplicity(int v) const {
        return static_cast<long>(std::count(vars.begin(), vars.end(), v));
    }

    std::string str() const {
        std::ostringstream os;
        if (hpow != 0) os << "h^" << hpow;
        int cur = 0, run = 0;
        for (size_t i = 0; i <= vars.size(); ++i) {
            if (i < vars.size() && run > 0 && vars[i] == cur) {
                ++run;
                continue;
            }
            if (run > 0) {
                os << (os.tellp() > 0 ? "*" : "") << "x" << cur;
                if (run > 1) os << "^" << run;
            }
            if (i < vars.size()) {
                cur = vars[i];
                run = 1;
            }
        }
        if (os.tellp() == 0) os << "1";
        return os.str();
    }
};

/// Polynomial in odd variables and hbar with a graded weight cutoff: terms of
/// weight <= weightCutoff and hpow in [hMin, hMax] are known; anything beyond
/// is unknown, never implicitly zero.
class FockPolynomial {
public:
    long weightCutoff = 0;
    int hMin = 0, hMax = 0;

    FockPolynomial() = default;
    FockPolynomial(long w, int hmin, int hmax) : weightCutoff(w), hMin(hmin), hMax(hmax) {}

    void add(FockMonomial m, const Rat& v) {
        if (v == 0) return;
        if (m.weight() > weightCutoff || m.hpow < hMin || m.hpow > hMax) return;  // trimmed
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), v);
        } else {
            it->second += v;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// Checked coefficient lookup: throws outside the cutoff window.
    Rat coeff(const FockMonomial& m) const {
        if (!inWindow(m))
            throw TruncationError("cutoff overflow: coefficient of " + m.str() +
                                  " is outside the known window");
        return rawCoeff(m);
    }

    /// Unchecked lookup, 0 when absent.
    Rat rawCoeff(const FockMonomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    bool inWindow(const FockMonomial& m) const {
        return m.weight() <= weightCutoff && m.hpow >= hMin && m.hpow <= hMax;
    }

    bool zero() const { return terms_.empty(); }
    const std::map<FockMonomial, Rat>& terms() const { return terms_; }

    friend FockPolynomial operator+(const FockPolynomial& a, const FockPolynomial& b) {
        FockPolynomial r(std::min(a.weightCutoff, b.weightCutoff), std::max(a.hMin, b.hMin),
                         std::min(a.hMax, b.hMax));
        for (const auto& [m, v] : a.terms_) r.add(m, v);
        for (const auto& [m, v] : b.terms_) r.add(m, v);
        return r;
    }

    FockPolynomial scaled(const Rat& k) const {
        FockPolynomial r(weightCutoff, hMin, hMax);
        if (k == 0) return r;
        for (const auto& [m, v] : terms_) r.terms_[m] = v * k;
        return r;
    }

    FockPolynomial shiftedH(int dh) const {
        FockPolynomial r(weightCutoff, hMin + dh, hMax + dh);
        for (const auto& [m, v] : terms_) {
            FockMonomial mm = m;
            mm.hpow += dh;
            r.terms_.emplace(std::move(mm), v);
        }
        return r;
    }

    friend FockPolynomial mul(const FockPolynomial& a, const FockPolynomial& b, long wCut, int hmin,
                              int hmax) {
        FockPolynomial r(wCut, hmin, hmax);
        for (const auto& [ma, va] : a.terms_) {
            if (ma.weight() > wCut) continue;
            for (const auto& [mb, vb] : b.terms_) {
                FockMonomial m;
                m.hpow = ma.hpow + mb.hpow;
                if (m.hpow < hmin || m.hpow > hmax) continue;
                m.vars.reserve(ma.vars.size() + mb.vars.size());
                std::merge(ma.vars.begin(), ma.vars.end(), mb.vars.begin(), mb.vars.end(),
                           std::back_inserter(m.vars));
                r.add(std::move(m), va * vb);
            }
        }
        return r;
    }

    /// d/dx^v.
    FockPolynomial derivative(int v) const {
        FockPolynomial r(weightCutoff, hMin, hMax);
        for (const auto& [m, c] : terms_) {
            long mult = m.multiplicity(v);
            if (mult == 0) continue;
            FockMonomial mm = m;
            mm.vars.erase(std::find(mm.vars.begin(), mm.vars.end(), v));
            r.add(std::move(mm), c * Rat(mult));
        }
        return r;
    }

    /// Multiply by the variable x^v.
    FockPolynomial timesVar(int v) const {
        FockPolynomial r(weightCutoff, hMin, hMax);
        for (const auto& [m, c] : terms_) {
            FockMonomial mm = m;
            mm.vars.insert(std::upper_bound(mm.vars.begin(), mm.vars.end(), v), v);
            r.add(std::move(mm), c);
        }
        return r;
    }

    int maxVar() const {
        int mv = 0;
        for (const auto& [m, c] : terms_) {
            (void)c;
            if (!m.vars.empty()) mv = std::max(mv, m.vars.back());
        }
        return mv;
    }

    bool operator==(const FockPolynomial& o) const { return terms_ == o.terms_; }

private:
    std::map<FockMonomial, Rat> terms_;
};

/// Virasoro operator L_m of the KW tower (m >= -1, pinned variable x^{2m+3})
/// or the BGW tower (m >= 0, pinned variable x^{2m+1}):
///   L_m = -1/2 d/dx^p + (hbar/4) sum_{i+j=2m, i,j odd} d^2/dx^i dx^j
///         + 1/2 sum_{i odd} i x^i d/dx^{i+2m}
///         + (1/16) delta_{m,0} + ((x^1)^2 / 4 hbar) delta_{m,-1}
/// with p = 2m+3 (KW) or p = 2m+1 (BGW); d/dx^{-1} is the zero operator.
struct VirasoroOperator {
    TauVariant variant = TauVariant::KW;
    int m = 0;

    VirasoroOperator(TauVariant v, int mode) : variant(v), m(mode) {
        if (v == TauVariant::KW && m < -1) throw InputError("KW Virasoro modes start at m = -1");
        if (v == TauVariant::BGW && m < 0) throw InputError("BGW Virasoro modes start at m = 0");
    }

    int pinnedVariable() const { return variant == TauVariant::KW ? 2 * m + 3 : 2 * m + 1; }

    /// Exact operator action on a polynomial (no truncation in weight beyond
    /// the stated output window); used by the commutator check.
    FockPolynomial apply(const FockPolynomial& P) const {
        FockPolynomial r(P.weightCutoff + 8, P.hMin - 1, P.hMax + 1);
        auto acc = [&](const FockPolynomial& q, const Rat& s) {
            for (const auto& [mm, v] : q.terms()) r.add(mm, v * s);
        };
        acc(P.derivative(pinnedVariable()), Rat(-1, 2));
        for (int i = 1; i <= 2 * m - 1; i += 2) {
            int j = 2 * m - i;
            acc(P.derivative(i).derivative(j).shiftedH(1), Rat(1, 4));
        }
        int top = std::max(P.maxVar(), pinnedVariable()) + 2 * std::abs(m) + 2;
        for (int i = 1; i <= top; i += 2) {
            int target = i + 2 * m;
            if (target < 1) continue;
            FockPolynomial d = P.derivative(target);
            if (d.zero()) continue;
            acc(d.timesVar(i), Rat(i, 2));
        }
        if (m == 0) acc(P, Rat(1, 16));
        if (variant == TauVariant::KW && m == -1)
            acc(P.timesVar(1).timesVar(1).shiftedH(-1), Rat(1, 4));
        return r;
    }
};

/// Conjugated residual e^{-S} L_m e^{S} for S = log Z:
///   -1/2 S_p + (hbar/4) sum_{i+j=2m} (S_{ij} + S_i S_j)
///   + 1/2 sum_i i x^i S_{i+2m} + centrals,
/// subscripts denoting x-derivatives.  The output weight window shrinks by
/// the operator demand (m+2 for KW, m+1 for BGW); trimmed beyond it.
inline FockPolynomial applyVirasoro(const VirasoroOperator& op, const FockPolynomial& logZ) {
    long demand = std::max<long>(op.m + (op.variant == TauVariant::KW ? 2 : 1), 0);
    long wOut = logZ.weightCutoff - demand;
    if (wOut < 0)
        throw TruncationError("cutoff overflow: weight window " + std::to_string(logZ.weightCutoff) +
                              " too small for Virasoro mode m=" + std::to_string(op.m));
    FockPolynomial r(wOut, std::min(logZ.hMin, -1), logZ.hMax);
    auto acc = [&](const FockPolynomial& q, const Rat& s) {
        for (const auto& [mm, v] : q.terms()) r.add(mm, v * s);
    };

    acc(logZ.derivative(op.pinnedVariable()), Rat(-1, 2));

    for (int i = 1; i <= 2 * op.m - 1; i += 2) {
        int j = 2 * op.m - i;
        acc(logZ.derivative(i).derivative(j).shiftedH(1), Rat(1, 4));
        FockPolynomial prod = mul(logZ.derivative(i), logZ.derivative(j), wOut,
                                  2 * logZ.hMin, 2 * logZ.hMax);
        acc(prod.shiftedH(1), Rat(1, 4));
    }

    int top = static_cast<int>(2 * logZ.weightCutoff + 1);
    for (int i = 1; i <= top; i += 2) {
        int target = i + 2 * op.m;
        if (target < 1) continue;
        FockPolynomial d = logZ.derivative(target);
        if (d.zero()) continue;
        acc(d.timesVar(i), Rat(i, 2));
    }

    if (op.m == 0) r.add(FockMonomial{{}, 0}, Rat(1, 16));
    if (op.variant == TauVariant::KW && op.m == -1) r.add(FockMonomial{{1, 1}, -1}, Rat(1, 4));
    return r;
}

/// [L_m, L_n] == (m - n) L_{m+n}, verified exactly on every monomial of
/// weight <= maxWeight (central terms included).
inline bool commutatorCheck(TauVariant variant, int m, int n, long maxWeight) {
    VirasoroOperator Lm(variant, m), Ln(variant, n), Lmn(variant, m + n);

    std::vector<FockMonomial> basis;
    std::vector<int> cur;
    std::function<void(int, long)> rec = [&](int minVar, long wLeft) {
        basis.push_back(FockMonomial{cur, 0});
        for (int v = minVar; (v + 1) / 2 <= wLeft; v += 2) {
            cur.push_back(v);
            rec(v, wLeft - (v + 1) / 2);
            cur.pop_back();
        }
    };
    rec(1, maxWeight);

    for (const auto& mono : basis) {
        FockPolynomial P(maxWeight + 32, -4, 4);
        P.add(mono, Rat(1));
        FockPolynomial diff = Lm.apply(Ln.apply(P)) + Ln.apply(Lm.apply(P)).scaled(Rat(-1));
        FockPolynomial expect = Lmn.apply(P).scaled(Rat(m - n));
        FockPolynomial resid = diff + expect.scaled(Rat(-1));
        for (const auto& [mm, v] : resid.terms()) {
            (void)mm;
            if (v != 0) return false;
        }
    }
    return true;
}

namespace detail {

inline bool subMultiset(const std::vector<int>& a, const std::vector<int>& b) {
    // a, b sorted; true iff a is a submultiset of b
    size_t i = 0, j = 0;
    while (i < a.size()) {
        while (j < b.size() && b[j] < a[i]) ++j;
        if (j >= b.size() || b[j] != a[i]) return false;
        ++i;
        ++j;
    }
    return true;
}

inline std::vector<int> multisetDiff(const std::vector<int>& b, const std::vector<int>& a) {
    std::vector<int> out;
    size_t i = 0;
    for (size_t j = 0; j < b.size(); ++j) {
        if (i < a.size() && a[i] == b[j]) {
            ++i;
            continue;
        }
        out.push_back(b[j]);
    }
    return out;
}

/// Coefficient of (vars, hpow) in the product P*Q, by exact convolution over
/// P's stored terms.
inline Rat productCoeff(const FockPolynomial& P, const FockPolynomial& Q,
                        const std::vector<int>& vars, int hpow) {
    Rat acc(0);
    for (const auto& [m1, c1] : P.terms()) {
        if (!subMultiset(m1.vars, vars)) continue;
        FockMonomial m2{multisetDiff(vars, m1.vars), hpow - m1.hpow};
        Rat c2 = Q.rawCoeff(m2);
        if (c2 != 0) acc += c1 * c2;
    }
    return acc;
}

}  // namespace detail

/// Solves for the unique truncation of log Z annihilated by the Virasoro
/// tower, proceeding by total weight then lexicographic monomial order.
/// Every monomial is pinned through its largest variable x^p with p = 2m+3
/// (KW, m >= -1) or p = 2m+1 (BGW, m >= 0): the -1/2 S_p term of the m-th
/// residual determines its coefficient from strictly lower weight data.  A
/// final verification pass asserts every residual vanishes identically on its
/// certified window ("inconsistent system" otherwise).
///
/// The result contains S_h for 0 <= h <= H as the hbar^{h-1} part, all
/// monomial weights <= W.  For KW the x-coefficients are intersection numbers
/// times odd double factorials; for BGW the analogous BGW coefficients.
inline FockPolynomial solveByRecursion(TauVariant variant, long W, int H) {
    if (W < 1 || H < 1) throw InputError("solveByRecursion requires W, H >= 1");
    FockPolynomial S(W, -1, H - 1);

    std::vector<FockMonomial> monos;
    std::vector<int> cur;
    std::function<void(int, long)> rec = [&](int minVar, long wLeft) {
        if (!cur.empty()) monos.push_back(FockMonomial{cur, 0});
        for (int v = minVar; (v + 1) / 2 <= wLeft; v += 2) {
            cur.push_back(v);
            rec(v, wLeft - (v + 1) / 2);
            cur.pop_back();
        }
    };
    rec(1, W);
    std::sort(monos.begin(), monos.end(), [](const FockMonomial& a, const FockMonomial& b) {
        if (a.weight() != b.weight()) return a.weight() < b.weight();
        return a.vars < b.vars;
    });

    long currentWeight = -1;
    std::map<int, FockPolynomial> derivCache;  // level-local: lower weights are final

    for (const auto& mono : monos) {
        if (mono.weight() != currentWeight) {
            currentWeight = mono.weight();
            derivCache.clear();
        }
        auto deriv = [&](int v) -> const FockPolynomial& {
            auto it = derivCache.find(v);
            if (it == derivCache.end()) it = derivCache.emplace(v, S.derivative(v)).first;
            return it->second;
        };

        int p = mono.vars.back();
        int m = variant == TauVariant::KW ? (p - 3) / 2 : (p - 1) / 2;
        FockMonomial reduced = mono;
        reduced.vars.pop_back();
        Rat multP(mono.multiplicity(p));

        for (int hp = -1; hp <= H - 1; ++hp) {
            Rat restVal(0);

            // (hbar/4) S_{ij}: coefficient of (reduced, hp-1) in d_i d_j S.
            for (int i = 1; i <= 2 * m - 1; i += 2) {
                int j = 2 * m - i;
                FockMonomial q = reduced;
                q.hpow = hp - 1;
                q.vars.insert(std::upper_bound(q.vars.begin(), q.vars.end(), i), i);
                q.vars.insert(std::upper_bound(q.vars.begin(), q.vars.end(), j), j);
                Rat c = S.rawCoeff(q);
                if (c != 0) {
                    Rat factor = Rat(q.multiplicity(j)) * Rat(q.multiplicity(i) - (i == j ? 1 : 0));
                    restVal += Rat(1, 4) * c * factor;
                }
                // (hbar/4) S_i S_j
                restVal += Rat(1, 4) * detail::productCoeff(deriv(i), deriv(j), reduced.vars, hp - 1);
            }

            // 1/2 sum_i i x^i S_{i+2m}
            for (size_t t = 0; t < reduced.vars.size(); ++t) {
                int i = reduced.vars[t];
                if (t > 0 && reduced.vars[t - 1] == i) continue;
                int target = i + 2 * m;
                if (target < 1) continue;
                FockMonomial q = reduced;
                q.hpow = hp;
                q.vars.erase(std::find(q.vars.begin(), q.vars.end(), i));
                q.vars.insert(std::upper_bound(q.vars.begin(), q.vars.end(), target), target);
                Rat c = S.rawCoeff(q);
                if (c != 0) restVal += Rat(i, 2) * c * Rat(q.multiplicity(target));
            }

            if (m == 0 && reduced.vars.empty() && hp == 0) restVal += Rat(1, 16);
            if (variant == TauVariant::KW && m == -1 && hp == -1 &&
                reduced.vars == std::vector<int>{1, 1})
                restVal += Rat(1, 4);

            // Solve -1/2 * multP * S(mono) + restVal = 0.
            Rat value = Rat(2) * restVal / multP;
            if (value != 0) {
                FockMonomial key = mono;
                key.hpow = hp;
                S.add(std::move(key), value);
            }
        }
    }

    int maxM = static_cast<int>(W) - (variant == TauVariant::KW ? 2 : 1);
    for (int m = (variant == TauVariant::KW ? -1 : 0); m <= maxM; ++m) {
        FockPolynomial resid = applyVirasoro(VirasoroOperator(variant, m), S);
        for (const auto& [mm, v] : resid.terms())
            if (v != 0)
                throw ConsistencyError("inconsistent system: residual of L_" + std::to_string(m) +
                                       " nonzero at " + mm.str() + " = " + ratToString(v));
    }
    return S;
}

/// Symmetric-tensor dictionary for a solved Fock polynomial: with
///   log Z = sum_h hbar^{h-1} sum_n (1/n!) sum_{k_1..k_n} T_{h,n;k} x^{k_1}..x^{k_n}
/// the monomial coefficient carries 1/prod(multiplicities!), so
///   T_{h,n;(k_1..k_n)} = prod(multiplicities!) * [monomial coefficient].
/// This matches the FreeEnergyTable normalization exactly.
inline Rat fockTensorEntry(const FockPolynomial& S, long h, const std::vector<int>& sortedVars) {
    FockMonomial m{sortedVars, static_cast<int>(h) - 1};
    Rat c = S.coeff(m);
    if (c == 0) return c;
    Rat scale(1);
    size_t i = 0;
    while (i < sortedVars.size()) {
        size_t j = i;
        while (j < sortedVars.size() && sortedVars[j] == sortedVars[i]) ++j;
        scale *= factorial(static_cast<long>(j - i));
        i = j;
    }
    return c * scale;
}

/// Intersection-number dictionary for the solved KW tau function:
///   <tau_{k_1}...tau_{k_n}>_h = T_{h,n;(2k_1+1..)} / prod (2k_i+1)!!.
inline Rat intersectionNumberFromFock(const FockPolynomial& S, long h, const std::vector<long>& ks) {
    std::vector<int> vars;
    Rat den(1);
    for (long k : ks) {
        vars.push_back(static_cast<int>(2 * k + 1));
        den *= oddDoubleFactorial(k);
    }
    std::sort(vars.begin(), vars.end());
    return fockTensorEntry(S, h, vars) / den;
}

}  // namespace specrec
