#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "specrec/errors.hpp"
#include "specrec/rational.hpp"

namespace specrec {

/// Mode label of an Airy structure.  `block` separates factors of a product
/// structure (and maps to the point label of a local spectral curve); `k` is
/// the integer mode index within the block.
struct Mode {
    int block = 0;
    int k = 0;

    friend auto operator<=>(const Mode&, const Mode&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Mode& m) {
    if (m.block == 0) return os << m.k;
    return os << m.block << ":" << m.k;
}

using ModeTuple = std::vector<Mode>;  // sorted multi-index

inline std::string modeTupleString(const ModeTuple& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ",";
        std::ostringstream os;
        os << t[i];
        s += os.str();
    }
    return s + ")";
}

/// Tensors (A, B, C, eps) of a (quantum) Airy structure over a finite mode
/// set, in the normalization
///   H_i = -y_i + a_{ijk} x^j x^k + 2 b_{ij}^k x^j y_k + c_i^{jk} y_j y_k + hbar eps_i.
///
/// A is fully symmetric and C is symmetric in its upper pair; both are stored
/// on canonical (sorted) keys.  The structure constants g_{ij}^k =
/// 2(b_{ji}^k - b_{ij}^k) are derived, not stored.
///
/// Truncation semantics: when `gradeShift` is set for a block, the infinite
/// structure is graded there (entries vanish unless the indices satisfy the
/// shift relation: b_{ij}^k needs k = i+j+s, c_i^{jk} needs j+k = i+s,
/// a_{ijk} needs i+j+k = -s, eps_i needs i = -s) and in-grade entries whose
/// indices exceed the stored mode range are UNKNOWN.  Without a grade shift a
/// block is a complete finite structure and absent entries are exact zeros.
class AiryTensors {
public:
    std::vector<Mode> modes;        // sorted, distinct
    bool oddModesOnly = true;       // even modes implied, with zero tensors
    std::map<int, int> gradeShift;  // block -> shift s; absent block => complete

    void addA(Mode i, Mode j, Mode k, const Rat& v) { bump(a_, canonical3(i, j, k), v); }
    void addB(Mode i, Mode j, Mode k, const Rat& v) { bump(b_, {i, j, k}, v); }
    void addC(Mode i, Mode j, Mode k, const Rat& v) {
        bump(c_, {i, std::min(j, k), std::max(j, k)}, v);
    }
    void addEps(Mode i, const Rat& v) {
        if (v == 0) return;
        eps_[i] += v;
        if (eps_[i] == 0) eps_.erase(i);
    }

    Rat a(Mode i, Mode j, Mode k) const { return look(a_, canonical3(i, j, k)); }
    Rat b(Mode i, Mode j, Mode k) const { return look(b_, {i, j, k}); }
    Rat c(Mode i, Mode j, Mode k) const { return look(c_, {i, std::min(j, k), std::max(j, k)}); }
    Rat eps(Mode i) const {
        auto it = eps_.find(i);
        return it == eps_.end() ? Rat(0) : it->second;
    }

    /// Structure constants g_{ij}^k = 2 (b_{ji}^k - b_{ij}^k).
    Rat g(Mode i, Mode j, Mode k) const { return Rat(2) * (b(j, i, k) - b(i, j, k)); }

    const std::map<std::array<Mode, 3>, Rat>& aEntries() const { return a_; }
    const std::map<std::array<Mode, 3>, Rat>& bEntries() const { return b_; }
    const std::map<std::array<Mode, 3>, Rat>& cEntries() const { return c_; }
    const std::map<Mode, Rat>& epsEntries() const { return eps_; }

    bool hasMode(Mode m) const { return std::binary_search(modes.begin(), modes.end(), m); }

    bool graded(int block) const { return gradeShift.count(block) != 0; }
    int shift(int block) const { return gradeShift.at(block); }

    /// Certified tensor entries: the value when known, nullopt when the entry
    /// lies beyond the stored truncation of a graded block.
    std::optional<Rat> certifiedA(Mode i, Mode j, Mode k) const {
        if (i.block != j.block || i.block != k.block) return Rat(0);
        if (graded(i.block) && i.k + j.k + k.k != -shift(i.block)) return Rat(0);
        if (hasMode(i) && hasMode(j) && hasMode(k)) return a(i, j, k);
        return graded(i.block) ? std::nullopt : std::optional<Rat>(Rat(0));
    }
    std::optional<Rat> certifiedB(Mode i, Mode j, Mode k) const {
        if (i.block != j.block || i.block != k.block) return Rat(0);
        if (graded(i.block) && k.k != i.k + j.k + shift(i.block)) return Rat(0);
        if (hasMode(i) && hasMode(j) && hasMode(k)) return b(i, j, k);
        return graded(i.block) ? std::nullopt : std::optional<Rat>(Rat(0));
    }
    std::optional<Rat> certifiedC(Mode i, Mode j, Mode k) const {
        if (i.block != j.block || i.block != k.block) return Rat(0);
        if (graded(i.block) && j.k + k.k != i.k + shift(i.block)) return Rat(0);
        if (hasMode(i) && hasMode(j) && hasMode(k)) return c(i, j, k);
        return graded(i.block) ? std::nullopt : std::optional<Rat>(Rat(0));
    }
    std::optional<Rat> certifiedEps(Mode i) const {
        if (graded(i.block) && i.k != -shift(i.block)) return Rat(0);
        if (hasMode(i)) return eps(i);
        return graded(i.block) ? std::nullopt : std::optional<Rat>(Rat(0));
    }

    /// Certified g_{ij}^k.
    std::optional<Rat> certifiedG(Mode i, Mode j, Mode k) const {
        auto bji = certifiedB(j, i, k), bij = certifiedB(i, j, k);
        if (!bji || !bij) return std::nullopt;
        return Rat(2) * (*bji - *bij);
    }

private:
    static std::array<Mode, 3> canonical3(Mode i, Mode j, Mode k) {
        std::array<Mode, 3> key{i, j, k};
        std::sort(key.begin(), key.end());
        return key;
    }
    static void bump(std::map<std::array<Mode, 3>, Rat>& m, std::array<Mode, 3> key, const Rat& v) {
        if (v == 0) return;
        m[key] += v;
        if (m[key] == 0) m.erase(key);
    }
    static Rat look(const std::map<std::array<Mode, 3>, Rat>& m, std::array<Mode, 3> key) {
        auto it = m.find(key);
        return it == m.end() ? Rat(0) : it->second;
    }

    std::map<std::array<Mode, 3>, Rat> a_;
    std::map<std::array<Mode, 3>, Rat> b_;
    std::map<std::array<Mode, 3>, Rat> c_;
    std::map<Mode, Rat> eps_;
};

struct ConstraintViolation {
    int relation = 0;  // 2..4 classical closure relations, 5 quantum epsilon relation
    std::vector<Mode> indices;
    Rat lhs, rhs;

    std::string str() const {
        std::ostringstream os;
        os << "relation " << relation << " violated at " << modeTupleString(indices) << ": lhs "
           << ratToString(lhs) << " != rhs " << ratToString(rhs);
        return os.str();
    }
};

struct ConstraintReport {
    bool passed = true;
    long checked = 0;
    long skippedUnverifiable = 0;
    std::optional<ConstraintViolation> firstViolation;

    std::string summary() const {
        std::ostringstream os;
        os << (passed ? "pass" : "FAIL") << " (" << checked << " instances checked, "
           << skippedUnverifiable << " unverifiable at this truncation)";
        if (firstViolation) os << "; " << firstViolation->str();
        return os.str();
    }
};

namespace detail {

/// Accumulates a contraction; any contribution with an unknown factor that is
/// not killed by a certified zero poisons the whole instance.
struct Contraction {
    Rat sum = Rat(0);
    bool verifiable = true;

    void add(const std::optional<Rat>& f, const std::optional<Rat>& g, const Rat& scale) {
        if (!verifiable) return;
        if ((f && *f == 0) || (g && *g == 0)) return;
        if (!f || !g) {
            verifiable = false;
            return;
        }
        sum += *f * *g * scale;
    }
};

inline void pin(std::set<Mode>& out, int block, long k) {
    if (k >= 1) out.insert(Mode{block, static_cast<int>(k)});
}

/// Modes m such that some stored A entry matches pattern (p, q, m).
inline void aMatches(const AiryTensors& T, Mode p, Mode q, std::set<Mode>& out) {
    for (const auto& [key, v] : T.aEntries()) {
        (void)v;
        std::multiset<Mode> m(key.begin(), key.end());
        auto i1 = m.find(p);
        if (i1 == m.end()) continue;
        m.erase(i1);
        auto i2 = m.find(q);
        if (i2 == m.end()) continue;
        m.erase(i2);
        out.insert(*m.begin());
    }
}

/// Modes m such that some stored B entry has first two indices (p, q): collects the third.
inline void bThirds(const AiryTensors& T, Mode p, Mode q, std::set<Mode>& out) {
    for (const auto& [key, v] : T.bEntries()) {
        (void)v;
        if (key[0] == p && key[1] == q) out.insert(key[2]);
    }
}

/// Modes m such that some stored C entry has lower index p and q in the upper pair.
inline void cPartners(const AiryTensors& T, Mode p, Mode q, std::set<Mode>& out) {
    for (const auto& [key, v] : T.cEntries()) {
        (void)v;
        if (key[0] != p) continue;
        if (key[1] == q) out.insert(key[2]);
        if (key[2] == q) out.insert(key[1]);
    }
}

/// RHS of every closure relation: sum_k g_{ij}^k X(k).
template <class Lookup>
void gContraction(const AiryTensors& T, Mode i, Mode j, Lookup X, Contraction& out,
                  const Rat& scale) {
    std::set<Mode> ks;
    bThirds(T, i, j, ks);
    bThirds(T, j, i, ks);
    if (T.graded(i.block) && i.block == j.block)
        pin(ks, i.block, static_cast<long>(i.k) + j.k + T.shift(i.block));
    for (Mode k : ks) out.add(T.certifiedG(i, j, k), X(k), scale);
}

// One (s,t) ordering of the x^s x^t coefficient: 4 sum_m (b_{is}^m a_{jtm} - b_{js}^m a_{itm}).
inline void relation2Half(const AiryTensors& T, Mode i, Mode j, Mode s, Mode t, Contraction& out) {
    std::set<Mode> ms;
    aMatches(T, j, t, ms);
    aMatches(T, i, t, ms);
    if (T.graded(i.block) && i.block == s.block) {
        pin(ms, i.block, static_cast<long>(i.k) + s.k + T.shift(i.block));
        pin(ms, i.block, static_cast<long>(j.k) + s.k + T.shift(i.block));
    }
    for (Mode m : ms) {
        out.add(T.certifiedB(i, s, m), T.certifiedA(j, t, m), Rat(4));
        out.add(T.certifiedB(j, s, m), T.certifiedA(i, t, m), Rat(-4));
    }
}

// One (s,t) ordering of the y_s y_t coefficient: 4 sum_m (c_i^{ms} b_{jm}^t - c_j^{ms} b_{im}^t).
inline void relation4Half(const AiryTensors& T, Mode i, Mode j, Mode s, Mode t, Contraction& out) {
    std::set<Mode> ms;
    cPartners(T, i, s, ms);
    cPartners(T, j, s, ms);
    if (T.graded(i.block) && i.block == s.block) {
        int sh = T.shift(i.block);
        pin(ms, i.block, static_cast<long>(i.k) + sh - s.k);
        pin(ms, i.block, static_cast<long>(j.k) + sh - s.k);
        pin(ms, i.block, static_cast<long>(t.k) - i.k - sh);
        pin(ms, i.block, static_cast<long>(t.k) - j.k - sh);
    }
    for (Mode m : ms) {
        out.add(T.certifiedC(i, m, s), T.certifiedB(j, m, t), Rat(4));
        out.add(T.certifiedC(j, m, s), T.certifiedB(i, m, t), Rat(-4));
    }
}

}  // namespace detail

/// Evaluates the homogeneous relations implied by the Poisson closure
/// {H_i, H_j} = g_{ij}^k H_k on every index instance touched by the stored
/// support.  With (2), (3), (4) the coefficients of x^s x^t, x^s y_t and
/// y_s y_t respectively (relation (1), the definition of g, holds by
/// construction here):
///   (2) Sym_{s,t} 4 (b_{is}^m a_{jtm} - b_{js}^m a_{itm}) = 2 g_{ij}^k a_{kst}
///   (3) 4 (b_{is}^m b_{jm}^t - b_{js}^m b_{im}^t + c_i^{mt} a_{jsm} - c_j^{mt} a_{ism})
///         = 2 g_{ij}^k b_{ks}^t
///   (4) Sym_{s,t} 4 (c_i^{ms} b_{jm}^t - c_j^{ms} b_{im}^t) = 2 g_{ij}^k c_k^{st}
/// where Sym_{s,t} F(s,t) means F(s,t) + F(t,s).  Instances referencing modes
/// beyond a graded truncation are skipped and counted, never certified.
inline ConstraintReport checkClassicalConstraints(const AiryTensors& T) {
    ConstraintReport rep;
    auto record = [&](int rel, std::initializer_list<Mode> idx, const detail::Contraction& lhs,
                      const detail::Contraction& rhs) {
        if (!lhs.verifiable || !rhs.verifiable) {
            ++rep.skippedUnverifiable;
            return;
        }
        ++rep.checked;
        if (lhs.sum != rhs.sum && rep.passed) {
            rep.passed = false;
            rep.firstViolation = ConstraintViolation{rel, std::vector<Mode>(idx), lhs.sum, rhs.sum};
        }
    };

    const auto& modes = T.modes;
    for (size_t ii = 0; ii < modes.size(); ++ii)
        for (size_t jj = ii + 1; jj < modes.size(); ++jj) {
            Mode i = modes[ii], j = modes[jj];

            for (size_t ss = 0; ss < modes.size(); ++ss)
                for (size_t tt = ss; tt < modes.size(); ++tt) {
                    Mode s = modes[ss], t = modes[tt];

                    detail::Contraction lhs2, rhs2;
                    detail::relation2Half(T, i, j, s, t, lhs2);
                    detail::relation2Half(T, i, j, t, s, lhs2);
                    detail::gContraction(
                        T, i, j, [&](Mode k) { return T.certifiedA(k, s, t); }, rhs2, Rat(2));
                    record(2, {i, j, s, t}, lhs2, rhs2);

                    detail::Contraction lhs4, rhs4;
                    detail::relation4Half(T, i, j, s, t, lhs4);
                    detail::relation4Half(T, i, j, t, s, lhs4);
                    detail::gContraction(
                        T, i, j, [&](Mode k) { return T.certifiedC(k, s, t); }, rhs4, Rat(2));
                    record(4, {i, j, s, t}, lhs4, rhs4);
                }

            for (Mode s : modes)
                for (Mode t : modes) {
                    detail::Contraction lhs, rhs;
                    std::set<Mode> ms;
                    detail::bThirds(T, i, s, ms);
                    detail::bThirds(T, j, s, ms);
                    detail::aMatches(T, j, s, ms);
                    detail::aMatches(T, i, s, ms);
                    if (T.graded(i.block) && i.block == s.block && i.block == t.block) {
                        int sh = T.shift(i.block);
                        detail::pin(ms, i.block, static_cast<long>(i.k) + s.k + sh);
                        detail::pin(ms, i.block, static_cast<long>(j.k) + s.k + sh);
                        detail::pin(ms, i.block, static_cast<long>(t.k) - i.k - sh);
                        detail::pin(ms, i.block, static_cast<long>(t.k) - j.k - sh);
                        detail::pin(ms, i.block, static_cast<long>(i.k) + sh - t.k);
                        detail::pin(ms, i.block, static_cast<long>(j.k) + sh - t.k);
                    }
                    for (Mode m : ms) {
                        lhs.add(T.certifiedB(i, s, m), T.certifiedB(j, m, t), Rat(4));
                        lhs.add(T.certifiedB(j, s, m), T.certifiedB(i, m, t), Rat(-4));
                        lhs.add(T.certifiedC(i, m, t), T.certifiedA(j, s, m), Rat(4));
                        lhs.add(T.certifiedC(j, m, t), T.certifiedA(i, s, m), Rat(-4));
                    }
                    detail::gContraction(
                        T, i, j, [&](Mode k) { return T.certifiedB(k, s, t); }, rhs, Rat(2));
                    record(3, {i, j, s, t}, lhs, rhs);
                }
        }
    return rep;
}

/// The quantum constraint 2 (a_{jst} c_i^{st} - a_{ist} c_j^{st}) = g_{ij}^k eps_k
/// with ordered summation over (s, t).
inline ConstraintReport checkQuantumConstraint(const AiryTensors& T) {
    ConstraintReport rep;
    const auto& modes = T.modes;
    for (size_t ii = 0; ii < modes.size(); ++ii)
        for (size_t jj = ii + 1; jj < modes.size(); ++jj) {
            Mode i = modes[ii], j = modes[jj];
            detail::Contraction lhs, rhs;

            std::set<std::pair<Mode, Mode>> pairs;  // ordered (s,t) candidates
            auto addPairsFromA = [&](Mode first) {
                for (const auto& [key, v] : T.aEntries()) {
                    (void)v;
                    std::multiset<Mode> m(key.begin(), key.end());
                    auto i1 = m.find(first);
                    if (i1 == m.end()) continue;
                    m.erase(i1);
                    auto it = m.begin();
                    Mode s = *it, t = *std::next(it);
                    pairs.insert({s, t});
                    pairs.insert({t, s});
                }
            };
            addPairsFromA(j);
            addPairsFromA(i);
            if (T.graded(i.block) && i.block == j.block) {
                int sh = T.shift(i.block);
                // a-grade pins s + t = -shift - first; enumerate those pairs.
                for (Mode first : {i, j}) {
                    long total = -static_cast<long>(sh) - first.k;
                    for (long s = 1; s <= total - 1; ++s) {
                        Mode ms{i.block, static_cast<int>(s)}, mt{i.block, static_cast<int>(total - s)};
                        pairs.insert({ms, mt});
                    }
                }
            }
            for (const auto& [s, t] : pairs) {
                lhs.add(T.certifiedA(j, s, t), T.certifiedC(i, s, t), Rat(2));
                lhs.add(T.certifiedA(i, s, t), T.certifiedC(j, s, t), Rat(-2));
            }
            detail::gContraction(
                T, i, j, [&](Mode k) { return T.certifiedEps(k); }, rhs, Rat(1));

            if (!lhs.verifiable || !rhs.verifiable) {
                ++rep.skippedUnverifiable;
            } else {
                ++rep.checked;
                if (lhs.sum != rhs.sum && rep.passed) {
                    rep.passed = false;
                    rep.firstViolation = ConstraintViolation{5, {i, j}, lhs.sum, rhs.sum};
                }
            }
        }
    return rep;
}

/// Kontsevich-Witten structure on odd modes 1..maxMode, normalized so the
/// linear term of each H_k is exactly -y_k (the Virasoro form scaled by 2):
///   H_k = -y_k + (1/2) delta_{k,1} (x^1)^2 + sum_i i x^i y_{i+k-3}
///         + (1/2) sum_{s+t=k-3} y_s y_t + (hbar/8) delta_{k,3}.
inline AiryTensors buildKW(int maxMode) {
    if (maxMode < 3 || maxMode % 2 == 0) throw InputError("buildKW requires an odd maxMode >= 3");
    AiryTensors T;
    T.gradeShift[0] = -3;
    for (int k = 1; k <= maxMode; k += 2) T.modes.push_back(Mode{0, k});
    T.addA(Mode{0, 1}, Mode{0, 1}, Mode{0, 1}, Rat(1, 2));
    for (int k = 1; k <= maxMode; k += 2)
        for (int i = 1; i <= maxMode; i += 2) {
            int target = i + k - 3;
            if (target >= 1 && target <= maxMode)
                T.addB(Mode{0, k}, Mode{0, i}, Mode{0, target}, Rat(i, 2));
        }
    for (int k = 1; k <= maxMode; k += 2)
        for (int s = 1; s <= k - 4; s += 2) {
            int t = k - 3 - s;
            if (t < s) break;
            T.addC(Mode{0, k}, Mode{0, s}, Mode{0, t}, Rat(1, 2));
        }
    T.addEps(Mode{0, 3}, Rat(1, 8));
    return T;
}

/// Brezin-Gross-Witten structure on odd modes 1..maxMode: A is identically
/// zero, index shifts are i+k-1, and eps sits at mode 1 (the constant term of
/// the m = 0 Virasoro operator).
inline AiryTensors buildBGW(int maxMode) {
    if (maxMode < 1 || maxMode % 2 == 0) throw InputError("buildBGW requires an odd maxMode >= 1");
    AiryTensors T;
    T.gradeShift[0] = -1;
    for (int k = 1; k <= maxMode; k += 2) T.modes.push_back(Mode{0, k});
    for (int k = 1; k <= maxMode; k += 2)
        for (int i = 1; i <= maxMode; i += 2) {
            int target = i + k - 1;
            if (target >= 1 && target <= maxMode)
                T.addB(Mode{0, k}, Mode{0, i}, Mode{0, target}, Rat(i, 2));
        }
    for (int k = 1; k <= maxMode; k += 2)
        for (int s = 1; s <= k - 2; s += 2) {
            int t = k - 1 - s;
            if (t < s) break;
            T.addC(Mode{0, k}, Mode{0, s}, Mode{0, t}, Rat(1, 2));
        }
    T.addEps(Mode{0, 1}, Rat(1, 8));
    return T;
}

/// The plane conic -y + x^2 + 2xy + y^2 as a one-mode structure (complete).
inline AiryTensors buildConic() {
    AiryTensors T;
    T.oddModesOnly = false;
    T.modes = {Mode{0, 1}};
    T.addA(Mode{0, 1}, Mode{0, 1}, Mode{0, 1}, Rat(1));
    T.addB(Mode{0, 1}, Mode{0, 1}, Mode{0, 1}, Rat(1));
    T.addC(Mode{0, 1}, Mode{0, 1}, Mode{0, 1}, Rat(1));
    return T;
}

/// Relabels every mode into the given block.
inline AiryTensors withBlock(const AiryTensors& T, int block) {
    AiryTensors R;
    R.oddModesOnly = T.oddModesOnly;
    auto re = [&](Mode m) { return Mode{block, m.k}; };
    for (Mode m : T.modes) R.modes.push_back(re(m));
    std::sort(R.modes.begin(), R.modes.end());
    for (const auto& [bl, s] : T.gradeShift) {
        (void)bl;
        R.gradeShift[block] = s;
    }
    for (const auto& [key, v] : T.aEntries()) R.addA(re(key[0]), re(key[1]), re(key[2]), v);
    for (const auto& [key, v] : T.bEntries()) R.addB(re(key[0]), re(key[1]), re(key[2]), v);
    for (const auto& [key, v] : T.cEntries()) R.addC(re(key[0]), re(key[1]), re(key[2]), v);
    for (const auto& [key, v] : T.epsEntries()) R.addEps(re(key), v);
    return R;
}

/// Direct sum of Airy structures on the disjoint union of their mode sets;
/// all cross-block tensor entries vanish.  Parts must already use distinct
/// mode labels (relabel with withBlock), otherwise "label clash".
inline AiryTensors productStructure(const std::vector<AiryTensors>& parts) {
    if (parts.empty()) throw InputError("productStructure requires at least one part");
    AiryTensors R;
    R.oddModesOnly = true;
    std::set<Mode> seen;
    for (const auto& P : parts) {
        if (!P.oddModesOnly) R.oddModesOnly = false;
        for (Mode m : P.modes) {
            if (!seen.insert(m).second)
                throw InputError("label clash: mode appears in two factors; relabel with withBlock");
            R.modes.push_back(m);
        }
        for (const auto& [bl, s] : P.gradeShift) {
            if (R.gradeShift.count(bl) && R.gradeShift[bl] != s)
                throw InputError("label clash: conflicting grade shifts for one block");
            R.gradeShift[bl] = s;
        }
        for (const auto& [key, v] : P.aEntries()) R.addA(key[0], key[1], key[2], v);
        for (const auto& [key, v] : P.bEntries()) R.addB(key[0], key[1], key[2], v);
        for (const auto& [key, v] : P.cEntries()) R.addC(key[0], key[1], key[2], v);
        for (const auto& [key, v] : P.epsEntries()) R.addEps(key, v);
    }
    std::sort(R.modes.begin(), R.modes.end());
    return R;
}

}  // namespace specrec
