#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "specrec/airy_structure.hpp"
#include "specrec/errors.hpp"
#include "specrec/rational.hpp"

namespace specrec {

/// Symmetric tensors S_{h,n} of the wavefunction log-expansion
///   S = sum_h hbar^{h-1} S_h,  S_h = sum_n S_{h,n},
///   S_{h,n} = (1/n!) sum_{i_1..i_n} S_{h,n; i_1..i_n} x^{i_1}...x^{i_n},
/// stored on sorted multi-indices, for all 2h-2+n <= chiMax.
class FreeEnergyTable {
public:
    using Tensor = std::map<ModeTuple, Rat>;

    long chiMax = 0;

    const Tensor& tensor(long h, long n) const {
        static const Tensor empty;
        auto it = tables_.find({h, n});
        return it == tables_.end() ? empty : it->second;
    }

    Rat entry(long h, long n, const ModeTuple& sortedIdx) const {
        const Tensor& t = tensor(h, n);
        auto it = t.find(sortedIdx);
        return it == t.end() ? Rat(0) : it->second;
    }

    bool has(long h, long n) const { return tables_.count({h, n}) != 0; }

    void store(long h, long n, Tensor t) { tables_[{h, n}] = std::move(t); }

    const std::map<std::pair<long, long>, Tensor>& all() const { return tables_; }

private:
    std::map<std::pair<long, long>, Tensor> tables_;
};

namespace detail {

/// Direct evaluation of the abstract TR right-hand side for the entry with
/// distinguished first index i and remaining sorted indices rest:
///   S_{h,n; i, rest} = 2 a_{i r1 r2} [h=0,n=3] + eps_i [h=1,n=1]
///     + 2 sum_alpha b_{i,rest_alpha}^k S_{h,n-1; k, rest\alpha}
///     + sum_{(j,k)} c_i^{jk} [ S_{h-1,n+1; j,k,rest}
///         + sum_{h1+h2=h, I1 u I2 = rest} S_{h1,|I1|+1; j,I1} S_{h2,|I2|+1; k,I2} ].
inline Rat abstractEntry(const AiryTensors& T, const FreeEnergyTable& F, long h, long n, Mode i,
                         const ModeTuple& rest) {
    Rat val(0);
    if (h == 0 && n == 3) val += Rat(2) * T.a(i, rest[0], rest[1]);
    if (h == 1 && n == 1) val += T.eps(i);

    // b-term: one summand per position alpha of rest.
    for (size_t alpha = 0; alpha < rest.size(); ++alpha) {
        if (alpha > 0 && rest[alpha] == rest[alpha - 1]) {
            // identical positions give identical summands; count via multiplicity
            continue;
        }
        long mult = static_cast<long>(std::count(rest.begin(), rest.end(), rest[alpha]));
        ModeTuple sub = rest;
        sub.erase(sub.begin() + static_cast<long>(alpha));
        for (const auto& [key, bv] : T.bEntries()) {
            if (!(key[0] == i && key[1] == rest[alpha])) continue;
            ModeTuple idx = sub;
            idx.insert(std::upper_bound(idx.begin(), idx.end(), key[2]), key[2]);
            Rat lower = F.entry(h, n - 1, idx);
            if (lower != 0) val += Rat(2 * mult) * bv * lower;
        }
    }

    // c-terms, iterating canonical (j <= k) entries; the ordered sum doubles
    // off-diagonal pairs.
    for (const auto& [key, cv] : T.cEntries()) {
        if (!(key[0] == i)) continue;
        Mode j = key[1], k = key[2];
        Rat w = cv * Rat(j == k ? 1 : 2);

        if (h >= 1) {
            ModeTuple idx = rest;
            idx.insert(std::upper_bound(idx.begin(), idx.end(), j), j);
            idx.insert(std::upper_bound(idx.begin(), idx.end(), k), k);
            Rat lower = F.entry(h - 1, n + 1, idx);
            if (lower != 0) val += w * lower;
        }

        // Quadratic term: ordered pair (j,k) against ordered subsets of
        // positions; for j != k the weight w already covers (k,j) because the
        // subset sum is invariant under swapping (j,I1,h1) <-> (k,I2,h2).
        size_t nsub = rest.size();
        for (size_t mask = 0; mask < (size_t(1) << nsub); ++mask) {
            ModeTuple i1, i2;
            for (size_t p = 0; p < nsub; ++p)
                ((mask >> p) & 1 ? i1 : i2).push_back(rest[p]);
            for (long h1 = 0; h1 <= h; ++h1) {
                long h2 = h - h1;
                long n1 = static_cast<long>(i1.size()) + 1;
                long n2 = static_cast<long>(i2.size()) + 1;
                if (2 * h1 - 2 + n1 <= 0 || 2 * h2 - 2 + n2 <= 0) continue;
                ModeTuple idx1 = i1;
                idx1.insert(std::upper_bound(idx1.begin(), idx1.end(), j), j);
                ModeTuple idx2 = i2;
                idx2.insert(std::upper_bound(idx2.begin(), idx2.end(), k), k);
                Rat f1 = F.entry(h1, n1, idx1);
                if (f1 == 0) continue;
                Rat f2 = F.entry(h2, n2, idx2);
                if (f2 == 0) continue;
                val += w * f1 * f2;
            }
        }
    }
    return val;
}

}  // namespace detail

/// Abstract topological recursion: computes every S_{h,n} with
/// 2h-2+n <= chiMax from the quantum Airy tensors.  Each tensor entry is
/// evaluated with every choice of distinguished index and the results must
/// agree exactly ("symmetry violation" otherwise); this is the strongest
/// internal correctness probe of the recursion.
inline FreeEnergyTable abstractTR(const AiryTensors& T, long chiMax) {
    if (chiMax < 1) throw InputError("abstractTR requires chiMax >= 1");
    FreeEnergyTable F;
    F.chiMax = chiMax;

    for (long chi = 1; chi <= chiMax; ++chi) {
        for (long h = 0; 2 * h - 2 <= chi - 1; ++h) {
            long n = chi + 2 - 2 * h;
            if (n < 1) continue;

            // Support discovery: forward images of lower tables through the
            // recursion, plus the two seeds.
            std::set<ModeTuple> candidates;
            if (h == 0 && n == 3) {
                for (const auto& [key, v] : T.aEntries()) {
                    (void)v;
                    ModeTuple t(key.begin(), key.end());
                    std::sort(t.begin(), t.end());
                    candidates.insert(t);
                }
            }
            if (h == 1 && n == 1)
                for (const auto& [key, v] : T.epsEntries()) {
                    (void)v;
                    candidates.insert({key});
                }

            // From the b-term: S_{h,n-1}(k, sub) with b_{i,m}^k gives (i, {m} u sub).
            for (const auto& [lowIdx, lv] : F.tensor(h, n - 1)) {
                (void)lv;
                for (const auto& [key, bv] : T.bEntries()) {
                    (void)bv;
                    auto it = std::find(lowIdx.begin(), lowIdx.end(), key[2]);
                    if (it == lowIdx.end()) continue;
                    ModeTuple t = lowIdx;
                    t.erase(std::find(t.begin(), t.end(), key[2]));
                    t.insert(std::upper_bound(t.begin(), t.end(), key[0]), key[0]);
                    t.insert(std::upper_bound(t.begin(), t.end(), key[1]), key[1]);
                    candidates.insert(t);
                }
            }

            // From the linear c-term: S_{h-1,n+1}(j,k,rest) with c_i^{jk}.
            if (h >= 1)
                for (const auto& [lowIdx, lv] : F.tensor(h - 1, n + 1)) {
                    (void)lv;
                    for (const auto& [key, cv] : T.cEntries()) {
                        (void)cv;
                        ModeTuple t = lowIdx;
                        auto j = std::find(t.begin(), t.end(), key[1]);
                        if (j == t.end()) continue;
                        t.erase(j);
                        auto k = std::find(t.begin(), t.end(), key[2]);
                        if (k == t.end()) continue;
                        t.erase(k);
                        t.insert(std::upper_bound(t.begin(), t.end(), key[0]), key[0]);
                        candidates.insert(t);
                    }
                }

            // From the quadratic c-term.
            for (long h1 = 0; h1 <= h; ++h1) {
                long h2 = h - h1;
                for (long n1 = 1; n1 <= n; ++n1) {
                    long n2 = n + 1 - n1;
                    if (n2 < 1) continue;
                    if (2 * h1 - 2 + n1 <= 0 || 2 * h2 - 2 + n2 <= 0) continue;
                    if (!F.has(h1, n1) || !F.has(h2, n2)) continue;
                    for (const auto& [t1, v1] : F.tensor(h1, n1)) {
                        (void)v1;
                        for (const auto& [t2, v2] : F.tensor(h2, n2)) {
                            (void)v2;
                            for (const auto& [key, cv] : T.cEntries()) {
                                (void)cv;
                                for (auto [j, k] : {std::pair{key[1], key[2]}, std::pair{key[2], key[1]}}) {
                                    auto ij = std::find(t1.begin(), t1.end(), j);
                                    if (ij == t1.end()) continue;
                                    auto ik = std::find(t2.begin(), t2.end(), k);
                                    if (ik == t2.end()) continue;
                                    ModeTuple t = t1;
                                    t.erase(std::find(t.begin(), t.end(), j));
                                    ModeTuple tail = t2;
                                    tail.erase(std::find(tail.begin(), tail.end(), k));
                                    t.insert(t.end(), tail.begin(), tail.end());
                                    t.insert(std::upper_bound(t.begin(), t.end(), key[0]), key[0]);
                                    std::sort(t.begin(), t.end());
                                    candidates.insert(t);
                                }
                            }
                        }
                    }
                }
            }

            FreeEnergyTable::Tensor out;
            for (const ModeTuple& idx : candidates) {
                if (static_cast<long>(idx.size()) != n) continue;
                Rat value;
                bool first = true;
                for (size_t pos = 0; pos < idx.size(); ++pos) {
                    if (pos > 0 && idx[pos] == idx[pos - 1]) continue;
                    ModeTuple rest = idx;
                    rest.erase(rest.begin() + static_cast<long>(pos));
                    Rat v = detail::abstractEntry(T, F, h, n, idx[pos], rest);
                    if (first) {
                        value = v;
                        first = false;
                    } else if (v != value) {
                        throw ConsistencyError("symmetry violation in S_{" + std::to_string(h) + "," +
                                               std::to_string(n) + "} at " + modeTupleString(idx));
                    }
                }
                if (!first && value != 0) out[idx] = value;
            }
            F.store(h, n, std::move(out));
        }
    }
    return F;
}

}  // namespace specrec
