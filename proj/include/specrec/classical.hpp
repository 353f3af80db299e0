#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "specrec/airy_structure.hpp"
#include "specrec/errors.hpp"
#include "specrec/rational.hpp"

namespace specrec {

/// Sparse polynomial in the variables {x^m | m a Mode} with Rat coefficients.
/// A monomial is a sorted multiset of modes; its degree is the multiset size.
class ModePoly {
public:
    using Monomial = ModeTuple;  // sorted

    ModePoly() = default;

    static ModePoly variable(Mode m) {
        ModePoly p;
        p.terms_[{m}] = Rat(1);
        return p;
    }

    void add(const Monomial& mono, const Rat& v) {
        if (v == 0) return;
        auto& slot = terms_[mono];
        slot += v;
        if (slot == 0) terms_.erase(mono);
    }

    Rat coeff(const Monomial& mono) const {
        auto it = terms_.find(mono);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    bool zero() const { return terms_.empty(); }
    const std::map<Monomial, Rat>& terms() const { return terms_; }

    long degree() const {
        long d = 0;
        for (const auto& [m, v] : terms_) {
            (void)v;
            d = std::max<long>(d, static_cast<long>(m.size()));
        }
        return d;
    }

    ModePoly truncatedToDegree(long maxDeg) const {
        ModePoly r;
        for (const auto& [m, v] : terms_)
            if (static_cast<long>(m.size()) <= maxDeg) r.terms_[m] = v;
        return r;
    }

    /// Terms of exactly the given degree.
    ModePoly homogeneousPart(long deg) const {
        ModePoly r;
        for (const auto& [m, v] : terms_)
            if (static_cast<long>(m.size()) == deg) r.terms_[m] = v;
        return r;
    }

    friend ModePoly operator+(const ModePoly& a, const ModePoly& b) {
        ModePoly r = a;
        for (const auto& [m, v] : b.terms_) r.add(m, v);
        return r;
    }

    friend ModePoly operator-(const ModePoly& a, const ModePoly& b) {
        ModePoly r = a;
        for (const auto& [m, v] : b.terms_) r.add(m, -v);
        return r;
    }

    ModePoly scaled(const Rat& k) const {
        if (k == 0) return {};
        ModePoly r;
        for (const auto& [m, v] : terms_) r.terms_[m] = v * k;
        return r;
    }

    /// Product truncated to total degree maxDeg.
    static ModePoly mul(const ModePoly& a, const ModePoly& b, long maxDeg) {
        ModePoly r;
        for (const auto& [ma, va] : a.terms_) {
            if (static_cast<long>(ma.size()) > maxDeg) continue;
            for (const auto& [mb, vb] : b.terms_) {
                if (static_cast<long>(ma.size() + mb.size()) > maxDeg) continue;
                Monomial m;
                m.reserve(ma.size() + mb.size());
                std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
                r.add(m, va * vb);
            }
        }
        return r;
    }

    /// Partial derivative with respect to x^m.
    ModePoly derivative(Mode m) const {
        ModePoly r;
        for (const auto& [mono, v] : terms_) {
            auto it = std::find(mono.begin(), mono.end(), m);
            if (it == mono.end()) continue;
            long mult = static_cast<long>(std::count(mono.begin(), mono.end(), m));
            Monomial rest = mono;
            rest.erase(std::find(rest.begin(), rest.end(), m));
            r.add(rest, v * Rat(mult));
        }
        return r;
    }

    bool operator==(const ModePoly& o) const { return terms_ == o.terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, v] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << ratToString(v);
            Mode cur{};
            int run = 0;
            for (size_t idx = 0; idx <= m.size(); ++idx) {
                if (idx < m.size() && run > 0 && m[idx] == cur) {
                    ++run;
                    continue;
                }
                if (run > 0) {
                    os << "*x[" << cur << "]";
                    if (run > 1) os << "^" << run;
                }
                if (idx < m.size()) {
                    cur = m[idx];
                    run = 1;
                }
            }
        }
        return os.str();
    }

private:
    std::map<Monomial, Rat> terms_;
};

/// Graph expansion of the quadratic Lagrangian: for each mode i the
/// polynomial y_i(x) of total degree <= D, obtained from the fixed-point
/// iteration y^(n+1) = Hhat(x, y^(n)).
struct LagrangianExpansion {
    long degree = 0;
    std::map<Mode, ModePoly> y;
};

namespace detail {

/// Hhat_i(x, y) = a_{ijk} x^j x^k + 2 b_{ij}^k x^j y_k + c_i^{jk} y_j y_k,
/// evaluated on polynomial y's and truncated to maxDeg.
inline ModePoly evalHhat(const AiryTensors& T, Mode i, const std::map<Mode, ModePoly>& y,
                         long maxDeg) {
    ModePoly out;
    for (const auto& [key, v] : T.aEntries()) {
        std::multiset<Mode> m(key.begin(), key.end());
        auto it = m.find(i);
        if (it == m.end()) continue;
        m.erase(it);
        Mode p = *m.begin(), q = *std::next(m.begin());
        ModeTuple mono{p, q};
        out.add(mono, v * Rat(p == q ? 1 : 2));  // ordered sum over (j,k)
    }
    auto yAt = [&](Mode k) -> const ModePoly* {
        auto it = y.find(k);
        return it == y.end() ? nullptr : &it->second;
    };
    for (const auto& [key, v] : T.bEntries()) {
        if (!(key[0] == i)) continue;
        const ModePoly* yk = yAt(key[2]);
        if (!yk || yk->zero()) continue;
        ModePoly xj = ModePoly::variable(key[1]);
        out = out + ModePoly::mul(xj, *yk, maxDeg).scaled(Rat(2) * v);
    }
    for (const auto& [key, v] : T.cEntries()) {
        if (!(key[0] == i)) continue;
        const ModePoly* yj = yAt(key[1]);
        const ModePoly* yk = yAt(key[2]);
        if (!yj || !yk || yj->zero() || yk->zero()) continue;
        Rat w = v * Rat(key[1] == key[2] ? 1 : 2);  // ordered sum over (j,k)
        out = out + ModePoly::mul(*yj, *yk, maxDeg).scaled(w);
    }
    return out.truncatedToDegree(maxDeg);
}

}  // namespace detail

/// Fixed-point computation of the Lagrangian graph y_i(x) through total
/// degree D.  Asserts coefficient stabilization: the n-th iterate already
/// fixes all terms of degree <= n.
inline LagrangianExpansion classicalExpand(const AiryTensors& T, long D) {
    if (D < 2) throw InputError("classicalExpand requires degree D >= 2");
    LagrangianExpansion ex;
    ex.degree = D;
    std::map<Mode, ModePoly> cur;
    for (Mode m : T.modes) cur[m] = ModePoly();
    for (long n = 1; n <= D; ++n) {
        std::map<Mode, ModePoly> next;
        for (Mode m : T.modes) next[m] = detail::evalHhat(T, m, cur, D);
        for (Mode m : T.modes) {
            ModePoly diff = next[m] - cur[m];
            if (!diff.truncatedToDegree(n).zero())
                throw ConsistencyError("classicalExpand: iterate changed a coefficient of degree <= " +
                                       std::to_string(n));
        }
        cur = std::move(next);
    }
    ex.y = std::move(cur);
    return ex;
}

/// Generating function S0 with dS0 = y_i dx^i through total degree D.
/// Constructed degree-by-degree via the Euler homogeneity identity
/// d * S0_d = sum_i x^i [y_i]_{d-1}; integrability (the symmetry of the
/// mixed reconstructions) is then verified exactly and a failure reports a
/// non-Airy input.
inline ModePoly potentialS0(const AiryTensors& T, long D) {
    LagrangianExpansion ex = classicalExpand(T, D);
    ModePoly s0;
    for (long d = 3; d <= D + 1; ++d) {
        ModePoly level;
        for (const auto& [m, ym] : ex.y) {
            ModePoly part = ym.homogeneousPart(d - 1);
            if (part.zero()) continue;
            level = level + ModePoly::mul(ModePoly::variable(m), part, d);
        }
        s0 = s0 + level.scaled(Rat(1, static_cast<long long>(d)));
    }
    for (const auto& [m, ym] : ex.y) {
        ModePoly diff = s0.derivative(m) - ym.truncatedToDegree(D);
        if (!diff.truncatedToDegree(D).zero())
            throw ConsistencyError("non-integrable: dS0/dx^" + [&] {
                std::ostringstream os;
                os << m;
                return os.str();
            }() + " does not match y (input is not an Airy structure)");
    }
    return s0;
}

}  // namespace specrec
