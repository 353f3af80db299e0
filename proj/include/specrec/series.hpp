#pragma once

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "specrec/errors.hpp"
#include "specrec/rational.hpp"

namespace specrec {

/// Truncated Laurent series in one variable z with exact rational coefficients.
///
/// Coefficients are stored for exponents lowest()..truncOrder() inclusive.
/// Exponents below lowest() are exactly zero; exponents above truncOrder()
/// are UNKNOWN, never implicitly zero.  Arithmetic propagates the truncation
/// order pessimistically so a coefficient is only ever reported when it is
/// fully determined by the operands' known windows.
class TruncSeries {
public:
    TruncSeries() : low_(1), trunc_(0) {}

    /// Series that is exactly zero on [low, trunc] and unknown beyond.
    static TruncSeries zero(long truncOrder, long low = 0) {
        TruncSeries s;
        s.low_ = std::min(low, truncOrder + 1);
        s.trunc_ = truncOrder;
        if (s.low_ <= s.trunc_) s.c_.assign(static_cast<size_t>(s.trunc_ - s.low_ + 1), Rat(0));
        return s;
    }

    static TruncSeries monomial(const Rat& coeff, long exponent, long truncOrder) {
        if (exponent > truncOrder)
            throw TruncationError("monomial exponent beyond requested truncation order");
        TruncSeries s = zero(truncOrder, exponent);
        s.c_[0] = coeff;
        return s;
    }

    /// Polynomial from coefficient list: coeffs[i] is the coefficient of z^(low+i).
    static TruncSeries fromCoeffs(std::vector<Rat> coeffs, long low, long truncOrder) {
        TruncSeries s = zero(truncOrder, low);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            long e = low + static_cast<long>(i);
            if (e > truncOrder) break;
            s.c_[i] = std::move(coeffs[i]);
        }
        return s;
    }

    long lowest() const { return low_; }
    long truncOrder() const { return trunc_; }
    bool knownEmpty() const { return low_ > trunc_; }

    /// Coefficient of z^e.  Exact zero below the window, error above it.
    Rat coeff(long e) const {
        if (e > trunc_)
            throw TruncationError("coefficient of z^" + std::to_string(e) +
                                  " is beyond truncation order " + std::to_string(trunc_));
        if (e < low_) return Rat(0);
        return c_[static_cast<size_t>(e - low_)];
    }

    bool coeffKnown(long e) const { return e <= trunc_; }

    /// True if every known coefficient is zero.
    bool knownZero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    /// Lowest exponent with a nonzero known coefficient, or trunc+1 if none.
    long order() const {
        for (long e = low_; e <= trunc_; ++e)
            if (c_[static_cast<size_t>(e - low_)] != 0) return e;
        return trunc_ + 1;
    }

    TruncSeries operator-() const {
        TruncSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        long low = std::min(a.low_, b.low_);
        long tr = std::min(a.trunc_, b.trunc_);
        TruncSeries r = zero(tr, low);
        for (long e = low; e <= tr; ++e)
            r.c_[static_cast<size_t>(e - low)] = a.at(e) + b.at(e);
        return r;
    }

    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
        return a + (-b);
    }

    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        // c_e is determined iff every split e = i + j with i >= a.low, j >= b.low
        // has both factors known: e <= a.trunc + b.low and e <= b.trunc + a.low.
        long low = a.low_ + b.low_;
        long tr = std::min(a.trunc_ + b.low_, b.trunc_ + a.low_);
        TruncSeries r = zero(tr, low);
        if (r.knownEmpty()) return r;
        for (long i = a.low_; i <= a.trunc_; ++i) {
            const Rat& ai = a.c_[static_cast<size_t>(i - a.low_)];
            if (ai == 0) continue;
            long jmax = std::min(b.trunc_, tr - i);
            for (long j = b.low_; j <= jmax; ++j) {
                const Rat& bj = b.c_[static_cast<size_t>(j - b.low_)];
                if (bj == 0) continue;
                r.c_[static_cast<size_t>(i + j - low)] += ai * bj;
            }
        }
        return r;
    }

    TruncSeries scaled(const Rat& k) const {
        TruncSeries r = *this;
        for (auto& x : r.c_) x *= k;
        return r;
    }

    /// Multiply by z^k.
    TruncSeries shifted(long k) const {
        TruncSeries r = *this;
        r.low_ += k;
        r.trunc_ += k;
        return r;
    }

    /// d/dz.
    TruncSeries derivative() const {
        TruncSeries r = zero(trunc_ - 1, low_ - 1);
        for (long e = low_; e <= trunc_; ++e)
            r.c_[static_cast<size_t>(e - 1 - r.low_)] = Rat(e) * at(e);
        return r;
    }

    /// Division a/b, requiring b to have a nonzero lowest known coefficient
    /// (after skipping leading known zeros).
    friend TruncSeries divide(const TruncSeries& a, const TruncSeries& b) {
        long bOrd = b.order();
        if (bOrd > b.trunc_) throw InputError("non-unit divisor: known part identically zero");
        const Rat& lead = b.c_[static_cast<size_t>(bOrd - b.low_)];
        long low = a.low_ - bOrd;
        // q_e needs a up to e + bOrd (<= a.trunc) and b up to e + bOrd - a.low + b... :
        // using q known from `low`, the b coefficients consumed for q_e reach
        // bOrd + (e - low), which must be <= b.trunc.
        long tr = std::min(a.trunc_ - bOrd, b.trunc_ - bOrd + low);
        TruncSeries q = zero(tr, low);
        for (long e = low; e <= tr; ++e) {
            Rat acc = a.at(e + bOrd);
            for (long f = low; f < e; ++f) {
                const Rat& qf = q.c_[static_cast<size_t>(f - low)];
                if (qf == 0) continue;
                acc -= qf * b.at(e + bOrd - f);
            }
            q.c_[static_cast<size_t>(e - low)] = acc / lead;
        }
        return q;
    }

    /// s(z) = even(z) + odd(z) with even(-z)=even(z), odd(-z)=-odd(z).
    std::pair<TruncSeries, TruncSeries> paritySplit() const {
        TruncSeries even = zero(trunc_, low_), odd = zero(trunc_, low_);
        for (long e = low_; e <= trunc_; ++e) {
            if (e % 2 == 0)
                even.c_[static_cast<size_t>(e - low_)] = at(e);
            else
                odd.c_[static_cast<size_t>(e - low_)] = at(e);
        }
        return {even, odd};
    }

    /// s(-z).
    TruncSeries flipped() const {
        TruncSeries r = *this;
        for (long e = low_; e <= trunc_; ++e)
            if (e % 2 != 0) r.c_[static_cast<size_t>(e - low_)] = -at(e);
        return r;
    }

    /// Composition f(g(z)); requires g to have lowest exponent >= 1.
    friend TruncSeries compose(const TruncSeries& f, const TruncSeries& g) {
        if (g.order() < 1) throw InputError("composition requires inner series of order >= 1");
        if (f.low_ < 0) throw InputError("composition of a series with a pole is not supported");
        long tr = std::min(g.trunc_, f.trunc_ * std::max(g.order(), 1L));
        tr = std::min(tr, g.trunc_);
        TruncSeries acc = zero(tr, 0);
        TruncSeries p = monomial(Rat(1), 0, tr);  // g^0
        for (long e = 0; e <= f.trunc_; ++e) {
            if (e >= f.low_) {
                const Rat& fe = f.c_[static_cast<size_t>(e - f.low_)];
                if (fe != 0) acc = acc + p.scaled(fe);
            }
            if (e < f.trunc_) {
                p = p * g;
                if (p.order() > tr) break;  // higher powers cannot touch the window
            }
        }
        return acc;
    }

    /// sqrt of a series whose leading coefficient is an exact rational square
    /// and whose order is even.
    friend TruncSeries seriesSqrt(const TruncSeries& s) {
        long ord = s.order();
        if (ord > s.trunc_) throw InputError("sqrt of a series with identically zero known part");
        if (ord % 2 != 0) throw InputError("sqrt of a series of odd order");
        Rat lead = s.coeff(ord), root;
        if (!ratSqrt(lead, root))
            throw InputError("non-square normalization: leading coefficient " + ratToString(lead) +
                             " is not the square of a rational");
        long low = ord / 2;
        long tr = s.trunc_ - low;
        TruncSeries q = zero(tr, low);
        q.c_[0] = root;
        // Solve q*q = s coefficient by coefficient.
        for (long e = low + 1; e <= tr; ++e) {
            Rat acc = s.at(e + low);
            for (long f = low + 1; f < e; ++f)
                acc -= q.c_[static_cast<size_t>(f - low)] * q.c_[static_cast<size_t>(e + low - f - low)];
            q.c_[static_cast<size_t>(e - low)] = acc / (Rat(2) * root);
        }
        return q;
    }

    /// Compositional inverse of psi = c1 z + c2 z^2 + ... with c1 != 0:
    /// returns phi with psi(phi(z)) = z.
    friend TruncSeries compositionalInverse(const TruncSeries& psi) {
        if (psi.order() != 1) throw InputError("compositional inverse requires order exactly 1");
        long tr = psi.trunc_;
        Rat c1 = psi.coeff(1);
        TruncSeries phi = zero(tr, 1);
        phi.c_[0] = Rat(1) / c1;
        for (long n = 2; n <= tr; ++n) {
            // coefficient of z^n in psi(phi) must vanish; it is linear in phi_n
            // with factor c1 once lower phi coefficients are fixed.
            TruncSeries trial = phi;
            TruncSeries comp = compose(truncatedTo(psi, n), truncatedTo(trial, n));
            Rat resid = comp.coeff(n);
            phi.c_[static_cast<size_t>(n - 1)] = -resid / c1;
        }
        return phi;
    }

    /// Same series with a smaller truncation order.
    friend TruncSeries truncatedTo(const TruncSeries& s, long newTrunc) {
        if (newTrunc >= s.trunc_) return s;
        TruncSeries r = zero(newTrunc, std::min(s.low_, newTrunc + 1));
        for (long e = r.low_; e <= newTrunc; ++e) r.c_[static_cast<size_t>(e - r.low_)] = s.at(e);
        return r;
    }

    bool operator==(const TruncSeries& o) const {
        long lo = std::min(low_, o.low_);
        long hi = std::min(trunc_, o.trunc_);
        if (trunc_ != o.trunc_) return false;
        for (long e = lo; e <= hi; ++e)
            if (at(e) != o.at(e)) return false;
        return true;
    }

    std::string str(const std::string& var = "z") const {
        std::string out;
        for (long e = low_; e <= trunc_; ++e) {
            const Rat& x = at(e);
            if (x == 0) continue;
            if (!out.empty()) out += " + ";
            out += ratToString(x);
            if (e != 0) out += "*" + var + "^" + std::to_string(e);
        }
        if (out.empty()) out = "0";
        out += " + O(" + var + "^" + std::to_string(trunc_ + 1) + ")";
        return out;
    }

private:
    Rat at(long e) const {
        if (e < low_ || e > trunc_) return Rat(0);
        return c_[static_cast<size_t>(e - low_)];
    }

    long low_;
    long trunc_;
    std::vector<Rat> c_;  // c_[e - low_] = coefficient of z^e
};

inline std::ostream& operator<<(std::ostream& os, const TruncSeries& s) { return os << s.str(); }

}  // namespace specrec
