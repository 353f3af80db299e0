#pragma once

#include <utility>

#include "specrec/errors.hpp"
#include "specrec/series.hpp"

namespace specrec {

/// A truncated residue-free Laurent differential S(z) * dz/z.
///
/// With S(z) = sum_m c_m z^m this is the element sum_n J_n z^{-n} dz/z with
/// J_n = c_{-n}.  The coefficient J_0 (the dz/z term, i.e. the residue) is
/// required to vanish; the pole part is finite because S has a finite lowest
/// exponent.
class LaurentDifferential {
public:
    LaurentDifferential() = default;

    explicit LaurentDifferential(TruncSeries s) : s_(std::move(s)) {
        if (s_.coeffKnown(0) && s_.coeff(0) != 0)
            throw InputError("Laurent differential carries a residue term (J_0 != 0)");
    }

    static LaurentDifferential zero(long truncOrder, long low = 0) {
        return LaurentDifferential(TruncSeries::zero(truncOrder, low));
    }

    /// coeff * z^m dz/z  ==  coeff * z^{-n} dz/z with n = -m.
    static LaurentDifferential monomial(const Rat& coeff, long m, long truncOrder) {
        if (m == 0 && coeff != 0) throw InputError("residue term z^0 dz/z is not allowed");
        return LaurentDifferential(TruncSeries::monomial(coeff, m, truncOrder));
    }

    const TruncSeries& series() const { return s_; }

    /// J_n, the coefficient of z^{-n} dz/z.
    Rat poleCoeff(long n) const { return s_.coeff(-n); }

    friend LaurentDifferential operator+(const LaurentDifferential& a, const LaurentDifferential& b) {
        return LaurentDifferential(a.s_ + b.s_);
    }
    friend LaurentDifferential operator-(const LaurentDifferential& a, const LaurentDifferential& b) {
        return LaurentDifferential(a.s_ - b.s_);
    }
    LaurentDifferential scaled(const Rat& k) const { return LaurentDifferential(s_.scaled(k)); }

    /// The differential f(z) dz as a Laurent differential f(z)*z * dz/z.
    static LaurentDifferential fromDzSeries(const TruncSeries& f) {
        return LaurentDifferential(f.shifted(1));
    }

private:
    TruncSeries s_;
};

/// Primitive f with df = d, integration constant fixed to 0.
/// d = sum c_m z^m dz/z = sum c_m z^{m-1} dz integrates to sum (c_m/m) z^m.
inline TruncSeries antiderivative(const LaurentDifferential& d) {
    const TruncSeries& s = d.series();
    TruncSeries f = TruncSeries::zero(s.truncOrder(), s.lowest());
    TruncSeries out = f;
    for (long m = s.lowest(); m <= s.truncOrder(); ++m) {
        if (m == 0) continue;  // residue-free by invariant
        Rat c = s.coeff(m);
        if (c == 0) continue;
        out = out + TruncSeries::monomial(c / Rat(m), m, s.truncOrder());
    }
    return out;
}

/// Residue at z=0 of the product f * d.
inline Rat residueAt0(const TruncSeries& f, const LaurentDifferential& d) {
    TruncSeries prod = f * d.series();
    if (!prod.coeffKnown(0))
        throw TruncationError("truncation too short: dz/z coefficient of f*d is outside the known window");
    return prod.coeff(0);
}

/// Symplectic pairing Omega(eta1, eta2) = Res_{z=0} f1 * eta2 with df1 = eta1.
inline Rat symplecticPair(const LaurentDifferential& eta1, const LaurentDifferential& eta2) {
    return residueAt0(antiderivative(eta1), eta2);
}

}  // namespace specrec
