#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "specrec/errors.hpp"
#include "specrec/rational.hpp"
#include "specrec/series.hpp"

namespace specrec {

/// Regular part of the Bergman kernel on a local curve:
///   B(z1, z2) = [ delta_{ab} / (z1 - z2)^2 + sum phi^{ab}_{kl} z1^k z2^l ] dz1 dz2
/// with the symmetry phi^{ab}_{kl} = phi^{ba}_{lk}.  Coefficients are stored
/// for 0 <= k, l <= truncOrder.
class BiSeriesSym {
public:
    explicit BiSeriesSym(long truncOrder = 0, long totalBound = -1)
        : trunc_(truncOrder), total_(totalBound < 0 ? 2 * truncOrder : totalBound) {}

    long truncOrder() const { return trunc_; }
    long totalBound() const { return total_; }

    void set(int a, int b, long k, long l, const Rat& value) {
        if (k < 0 || l < 0) throw InputError("phi indices must be nonnegative");
        if (k > trunc_ || l > trunc_ || k + l > total_)
            throw InputError("phi index beyond truncation order");
        if (value == 0) {
            phi_.erase({a, b, k, l});
            phi_.erase({b, a, l, k});
            return;
        }
        phi_[{a, b, k, l}] = value;
        phi_[{b, a, l, k}] = value;
    }

    Rat get(int a, int b, long k, long l) const {
        if (k > trunc_ || l > trunc_ || k + l > total_)
            throw TruncationError("phi coefficient beyond truncation order");
        auto it = phi_.find({a, b, k, l});
        return it == phi_.end() ? Rat(0) : it->second;
    }

    bool empty() const { return phi_.empty(); }

    bool symmetric() const {
        for (const auto& [key, v] : phi_) {
            auto [a, b, k, l] = key;
            auto it = phi_.find({b, a, l, k});
            if (it == phi_.end() || it->second != v) return false;
        }
        return true;
    }

    const std::map<std::tuple<int, int, long, long>, Rat>& entries() const { return phi_; }

private:
    long trunc_;
    long total_;
    std::map<std::tuple<int, int, long, long>, Rat> phi_;
};

namespace detail {

/// Dense bivariate polynomial truncated by TOTAL degree: coefficients c_{ij}
/// are known for i + j <= T.  Total-degree truncation survives linear
/// substitutions exactly, which is what the diagonal division below needs.
/// Only used internally to re-expand global Bergman kernels in local charts.
class BiSeries {
public:
    explicit BiSeries(long T) : T_(T), c_((static_cast<size_t>(T) + 1) * (T + 2) / 2, Rat(0)) {}

    long T() const { return T_; }

    Rat& at(long i, long j) { return c_[index(i, j)]; }
    const Rat& at(long i, long j) const { return c_[index(i, j)]; }

    static BiSeries fromUnivariateFirst(const TruncSeries& f, long T) {
        BiSeries r(T);
        for (long i = std::max(0L, f.lowest()); i <= std::min(T, f.truncOrder()); ++i)
            r.at(i, 0) = f.coeff(i);
        return r;
    }

    static BiSeries fromUnivariateSecond(const TruncSeries& f, long T) {
        BiSeries r(T);
        for (long j = std::max(0L, f.lowest()); j <= std::min(T, f.truncOrder()); ++j)
            r.at(0, j) = f.coeff(j);
        return r;
    }

    BiSeries operator+(const BiSeries& o) const {
        BiSeries r(std::min(T_, o.T_));
        for (long d = 0; d <= r.T_; ++d)
            for (long i = 0; i <= d; ++i) r.at(i, d - i) = at(i, d - i) + o.at(i, d - i);
        return r;
    }

    BiSeries operator-(const BiSeries& o) const {
        BiSeries r(std::min(T_, o.T_));
        for (long d = 0; d <= r.T_; ++d)
            for (long i = 0; i <= d; ++i) r.at(i, d - i) = at(i, d - i) - o.at(i, d - i);
        return r;
    }

    BiSeries operator*(const BiSeries& o) const {
        BiSeries r(std::min(T_, o.T_));
        for (long d1 = 0; d1 <= T_ && d1 <= r.T_; ++d1)
            for (long i = 0; i <= d1; ++i) {
                const Rat& x = at(i, d1 - i);
                if (x == 0) continue;
                for (long d2 = 0; d1 + d2 <= r.T_ && d2 <= o.T_; ++d2)
                    for (long k = 0; k <= d2; ++k) {
                        const Rat& y = o.at(k, d2 - k);
                        if (y == 0) continue;
                        r.at(i + k, d1 - i + d2 - k) += x * y;
                    }
            }
        return r;
    }

    BiSeries scaled(const Rat& s) const {
        BiSeries r = *this;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    /// Reciprocal; requires a nonzero constant term.
    BiSeries reciprocal() const {
        if (at(0, 0) == 0) throw InputError("bivariate reciprocal requires nonzero constant term");
        BiSeries r(T_);
        Rat inv0 = Rat(1) / at(0, 0);
        r.at(0, 0) = inv0;
        for (long d = 1; d <= T_; ++d)
            for (long i = 0; i <= d; ++i) {
                long j = d - i;
                Rat acc(0);
                for (long di = 0; di <= i; ++di)
                    for (long dj = 0; dj <= j; ++dj) {
                        if (di == 0 && dj == 0) continue;
                        const Rat& x = at(di, dj);
                        if (x == 0) continue;
                        acc += x * r.at(i - di, j - dj);
                    }
                r.at(i, j) = -inv0 * acc;
            }
        return r;
    }

    /// Change of variables z1 = (s+d)/2, z2 = (s-d)/2: returns the same
    /// polynomial with (i,j) now indexing s^i d^j.
    BiSeries toSumDiff() const {
        BiSeries r(T_);
        for (long deg = 0; deg <= T_; ++deg)
            for (long i = 0; i <= deg; ++i) {
                long j = deg - i;
                const Rat& v = at(i, j);
                if (v == 0) continue;
                // ((s+d)/2)^i ((s-d)/2)^j
                Rat base = v / ratPow(Rat(2), i + j);
                for (long p = 0; p <= i; ++p)
                    for (long q = 0; q <= j; ++q) {
                        Rat coeff = base * binomial(i, p) * binomial(j, q) *
                                    ((j - q) % 2 == 0 ? Rat(1) : Rat(-1));
                        // s^{p+q} d^{(i-p)+(j-q)}
                        r.at(p + q, i - p + j - q) += coeff;
                    }
            }
        return r;
    }

    /// Inverse substitution s = z1 + z2, d = z1 - z2.
    BiSeries fromSumDiff() const {
        BiSeries r(T_);
        for (long deg = 0; deg <= T_; ++deg)
            for (long i = 0; i <= deg; ++i) {
                long j = deg - i;  // s^i d^j
                const Rat& v = at(i, j);
                if (v == 0) continue;
                for (long p = 0; p <= i; ++p)
                    for (long q = 0; q <= j; ++q) {
                        Rat coeff = v * binomial(i, p) * binomial(j, q) *
                                    ((j - q) % 2 == 0 ? Rat(1) : Rat(-1));
                        // z1^{p+q} z2^{(i-p)+(j-q)}
                        r.at(p + q, i - p + j - q) += coeff;
                    }
            }
        return r;
    }

    /// Exact division by d^2 in the (s, d) representation; the d^0 and d^1
    /// layers must vanish identically.
    BiSeries divideByDSquared() const {
        BiSeries r(T_ - 2);
        for (long i = 0; i + 0 <= T_; ++i)
            if (at(i, 0) != 0 || (i + 1 <= T_ && at(i, 1) != 0))
                throw ConsistencyError("bivariate series is not divisible by (z1-z2)^2");
        for (long d = 0; d <= r.T_; ++d)
            for (long i = 0; i <= d; ++i) r.at(i, d - i) = at(i, d - i + 2);
        return r;
    }

private:
    size_t index(long i, long j) const {
        long d = i + j;
        if (i < 0 || j < 0 || d > T_) throw TruncationError("bivariate index beyond total degree");
        return static_cast<size_t>(d * (d + 1) / 2 + j);
    }

    long T_;
    std::vector<Rat> c_;
};

/// Divided difference (f(z1) - f(z2)) / (z1 - z2) of a series with
/// nonnegative exponents: sum_n c_n h_{n-1}(z1, z2).
inline BiSeries dividedDifference(const TruncSeries& f, long T) {
    if (f.lowest() < 0) throw InputError("divided difference of a series with a pole");
    BiSeries r(T);
    for (long n = std::max(1L, f.lowest()); n <= f.truncOrder() && n - 1 <= T; ++n) {
        Rat c = f.coeff(n);
        if (c == 0) continue;
        for (long i = 0; i <= n - 1; ++i) r.at(i, n - 1 - i) += c;
    }
    return r;
}

}  // namespace detail
}  // namespace specrec
