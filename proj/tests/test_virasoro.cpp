#include <catch2/catch_amalgamated.hpp>

#include "specrec/virasoro.hpp"

using namespace specrec;

TEST_CASE("central terms of the residual on logZ = 0") {
    FockPolynomial zero(6, -1, 2);
    // KW m = -1: residual contains (x^1)^2/(4 hbar)
    FockPolynomial r = applyVirasoro(VirasoroOperator(TauVariant::KW, -1), zero);
    CHECK(r.rawCoeff(FockMonomial{{1, 1}, -1}) == Rat(1, 4));
    // BGW m = 0: residual contains the constant 1/16
    FockPolynomial rb = applyVirasoro(VirasoroOperator(TauVariant::BGW, 0), zero);
    CHECK(rb.rawCoeff(FockMonomial{{}, 0}) == Rat(1, 16));
    // KW m = 0 as well
    FockPolynomial rk = applyVirasoro(VirasoroOperator(TauVariant::KW, 0), zero);
    CHECK(rk.rawCoeff(FockMonomial{{}, 0}) == Rat(1, 16));
}

TEST_CASE("commutators on monomials of weight <= 4") {
    CHECK(commutatorCheck(TauVariant::KW, 0, 1, 4));
    CHECK(commutatorCheck(TauVariant::KW, -1, 1, 4));  // = -2 L_0, centrals included
    CHECK(commutatorCheck(TauVariant::KW, -1, 0, 4));
    CHECK(commutatorCheck(TauVariant::KW, 1, 2, 3));
    CHECK(commutatorCheck(TauVariant::BGW, 0, 0, 4));
    CHECK(commutatorCheck(TauVariant::BGW, 0, 1, 4));
    CHECK(commutatorCheck(TauVariant::BGW, 1, 2, 3));
}

TEST_CASE("solved KW tau function reproduces intersection numbers") {
    FockPolynomial S = solveByRecursion(TauVariant::KW, 8, 3);
    // <tau_0^3> = 1 (the seed produced by the central term)
    CHECK(intersectionNumberFromFock(S, 0, {0, 0, 0}) == 1);
    // <tau_1>_1 = 1/24
    CHECK(intersectionNumberFromFock(S, 1, {1}) == Rat(1, 24));
    // <tau_0^3 tau_1> = 1 (string/dilaton consequence)
    CHECK(intersectionNumberFromFock(S, 0, {0, 0, 0, 1}) == 1);
    // <tau_0 tau_2>_1 = 1/24, <tau_1^2>_1 = 1/24
    CHECK(intersectionNumberFromFock(S, 1, {0, 2}) == Rat(1, 24));
    CHECK(intersectionNumberFromFock(S, 1, {1, 1}) == Rat(1, 24));
    // <tau_4>_2 = 1/1152
    CHECK(intersectionNumberFromFock(S, 2, {4}) == Rat(1, 1152));
    // <tau_0^2 tau_1^2>_0? dimension: 2 = 3*0-3+4: <tau_0 tau_1 tau_1 tau_0>... = 2? no:
    // use the known <tau_0^2 tau_2>_0... dimension 2 = n-3 with n=5 needs tau_0^5-type;
    // check instead <tau_0^4 tau_2>_0 = 2 and <tau_0^3 tau_1^2>_0 = 2 at n=5.
    CHECK(intersectionNumberFromFock(S, 0, {0, 0, 0, 0, 2}) == 1);  // (n-3)!/prod k! = 2!/2!
    CHECK(intersectionNumberFromFock(S, 0, {0, 0, 0, 1, 1}) == 2);
    // dimension constraint: entries vanish off 3h-3+n = sum k
    CHECK(fockTensorEntry(S, 0, {1, 1, 3}) == 0);
    CHECK(fockTensorEntry(S, 1, {1}) == 0);
}

TEST_CASE("solved residuals vanish identically through the window") {
    // solveByRecursion verifies annihilation internally; re-check a couple of
    // modes here explicitly
    FockPolynomial S = solveByRecursion(TauVariant::KW, 7, 3);
    for (int m = -1; m <= 2; ++m) {
        FockPolynomial r = applyVirasoro(VirasoroOperator(TauVariant::KW, m), S);
        CHECK(r.zero());
    }
    FockPolynomial Sb = solveByRecursion(TauVariant::BGW, 7, 3);
    for (int m = 0; m <= 2; ++m) {
        FockPolynomial r = applyVirasoro(VirasoroOperator(TauVariant::BGW, m), Sb);
        CHECK(r.zero());
    }
}

TEST_CASE("BGW x^1 specialization is the log series") {
    // log Z^BGW(x^1, 0, ...) = (1/8) log(1/(1 - x^1)): coefficient of (x^1)^n
    // is 1/(8n), carried entirely by the hbar^0 (genus-one) part; this is the
    // sign the Virasoro tower forces through its m = 0 constant term.
    FockPolynomial S = solveByRecursion(TauVariant::BGW, 8, 4);
    for (long n = 1; n <= 8; ++n) {
        std::vector<int> ones(static_cast<size_t>(n), 1);
        for (int hpow = -1; hpow <= 3; ++hpow) {
            Rat c = S.rawCoeff(FockMonomial{ones, hpow});
            if (hpow == 0)
                CHECK(c == Rat(1, 8 * n));
            else
                CHECK(c == 0);
        }
    }
}

TEST_CASE("KW low coefficients match the generating-function normalization") {
    FockPolynomial S = solveByRecursion(TauVariant::KW, 6, 3);
    // coefficient of hbar^{-1} (x^1)^3 is <tau_0^3>/3! = 1/6
    CHECK(S.rawCoeff(FockMonomial{{1, 1, 1}, -1}) == Rat(1, 6));
    // coefficient of hbar^0 x^3 is <tau_1> 3!! = 1/8
    CHECK(S.rawCoeff(FockMonomial{{3}, 0}) == Rat(1, 8));
}

TEST_CASE("dimension constraints on the solved tables") {
    // KW: a nonzero coefficient at (hbar^{h-1}, monomial) has graded weight
    // exactly 3h-3+2n; BGW: weight h-1+n.
    FockPolynomial kw = solveByRecursion(TauVariant::KW, 9, 3);
    for (const auto& [m, v] : kw.terms()) {
        (void)v;
        long h = m.hpow + 1, n = static_cast<long>(m.vars.size());
        CHECK(m.weight() == 3 * h - 3 + 2 * n);
    }
    FockPolynomial bgw = solveByRecursion(TauVariant::BGW, 9, 4);
    for (const auto& [m, v] : bgw.terms()) {
        (void)v;
        long h = m.hpow + 1, n = static_cast<long>(m.vars.size());
        CHECK(m.weight() == h - 1 + n);
    }
}

TEST_CASE("window bookkeeping") {
    FockPolynomial S = solveByRecursion(TauVariant::KW, 5, 2);
    // asking beyond the cutoff fails loudly
    CHECK_THROWS_AS(S.coeff(FockMonomial{{11}, 0}), TruncationError);
    CHECK_THROWS_AS(applyVirasoro(VirasoroOperator(TauVariant::KW, 5), S), TruncationError);
}
