#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "specrec/laurent.hpp"
#include "specrec/rational.hpp"
#include "specrec/series.hpp"

using namespace specrec;

namespace {

TruncSeries randomSeries(std::mt19937& rng, long low, long trunc) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<Rat> cs;
    for (long e = low; e <= trunc; ++e) cs.push_back(Rat(num(rng), den(rng)));
    return TruncSeries::fromCoeffs(cs, low, trunc);
}

}  // namespace

TEST_CASE("polynomial identities") {
    TruncSeries one = TruncSeries::monomial(Rat(1), 0, 8);
    TruncSeries z = TruncSeries::monomial(Rat(1), 1, 8);
    TruncSeries a = one + z, b = one - z;
    TruncSeries prod = a * b;
    CHECK(prod.coeff(0) == 1);
    CHECK(prod.coeff(1) == 0);
    CHECK(prod.coeff(2) == -1);

    TruncSeries z3 = TruncSeries::monomial(Rat(1), 3, 8);
    TruncSeries dz3 = z3.derivative();
    CHECK(dz3.coeff(2) == 3);
    CHECK(dz3.coeff(1) == 0);
}

TEST_CASE("geometric series via division") {
    TruncSeries one = TruncSeries::monomial(Rat(1), 0, 3);
    TruncSeries denom = one - TruncSeries::monomial(Rat(1), 1, 3);
    TruncSeries q = divide(one, denom);
    for (long e = 0; e <= 3; ++e) CHECK(q.coeff(e) == 1);
    CHECK_THROWS_AS(q.coeff(4), TruncationError);
}

TEST_CASE("division by a zero series is rejected") {
    TruncSeries one = TruncSeries::monomial(Rat(1), 0, 5);
    CHECK_THROWS_AS(divide(one, TruncSeries::zero(5)), InputError);
}

TEST_CASE("truncation propagates pessimistically through products") {
    // a known to z^2, b known to z^5: product coefficients are certified only
    // while every contributing split is known
    TruncSeries a = TruncSeries::fromCoeffs({Rat(1), Rat(1), Rat(1)}, 0, 2);
    TruncSeries b = TruncSeries::fromCoeffs({Rat(1), Rat(2), Rat(3), Rat(4), Rat(5), Rat(6)}, 0, 5);
    TruncSeries p = a * b;
    CHECK(p.truncOrder() == 2);
    CHECK(p.coeff(2) == Rat(6));
    CHECK_THROWS_AS(p.coeff(3), TruncationError);
}

TEST_CASE("parity split") {
    TruncSeries s = TruncSeries::fromCoeffs({Rat(1), Rat(1), Rat(1)}, 0, 4);  // 1 + z + z^2
    auto [even, odd] = s.paritySplit();
    CHECK(even.coeff(0) == 1);
    CHECK(even.coeff(2) == 1);
    CHECK(even.coeff(1) == 0);
    CHECK(odd.coeff(1) == 1);

    TruncSeries cube = TruncSeries::monomial(Rat(1), 3, 4);
    auto [e2, o2] = cube.paritySplit();
    CHECK(e2.knownZero());
    CHECK(o2.coeff(3) == 1);

    TruncSeries lau = TruncSeries::monomial(Rat(1), -1, 2) + TruncSeries::monomial(Rat(1), -2, 2);
    auto [e3, o3] = lau.paritySplit();
    CHECK(e3.coeff(-2) == 1);
    CHECK(o3.coeff(-1) == 1);
}

TEST_CASE("antiderivative of Laurent differentials") {
    // z^2 dz/z = z dz -> z^2/2
    auto d1 = LaurentDifferential::monomial(Rat(1), 2, 6);
    CHECK(antiderivative(d1).coeff(2) == Rat(1, 2));
    // z^-2 dz/z -> -z^-2/2
    auto d2 = LaurentDifferential::monomial(Rat(1), -2, 6);
    CHECK(antiderivative(d2).coeff(-2) == Rat(-1, 2));
    // 3z dz/z + 4z^3 dz/z -> 3z + (4/3) z^3
    auto d3 = LaurentDifferential::monomial(Rat(3), 1, 6) +
              LaurentDifferential::monomial(Rat(4), 3, 6);
    TruncSeries f = antiderivative(d3);
    CHECK(f.coeff(1) == 3);
    CHECK(f.coeff(3) == Rat(4, 3));
    // derivative of the primitive returns the differential (f' dz = S dz/z)
    TruncSeries back = f.derivative().shifted(1);
    CHECK(back.coeff(1) == 3);
    CHECK(back.coeff(3) == 4);
}

TEST_CASE("residues") {
    // f = 1/z, d = z dz/z -> 1
    TruncSeries f1 = TruncSeries::monomial(Rat(1), -1, 4);
    CHECK(residueAt0(f1, LaurentDifferential::monomial(Rat(1), 1, 4)) == 1);
    // f = 1, d = z^2 dz/z -> 0
    TruncSeries f2 = TruncSeries::monomial(Rat(1), 0, 4);
    CHECK(residueAt0(f2, LaurentDifferential::monomial(Rat(1), 2, 4)) == 0);
    // f = z^-3, d = (2z + 5z^3) dz/z -> 5
    TruncSeries f3 = TruncSeries::monomial(Rat(1), -3, 4);
    auto d = LaurentDifferential::monomial(Rat(2), 1, 6) +
             LaurentDifferential::monomial(Rat(5), 3, 6);
    CHECK(residueAt0(f3, d) == 5);
}

TEST_CASE("residue outside the known window fails loudly") {
    TruncSeries f = TruncSeries::monomial(Rat(1), -9, -5);  // window [-9,-5]
    auto d = LaurentDifferential::monomial(Rat(1), 1, 2);
    CHECK_THROWS_AS(residueAt0(f, d), TruncationError);
}

TEST_CASE("symplectic pairing") {
    for (long n = 1; n <= 8; ++n) {
        auto eta1 = LaurentDifferential::monomial(Rat(1), -n, 10);
        auto eta2 = LaurentDifferential::monomial(Rat(1), n, 10);
        CHECK(symplecticPair(eta1, eta2) == Rat(-1, static_cast<long long>(n)));
    }
    auto z1 = LaurentDifferential::monomial(Rat(1), 1, 6);
    CHECK(symplecticPair(z1, z1) == 0);
    auto z2 = LaurentDifferential::monomial(Rat(1), 2, 6);
    auto z3 = LaurentDifferential::monomial(Rat(1), 3, 6);
    CHECK(symplecticPair(z2, z3) == 0);  // holomorphic pair is Lagrangian
}

TEST_CASE("symplectic pairing is bilinear and antisymmetric on random inputs") {
    std::mt19937 rng(20260809);
    for (int rep = 0; rep < 30; ++rep) {
        TruncSeries s1 = randomSeries(rng, -4, 6), s2 = randomSeries(rng, -4, 6);
        // force residue-free
        s1 = s1 - TruncSeries::monomial(s1.coeff(0), 0, 6);
        s2 = s2 - TruncSeries::monomial(s2.coeff(0), 0, 6);
        LaurentDifferential e1(s1), e2(s2);
        CHECK(symplecticPair(e1, e2) == -symplecticPair(e2, e1));
        Rat k(3, 2);
        CHECK(symplecticPair(e1.scaled(k), e2) == k * symplecticPair(e1, e2));
        // antiderivative then derivative is the identity on the window
        TruncSeries f = antiderivative(e1);
        TruncSeries back = f.derivative().shifted(1);
        for (long e = -4; e <= back.truncOrder(); ++e)
            if (e != 0) CHECK(back.coeff(e) == s1.coeff(e));
    }
}

TEST_CASE("multiplication is associative and commutative on the joint window") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        TruncSeries a = randomSeries(rng, -2, 7), b = randomSeries(rng, 0, 5),
                    c = randomSeries(rng, -1, 6);
        CHECK(a * b == b * a);
        TruncSeries ab_c = (a * b) * c, a_bc = a * (b * c);
        long lo = std::min(ab_c.lowest(), a_bc.lowest());
        long hi = std::min(ab_c.truncOrder(), a_bc.truncOrder());
        for (long e = lo; e <= hi; ++e) CHECK(ab_c.coeff(e) == a_bc.coeff(e));
    }
}

TEST_CASE("series sqrt and compositional inverse") {
    // sqrt(4 z^2 (1 + z)) = 2z sqrt(1+z)
    TruncSeries s = (TruncSeries::monomial(Rat(4), 2, 10) + TruncSeries::monomial(Rat(4), 3, 10));
    TruncSeries r = seriesSqrt(s);
    CHECK(r.coeff(1) == 2);
    CHECK(r.coeff(2) == 1);  // 2z(1 + z/2 - z^2/8 ...)
    CHECK(r.coeff(3) == Rat(-1, 4));
    TruncSeries sq = r * r;
    CHECK(sq.coeff(2) == 4);
    CHECK(sq.coeff(3) == 4);
    CHECK(sq.coeff(4) == 0);

    // non-square leading coefficient is rejected
    TruncSeries bad = TruncSeries::monomial(Rat(2), 2, 6);
    CHECK_THROWS_AS(seriesSqrt(bad), InputError);

    // inverse of psi = z + z^2: phi = z - z^2 + 2z^3 - 5z^4 (Catalan signs)
    TruncSeries psi = TruncSeries::monomial(Rat(1), 1, 6) + TruncSeries::monomial(Rat(1), 2, 6);
    TruncSeries phi = compositionalInverse(psi);
    CHECK(phi.coeff(1) == 1);
    CHECK(phi.coeff(2) == -1);
    CHECK(phi.coeff(3) == 2);
    CHECK(phi.coeff(4) == -5);
    TruncSeries comp = compose(psi, phi);
    CHECK(comp.coeff(1) == 1);
    for (long e = 2; e <= comp.truncOrder(); ++e) CHECK(comp.coeff(e) == 0);
}

TEST_CASE("rational helpers") {
    CHECK(oddDoubleFactorial(0) == 1);
    CHECK(oddDoubleFactorial(1) == 3);
    CHECK(oddDoubleFactorial(4) == 945);
    Rat root;
    CHECK(ratSqrt(Rat(9, 4), root));
    CHECK(root == Rat(3, 2));
    CHECK(!ratSqrt(Rat(2), root));
}
