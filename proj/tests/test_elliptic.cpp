#include <catch2/catch_amalgamated.hpp>

#include "specrec/elliptic_checks.hpp"
#include "specrec/poly_parse.hpp"

using namespace specrec::elliptic;

namespace {

Poly quartic(std::initializer_list<double> coeffs) {
    Poly p;
    for (double c : coeffs) p.c.push_back(cplx(c, 0.0));
    return p;
}

FamilySpec standardFamily() {
    FamilySpec spec;
    spec.q = quartic({4, 0, -5, 0, 1});  // x^4 - 5x^2 + 4
    return spec;
}

}  // namespace

TEST_CASE("roots, pairing and guards") {
    QuarticCurve c = makeQuarticCurve(quartic({4, 0, -5, 0, 1}));
    CHECK(std::abs(c.b[0] - cplx(-2, 0)) < 1e-12);
    CHECK(std::abs(c.b[1] - cplx(-1, 0)) < 1e-12);
    CHECK(std::abs(c.b[2] - cplx(1, 0)) < 1e-12);
    CHECK(std::abs(c.b[3] - cplx(2, 0)) < 1e-12);

    // nearly colliding branch points: roots {1, 1+1e-12, -1, -2}
    double d = 1e-12;
    {
        // assemble (x-1)(x-1-d)(x+1)(x+2) by explicit convolution
        std::vector<cplx> roots{cplx(1, 0), cplx(1 + d, 0), cplx(-1, 0), cplx(-2, 0)};
        Poly p;
        p.c = {cplx(1, 0)};
        for (cplx r : roots) {
            std::vector<cplx> next(p.c.size() + 1, cplx(0, 0));
            for (size_t i = 0; i < p.c.size(); ++i) {
                next[i + 1] += p.c[i];
                next[i] += -r * p.c[i];
            }
            p.c = next;
        }
        CHECK_THROWS_AS(makeQuarticCurve(p), specrec::NumericError);
    }

    CHECK_THROWS_WITH(makeQuarticCurve(quartic({1, 0, 0, 1})),
                      Catch::Matchers::ContainsSubstring("quartic"));
}

TEST_CASE("periods of the acceptance family") {
    QuarticCurve c = makeQuarticCurve(quartic({4, 0, -5, 0, 1}));
    PeriodData pd = computePeriods(c);
    CHECK(pd.tau.imag() > 0);
    CHECK(pd.aNormResidual < 1e-10);
    CHECK(std::abs(pd.tau.real()) < 1e-10);  // symmetric configuration
}

TEST_CASE("symmetric branch configurations give tau on the imaginary axis") {
    // rectangle {+-1 +- i k}, k < 1: both cuts are vertical segments fixed by
    // complex conjugation, so tau is purely imaginary.  (For the cross
    // {+-1, +-ik} the axis-aligned cuts would intersect; the valid diagonal
    // cut systems measure an SL(2,Z)-transformed tau off the axis, as do
    // rectangles whose two cuts swap under conjugation.)
    for (double k : {0.5, 0.7, 0.9}) {
        // (x^2 - (1+ik)^2)(x^2 - (1-ik)^2) = x^4 - 2(1-k^2) x^2 + (1+k^2)^2
        Poly p = quartic({(1 + k * k) * (1 + k * k), 0, -2 * (1 - k * k), 0, 1});
        PeriodData pd = computePeriods(makeQuarticCurve(p));
        CHECK(pd.tau.imag() > 0);
        CHECK(std::abs(pd.tau.real()) < 1e-9);
    }
}

TEST_CASE("tau is invariant under rescaling x -> lambda x") {
    QuarticCurve c1 = makeQuarticCurve(quartic({4, 0, -5, 0, 1}));
    PeriodData p1 = computePeriods(c1);
    double lam = 3.0;
    Poly q2 = quartic({4, 0, -5 / (lam * lam), 0, 1 / (lam * lam * lam * lam)});
    QuarticCurve c2 = makeQuarticCurve(q2);
    PeriodData p2 = computePeriods(c2);
    CHECK(std::abs(p1.tau - p2.tau) < 1e-10);
}

TEST_CASE("torus kernel self-checks") {
    FamilyFrame f = makeFamilyFrame(standardFamily());
    TorusKernel K(f.base, f.basePeriods);
    for (double eps : {1e-3, 1e-4}) {
        cplx z(eps, 0.5 * eps);
        CHECK(std::abs(K.P0(z) * z * z - 1.0) < 1e-4);  // double pole, coefficient 1
    }
    cplx xp(0.0, 0.74), xq(0.0, -1.06);
    CHECK(std::abs(K.bergman(xp, xq) - K.bergman(xq, xp)) < 1e-10);
    CHECK(K.aPeriodOfBergman(xq) < 1e-8);
}

TEST_CASE("Donagi-Markman cubic: residue formula vs finite differences") {
    FamilySpec spec = standardFamily();
    FamilyFrame f = makeFamilyFrame(spec);
    DmCubicResult dm = dmCubicByResidue(f.base, f.basePeriods);
    CHECK(dm.residueSelfRel < 1e-9);
    DmFdResult fd = dmCubicByFiniteDifference(f, spec);
    double rel = std::abs(fd.value - dm.byResidue) / std::abs(dm.byResidue);
    INFO("fd " << fd.value.real() << " vs residue " << dm.byResidue.real());
    CHECK(rel < 1e-6);
    CHECK(std::abs(dzdt(f.basePeriods) - (-0.5 * f.basePeriods.A)) == 0.0);
}

TEST_CASE("DM cubic scaling law") {
    // x -> lambda x, y -> mu y sends z ~ oint y dx to lambda mu z with tau
    // invariant, so c = dtau/dz scales by 1/(lambda mu).
    double lam = 2.0, mu = 3.0;
    FamilyFrame f1 = makeFamilyFrame(standardFamily());
    DmCubicResult c1 = dmCubicByResidue(f1.base, f1.basePeriods);
    Poly q2;
    q2.c = {cplx(4 * mu * mu, 0), cplx(0, 0), cplx(-5 * mu * mu / (lam * lam), 0), cplx(0, 0),
            cplx(mu * mu / (lam * lam * lam * lam), 0)};
    FamilySpec spec2;
    spec2.q = q2;
    FamilyFrame f2 = makeFamilyFrame(spec2);
    DmCubicResult c2 = dmCubicByResidue(f2.base, f2.basePeriods);
    CHECK(std::abs(c2.byResidue * (lam * mu) - c1.byResidue) / std::abs(c1.byResidue) < 1e-9);
}

TEST_CASE("relation between omega pairings and the cubic period") {
    FamilyFrame f = makeFamilyFrame(standardFamily());
    TorusKernel K(f.base, f.basePeriods);
    RelatReport rep = relationCheckRelat(K, 1e-8);
    for (const auto& p : rep.points) {
        INFO("lhs " << p.lhs.real() << " rhs " << p.rhs.real());
        CHECK(p.relResidual < 1e-8);
    }
    CHECK(rep.pass);
    // residues over all four points sum to zero (global residue theorem)
    cplx tot = 0.0;
    for (const auto& p : rep.points) tot += p.lhs;
    CHECK(std::abs(tot) < 1e-12);
}

TEST_CASE("theta series two-term model") {
    FamilyFrame f = makeFamilyFrame(standardFamily());
    DmCubicResult dm = dmCubicByResidue(f.base, f.basePeriods);
    ThetaReport rep = thetaSeriesCheck(f, dm.byResidue);
    CHECK(rep.aPeriodResidual < 1e-10);
    CHECK(rep.cubicBounded);
    CHECK(rep.prepotentialResidual < 1e-6);
    CHECK(rep.pass);
}

TEST_CASE("Rauch variational formula at a sampled pair") {
    FamilyFrame f = makeFamilyFrame(standardFamily());
    RauchReport rep = rauchCheck(f, cplx(0.0, 0.74), cplx(0.0, -1.06), 1e-5);
    CHECK(rep.symmetryResidual < 1e-10);
    CHECK(rep.aPeriodResidual < 1e-8);
    INFO("lhs " << rep.lhs.imag() << " rhs " << rep.rhs.imag());
    CHECK(rep.relResidual < 1e-5);
    CHECK(rep.pass);
    CHECK_THROWS_AS(rauchCheck(f, cplx(1.001, 0.0), cplx(0.0, -1.06), 1e-5), specrec::InputError);
}

TEST_CASE("an asymmetric complex family also passes the numeric suite") {
    FamilySpec spec;
    // (x^2 - 2x + 2)(x^2 + 3x + 4): conjugate pairs 1 +- i and (-3 +- i sqrt7)/2
    spec.q = quartic({8, -2, 3, 1, 1});
    FamilyFrame f = makeFamilyFrame(spec);
    CHECK(f.basePeriods.tau.imag() > 0);
    DmCubicResult dm = dmCubicByResidue(f.base, f.basePeriods);
    DmFdResult fd = dmCubicByFiniteDifference(f, spec);
    CHECK(std::abs(fd.value - dm.byResidue) / std::abs(dm.byResidue) < 1e-6);
}

TEST_CASE("polynomial parser feeds the family") {
    std::vector<specrec::Rat> q = specrec::parsePolynomial("x^4 - 5x^2 + 4");
    REQUIRE(q.size() == 5);
    CHECK(q[0] == specrec::Rat(4));
    CHECK(q[2] == specrec::Rat(-5));
    CHECK(q[4] == specrec::Rat(1));
    CHECK(specrec::parsePolynomial("3/2*x - 1")[1] == specrec::Rat(3, 2));
    CHECK_THROWS_AS(specrec::parsePolynomial("x^^2"), specrec::InputError);
}
