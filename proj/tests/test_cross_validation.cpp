#include <catch2/catch_amalgamated.hpp>

#include "specrec/abstract_tr.hpp"
#include "specrec/dictionary.hpp"
#include "specrec/recursion.hpp"
#include "specrec/virasoro.hpp"

using namespace specrec;

TEST_CASE("triple cross-validation on the Airy curve, chi <= 4") {
    long chi = 4;
    CorrelatorTable eo = computeCorrelators(builtinAiry(3 * chi + 10), chi);
    FreeEnergyTable fet = abstractTR(buildKW(static_cast<int>(6 * chi + 5)), chi);
    ComparisonReport abs = compareWithAbstractTR(eo, fet, chi);
    INFO(abs.summary());
    CHECK(abs.pass);
    CHECK(abs.entriesCompared > 20);

    FockPolynomial fock = solveByRecursion(TauVariant::KW, 3 * chi + 3, static_cast<int>(chi / 2 + 2));
    ComparisonReport vir = compareWithVirasoro(eo, fock, chi);
    INFO(vir.summary());
    CHECK(vir.pass);
    CHECK(vir.entriesCompared > 20);
}

TEST_CASE("triple cross-validation on the Bessel curve, chi <= 4") {
    long chi = 4;
    CorrelatorTable eo = computeCorrelators(builtinBessel(3 * chi + 10), chi);
    FreeEnergyTable fet = abstractTR(buildBGW(static_cast<int>(2 * chi + 5)), chi);
    ComparisonReport abs = compareWithAbstractTR(eo, fet, chi);
    INFO(abs.summary());
    CHECK(abs.pass);
    CHECK(abs.entriesCompared > 5);

    FockPolynomial fock = solveByRecursion(TauVariant::BGW, chi + 2, static_cast<int>(chi / 2 + 2));
    ComparisonReport vir = compareWithVirasoro(eo, fock, chi);
    INFO(vir.summary());
    CHECK(vir.pass);
}

TEST_CASE("two-point product curve vs product of two KW copies, chi <= 3") {
    long chi = 3;
    CorrelatorTable eo =
        computeCorrelators(builtinProduct({ChartKind::Airy, ChartKind::Airy}, 3 * chi + 10), chi);
    AiryTensors prod = productStructure(
        {withBlock(buildKW(static_cast<int>(6 * chi + 5)), 0),
         withBlock(buildKW(static_cast<int>(6 * chi + 5)), 1)});
    FreeEnergyTable fet = abstractTR(prod, chi);
    ComparisonReport abs = compareWithAbstractTR(eo, fet, chi);
    INFO(abs.summary());
    CHECK(abs.pass);
}

TEST_CASE("mixed Airy x Bessel product curve vs mixed structure, chi <= 3") {
    long chi = 3;
    CorrelatorTable eo =
        computeCorrelators(builtinProduct({ChartKind::Airy, ChartKind::Bessel}, 3 * chi + 10), chi);
    AiryTensors prod = productStructure(
        {withBlock(buildKW(static_cast<int>(6 * chi + 5)), 0),
         withBlock(buildBGW(static_cast<int>(2 * chi + 5)), 1)});
    FreeEnergyTable fet = abstractTR(prod, chi);
    ComparisonReport abs = compareWithAbstractTR(eo, fet, chi);
    INFO(abs.summary());
    CHECK(abs.pass);
}

TEST_CASE("intersection numbers from the Airy table match the Virasoro oracle") {
    long chi = 4;
    CorrelatorTable eo = computeCorrelators(builtinAiry(3 * chi + 10), chi);
    auto nums = intersectionNumbersFromAiry(eo);
    FockPolynomial fock = solveByRecursion(TauVariant::KW, 3 * chi + 3, 4);
    CHECK(nums.at({0, {0, 0, 0}}) == 1);
    CHECK(nums.at({1, {1}}) == Rat(1, 24));
    CHECK(nums.at({0, {0, 0, 0, 1}}) == 1);
    CHECK(nums.at({2, {4}}) == Rat(1, 1152));
    for (const auto& [key, value] : nums)
        CHECK(value == intersectionNumberFromFock(fock, key.first, key.second));
}

TEST_CASE("triple cross-validation one level deeper, chi <= 5") {
    long chi = 5;
    CorrelatorTable eo = computeCorrelators(builtinAiry(3 * chi + 10), chi);
    FreeEnergyTable fet = abstractTR(buildKW(static_cast<int>(6 * chi + 5)), chi);
    ComparisonReport abs = compareWithAbstractTR(eo, fet, chi);
    INFO(abs.summary());
    CHECK(abs.pass);
    FockPolynomial fock = solveByRecursion(TauVariant::KW, 3 * chi + 3, 4);
    ComparisonReport vir = compareWithVirasoro(eo, fock, chi);
    INFO(vir.summary());
    CHECK(vir.pass);
    CHECK(vir.entriesCompared >= 80);
}

TEST_CASE("an injected kernel bug is caught by the comparison") {
    long chi = 2;
    RecursionOptions bad;
    bad.kernelConstant = Rat(-1, 2);
    CorrelatorTable eo = computeCorrelators(builtinAiry(3 * chi + 10), chi, bad);
    FreeEnergyTable fet = abstractTR(buildKW(static_cast<int>(6 * chi + 5)), chi);
    ComparisonReport abs = compareWithAbstractTR(eo, fet, chi);
    CHECK(!abs.pass);
}

TEST_CASE("vacuous pass at chi = 1 still compares the seed tables") {
    CorrelatorTable eo = computeCorrelators(builtinAiry(14), 1);
    FreeEnergyTable fet = abstractTR(buildKW(11), 1);
    ComparisonReport abs = compareWithAbstractTR(eo, fet, 1);
    CHECK(abs.pass);
}
