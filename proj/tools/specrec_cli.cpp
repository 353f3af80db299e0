// Command-line entry point for the exact recursion engine and the numeric
// deformation checks.
//
// Commands: curve run | airy check | airy expand | cross-validate |
//           family check | virasoro solve
// Exit codes: 0 success, 2 invalid configuration, 3 invariant/constraint/
//             tolerance failure, 4 truncation exhaustion or degenerate input.

#include <complex>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specrec/abstract_tr.hpp"
#include "specrec/airy_structure.hpp"
#include "specrec/classical.hpp"
#include "specrec/curve.hpp"
#include "specrec/dictionary.hpp"
#include "specrec/elliptic_checks.hpp"
#include "specrec/invariants.hpp"
#include "specrec/json_io.hpp"
#include "specrec/poly_parse.hpp"
#include "specrec/recursion.hpp"
#include "specrec/virasoro.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;
constexpr int kExitTruncation = 4;

specrec::LocalSpectralCurve makeCurve(const std::string& name, const std::string& uText,
                                      const std::string& vText, long order) {
    using namespace specrec;
    if (name == "airy") return builtinAiry(order);
    if (name == "bessel") return builtinBessel(order);
    if (name == "airy2") return builtinProduct({ChartKind::Airy, ChartKind::Airy}, order);
    if (name == "global") {
        if (uText.empty() || vText.empty())
            throw InputError("global-rational curve needs --u and --v polynomials");
        RationalFunction u = RationalFunction::poly(parsePolynomial(uText));
        RationalFunction v = RationalFunction::poly(parsePolynomial(vText));
        return fromGlobalRational(u, v, order);
    }
    throw InputError("unknown curve selector: " + name + " (use airy|bessel|airy2|global)");
}

specrec::AiryTensors makeStructure(const std::string& selector, int modes) {
    using namespace specrec;
    if (selector == "kw") return buildKW(modes);
    if (selector == "bgw") return buildBGW(modes);
    if (selector == "conic") return buildConic();
    if (selector.rfind("file:", 0) == 0)
        return airyTensorsFromJson(readJsonFile(selector.substr(5)));
    throw InputError("unknown structure selector: " + selector + " (use kw|bgw|conic|file:PATH)");
}

int cmdCurveRun(const std::string& curveName, const std::string& uText, const std::string& vText,
                long chiMax, long order, const std::string& outPath, const std::string& format) {
    using namespace specrec;
    LocalSpectralCurve curve = makeCurve(curveName, uText, vText, order);
    CorrelatorTable table = computeCorrelators(curve, chiMax);
    InvariantReport inv = verifyCorrelatorInvariants(curve, table);
    std::cout << "correlators up to chi = " << chiMax << "; invariants: " << inv.summary() << "\n";
    if (!outPath.empty()) {
        if (format == "csv")
            writeTextFile(outPath, correlatorTableToCsv(table));
        else
            writeTextFile(outPath, correlatorTableToJson(curveName, table).dump(2));
        std::cout << "wrote " << outPath << "\n";
    }
    return inv.pass ? kExitOk : kExitFailure;
}

int cmdAiryCheck(const std::string& selector, int modes, bool quantum, long chiMax, long expandD,
                 const std::string& dumpPath) {
    using namespace specrec;
    AiryTensors T = makeStructure(selector, modes);
    if (!dumpPath.empty()) {
        writeTextFile(dumpPath, airyTensorsToJson(T).dump(2));
        std::cout << "wrote " << dumpPath << "\n";
    }
    ConstraintReport classical = checkClassicalConstraints(T);
    std::cout << "classical constraints: " << classical.summary() << "\n";
    ConstraintReport quantumRep = checkQuantumConstraint(T);
    std::cout << "quantum constraint: " << quantumRep.summary() << "\n";
    if (expandD >= 2) {
        LagrangianExpansion ex = classicalExpand(T, expandD);
        for (const auto& [m, poly] : ex.y) {
            std::ostringstream os;
            os << m;
            std::cout << "y[" << os.str() << "] = " << poly.str() << "\n";
        }
        ModePoly s0 = potentialS0(T, expandD);
        std::cout << "S0 = " << s0.str() << "\n";
    }
    if (quantum) {
        FreeEnergyTable F = abstractTR(T, chiMax);
        std::cout << freeEnergyTableToJson(F).dump(2) << "\n";
    }
    return classical.passed && quantumRep.passed ? kExitOk : kExitFailure;
}

int cmdAiryExpand(bool conic, const std::string& selector, int modes, long degree) {
    using namespace specrec;
    AiryTensors T = conic ? buildConic() : makeStructure(selector, modes);
    LagrangianExpansion ex = classicalExpand(T, degree);
    if (conic) {
        // y(x) coefficient list, one per degree starting at x^2
        const ModePoly& y = ex.y.at(Mode{0, 1});
        bool first = true;
        for (long d = 2; d <= degree; ++d) {
            ModeTuple mono(static_cast<size_t>(d), Mode{0, 1});
            if (!first) std::cout << ",";
            std::cout << ratToString(y.coeff(mono));
            first = false;
        }
        std::cout << "\n";
        return kExitOk;
    }
    for (const auto& [m, poly] : ex.y) {
        std::ostringstream os;
        os << m;
        std::cout << "y[" << os.str() << "] = " << poly.str() << "\n";
    }
    return kExitOk;
}

int cmdCrossValidate(long chiMax, bool injectKernelBug) {
    using namespace specrec;
    RecursionOptions opts;
    if (injectKernelBug) opts.kernelConstant = Rat(-1, 2);  // mutation-test hook
    long order = 3 * chiMax + 10;
    bool allPass = true;

    auto run = [&](const char* name, const LocalSpectralCurve& curve, const AiryTensors& T,
                   std::optional<TauVariant> variant) {
        CorrelatorTable eo = computeCorrelators(curve, chiMax, opts);
        FreeEnergyTable fet = abstractTR(T, chiMax);
        ComparisonReport abs = compareWithAbstractTR(eo, fet, chiMax);
        std::cout << name << " EO vs abstract TR: " << abs.summary() << "\n";
        allPass = allPass && abs.pass;
        if (variant) {
            long W = 3 * chiMax + 3;
            int H = static_cast<int>(chiMax / 2 + 2);
            FockPolynomial fock = solveByRecursion(*variant, W, H);
            ComparisonReport vir = compareWithVirasoro(eo, fock, chiMax);
            std::cout << name << " EO vs Virasoro: " << vir.summary() << "\n";
            allPass = allPass && vir.pass;
        }
    };

    run("airy", builtinAiry(order), buildKW(static_cast<int>(2 * (3 * chiMax) + 5)),
        TauVariant::KW);
    run("bessel", builtinBessel(order), buildBGW(static_cast<int>(2 * chiMax + 5)),
        TauVariant::BGW);
    {
        AiryTensors twoKW = productStructure(
            {withBlock(buildKW(static_cast<int>(2 * (3 * chiMax) + 5)), 0),
             withBlock(buildKW(static_cast<int>(2 * (3 * chiMax) + 5)), 1)});
        run("airy x airy", builtinProduct({ChartKind::Airy, ChartKind::Airy}, order), twoKW, {});
    }
    return allPass ? kExitOk : kExitFailure;
}

int cmdFamilyCheck(const std::string& qText, double step, double tol, const std::string& outPath) {
    using namespace specrec;
    using namespace specrec::elliptic;
    if (tol < 5e-14) {
        std::cout << "requested tolerance " << tol
                  << " is below the binary64 quadrature floor (~5e-14); refusing\n";
        return kExitFailure;
    }

    std::vector<Rat> qr = parsePolynomial(qText);
    Poly q;
    for (const Rat& c : qr) q.c.push_back(cplx(ratToDouble(c), 0.0));

    FamilySpec spec;
    spec.q = q;
    spec.step = step;
    FamilyFrame frame = makeFamilyFrame(spec);
    TorusKernel kernel(frame.base, frame.basePeriods);

    nlohmann::json report;
    bool pass = true;
    auto record = [&](const std::string& name, double residual, double bound) {
        bool ok = residual <= bound;
        pass = pass && ok;
        report[name] = {{"residual", residual}, {"tolerance", bound}, {"pass", ok}};
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << " residual " << residual
                  << " (tolerance " << bound << ")\n";
    };

    DmCubicResult dm = dmCubicByResidue(frame.base, frame.basePeriods);
    DmFdResult fd = dmCubicByFiniteDifference(frame, spec);
    double dmRel = std::abs(fd.value - dm.byResidue) / std::abs(dm.byResidue);
    record("dm_cubic_fd_vs_residue", dmRel, std::min(tol, 1e-6));
    record("dm_cubic_residue_refinement", dm.residueSelfRel, 1e-9);

    RelatReport relat = relationCheckRelat(kernel, std::min(tol, 1e-8));
    record("relat_per_ramification_point", relat.worstRel, std::min(tol, 1e-8));

    ThetaReport theta = thetaSeriesCheck(frame, dm.byResidue);
    record("theta_a_period", theta.aPeriodResidual, 1e-10);
    record("theta_cubic_remainder_bounded", theta.cubicBounded ? 0.0 : 1.0, 0.5);
    record("prepotential_second_derivative", theta.prepotentialResidual, 1e-6);

    cplx scale(frame.base.scale, 0.0);
    RauchReport rauch = rauchCheck(frame, 0.37 * scale * kI, -0.53 * scale * kI, 1e-5);
    record("rauch_formula", rauch.relResidual, 1e-5);
    record("bergman_symmetry", rauch.symmetryResidual, 1e-10);
    record("bergman_a_period", rauch.aPeriodResidual, 1e-8);

    if (!outPath.empty()) {
        writeTextFile(outPath, report.dump(2));
        std::cout << "wrote " << outPath << "\n";
    }
    return pass ? kExitOk : kExitFailure;
}

int cmdVirasoroSolve(const std::string& variantName, long weight, int hcut,
                     const std::string& outPath) {
    using namespace specrec;
    TauVariant variant = variantName == "bgw" ? TauVariant::BGW : TauVariant::KW;
    FockPolynomial S = solveByRecursion(variant, weight, hcut);
    nlohmann::json j = fockToJson(S);
    if (!outPath.empty()) {
        writeTextFile(outPath, j.dump(2));
        std::cout << "wrote " << outPath << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact topological recursion engine with Airy-structure and "
                 "Virasoro cross-validation, plus numeric deformation checks "
                 "on a quartic elliptic family"};
    app.set_config("--config");
    app.fallthrough();
    app.require_subcommand(1);

    // ---- curve run
    auto* curveApp = app.add_subcommand("curve", "local spectral curve commands");
    curveApp->require_subcommand(1);
    auto* curveRun = curveApp->add_subcommand("run", "compute correlators and run the invariant suite");
    std::string curveName = "airy", uText, vText, outPath, format = "json";
    long chiMax = 4, order = 0;
    curveRun->add_option("--curve", curveName, "airy|bessel|airy2|global");
    curveRun->add_option("--u", uText, "u polynomial for --curve global");
    curveRun->add_option("--v", vText, "v polynomial for --curve global");
    curveRun->add_option("--chi-max", chiMax, "compute all omega_{h,n} with 2h-2+n <= chi-max");
    curveRun->add_option("--order", order, "series truncation order (default 3*chi+10)");
    curveRun->add_option("--out", outPath, "output path");
    curveRun->add_option("--format", format, "json|csv");

    // ---- airy check / expand
    auto* airyApp = app.add_subcommand("airy", "Airy structure commands");
    airyApp->require_subcommand(1);
    auto* airyCheck = airyApp->add_subcommand("check", "run the constraint checkers");
    std::string structureSel = "kw", dumpPath;
    int modes = 21;
    bool quantumTables = false;
    long expandD = 0, quantumChi = 3;
    airyCheck->add_option("--structure", structureSel, "kw|bgw|conic|file:PATH");
    airyCheck->add_option("--modes", modes, "largest odd mode for kw/bgw builders");
    airyCheck->add_flag("--quantum", quantumTables, "also emit abstract TR tables");
    airyCheck->add_option("--chi-max", quantumChi, "chi bound for --quantum");
    airyCheck->add_option("--expand", expandD, "emit the classical expansion and S0 to this degree");
    airyCheck->add_option("--dump", dumpPath, "write the structure tensors to a JSON file");

    auto* airyExpand = airyApp->add_subcommand("expand", "classical Lagrangian graph expansion");
    bool conic = false;
    long degree = 10;
    std::string exStructure = "conic";
    int exModes = 9;
    airyExpand->add_flag("--conic", conic, "expand the plane conic (prints Catalan numbers)");
    airyExpand->add_option("--structure", exStructure, "kw|bgw|conic|file:PATH");
    airyExpand->add_option("--modes", exModes, "largest odd mode for kw/bgw builders");
    airyExpand->add_option("--degree", degree, "total degree of the expansion");

    // ---- cross-validate
    auto* cross = app.add_subcommand("cross-validate",
                                     "EO = abstract TR = Virasoro, exactly, on airy/bessel/two-point");
    long crossChi = 4;
    bool injectBug = false;
    cross->add_option("--chi-max", crossChi, "chi bound (default 4)");
    cross->add_flag("--inject-kernel-bug", injectBug, "mutation-test hook: corrupt the kernel constant");

    // ---- family check
    auto* familyApp = app.add_subcommand("family", "numeric elliptic family commands");
    familyApp->require_subcommand(1);
    auto* familyCheck = familyApp->add_subcommand("check", "periods, DM cubic, relat, theta, Rauch");
    std::string qText = "x^4-5x^2+4", deform = "additive", famOut;
    double step = 1e-3, tol = 1e-6;
    familyCheck->add_option("--q", qText, "quartic polynomial q(x)");
    familyCheck->add_option("--deform", deform, "deformation kind (additive)");
    familyCheck->add_option("--step", step, "finite-difference step relative to the curve scale");
    familyCheck->add_option("--tol", tol, "tolerance override");
    familyCheck->add_option("--out", famOut, "JSON report path");

    // ---- virasoro solve
    auto* virasoro = app.add_subcommand("virasoro", "Fock-space Virasoro commands");
    virasoro->require_subcommand(1);
    auto* virasoroSolve = virasoro->add_subcommand("solve", "solve the KW/BGW constraints");
    std::string variantName = "kw", virOut;
    long weight = 8;
    int hcut = 3;
    virasoroSolve->add_option("--variant", variantName, "kw|bgw");
    virasoroSolve->add_option("--weight", weight, "weight cutoff");
    virasoroSolve->add_option("--hbar", hcut, "genus cutoff H (stores S_h for h <= H)");
    virasoroSolve->add_option("--out", virOut, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (curveRun->parsed()) {
            if (chiMax < 1 || order < 0) throw specrec::InputError("chi-max must be >= 1");
            if (order == 0) order = 3 * chiMax + 10;
            if (format != "json" && format != "csv")
                throw specrec::InputError("format must be json or csv");
            return cmdCurveRun(curveName, uText, vText, chiMax, order, outPath, format);
        }
        if (airyCheck->parsed()) return cmdAiryCheck(structureSel, modes, quantumTables, quantumChi,
                                                     expandD, dumpPath);
        if (airyExpand->parsed()) {
            if (degree < 2) throw specrec::InputError("degree must be >= 2");
            return cmdAiryExpand(conic, exStructure, exModes, degree);
        }
        if (cross->parsed()) {
            if (crossChi < 1) throw specrec::InputError("chi-max must be >= 1");
            return cmdCrossValidate(crossChi, injectBug);
        }
        if (familyCheck->parsed()) {
            if (deform != "additive") throw specrec::InputError("only the additive deformation is supported");
            if (step <= 0) throw specrec::InputError("step must be positive");
            return cmdFamilyCheck(qText, step, tol, famOut);
        }
        if (virasoroSolve->parsed()) {
            if (weight < 1 || hcut < 1) throw specrec::InputError("weight and hbar cutoffs must be >= 1");
            return cmdVirasoroSolve(variantName, weight, hcut, virOut);
        }
    } catch (const specrec::InputError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitConfig;
    } catch (const specrec::TruncationError& e) {
        std::cerr << "truncation exhaustion: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const specrec::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const specrec::ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitConfig;
}
