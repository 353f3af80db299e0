#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specrec/elliptic.hpp"
#include "specrec/errors.hpp"

namespace specrec::elliptic {

/// One-parameter additive family y^2 = q(x) - t with finite-difference step h.
struct FamilySpec {
    Poly q;
    double step = 1e-3;   // relative to the curve scale
    bool richardson = true;
};

struct FamilyFrame {
    QuarticCurve base;
    PeriodData basePeriods;

    QuarticCurve curveAt(double t) const {
        Poly qt = base.q;
        qt.c[0] -= t;
        return makeQuarticCurve(qt, base.b);
    }
    PeriodData periodsAt(double t) const { return computePeriods(curveAt(t), basePeriods.sB); }
};

inline FamilyFrame makeFamilyFrame(const FamilySpec& spec) {
    FamilyFrame f;
    f.base = makeQuarticCurve(spec.q);
    f.basePeriods = computePeriods(f.base);
    return f;
}

/// dz/dt of the additive family at t: z is the a-period of the transported
/// (y_t - y_0) dx, so dz/dt = -A_t/2.
inline cplx dzdt(const PeriodData& pd) { return -0.5 * pd.A; }

// ----------------------------------------------------------- Donagi-Markman

struct DmCubicResult {
    cplx byResidue;        // closed residue reduction over the four branch points
    cplx byQuadrature;     // same residues by contour quadrature (convergence oracle)
    double residueSelfRel; // |byResidue - byQuadrature| / |byResidue|
};

/// dtau/dz = -2 pi i * sum_alpha Res_alpha [ omega_norm^3 / (du dv) ].
/// In the local coordinate t = y at a branch point the residue evaluates in
/// closed form to 4 / (A^3 q'(b_alpha)^2); the quadrature route recomputes it
/// from small circles and must agree to ~1e-9 relative.
inline DmCubicResult dmCubicByResidue(const QuarticCurve& c, const PeriodData& pd) {
    cplx sumClosed = 0.0;
    cplx sumQuad = 0.0;
    double minsep = c.minRootSeparation();
    for (int a = 0; a < 4; ++a) {
        cplx bp = c.b[size_t(a)];
        sumClosed += 4.0 / (pd.A * pd.A * pd.A * c.qprime(bp) * c.qprime(bp));
        double eps = 0.05 * minsep;
        auto integrand = [&](cplx t) {
            cplx x = c.xOfLocal(a, t);
            cplx qp = c.qprime(x);
            return 4.0 / (pd.A * pd.A * pd.A * qp * qp * t);
        };
        cplx r1 = circleResidue(integrand, 0.0, eps);
        cplx r2 = circleResidue(integrand, 0.0, 0.5 * eps);
        if (std::abs(r1 - r2) > 1e-9 * std::max(1e-30, std::abs(r1)))
            throw NumericError("residue-series non-convergence in the DM cubic");
        sumQuad += r2;
    }
    DmCubicResult r;
    cplx pref = -2.0 * kPi * kI;
    r.byResidue = pref * sumClosed;
    r.byQuadrature = pref * sumQuad;
    r.residueSelfRel = std::abs(r.byResidue - r.byQuadrature) / std::abs(r.byResidue);
    return r;
}

struct DmFdResult {
    cplx value;       // (dtau/dt) / (dz/dt) at t = 0
    cplx valueCoarse; // without the Richardson step
    double hUsed;
};

/// Fourth-order central differences of tau across the stencil
/// t in {0, +-h, +-2h}, divided by dz/dt = -A/2.
inline DmFdResult dmCubicByFiniteDifference(const FamilyFrame& f, const FamilySpec& spec) {
    double h = spec.step * f.base.scale;
    auto tauAt = [&](double t) { return f.periodsAt(t).tau; };
    auto fd = [&](double hh) {
        cplx tp2 = tauAt(2 * hh), tp1 = tauAt(hh), tm1 = tauAt(-hh), tm2 = tauAt(-2 * hh);
        cplx dtau = (-tp2 + 8.0 * tp1 - 8.0 * tm1 + tm2) / (12.0 * hh);
        return dtau / dzdt(f.basePeriods);
    };
    DmFdResult r;
    r.hUsed = h;
    cplx ch = fd(h);
    r.valueCoarse = ch;
    if (spec.richardson) {
        cplx ch2 = fd(0.5 * h);
        r.value = (16.0 * ch2 - ch) / 15.0;
    } else {
        r.value = ch;
    }
    return r;
}

// ----------------------------------------------------------------- relation

struct RelatPointReport {
    cplx lhs;          // Res_alpha omega^2/du
    cplx rhs;          // Res_alpha v * (b-hat b-hat period of omega_{0,3})
    double relResidual;
};

struct RelatReport {
    std::array<RelatPointReport, 4> points;
    double worstRel = 0.0;
    bool pass = false;
};

/// Per ramification point: Res[omega^2/du] equals
/// Res[v * oint_bhat oint_bhat omega_{0,3}], both sides via local series in
/// s = y (evaluated by circle quadrature; the inner double period reduces in
/// closed form to sum_a' (4/(A^3 q'(b_a')^2)) (P0(zeta_a' - zeta_r) + cB)).
/// The relative sign between the two sides is the one consistent with the
/// period-matrix variation formula as validated against finite differences;
/// see the dm-cubic check.
inline RelatReport relationCheckRelat(const TorusKernel& K, double tol = 1e-8) {
    const QuarticCurve& c = K.curve();
    const PeriodData& pd = K.periods();
    RelatReport rep;
    double minsep = c.minRootSeparation();
    for (int a = 0; a < 4; ++a) {
        cplx bp = c.b[size_t(a)];
        // lhs: closed form plus a quadrature cross-check
        cplx lhsClosed = 2.0 / (pd.A * pd.A * c.qprime(bp));
        cplx lhsQuad = circleResidue(
            [&](cplx t) {
                cplx x = c.xOfLocal(a, t);
                return 2.0 / (pd.A * pd.A * c.qprime(x) * t);
            },
            0.0, 0.04 * minsep);
        if (std::abs(lhsClosed - lhsQuad) > 1e-9 * std::abs(lhsClosed))
            throw NumericError("series window exhaustion in relat lhs");

        auto D = [&](int ai, cplx dz) {
            // bhat-bhat period of omega_{0,3} as a differential in the point
            // r = (ai, t) with zeta(r) = zeta(b_ai) + dz, per d zeta_r.  The
            // own-point term feeds the double pole with the small offset dz
            // directly, keeping full relative precision.
            cplx acc = 0.0;
            for (int ap = 0; ap < 4; ++ap) {
                cplx qp = c.qprime(c.b[size_t(ap)]);
                cplx arg = ap == ai ? -dz : K.abelAtBranch(ap) - K.abelAtBranch(ai) - dz;
                acc += 4.0 / (pd.A * pd.A * pd.A * qp * qp) * (K.P0(arg) + K.bergmanConstant());
            }
            return acc;
        };
        cplx rhs = circleResidue(
            [&](cplx t) {
                cplx x = c.xOfLocal(a, t);
                cplx dz = K.abelLocalOffset(a, t);
                // v = y = t; d zeta/dt = 2/(A q'(x))
                return t * D(a, dz) * 2.0 / (pd.A * c.qprime(x));
            },
            0.0, 0.15 * minsep, 1e-10);

        RelatPointReport pr;
        pr.lhs = lhsClosed;
        pr.rhs = rhs;
        pr.relResidual = std::abs(pr.lhs - pr.rhs) / std::max(1e-30, std::abs(pr.lhs));
        rep.points[size_t(a)] = pr;
        rep.worstRel = std::max(rep.worstRel, pr.relResidual);
    }
    rep.pass = rep.worstRel <= tol;
    return rep;
}

// -------------------------------------------------------------- theta series

struct ThetaReport {
    double aPeriodResidual = 0.0;   // | oint_a theta - z | / |z|, worst over probes
    std::array<double, 3> cubicRatio{};  // |residual| / |z|^3 over dyadic shrinks
    bool cubicBounded = false;
    double prepotentialResidual = 0.0;  // | d2F0/dz2 - tau |
    bool pass = false;
};

namespace detail {

/// z(t) and w(t): a- and b-periods of (y_t - y_0) dx transported at fixed x.
struct ThetaPeriods {
    cplx z, w;
};

inline ThetaPeriods thetaPeriods(const FamilyFrame& f, double t) {
    QuarticCurve ct = f.curveAt(t);
    ThetaPeriods out;
    EllipseContour ac = aContour(f.base);
    out.z = contourIntegral(ac, [&](cplx x) { return ct.y(x) - f.base.y(x); });
    // b-period of the transported difference: the collapsed two-sheet path
    // must run between the branch points of each differential separately, so
    // integrate y_t dx over the deformed curve's own path and subtract the
    // base period (homologous representatives by root continuity).
    cplx wt = bPathIntegral(ct, [&](cplx x) { return ct.y(x); });
    cplx w0 = bPathIntegral(f.base, [&](cplx x) { return f.base.y(x); });
    out.w = double(f.basePeriods.sB) * 2.0 * (wt - w0);
    return out;
}

}  // namespace detail

/// Verifies the two-term Taylor model of the transported family differential:
/// oint_a theta = z by homotopy invariance (recomputed on an independent
/// a-contour), the quadratic model w(z) = tau z + (c/2) z^2 with cubic
/// remainder O(z^3) over dyadic shrinks, and the prepotential consistency
/// d^2F0/dz^2 = tau at the base point.
inline ThetaReport thetaSeriesCheck(const FamilyFrame& f, cplx dmCubic, double t0 = 0.0) {
    ThetaReport rep;
    const PeriodData& pd = f.basePeriods;
    if (t0 == 0.0) t0 = 2e-2 * f.base.scale;

    // a-period of theta equals z: integrate over an independent contour
    {
        QuarticCurve ct = f.curveAt(t0);
        auto diff = [&](cplx x) { return ct.y(x) - f.base.y(x); };
        detail::EllipseContour a1 = detail::aContour(f.base);
        detail::EllipseContour a2 = detail::aContour(f.base, 0.55);
        cplx z1 = detail::contourIntegral(a1, diff);
        cplx z2 = detail::contourIntegral(a2, diff);
        rep.aPeriodResidual = std::abs(z1 - z2) / std::max(1e-30, std::abs(z1));
    }

    for (int k = 0; k < 3; ++k) {
        double t = t0 / double(1 << k);
        detail::ThetaPeriods th = detail::thetaPeriods(f, t);
        cplx model = pd.tau * th.z + 0.5 * dmCubic * th.z * th.z;
        rep.cubicRatio[size_t(k)] = std::abs(th.w - model) / std::pow(std::abs(th.z), 3.0);
    }
    double r0 = rep.cubicRatio[0];
    rep.cubicBounded = rep.cubicRatio[1] < 3.0 * r0 + 1e-6 && rep.cubicRatio[2] < 3.0 * r0 + 1e-6;

    // prepotential: F0 integrated along the stencil via dF0 = w dz; its second
    // z-derivative at 0 must be tau.  Equivalent form used here:
    // (dw/dt)/(dz/dt) at 0 == tau, with fourth-order stencils.
    {
        double h = 5e-3 * f.base.scale;
        auto wz = [&](double t) { return detail::thetaPeriods(f, t); };
        detail::ThetaPeriods p1 = wz(h), p2 = wz(2 * h), m1 = wz(-h), m2 = wz(-2 * h);
        cplx dw = (-p2.w + 8.0 * p1.w - 8.0 * m1.w + m2.w) / (12.0 * h);
        cplx dz = (-p2.z + 8.0 * p1.z - 8.0 * m1.z + m2.z) / (12.0 * h);
        rep.prepotentialResidual = std::abs(dw / dz - pd.tau);
    }

    rep.pass = rep.aPeriodResidual < 1e-10 && rep.cubicBounded && rep.prepotentialResidual < 1e-6;
    return rep;
}

// -------------------------------------------------------------------- Rauch

struct RauchReport {
    double symmetryResidual = 0.0;  // |B(p,q)-B(q,p)|
    double aPeriodResidual = 0.0;   // |oint_a B(.,q)|
    cplx lhs, rhs;                  // dB/dz vs residue formula
    double relResidual = 0.0;
    bool pass = false;
};

/// Rauch variational formula at a sampled pair (p, q):
///   dB(p,q)/dz at fixed (x(p), x(q))  ==  -sum_alpha Res_r [ omega(r) B(r,p) B(r,q) / (du dv) ].
inline RauchReport rauchCheck(const FamilyFrame& f, cplx xp, cplx xq, double tol = 1e-5) {
    RauchReport rep;
    TorusKernel K0(f.base, f.basePeriods);
    const QuarticCurve& c = f.base;
    const PeriodData& pd = f.basePeriods;

    double minsep = c.minRootSeparation();
    for (int a = 0; a < 4; ++a) {
        if (std::abs(xp - c.b[size_t(a)]) < 0.15 * minsep ||
            std::abs(xq - c.b[size_t(a)]) < 0.15 * minsep)
            throw InputError("sampled points too close to ramification (guard radius)");
    }

    rep.symmetryResidual = std::abs(K0.bergman(xp, xq) - K0.bergman(xq, xp));
    rep.aPeriodResidual = K0.aPeriodOfBergman(xq);

    // lhs: finite differences of the kernel value at fixed x across the family
    double h = 1e-3 * c.scale;
    auto bAt = [&](double t) {
        QuarticCurve ct = f.curveAt(t);
        PeriodData pt = f.periodsAt(t);
        TorusKernel Kt(ct, pt);
        return Kt.bergman(xp, xq);
    };
    cplx bp2 = bAt(2 * h), bp1 = bAt(h), bm1 = bAt(-h), bm2 = bAt(-2 * h);
    cplx dBdt = (-bp2 + 8.0 * bp1 - 8.0 * bm1 + bm2) / (12.0 * h);
    rep.lhs = dBdt / dzdt(pd);

    // rhs: residue formula with all ingredients on the base curve
    cplx zp = K0.abelOfX(xp), zq = K0.abelOfX(xq);
    cplx acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double eps = 0.1 * minsep;
        acc += circleResidue(
            [&](cplx t) {
                cplx x = c.xOfLocal(a, t);
                cplx qp = c.qprime(x);
                cplx zr = K0.abelNearBranch(a, t);
                cplx bpv = (K0.P0(zr - zp) + K0.bergmanConstant()) * (2.0 / (pd.A * qp)) *
                           (1.0 / (pd.A * c.y(xp)));
                cplx bqv = (K0.P0(zr - zq) + K0.bergmanConstant()) * (2.0 / (pd.A * qp)) *
                           (1.0 / (pd.A * c.y(xq)));
                return bpv * bqv / (pd.A * t);
            },
            0.0, eps, 1e-10);
    }
    rep.rhs = -acc;
    rep.relResidual = std::abs(rep.lhs - rep.rhs) / std::max(1e-30, std::abs(rep.rhs));
    rep.pass = rep.relResidual <= tol && rep.symmetryResidual < 1e-10 && rep.aPeriodResidual < 1e-8;
    return rep;
}

}  // namespace specrec::elliptic
