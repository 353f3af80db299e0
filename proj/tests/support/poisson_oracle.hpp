#pragma once

// Test-only oracle: a tiny polynomial algebra in the variables {x^m, y_m}
// with the bracket {y_j, x^i} = delta, used to verify the constraint checker
// against a literal expansion of {H_i, H_j} - g_{ij}^k H_k.

#include <map>
#include <vector>

#include "specrec/airy_structure.hpp"
#include "specrec/rational.hpp"

namespace poisson_oracle {

using specrec::AiryTensors;
using specrec::Mode;
using specrec::Rat;

// variable: (mode, isY); monomial: sorted vector of variables
using Var = std::pair<Mode, bool>;
using Monomial = std::vector<Var>;
using XYPoly = std::map<Monomial, Rat>;

inline void add(XYPoly& p, Monomial m, const Rat& v) {
    if (v == 0) return;
    std::sort(m.begin(), m.end());
    p[m] += v;
    if (p[m] == 0) p.erase(m);
}

inline XYPoly mul(const XYPoly& a, const XYPoly& b) {
    XYPoly r;
    for (const auto& [ma, va] : a)
        for (const auto& [mb, vb] : b) {
            Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            add(r, std::move(m), va * vb);
        }
    return r;
}

inline XYPoly derivative(const XYPoly& p, const Var& v) {
    XYPoly r;
    for (const auto& [m, c] : p) {
        long mult = static_cast<long>(std::count(m.begin(), m.end(), v));
        if (mult == 0) continue;
        Monomial mm = m;
        mm.erase(std::find(mm.begin(), mm.end(), v));
        add(r, std::move(mm), c * Rat(mult));
    }
    return r;
}

/// {f, g} = sum_m (df/dy_m dg/dx^m - df/dx^m dg/dy_m)
inline XYPoly bracket(const XYPoly& f, const XYPoly& g, const std::vector<Mode>& modes) {
    XYPoly r;
    for (Mode m : modes) {
        Var x{m, false}, y{m, true};
        for (const auto& [mm, c] : mul(derivative(f, y), derivative(g, x))) add(r, mm, c);
        for (const auto& [mm, c] : mul(derivative(f, x), derivative(g, y))) add(r, mm, -c);
    }
    return r;
}

/// H_i = -y_i + a_{ijk} x^j x^k + 2 b_{ij}^k x^j y_k + c_i^{jk} y_j y_k.
inline XYPoly hamiltonian(const AiryTensors& T, Mode i) {
    XYPoly h;
    add(h, {{i, true}}, Rat(-1));
    for (Mode j : T.modes)
        for (Mode k : T.modes) {
            Rat a = T.a(i, j, k);
            if (a != 0) add(h, {{j, false}, {k, false}}, a);
            Rat b = T.b(i, j, k);
            if (b != 0) add(h, {{j, false}, {k, true}}, Rat(2) * b);
            Rat c = T.c(i, j, k);
            if (c != 0) add(h, {{j, true}, {k, true}}, c);
        }
    return h;
}

/// {H_i, H_j} - g_{ij}^k H_k, expanded literally.
inline XYPoly closureResidual(const AiryTensors& T, Mode i, Mode j) {
    XYPoly r = bracket(hamiltonian(T, i), hamiltonian(T, j), T.modes);
    for (Mode k : T.modes) {
        Rat g = T.g(i, j, k);
        if (g == 0) continue;
        for (const auto& [m, c] : hamiltonian(T, k)) add(r, m, -g * c);
    }
    return r;
}

}  // namespace poisson_oracle
