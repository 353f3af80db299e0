#pragma once

#include <sstream>
#include <string>

#include "specrec/recursion.hpp"

namespace specrec {

struct InvariantReport {
    bool pass = true;
    long checks = 0;
    std::string firstFailure;

    void fail(const std::string& what) {
        if (pass) {
            pass = false;
            firstFailure = what;
        }
    }
    std::string summary() const {
        std::ostringstream os;
        os << (pass ? "pass" : "FAIL") << " (" << checks << " invariant checks)";
        if (!pass) os << "; first: " << firstFailure;
        return os.str();
    }
};

/// Structural invariant suite over a computed table: odd parity of every
/// label (skew-invariant principal parts), pole bound, zero residues of every
/// slot expansion at every chart, and the dilaton equation for every (h,n)
/// with 2h-2+n+1 <= chiMax.  Slot symmetry is asserted inside the recursion
/// itself.
inline InvariantReport verifyCorrelatorInvariants(const LocalSpectralCurve& curve,
                                                  const CorrelatorTable& table) {
    InvariantReport rep;
    for (const auto& [hn, tensor] : table.all()) {
        long h = hn.first, n = hn.second;
        long K = CorrelatorTable::poleBound(h, n);
        for (const auto& [idx, v] : tensor) {
            (void)v;
            for (const auto& l : idx) {
                ++rep.checks;
                if (l.k % 2 == 0)
                    rep.fail("even pole label in omega_{" + std::to_string(h) + "," +
                             std::to_string(n) + "} (principal part not skew-invariant)");
                if (l.k > K)
                    rep.fail("pole bound exceeded in omega_{" + std::to_string(h) + "," +
                             std::to_string(n) + "}");
            }
        }
        // zero residues of every slot expansion
        for (const auto& pc : curve.points()) {
            detail::SlotExpansion T = detail::expandSlot(curve, table, h, n, pc.label);
            for (const auto& [rest, s] : T.parts) {
                (void)rest;
                ++rep.checks;
                if (s.coeffKnown(0) && s.coeff(0) != 0)
                    rep.fail("nonzero residue in a slot expansion of omega_{" + std::to_string(h) +
                             "," + std::to_string(n) + "}");
            }
        }
    }
    for (const auto& [hn, tensor] : table.all()) {
        (void)tensor;
        long h = hn.first, n = hn.second;
        if (n >= 1 && table.has(h, n + 1)) {
            ++rep.checks;
            if (!dilatonCheck(curve, table, h, n))
                rep.fail("dilaton equation failed at (h,n)=(" + std::to_string(h) + "," +
                         std::to_string(n) + ")");
        }
    }
    return rep;
}

}  // namespace specrec
