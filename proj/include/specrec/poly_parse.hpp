#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "specrec/errors.hpp"
#include "specrec/rational.hpp"

namespace specrec {

/// Parses a univariate polynomial like "x^4 - 5x^2 + 4" or "3/2*x - 1" with
/// exact rational coefficients; returns c with c[k] the coefficient of x^k.
inline std::vector<Rat> parsePolynomial(const std::string& text) {
    std::vector<Rat> coeffs;
    auto bump = [&](long exp, const Rat& v) {
        if (exp >= static_cast<long>(coeffs.size())) coeffs.resize(static_cast<size_t>(exp) + 1, Rat(0));
        coeffs[static_cast<size_t>(exp)] += v;
    };
    size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto parseInt = [&]() -> Int {
        size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw InputError("polynomial parse error: expected digits at position " +
                                         std::to_string(start) + " in '" + text + "'");
        return Int(text.substr(start, i - start));
    };
    skip();
    bool first = true;
    while (i < text.size()) {
        skip();
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip();
        } else if (!first) {
            throw InputError("polynomial parse error: expected '+' or '-' at position " +
                             std::to_string(i) + " in '" + text + "'");
        }
        first = false;
        Rat coeff(1);
        bool haveCoeff = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            Int num = parseInt();
            Int den = 1;
            skip();
            if (i < text.size() && text[i] == '/') {
                ++i;
                skip();
                den = parseInt();
                if (den == 0) throw InputError("polynomial parse error: zero denominator");
            }
            coeff = Rat(num, den);
            haveCoeff = true;
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip();
            }
        }
        long exp = 0;
        if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) {
            ++i;
            exp = 1;
            skip();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip();
                exp = static_cast<long>(parseInt().convert_to<long long>());
            }
        } else if (!haveCoeff) {
            throw InputError("polynomial parse error: expected a term at position " +
                             std::to_string(i) + " in '" + text + "'");
        }
        bump(exp, sign * coeff);
        skip();
    }
    if (coeffs.empty()) throw InputError("polynomial parse error: empty polynomial");
    return coeffs;
}

}  // namespace specrec
