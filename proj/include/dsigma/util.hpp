#pragma once

#include "dsigma/scalar.hpp"

#include <functional>
#include <vector>

namespace dsigma {

// All exponent vectors with total degree <= maxdeg, graded-lexicographic
// ascending.  This order fixes unknown indexing in every linear solve.
inline std::vector<ScalarExpr::Exps> monomials_upto(int nvars, int maxdeg) {
    std::vector<ScalarExpr::Exps> out;
    for (int d = 0; d <= maxdeg; ++d) {
        ScalarExpr::Exps e(nvars, 0);
        // enumerate compositions of d into nvars parts, lex descending on
        // leftmost-first allocation, which is lex ascending on the vector
        std::function<void(int, int)> rec = [&](int pos, int rest) {
            if (pos == nvars - 1) {
                e[pos] = rest;
                out.push_back(e);
                return;
            }
            for (int k = rest; k >= 0; --k) {
                e[pos] = k;
                rec(pos + 1, rest - k);
            }
            e[pos] = 0;
        };
        if (nvars == 0) {
            if (d == 0) out.push_back(e);
        } else {
            rec(0, d);
        }
    }
    return out;
}

}  // namespace dsigma
