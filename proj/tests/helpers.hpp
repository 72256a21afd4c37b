#pragma once

#include "dsigma/cartan.hpp"
#include "dsigma/gengeo.hpp"

#include <random>

namespace tests {

using namespace dsigma;

inline Rat rrat(std::mt19937_64& rng, int lim = 5, int denmax = 3) {
    std::uniform_int_distribution<int> num(-lim, lim), den(1, denmax);
    return Rat(num(rng), den(rng));
}

inline ScalarExpr rpoly(std::mt19937_64& rng, int nvars, int maxdeg, int nterms = 3) {
    ScalarExpr p(nvars);
    std::uniform_int_distribution<int> deg(0, maxdeg), var(0, nvars - 1);
    for (int t = 0; t < nterms; ++t) {
        ScalarExpr::Exps e(nvars, 0);
        int d = deg(rng);
        for (int k = 0; k < d; ++k) e[var(rng)] += 1;
        p += ScalarExpr::monomial(nvars, e, rrat(rng));
    }
    return p;
}

// Random element with terms drawn from all generator monomials of degree <= 3.
inline GradedElement relement(std::mt19937_64& rng, const Ctx& ctx, int max_total_deg = 3,
                              int maxdeg_coef = 2) {
    std::vector<GenMono> monos;
    const int ng = ctx->ngens();
    std::function<void(GenMono&, int, int)> rec = [&](GenMono& m, int g, int deg) {
        monos.push_back(m);
        for (int h = g; h < ng; ++h) {
            int d = ctx->gen(h).degree();
            if (deg + d > max_total_deg) continue;
            if (ctx->gen(h).parity() == 1 && m[h] >= 1) continue;
            m[h] += 1;
            rec(m, h, deg + d);
            m[h] -= 1;
        }
    };
    GenMono m(ng, 0);
    rec(m, 0, 0);
    GradedElement e(ctx);
    std::uniform_int_distribution<int> pick(0, (int)monos.size() - 1);
    for (int t = 0; t < 4; ++t) {
        GradedElement term(ctx);
        term.set_term(monos[pick(rng)], rpoly(rng, ctx->ncoords(), maxdeg_coef, 2));
        e += term;
    }
    return e;
}

inline VectorField rvector(std::mt19937_64& rng, int n, int maxdeg = 2) {
    VectorField v(n, n);
    for (int i = 0; i < n; ++i) v.comp[i] = rpoly(rng, n, maxdeg, 2);
    return v;
}

// Random constant special-orthogonal matrix via the Cayley transform of a
// random rational antisymmetric matrix.
inline PolyMat cayley_orthogonal(std::mt19937_64& rng, int n, int nvars) {
    PolyMat S(n, n, nvars);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            ScalarExpr v = ScalarExpr::constant(nvars, rrat(rng, 3, 3));
            S(i, j) = v;
            S(j, i) = -v;
        }
    PolyMat I = PolyMat::identity(n, nvars);
    PolyMat M = I + S;
    ScalarExpr d = det(M);
    PolyMat num = (I - S) * adjugate(M);
    Rat dv = d.constant_value();
    for (auto& row : num.m)
        for (auto& e : row) e = e.scaled(Rat(1) / dv);
    return num;
}

}  // namespace tests
