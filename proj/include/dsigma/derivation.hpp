#pragma once

#include "dsigma/element.hpp"

#include <stdexcept>
#include <vector>

namespace dsigma {

// A graded derivation of the algebra over a context, given by its action on
// each base coordinate and each generator, plus its bidegree shift.
// Extension to the whole algebra is by the left Leibniz rule
//   D(ab) = D(a) b + (-1)^{|D||a|} a D(b).
struct Derivation {
    Ctx ctx;
    int dghost = 0;
    int dform = 0;
    std::vector<GradedElement> coord_img;
    std::vector<GradedElement> gen_img;

    Derivation() = default;
    Derivation(Ctx c, int dg, int df)
        : ctx(std::move(c)), dghost(dg), dform(df),
          coord_img(ctx->ncoords(), GradedElement(ctx)),
          gen_img(ctx->ngens(), GradedElement(ctx)) {}

    int parity() const { return (dghost + dform) & 1; }
    int degree() const { return dghost + dform; }

    bool is_zero() const {
        for (const auto& e : coord_img)
            if (!e.is_zero()) return false;
        for (const auto& e : gen_img)
            if (!e.is_zero()) return false;
        return true;
    }

    // A graded derivation must shift parity uniformly, otherwise the Leibniz
    // extension is not well defined.
    bool parity_consistent() const {
        auto ok = [&](const GradedElement& img, int src_parity) {
            for (const auto& [m, c] : img.terms())
                if (GradedElement::mono_parity(ctx, m) != ((src_parity + parity()) & 1))
                    return false;
            return true;
        };
        for (int i = 0; i < ctx->ncoords(); ++i)
            if (!ok(coord_img[i], 0)) return false;
        for (int g = 0; g < ctx->ngens(); ++g)
            if (!ok(gen_img[g], ctx->gen(g).parity())) return false;
        return true;
    }

    // Left Leibniz extension.  For the instance of generator g at a given
    // position, the contribution is
    //   (-1)^{|D||prefix|} coef * prefix * D(g) * suffix
    //     = (-1)^{|D||prefix| + |w||suffix|} coef * (mono minus instance) * w
    // per homogeneous image term w, and the remaining product is a single
    // Koszul merge.
    GradedElement apply(const GradedElement& e) const {
        if (!same_ctx(ctx, e.ctx()))
            throw std::logic_error("derivation context mismatch");
        const int nsc = e.nscalars();
        GradedElement out(ctx, nsc);
        const int ng = ctx->ngens();
        GenMono merged;
        for (const auto& [m, c] : e.terms()) {
            // Coefficient part: D(c) * mono (coefficients are even).
            for (int i = 0; i < ctx->ncoords(); ++i) {
                if (coord_img[i].is_zero()) continue;
                ScalarExpr dc = c.derivative(i);
                if (dc.is_zero()) continue;
                for (const auto& [wm, wc] : coord_img[i].terms()) {
                    auto s = GradedElement::merge_sign(ctx, wm, m, merged);
                    if (!s) continue;
                    ScalarExpr k = dc * (wc.nvars() == nsc ? wc : wc.extended(nsc));
                    out.add_term(merged, *s < 0 ? -k : k);
                }
            }
            const int mono_par = GradedElement::mono_parity(ctx, m);
            int prefix_par = 0;
            for (int g = 0; g < ng; ++g) {
                const int gp = ctx->gen(g).parity();
                for (unsigned inst = 0; inst < m[g]; ++inst) {
                    if (!gen_img[g].is_zero()) {
                        GenMono rest = m;
                        rest[g] -= 1;
                        const int suffix_par = (mono_par - prefix_par - gp) & 1;
                        for (const auto& [wm, wc] : gen_img[g].terms()) {
                            const int wp = GradedElement::mono_parity(ctx, wm);
                            auto s = GradedElement::merge_sign(ctx, rest, wm, merged);
                            if (!s) continue;
                            int sign = *s;
                            if ((parity() & prefix_par) ^ (wp & suffix_par))
                                sign = -sign;
                            ScalarExpr k = c * (wc.nvars() == nsc ? wc : wc.extended(nsc));
                            out.add_term(merged, sign < 0 ? -k : k);
                        }
                    }
                    prefix_par = (prefix_par + gp) & 1;
                }
            }
        }
        return out;
    }
};

inline Derivation operator+(const Derivation& a, const Derivation& b) {
    if (!same_ctx(a.ctx, b.ctx) || a.dghost != b.dghost || a.dform != b.dform)
        throw std::logic_error("derivation sum degree/context mismatch");
    Derivation r = a;
    for (size_t i = 0; i < r.coord_img.size(); ++i)
        r.coord_img[i] += b.coord_img[i];
    for (size_t g = 0; g < r.gen_img.size(); ++g)
        r.gen_img[g] += b.gen_img[g];
    return r;
}

// Graded commutator [X,Y] = XY - (-1)^{|X||Y|} YX, itself a derivation.
inline Derivation graded_commutator(const Derivation& X, const Derivation& Y) {
    if (!same_ctx(X.ctx, Y.ctx))
        throw std::logic_error("commutator context mismatch");
    Derivation r(X.ctx, X.dghost + Y.dghost, X.dform + Y.dform);
    const int sign = (X.parity() && Y.parity()) ? -1 : 1;
    for (int i = 0; i < X.ctx->ncoords(); ++i) {
        GradedElement t = X.apply(Y.coord_img[i]) - Y.apply(X.coord_img[i]).scaled(Rat(sign));
        r.coord_img[i] = t;
    }
    for (int g = 0; g < X.ctx->ngens(); ++g) {
        GradedElement t = X.apply(Y.gen_img[g]) - Y.apply(X.gen_img[g]).scaled(Rat(sign));
        r.gen_img[g] = t;
    }
    return r;
}

// The de Rham vector field on a context with full differential structure.
inline Derivation exterior_d_op(const Ctx& ctx) {
    Derivation d(ctx, 0, 1);
    for (int i = 0; i < ctx->ncoords(); ++i) {
        int g = ctx->coord_d(i);
        if (g < 0)
            throw std::invalid_argument("context lacks differential of coordinate " + ctx->coord(i));
        d.coord_img[i] = GradedElement::generator(ctx, g);
    }
    for (int g = 0; g < ctx->ngens(); ++g) {
        int img = ctx->gen_d(g);
        if (img == GradedContext::kNoDifferential)
            throw std::invalid_argument("context lacks differential of generator " + ctx->gen(g).name);
        if (img >= 0)
            d.gen_img[g] = GradedElement::generator(ctx, img);
    }
    return d;
}

}  // namespace dsigma
