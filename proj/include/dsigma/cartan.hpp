#pragma once

#include "dsigma/derivation.hpp"

#include <stdexcept>
#include <vector>

namespace dsigma {

// Ordinary vector field v = v^i d/dx^i with polynomial components.
struct VectorField {
    std::vector<ScalarExpr> comp;

    VectorField() = default;
    explicit VectorField(int n, int nvars) : comp(n, ScalarExpr(nvars)) {}

    int dim() const { return (int)comp.size(); }
    bool is_zero() const {
        for (const auto& c : comp)
            if (!c.is_zero()) return false;
        return true;
    }
    VectorField& operator+=(const VectorField& o) {
        for (size_t i = 0; i < comp.size(); ++i) comp[i] += o.comp[i];
        return *this;
    }
    VectorField operator-() const {
        VectorField r = *this;
        for (auto& c : r.comp) c = -c;
        return r;
    }
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a += -b; }
    bool operator==(const VectorField& o) const { return comp == o.comp; }
};

// Symmetric 2-tensor g_ij with polynomial components.
struct SymTensor2 {
    std::vector<std::vector<ScalarExpr>> g;

    SymTensor2() = default;
    SymTensor2(int n, int nvars) : g(n, std::vector<ScalarExpr>(n, ScalarExpr(nvars))) {}
    static SymTensor2 identity(int n, int nvars) {
        SymTensor2 t(n, nvars);
        for (int i = 0; i < n; ++i)
            t.g[i][i] = ScalarExpr::constant(nvars, 1);
        return t;
    }
    int dim() const { return (int)g.size(); }
    bool is_zero() const {
        for (const auto& row : g)
            for (const auto& c : row)
                if (!c.is_zero()) return false;
        return true;
    }
    void validate() const {
        for (int i = 0; i < dim(); ++i)
            for (int j = i + 1; j < dim(); ++j)
                if (g[i][j] != g[j][i])
                    throw std::invalid_argument("tensor is not symmetric");
    }
};

inline GradedElement exterior_d(const GradedElement& e) {
    return exterior_d_op(e.ctx()).apply(e);
}

// iota_v as a derivation of form degree -1: it kills coordinates and all
// generators except the coordinate differentials, which it maps to v^i.
inline Derivation interior_op(const Ctx& ctx, const VectorField& v) {
    if (v.dim() != ctx->ncoords())
        throw std::invalid_argument("vector field dimension mismatch");
    Derivation io(ctx, 0, -1);
    for (int i = 0; i < ctx->ncoords(); ++i) {
        int g = ctx->coord_d(i);
        if (g < 0)
            throw std::invalid_argument("context lacks differential of coordinate " + ctx->coord(i));
        io.gen_img[g] = GradedElement::scalar(ctx, v.comp[i]);
    }
    return io;
}

inline GradedElement interior(const VectorField& v, const GradedElement& e) {
    return interior_op(e.ctx(), v).apply(e);
}

// Cartan's magic formula: L_v = d iota_v + iota_v d.
inline GradedElement lie(const VectorField& v, const GradedElement& e) {
    const auto d = exterior_d_op(e.ctx());
    const auto io = interior_op(e.ctx(), v);
    return d.apply(io.apply(e)) + io.apply(d.apply(e));
}

// (L_v g)_ij = v^k d_k g_ij + g_kj d_i v^k + g_ik d_j v^k.
inline SymTensor2 lie_sym2(const VectorField& v, const SymTensor2& t) {
    const int n = t.dim();
    if (v.dim() != n)
        throw std::invalid_argument("dimension mismatch");
    const int nv = v.comp.empty() ? 0 : v.comp[0].nvars();
    SymTensor2 r(n, nv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ScalarExpr s(nv);
            for (int k = 0; k < n; ++k) {
                s += v.comp[k] * t.g[i][j].derivative(k);
                s += t.g[k][j] * v.comp[k].derivative(i);
                s += t.g[i][k] * v.comp[k].derivative(j);
            }
            r.g[i][j] = s;
        }
    return r;
}

// One stage of a number-operator-scaled contracting homotopy: sum over terms
// of s(term)/N(term) where N counts the given coordinate/generator degrees.
// Terms with N = 0 are dropped (they belong to a later stage).
inline GradedElement homotopy_stage(const GradedElement& e, const Derivation& s,
                                    const std::vector<bool>& count_coord,
                                    const std::vector<bool>& count_gen) {
    GradedElement out(e.ctx(), e.nscalars());
    const Ctx& ctx = e.ctx();
    for (const auto& [m, c] : e.terms()) {
        long ng = 0;
        for (int g = 0; g < ctx->ngens(); ++g)
            if (count_gen[g]) ng += m[g];
        // Coefficient monomials can differ in counted degree; split per monomial.
        for (const auto& [exp, k] : c.terms()) {
            long n = ng;
            for (int i = 0; i < ctx->ncoords(); ++i)
                if (count_coord[i]) n += exp[i];
            if (n == 0) continue;
            GradedElement one(ctx, e.nscalars());
            one.set_term(m, ScalarExpr::monomial(c.nvars(), exp, k));
            out += s.apply(one).scaled(Rat(1, n));
        }
    }
    return out;
}

// Poincare-lemma homotopy on polynomial forms over R^n (star-shaped about 0):
// K(x^b dx^I) = x^{i_k}-contractions scaled by 1/(|b| + p).  Satisfies
// d K + K d = id on forms of positive degree.
inline GradedElement homotopy_K(const GradedElement& e, int p) {
    if (p < 1)
        throw std::invalid_argument("homotopy operator requires form degree >= 1");
    if (!e.is_form_degree(p))
        throw std::invalid_argument("element is not a homogeneous form of the stated degree");
    const Ctx& ctx = e.ctx();
    Derivation s(ctx, 0, -1);
    for (int i = 0; i < ctx->ncoords(); ++i) {
        int g = ctx->coord_d(i);
        if (g < 0)
            throw std::invalid_argument("context lacks differential of coordinate " + ctx->coord(i));
        s.gen_img[g] = GradedElement::coordinate(ctx, i);
    }
    std::vector<bool> cc(ctx->ncoords(), true), cg(ctx->ngens(), false);
    for (int i = 0; i < ctx->ncoords(); ++i)
        cg[ctx->coord_d(i)] = true;
    return homotopy_stage(e, s, cc, cg);
}

}  // namespace dsigma
