#pragma once

#include "dsigma/equivariant.hpp"

#include <random>
#include <string>
#include <vector>

namespace dsigma {

// Generator images of the twisted pullback f*: on generators the operator
// conjugation exp(i_Q) (f_0)* exp(-i_Q) reduces to
//   f*(x) = X, f*(eta) = A, f*(dq) = d(f*(q)) - f*(Q^q),
// which is what gets built here; chain_map_check certifies the reduction.
inline std::vector<GradedElement> pullback_images(const AlgebroidData& E, const Ctx& ws) {
    Ctx lifted = t1e1_context(E);
    const int n = E.dim();
    const int r = E.rank;
    std::vector<GradedElement> naive(lifted->ngens(), GradedElement(ws));
    for (int i = 0; i < n; ++i)
        naive[i] = GradedElement::generator(ws, "dX" + std::to_string(i + 1));
    for (int a = 0; a < r; ++a) {
        naive[n + a] = GradedElement::generator(ws, "A" + std::to_string(a + 1));
        naive[n + r + a] = GradedElement::generator(ws, "dA" + std::to_string(a + 1));
    }
    std::vector<GradedElement> img = naive;
    for (int i = 0; i < n; ++i)
        img[i] -= detail::q_on_coord(E, lifted, i).mapped(ws, naive);
    for (int a = 0; a < r; ++a)
        img[n + r + a] -= detail::q_on_eta(E, lifted, a).mapped(ws, naive);
    return img;
}

inline GradedElement pullback_f(const GradedElement& F, const AlgebroidData& E, const Ctx& ws) {
    return F.mapped(ws, pullback_images(E, ws));
}

// The untwisted image used for the Wess-Zumino bulk term: x -> X, theta -> dX.
inline GradedElement bulk_image(const GradedElement& H, const AlgebroidData& E, const Ctx& ws) {
    Ctx lifted = t1e1_context(E);
    const int n = E.dim();
    const int r = E.rank;
    std::vector<GradedElement> naive(lifted->ngens(), GradedElement(ws));
    for (int i = 0; i < n; ++i)
        naive[i] = GradedElement::generator(ws, "dX" + std::to_string(i + 1));
    for (int a = 0; a < r; ++a) {
        naive[n + a] = GradedElement::generator(ws, "A" + std::to_string(a + 1));
        naive[n + r + a] = GradedElement::generator(ws, "dA" + std::to_string(a + 1));
    }
    return embed_form(H, lifted).mapped(ws, naive);
}

// d o f* = f* o Qtilde, on every generator and on random superfunctions of
// total degree <= 3.
inline bool chain_map_check(const AlgebroidData& E, int samples, uint64_t seed,
                            std::string* witness = nullptr) {
    Ctx lifted = t1e1_context(E);
    Ctx ws = worldsheet_ctx(E.dim(), E.rank);
    const auto img = pullback_images(E, ws);
    Derivation Qt = lift_Qtilde(E);
    Derivation dws = exterior_d_op(ws);
    auto check = [&](const GradedElement& F, const std::string& label) {
        GradedElement lhs = dws.apply(F.mapped(ws, img));
        GradedElement rhs = Qt.apply(F).mapped(ws, img);
        if (lhs != rhs) {
            if (witness) *witness = "chain map fails on " + label;
            return false;
        }
        return true;
    };
    for (int g = 0; g < lifted->ngens(); ++g)
        if (!check(GradedElement::generator(lifted, g), lifted->gen(g).name))
            return false;
    for (int i = 0; i < lifted->ncoords(); ++i)
        if (!check(GradedElement::coordinate(lifted, i), lifted->coord(i)))
            return false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3), pick(0, 3);
    const auto slots = ansatz_slots(lifted, E.dim(), E.rank, {true, true, true, true, true});
    for (int s = 0; s < samples; ++s) {
        GradedElement F(lifted);
        for (const auto& slot : slots) {
            if (pick(rng) != 0) continue;
            ScalarExpr c(E.dim());
            ScalarExpr::Exps e(E.dim(), 0);
            e[(unsigned)pick(rng) % E.dim()] = (unsigned)pick(rng) % 3;
            c += ScalarExpr::monomial(E.dim(), e, Rat(num(rng), den(rng)));
            if (c.is_zero()) continue;
            GradedElement t(lifted);
            t.set_term(slot, c);
            F += t;
        }
        if (!check(F, "random superfunction #" + std::to_string(s)))
            return false;
    }
    return true;
}

// Boundary 2-form plus bulk WZ 3-form; d(boundary) + (bulk - image3) = 0.
struct ActionExpression {
    GradedElement boundary;
    GradedElement bulk;
};

// Split f*(Htilde) as d(boundary) + X*H.  The contracting homotopy treats
// the gauge-field pairs (A, dA) first, then the scalar pairs (X, dX).
inline ActionExpression localize_boundary(const GradedElement& omega3, const GradedElement& bulk) {
    const Ctx& ws = omega3.ctx();
    GradedElement F = omega3 - bulk;
    if (!exterior_d(F).is_zero())
        throw std::invalid_argument("boundary localization: remainder is not closed");

    const int n = ws->ncoords();
    std::vector<bool> is_A(ws->ngens(), false), is_dA(ws->ngens(), false), is_dX(ws->ngens(), false);
    for (int g = 0; g < ws->ngens(); ++g) {
        const std::string& name = ws->gen(g).name;
        if (name.rfind("dA", 0) == 0) is_dA[g] = true;
        else if (name.rfind("A", 0) == 0) is_A[g] = true;
        else if (name.rfind("dX", 0) == 0) is_dX[g] = true;
    }
    Derivation sA(ws, 0, -1);
    for (int g = 0; g < ws->ngens(); ++g)
        if (is_dA[g]) {
            std::string aname = "A" + ws->gen(g).name.substr(2);
            sA.gen_img[g] = GradedElement::generator(ws, aname);
        }
    std::vector<bool> countA(ws->ngens(), false);
    for (int g = 0; g < ws->ngens(); ++g) countA[g] = is_A[g] || is_dA[g];
    GradedElement B = homotopy_stage(F, sA, std::vector<bool>(n, false), countA);

    // A-free remainder, handled by the scalar-pair stage
    GradedElement rest(ws, F.nscalars());
    for (const auto& [m, c] : F.terms()) {
        bool afree = true;
        for (int g = 0; g < ws->ngens(); ++g)
            if (countA[g] && m[g]) afree = false;
        if (afree) rest.set_term(m, c);
    }
    if (!rest.is_zero()) {
        Derivation sX(ws, 0, -1);
        for (int i = 0; i < n; ++i)
            sX.gen_img[ws->coord_d(i)] = GradedElement::coordinate(ws, i);
        B += homotopy_stage(rest, sX, std::vector<bool>(n, true), is_dX);
    }
    if (exterior_d(B) != F)
        throw std::logic_error("boundary localization: homotopy failed to invert d");
    return {B, bulk};
}

// Worldsheet algebra for the Dirac sigma model fields: TM-valued gauge
// 1-forms cA^i alongside dX^i.
inline Ctx dsm_ctx(int n) {
    std::vector<std::string> coords;
    for (int i = 1; i <= n; ++i) coords.push_back("X" + std::to_string(i));
    std::vector<Generator> gens;
    for (int i = 1; i <= n; ++i) gens.push_back({"cA" + std::to_string(i), 0, 1});
    for (int i = 1; i <= n; ++i) gens.push_back({"dX" + std::to_string(i), 0, 1});
    auto ctx = std::make_shared<GradedContext>(coords, gens);
    for (int i = 0; i < n; ++i) ctx->set_coord_d(i, n + i);
    for (int g = 0; g < ctx->ngens(); ++g)
        ctx->set_gen_d(g, GradedContext::kNoDifferential);
    return ctx;
}

struct DsmForms {
    // numerators over q (metric form) and q^2 (top form)
    GradedElement metric_num;
    GradedElement top_num;
    ScalarExpr q;
    bool equal = false;           // q * metric_num == top_num
    bool collapsed_equal = false;  // same check under A = g(cA - O cA)
};

// Emits the two renderings of the topological DSM integrand and verifies
// they agree identically:
//   g((id+O) cA ^, dX) + g(cA ^, O cA)      and
//   A_i ^ dX^i - (1/2) A_i ^ V^i,   A = g((id+O) cA, .), V = (id-O) cA.
inline DsmForms dsm_assemble(const OOperator& O, bool check_other_convention = true) {
    const int n = O.dim();
    Ctx ws = dsm_ctx(n);
    auto cA = [&](int i) { return GradedElement::generator(ws, "cA" + std::to_string(i + 1)); };
    auto dX = [&](int i) { return GradedElement::generator(ws, "dX" + std::to_string(i + 1)); };

    const int nv = O.q.nvars();
    PolyMat plus = PolyMat::identity(n, nv).scaled(O.q) + O.P;   // q(id + O)
    PolyMat minus = PolyMat::identity(n, nv).scaled(O.q) - O.P;  // q(id - O)

    auto lin = [&](const PolyMat& m, int i) {
        // (m cA)^i as a worldsheet one-form
        GradedElement e(ws);
        for (int j = 0; j < n; ++j)
            if (!m(i, j).is_zero()) e += cA(j).scaled(m(i, j));
        return e;
    };

    DsmForms out;
    out.q = O.q;
    GradedElement metric(ws);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (O.g(i, j).is_zero()) continue;
            metric += (lin(plus, i) * dX(j)).scaled(O.g(i, j));
            metric += (cA(i) * lin(O.P, j)).scaled(O.g(i, j));
        }
    out.metric_num = metric;

    auto top_with = [&](const PolyMat& lower) {
        // q * A_i ^ dX^i - 1/2 A_i ^ V^i with A = g (lower cA), V = minus cA
        GradedElement t(ws);
        for (int i = 0; i < n; ++i) {
            GradedElement Ai(ws);
            for (int j = 0; j < n; ++j) {
                if (O.g(i, j).is_zero()) continue;
                Ai += lin(lower, j).scaled(O.g(i, j));
            }
            t += (Ai * dX(i)).scaled(O.q);
            t -= (Ai * lin(minus, i)).scaled(Rat(1, 2));
        }
        return t;
    };
    out.top_num = top_with(plus);
    out.equal = (out.metric_num.scaled(O.q) - out.top_num).is_zero();
    if (check_other_convention) {
        GradedElement other = top_with(minus);
        out.collapsed_equal = (out.metric_num.scaled(O.q) - other).is_zero();
    }
    return out;
}

// Graph-of-Pi specialization in the independent A_i variables:
// A_i ^ dX^i - (1/2) A_i ^ V^i with V^i = Pi^{ji}(X) A_j.
inline GradedElement dsm_top_graph(const Bivector& P, const Ctx& ws) {
    const int n = P.dim();
    GradedElement t(ws);
    auto A = [&](int i) { return GradedElement::generator(ws, "A" + std::to_string(i + 1)); };
    auto dX = [&](int i) { return GradedElement::generator(ws, "dX" + std::to_string(i + 1)); };
    for (int i = 0; i < n; ++i) {
        t += A(i) * dX(i);
        GradedElement Vi(ws);
        for (int j = 0; j < n; ++j)
            if (!P.pi(j, i).is_zero()) Vi += A(j).scaled(P.pi(j, i));
        t -= (A(i) * Vi).scaled(Rat(1, 2));
    }
    return t;
}

}  // namespace dsigma
