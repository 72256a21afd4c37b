#pragma once

#include "dsigma/gengeo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dsigma {

// Lie algebroid chart data: anchor rho^i_a and structure functions C^c_{ab}
// (antisymmetric in a,b), both polynomial in the base coordinates.
// Acceptance as an algebroid is Q^2 = 0 for the induced charge.
struct AlgebroidData {
    std::vector<std::string> coords;
    int rank = 0;
    PolyMat rho;              // rho(a, i) = rho^i_a
    std::vector<PolyMat> C;   // C[c](a, b) = C^c_{ab}

    int dim() const { return (int)coords.size(); }
    void validate() const {
        for (int c = 0; c < rank; ++c)
            for (int a = 0; a < rank; ++a)
                for (int b = 0; b < rank; ++b)
                    if (!(C[c](a, b) + C[c](b, a)).is_zero())
                        throw std::invalid_argument("structure functions must be antisymmetric");
    }
    VectorField anchor_of_basis(int a) const {
        VectorField v(dim(), dim());
        for (int i = 0; i < dim(); ++i) v.comp[i] = rho(a, i);
        return v;
    }
};

// The induced algebroid of a Dirac frame: anchor = TM-projection, structure
// functions from the Dorfman closure coefficients.
inline AlgebroidData algebroid_from_frame(const DiracFrame& frame,
                                          const std::vector<PolyMat>& C,
                                          const std::vector<std::string>& coords) {
    AlgebroidData E;
    E.coords = coords;
    E.rank = frame.n;
    E.rho = PolyMat(E.rank, E.dim(), E.dim());
    for (int a = 0; a < E.rank; ++a)
        for (int i = 0; i < E.dim(); ++i)
            E.rho(a, i) = frame.secs[a].v.comp[i];
    E.C = C;
    return E;
}

inline Ctx e1_context(const AlgebroidData& E) { return algebroid_ctx(E.coords, E.rank); }
inline Ctx t1e1_context(const AlgebroidData& E) { return lifted_ctx(E.coords, E.rank); }

namespace detail {
// Q(x^i) and Q(eta^c) as elements of the given context (E[1] or T[1]E[1]),
// assuming generators eta1..etar exist there.
inline GradedElement q_on_coord(const AlgebroidData& E, const Ctx& ctx, int i) {
    GradedElement r(ctx);
    for (int a = 0; a < E.rank; ++a) {
        if (E.rho(a, i).is_zero()) continue;
        r += GradedElement::generator(ctx, "eta" + std::to_string(a + 1)).scaled(E.rho(a, i));
    }
    return r;
}
inline GradedElement q_on_eta(const AlgebroidData& E, const Ctx& ctx, int c) {
    GradedElement r(ctx);
    for (int a = 0; a < E.rank; ++a)
        for (int b = a + 1; b < E.rank; ++b) {
            if (E.C[c](a, b).is_zero()) continue;
            r -= GradedElement::term(ctx, E.C[c](a, b),
                                     {"eta" + std::to_string(a + 1), "eta" + std::to_string(b + 1)});
        }
    return r;
}
}  // namespace detail

// Q = eta^a rho^i_a d/dx^i - (1/2) C^c_{ab} eta^a eta^b d/deta^c on E[1].
inline Derivation build_Q(const AlgebroidData& E) {
    E.validate();
    Ctx ctx = e1_context(E);
    Derivation Q(ctx, 1, 0);
    for (int i = 0; i < E.dim(); ++i)
        Q.coord_img[i] = detail::q_on_coord(E, ctx, i);
    for (int c = 0; c < E.rank; ++c)
        Q.gen_img[ctx->gen_index("eta" + std::to_string(c + 1))] = detail::q_on_eta(E, ctx, c);
    return Q;
}

// (1/2)[Q,Q]; vanishes exactly when the algebroid axioms hold.
inline Derivation q_square(const Derivation& Q) {
    Derivation r = graded_commutator(Q, Q);
    for (auto& e : r.coord_img) e = e.scaled(Rat(1, 2));
    for (auto& e : r.gen_img) e = e.scaled(Rat(1, 2));
    return r;
}

// Degree -1 vector field eps = eps^a d/deta^a on E[1].
using SymmetrySection = std::vector<ScalarExpr>;

inline Derivation section_op(const Ctx& e1, const SymmetrySection& eps) {
    Derivation D(e1, -1, 0);
    for (int a = 0; a < (int)eps.size(); ++a)
        D.gen_img[e1->gen_index("eta" + std::to_string(a + 1))] =
            GradedElement::scalar(e1, eps[a]);
    return D;
}

// [eps, eps']_Q = [[eps, Q], eps'].
inline SymmetrySection derived_bracket(const SymmetrySection& eps, const SymmetrySection& eps2,
                                       const Derivation& Q) {
    const Ctx& ctx = Q.ctx;
    Derivation r = graded_commutator(graded_commutator(section_op(ctx, eps), Q),
                                     section_op(ctx, eps2));
    SymmetrySection out;
    for (int a = 0; a < ctx->ngens(); ++a) {
        const GradedElement& img = r.gen_img[a];
        for (const auto& [m, c] : img.terms())
            for (uint8_t e : m)
                if (e != 0)
                    throw std::logic_error("derived bracket image is not a section");
        out.push_back(img.coefficient(GenMono(ctx->ngens(), 0)));
    }
    return out;
}

// Qtilde = exp(i_Q) d exp(-i_Q) = d + [i_Q, d] on T[1]E[1].  Since Q is odd,
// i_Q is even and the conjugation closes after the first bracket:
//   x -> theta + Q^x, eta -> psi + Q^eta,
//   theta -> -d(Q^x), psi -> -d(Q^eta).
inline Derivation lift_Qtilde(const AlgebroidData& E) {
    E.validate();
    Ctx ctx = t1e1_context(E);
    Derivation d = exterior_d_op(ctx);
    Derivation Qt(ctx, 1, 0);
    // total degree +1 but mixes the bidegree; (1,0) tracks the parity
    const int n = E.dim();
    for (int i = 0; i < n; ++i) {
        GradedElement qi = detail::q_on_coord(E, ctx, i);
        Qt.coord_img[i] = GradedElement::generator(ctx, ctx->coord_d(i)) + qi;
    }
    for (int c = 0; c < E.rank; ++c) {
        GradedElement qc = detail::q_on_eta(E, ctx, c);
        int eta = ctx->gen_index("eta" + std::to_string(c + 1));
        int psi = ctx->gen_index("deta" + std::to_string(c + 1));
        Qt.gen_img[eta] = GradedElement::generator(ctx, psi) + qc;
        Qt.gen_img[psi] = -d.apply(qc);
    }
    for (int i = 0; i < n; ++i)
        Qt.gen_img[ctx->coord_d(i)] = -d.apply(detail::q_on_coord(E, ctx, i));
    return Qt;
}

// L_eps = [i_eps, d] on T[1]E[1] (i_eps is even for the odd section field):
// eta -> eps, psi -> -d(eps); zero on x and theta.
inline Derivation lie_section_op(const Ctx& lifted, const SymmetrySection& eps) {
    Derivation D(lifted, -1, 0);
    Derivation d = exterior_d_op(lifted);
    for (int a = 0; a < (int)eps.size(); ++a) {
        GradedElement e = GradedElement::scalar(lifted, eps[a]);
        D.gen_img[lifted->gen_index("eta" + std::to_string(a + 1))] = e;
        D.gen_img[lifted->gen_index("deta" + std::to_string(a + 1))] = -d.apply(e);
    }
    return D;
}

// The pure extension part of an extended symmetry.  The sign of the
// identification gamma <-> vertical field is fixed so that the pointwise
// bracket comes out as [g,g']_rho = -g rho g' + g' rho g; with the Lie-lift
// normalized by L_eps(eta) = +eps this requires psi^a -> -theta^i gamma^a_i.
inline Derivation gamma_op(const Ctx& lifted, const PolyMat& gamma) {
    Derivation D(lifted, -1, 0);
    const int n = lifted->ncoords();
    for (int a = 0; a < gamma.rows(); ++a) {
        GradedElement img(lifted);
        for (int i = 0; i < n; ++i) {
            if (gamma(a, i).is_zero()) continue;
            img -= GradedElement::generator(lifted, lifted->coord_d(i)).scaled(gamma(a, i));
        }
        D.gen_img[lifted->gen_index("deta" + std::to_string(a + 1))] = img;
    }
    return D;
}

// eps-tilde = L_eps + theta gamma d/dpsi.
struct ExtendedSymmetry {
    SymmetrySection eps;  // may be empty (pure gamma)
    PolyMat gamma;        // gamma(a, i) = gamma^a_i; may be 0x0 (pure L_eps)

    static ExtendedSymmetry lie(SymmetrySection e) { return {std::move(e), PolyMat()}; }
    static ExtendedSymmetry extension(PolyMat g) { return {{}, std::move(g)}; }
};

inline Derivation extended_op(const Ctx& lifted, const AlgebroidData& E,
                              const ExtendedSymmetry& s) {
    SymmetrySection eps = s.eps;
    if (eps.empty()) eps.assign(E.rank, ScalarExpr(E.dim()));
    Derivation D = lie_section_op(lifted, eps);
    if (s.gamma.rows() > 0)
        D = D + gamma_op(lifted, s.gamma);
    return D;
}

// [[eps1~, Qtilde], eps2~], reduced back to (eps, gamma) data.  Throws when
// the commutator fails to be of that form (it never should).
inline ExtendedSymmetry extended_bracket(const ExtendedSymmetry& s1, const ExtendedSymmetry& s2,
                                         const AlgebroidData& E) {
    Ctx ctx = t1e1_context(E);
    Derivation Qt = lift_Qtilde(E);
    Derivation r = graded_commutator(
        graded_commutator(extended_op(ctx, E, s1), Qt), extended_op(ctx, E, s2));
    const int n = E.dim();
    for (int i = 0; i < n; ++i) {
        if (!r.coord_img[i].is_zero())
            throw std::logic_error("extended bracket acts on base coordinates");
        if (!r.gen_img[ctx->coord_d(i)].is_zero())
            throw std::logic_error("extended bracket acts on coordinate differentials");
    }
    SymmetrySection eps;
    for (int a = 0; a < E.rank; ++a) {
        const GradedElement& img = r.gen_img[ctx->gen_index("eta" + std::to_string(a + 1))];
        for (const auto& [m, c] : img.terms())
            for (uint8_t e : m)
                if (e != 0)
                    throw std::logic_error("extended bracket eta-image is not scalar");
        eps.push_back(img.coefficient(GenMono(ctx->ngens(), 0)));
    }
    Derivation expected = lie_section_op(ctx, eps);
    PolyMat gamma(E.rank, n, n);
    for (int a = 0; a < E.rank; ++a) {
        int psi = ctx->gen_index("deta" + std::to_string(a + 1));
        GradedElement rest = r.gen_img[psi] - expected.gen_img[psi];
        for (const auto& [m, c] : rest.terms()) {
            int which = -1, hits = 0;
            for (int g = 0; g < (int)m.size(); ++g) {
                hits += m[g];
                if (m[g]) which = g;
            }
            int coord = -1;
            for (int i = 0; i < n; ++i)
                if (ctx->coord_d(i) == which) coord = i;
            if (hits != 1 || coord < 0)
                throw std::logic_error("extended bracket psi-image is not of (eps,gamma) form");
            gamma(a, coord) -= c;
        }
    }
    return {eps, gamma};
}

// gamma-tilde = (tau x id) . gamma as a matrix: gtilde_{ji} = gamma^a_i alpha_a(dx^j).
inline PolyMat gamma_tilde(const PolyMat& gamma, const DiracFrame& frame) {
    const int n = frame.n;
    const int nv = n;
    PolyMat gt(n, n, nv);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            ScalarExpr s(nv);
            for (int a = 0; a < frame.n; ++a)
                s += gamma(a, i) * frame.secs[a].alpha[j];
            gt(j, i) = s;
        }
    return gt;
}

inline PolyMat antisym_part(const PolyMat& m) {
    PolyMat r = m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            r(i, j) = (m(i, j) - m(j, i)).scaled(Rat(1, 2));
    return r;
}

struct MembershipResult {
    bool pass = false;
    bool in_frame = false;
    bool inconclusive = false;
    GradedElement residual;  // iota_v H - d alpha
    std::string witness;
};

// g = { (v,alpha) in Gamma(D) : iota_v H = d alpha }.
inline MembershipResult membership_g(const GeneralizedSection& s, const DiracFrame& frame,
                                     const GradedElement& H) {
    const Ctx& ctx = H.ctx();
    const int n = ctx->ncoords();
    MembershipResult res;
    int degin = 0;
    std::vector<std::vector<ScalarExpr>> cols(frame.n);
    for (int a = 0; a < frame.n; ++a) {
        for (int i = 0; i < n; ++i) cols[a].push_back(frame.secs[a].v.comp[i]);
        for (int i = 0; i < n; ++i) cols[a].push_back(frame.secs[a].alpha[i]);
        for (const auto& c : cols[a]) degin = std::max(degin, c.degree());
    }
    std::vector<ScalarExpr> target;
    for (int i = 0; i < n; ++i) target.push_back(s.v.comp[i]);
    for (int i = 0; i < n; ++i) target.push_back(s.alpha[i]);
    for (const auto& c : target) degin = std::max(degin, c.degree());
    auto dec = poly_decompose(cols, target, n, degin + 4);
    if (!dec.ok) {
        if (pointwise_solvable(cols, target, n, 5, 911u)) {
            res.inconclusive = true;
            res.witness = "frame decomposition exceeds degree bound";
        } else {
            res.witness = "section does not lie in the frame span";
        }
        res.residual = GradedElement(ctx);
        return res;
    }
    res.in_frame = true;
    res.residual = interior(s.v, H) - exterior_d(oneform_element(ctx, s.alpha));
    res.pass = res.residual.is_zero();
    if (!res.pass && res.witness.empty())
        res.witness = "iota_v H != d alpha";
    return res;
}

// gtilde additionally requires the antisymmetric part of gamma-tilde to vanish.
inline MembershipResult membership_gtilde(const GeneralizedSection& s, const PolyMat& gamma,
                                          const DiracFrame& frame, const GradedElement& H) {
    MembershipResult res = membership_g(s, frame, H);
    if (!res.pass) return res;
    if (gamma.rows() > 0 && !antisym_part(gamma_tilde(gamma, frame)).is_zero()) {
        res.pass = false;
        res.witness = "gamma-tilde has a nonvanishing antisymmetric part";
    }
    return res;
}

struct SymmetrySpace {
    int dimension = 0;
    // frame coefficients c^a(x) per basis member
    std::vector<std::vector<ScalarExpr>> coeffs;
    std::vector<GeneralizedSection> sections;
};

// Exact linear solve for all polynomial sections c^a e_a of coefficient
// degree <= N with iota_v H = d alpha.  Basis in reduced echelon form.
inline SymmetrySpace solve_symmetries(const DiracFrame& frame, const GradedElement& H, int N) {
    const Ctx& ctx = H.ctx();
    const int n = ctx->ncoords();
    const auto monos = monomials_upto(n, N);
    const int M = (int)monos.size();
    const int U = frame.n * M;
    const int ext = n + U;

    // v and alpha with unknown-linear coefficients
    VectorField v(n, ext);
    std::vector<ScalarExpr> alpha(n, ScalarExpr(ext));
    for (int a = 0; a < frame.n; ++a)
        for (int m = 0; m < M; ++m) {
            ScalarExpr::Exps e(ext, 0);
            for (int i = 0; i < n; ++i) e[i] = monos[m][i];
            e[n + a * M + m] = 1;
            ScalarExpr u = ScalarExpr::monomial(ext, e, 1);
            for (int i = 0; i < n; ++i) {
                if (!frame.secs[a].v.comp[i].is_zero())
                    v.comp[i] += u * frame.secs[a].v.comp[i].extended(ext);
                if (!frame.secs[a].alpha[i].is_zero())
                    alpha[i] += u * frame.secs[a].alpha[i].extended(ext);
            }
        }
    GradedElement resid =
        interior_op(ctx, v).apply(H.extended(ext)) - exterior_d(oneform_element(ctx, alpha));

    LinSystem sys(U);
    std::map<std::pair<GenMono, ScalarExpr::Exps>, SparseRow> eqs;
    for (const auto& [gm, c] : resid.terms())
        for (const auto& [e, k] : c.terms()) {
            ScalarExpr::Exps xpart(n);
            int uvar = -1;
            unsigned utot = 0;
            for (int i = 0; i < n; ++i) xpart[i] = e[i];
            for (int i = n; i < ext; ++i)
                if (e[i]) {
                    uvar = i - n;
                    utot += e[i];
                }
            if (utot != 1)
                throw std::logic_error("symmetry conditions are not linear in the unknowns");
            eqs[{gm, xpart}].emplace_back(uvar, k);
        }
    for (auto& [key, row] : eqs) {
        std::sort(row.begin(), row.end());
        sys.add_row(row);
    }
    auto basis = sys.nullspace_basis();

    SymmetrySpace out;
    out.dimension = (int)basis.size();
    for (const auto& vec : basis) {
        std::vector<ScalarExpr> coeff(frame.n, ScalarExpr(n));
        for (int a = 0; a < frame.n; ++a)
            for (int m = 0; m < M; ++m)
                if (vec[a * M + m] != 0)
                    coeff[a] += ScalarExpr::monomial(n, monos[m], vec[a * M + m]);
        GeneralizedSection sec(VectorField(n, n), std::vector<ScalarExpr>(n, ScalarExpr(n)));
        for (int a = 0; a < frame.n; ++a)
            for (int i = 0; i < n; ++i) {
                sec.v.comp[i] += coeff[a] * frame.secs[a].v.comp[i];
                sec.alpha[i] += coeff[a] * frame.secs[a].alpha[i];
            }
        out.coeffs.push_back(std::move(coeff));
        out.sections.push_back(std::move(sec));
    }
    return out;
}

// Basis of Hom(TM,E)-valued extensions gamma with polynomial entries of
// degree <= N and vanishing antisymmetric part of gamma-tilde.
inline std::vector<PolyMat> gamma_basis(const DiracFrame& frame, int N) {
    const int n = frame.n;
    const auto monos = monomials_upto(n, N);
    const int M = (int)monos.size();
    const int U = frame.n * n * M;
    auto uindex = [&](int a, int i, int m) { return (a * n + i) * M + m; };

    LinSystem sys(U);
    std::map<std::pair<std::pair<int, int>, ScalarExpr::Exps>, SparseRow> eqs;
    for (int a = 0; a < frame.n; ++a)
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < M; ++m) {
                ScalarExpr shape = ScalarExpr::monomial(n, monos[m], 1);
                for (int j = 0; j < n; ++j) {
                    // contributes to gtilde_{ji} at slot (i<j pairs)
                    ScalarExpr c = shape * frame.secs[a].alpha[j];
                    for (const auto& [e, k] : c.terms()) {
                        if (i < j)
                            eqs[{{i, j}, e}].emplace_back(uindex(a, i, m), -k);
                        else if (j < i)
                            eqs[{{j, i}, e}].emplace_back(uindex(a, i, m), k);
                    }
                }
            }
    for (auto& [key, row] : eqs) {
        std::sort(row.begin(), row.end());
        SparseRow merged;
        for (auto& [c, v] : row) {
            if (!merged.empty() && merged.back().first == c)
                merged.back().second += v;
            else
                merged.emplace_back(c, v);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const auto& p) { return p.second == 0; }),
                     merged.end());
        sys.add_row(merged);
    }
    std::vector<PolyMat> out;
    for (const auto& vec : sys.nullspace_basis()) {
        PolyMat g(frame.n, n, n);
        for (int a = 0; a < frame.n; ++a)
            for (int i = 0; i < n; ++i)
                for (int m = 0; m < M; ++m)
                    if (vec[uindex(a, i, m)] != 0)
                        g(a, i) += ScalarExpr::monomial(n, monos[m], vec[uindex(a, i, m)]);
        out.push_back(std::move(g));
    }
    return out;
}

// The invariance condition of x^b * gamma is x^b times the condition of
// gamma, hence equivalent as a polynomial identity; and the antisymmetry
// constraint is coefficient-wise, so the quotient stays a valid member.
// Stripping monomial content and deduplicating therefore preserves the
// imposed condition set while shrinking it drastically.
inline std::vector<PolyMat> reduce_gamma_generators(const std::vector<PolyMat>& basis) {
    std::vector<PolyMat> out;
    for (const auto& g : basis) {
        if (g.rows() == 0) continue;
        const int nv = g(0, 0).nvars();
        std::vector<unsigned> content;
        bool any = false;
        for (const auto& row : g.m)
            for (const auto& e : row)
                for (const auto& [exp, c] : e.terms()) {
                    if (!any) {
                        content.assign(exp.begin(), exp.end());
                        any = true;
                    } else {
                        for (int i = 0; i < nv; ++i)
                            content[i] = std::min(content[i], exp[i]);
                    }
                }
        PolyMat r = g;
        if (any) {
            bool nontrivial = false;
            for (unsigned k : content) nontrivial |= k > 0;
            if (nontrivial) {
                for (auto& row : r.m)
                    for (auto& e : row) {
                        ScalarExpr shifted(nv);
                        for (const auto& [exp, c] : e.terms()) {
                            ScalarExpr::Exps d = exp;
                            for (int i = 0; i < nv; ++i) d[i] -= content[i];
                            shifted += ScalarExpr::monomial(nv, d, c);
                        }
                        e = shifted;
                    }
            }
        }
        bool dup = false;
        for (const auto& seen : out)
            if ((seen - r).is_zero()) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(r));
    }
    return out;
}

}  // namespace dsigma
