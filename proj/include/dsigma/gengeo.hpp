#pragma once

#include "dsigma/cartan.hpp"
#include "dsigma/linsolve.hpp"
#include "dsigma/matrix.hpp"
#include "dsigma/util.hpp"

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dsigma {

// Element of Gamma(TM + T*M): a vector field paired with a one-form.
struct GeneralizedSection {
    VectorField v;
    std::vector<ScalarExpr> alpha;

    GeneralizedSection() = default;
    GeneralizedSection(VectorField vv, std::vector<ScalarExpr> a)
        : v(std::move(vv)), alpha(std::move(a)) {}
    int dim() const { return v.dim(); }
    bool is_zero() const {
        if (!v.is_zero()) return false;
        for (const auto& a : alpha)
            if (!a.is_zero()) return false;
        return true;
    }
};

inline GradedElement oneform_element(const Ctx& ctx, const std::vector<ScalarExpr>& comps) {
    int nsc = ctx->ncoords();
    for (const auto& c : comps) nsc = std::max(nsc, c.nvars());
    GradedElement e(ctx, nsc);
    for (int i = 0; i < ctx->ncoords(); ++i) {
        if (comps[i].is_zero()) continue;
        e += GradedElement::generator(ctx, ctx->coord_d(i)).extended(nsc).scaled(comps[i]);
    }
    return e;
}

inline std::vector<ScalarExpr> oneform_components(const GradedElement& e) {
    const Ctx& ctx = e.ctx();
    std::vector<ScalarExpr> comps(ctx->ncoords(), ScalarExpr(e.nscalars()));
    for (const auto& [m, c] : e.terms()) {
        int hits = 0, which = -1;
        for (int g = 0; g < (int)m.size(); ++g) {
            if (m[g] == 0) continue;
            hits += m[g];
            which = g;
        }
        if (hits != 1)
            throw std::logic_error("not a one-form");
        for (int i = 0; i < ctx->ncoords(); ++i)
            if (ctx->coord_d(i) == which) {
                comps[i] += c;
                which = -1;
                break;
            }
        if (which != -1)
            throw std::logic_error("not a coordinate differential");
    }
    return comps;
}

// Bivector Pi = (1/2) Pi^{ij} d_i ^ d_j with an antisymmetric component matrix.
struct Bivector {
    PolyMat pi;

    int dim() const { return pi.rows(); }
    void validate() const {
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j)
                if ((pi(i, j) + pi(j, i)).is_zero() == false)
                    throw std::invalid_argument("bivector matrix is not antisymmetric");
    }
    // (Pi# alpha)^j = alpha_i Pi^{ij}
    VectorField sharp(const std::vector<ScalarExpr>& alpha) const {
        const int n = dim();
        VectorField v(n, pi(0, 0).nvars());
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                v.comp[j] += alpha[i] * pi(i, j);
        return v;
    }
};

// Totally antisymmetric rank-3 tensor, stored on ordered index triples.
struct Tensor3 {
    int n = 0;
    std::map<std::array<int, 3>, ScalarExpr> comp;  // keys i<j<k

    ScalarExpr at(int i, int j, int k, int nvars) const {
        std::array<int, 3> ix{i, j, k};
        int sign = 1;
        // sort with sign
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2 - a; ++b)
                if (ix[b] > ix[b + 1]) {
                    std::swap(ix[b], ix[b + 1]);
                    sign = -sign;
                }
        if (ix[0] == ix[1] || ix[1] == ix[2])
            return ScalarExpr(nvars);
        auto it = comp.find(ix);
        if (it == comp.end()) return ScalarExpr(nvars);
        return sign < 0 ? -it->second : it->second;
    }
    void set(int i, int j, int k, const ScalarExpr& v) {
        if (!v.is_zero())
            comp[{i, j, k}] = v;
    }
    bool is_zero() const {
        for (const auto& [ix, c] : comp)
            if (!c.is_zero()) return false;
        return true;
    }
};

// 3-form as a graded element of the de Rham context.
inline GradedElement threeform_element(const Ctx& ctx, const Tensor3& h) {
    GradedElement e(ctx);
    for (const auto& [ix, c] : h.comp) {
        e += GradedElement::term(ctx, c,
                                 {ctx->gen(ctx->coord_d(ix[0])).name,
                                  ctx->gen(ctx->coord_d(ix[1])).name,
                                  ctx->gen(ctx->coord_d(ix[2])).name});
    }
    return e;
}

inline Tensor3 threeform_tensor(const GradedElement& H) {
    const Ctx& ctx = H.ctx();
    Tensor3 t;
    t.n = ctx->ncoords();
    for (const auto& [m, c] : H.terms()) {
        std::array<int, 3> ix{-1, -1, -1};
        int pos = 0;
        for (int g = 0; g < (int)m.size(); ++g)
            for (unsigned k = 0; k < m[g]; ++k) {
                if (pos >= 3)
                    throw std::logic_error("not a 3-form");
                bool found = false;
                for (int i = 0; i < ctx->ncoords(); ++i)
                    if (ctx->coord_d(i) == g) {
                        ix[pos++] = i;
                        found = true;
                        break;
                    }
                if (!found)
                    throw std::logic_error("not a de Rham 3-form");
            }
        if (pos != 3)
            throw std::logic_error("not a 3-form");
        t.set(ix[0], ix[1], ix[2], c);
    }
    return t;
}

inline void require_closed(const GradedElement& H) {
    if (!exterior_d(H).is_zero())
        throw std::invalid_argument("3-form is not closed");
}

// <alpha,(w)> + <beta,(v)>
inline ScalarExpr pairing(const GeneralizedSection& s1, const GeneralizedSection& s2) {
    const int n = s1.dim();
    ScalarExpr r(s1.v.comp.empty() ? 0 : s1.v.comp[0].nvars());
    for (int i = 0; i < n; ++i) {
        r += s1.alpha[i] * s2.v.comp[i];
        r += s2.alpha[i] * s1.v.comp[i];
    }
    return r;
}

// H-twisted Courant-Dorfman bracket
//   [(v,a),(w,b)] = ([v,w], L_v b - i_w da + i_w i_v H).
inline GeneralizedSection dorfman(const GeneralizedSection& s1, const GeneralizedSection& s2,
                                  const GradedElement& H) {
    const Ctx& ctx = H.ctx();
    const int n = ctx->ncoords();
    VectorField lie_vw(n, n);
    for (int i = 0; i < n; ++i) {
        ScalarExpr c(n);
        for (int j = 0; j < n; ++j) {
            c += s1.v.comp[j] * s2.v.comp[i].derivative(j);
            c -= s2.v.comp[j] * s1.v.comp[i].derivative(j);
        }
        lie_vw.comp[i] = c;
    }
    GradedElement beta = oneform_element(ctx, s2.alpha);
    GradedElement alpha = oneform_element(ctx, s1.alpha);
    GradedElement form = lie(s1.v, beta) - interior(s2.v, exterior_d(alpha)) +
                         interior(s2.v, interior(s1.v, H));
    return {lie_vw, oneform_components(form)};
}

// (1/2)[Pi,Pi]^{ijk} = Pi^{il} d_l Pi^{jk} + Pi^{jl} d_l Pi^{ki} + Pi^{kl} d_l Pi^{ij}
inline Tensor3 schouten_half_bracket(const Bivector& P) {
    const int n = P.dim();
    const int nv = P.pi(0, 0).nvars();
    Tensor3 t;
    t.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                ScalarExpr s(nv);
                for (int l = 0; l < n; ++l) {
                    s += P.pi(i, l) * P.pi(j, k).derivative(l);
                    s += P.pi(j, l) * P.pi(k, i).derivative(l);
                    s += P.pi(k, l) * P.pi(i, j).derivative(l);
                }
                t.set(i, j, k, s);
            }
    return t;
}

// <H,Pi x Pi x Pi>, contracted to match the Jacobiator of the twisted
// bracket ({{f,g},h} + cycl = H(X_f, X_g, X_h) on coordinate functions):
// component^{ijk} = Pi^{li} Pi^{mj} Pi^{nk} H_{lmn}.
inline Tensor3 h_pi_cubed(const Bivector& P, const GradedElement& H) {
    const int n = P.dim();
    const int nv = P.pi(0, 0).nvars();
    Tensor3 h = threeform_tensor(H);
    Tensor3 t;
    t.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                ScalarExpr s(nv);
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m)
                        for (int q = 0; q < n; ++q) {
                            ScalarExpr hc = h.at(l, m, q, nv);
                            if (hc.is_zero()) continue;
                            s += P.pi(l, i) * P.pi(m, j) * P.pi(q, k) * hc;
                        }
                t.set(i, j, k, s);
            }
    return t;
}

struct TwistedPoissonResult {
    bool pass = false;
    Tensor3 residual;
};

inline TwistedPoissonResult twisted_poisson_check(const Bivector& P, const GradedElement& H) {
    require_closed(H);
    P.validate();
    Tensor3 lhs = schouten_half_bracket(P);
    Tensor3 rhs = h_pi_cubed(P, H);
    const int nv = P.pi(0, 0).nvars();
    Tensor3 res;
    res.n = P.dim();
    for (int i = 0; i < P.dim(); ++i)
        for (int j = i + 1; j < P.dim(); ++j)
            for (int k = j + 1; k < P.dim(); ++k)
                res.set(i, j, k, lhs.at(i, j, k, nv) - rhs.at(i, j, k, nv));
    return {res.is_zero(), res};
}

// Maximal isotropic frame: n sections spanning D, pointwise independent at 0.
struct DiracFrame {
    std::vector<GeneralizedSection> secs;
    int n = 0;
};

inline DiracFrame graph_of_bivector(const Bivector& P) {
    P.validate();
    const int n = P.dim();
    DiracFrame f;
    f.n = n;
    for (int a = 0; a < n; ++a) {
        std::vector<ScalarExpr> alpha(n, ScalarExpr(n));
        alpha[a] = ScalarExpr::constant(n, 1);
        f.secs.emplace_back(P.sharp(alpha), alpha);
    }
    return f;
}

// Decompose target = sum_c f^c * cols[c] with polynomial f^c of degree <= maxdeg.
struct DecomposeResult {
    bool ok = false;
    std::vector<ScalarExpr> f;
};

inline DecomposeResult poly_decompose(const std::vector<std::vector<ScalarExpr>>& cols,
                                      const std::vector<ScalarExpr>& target, int nvars,
                                      int maxdeg) {
    const int r = (int)cols.size();
    const int ncomp = (int)target.size();
    const auto monos = monomials_upto(nvars, maxdeg);
    const int M = (int)monos.size();
    LinSystem sys(r * M);
    std::map<std::pair<int, ScalarExpr::Exps>, SparseRow> eqs;
    for (int c = 0; c < r; ++c)
        for (int m = 0; m < M; ++m) {
            ScalarExpr shape = ScalarExpr::monomial(nvars, monos[m], 1);
            for (int k = 0; k < ncomp; ++k) {
                ScalarExpr contrib = cols[c][k] * shape;
                for (const auto& [e, v] : contrib.terms())
                    eqs[{k, e}].emplace_back(c * M + m, v);
            }
        }
    std::map<std::pair<int, ScalarExpr::Exps>, Rat> rhs;
    for (int k = 0; k < ncomp; ++k)
        for (const auto& [e, v] : target[k].terms())
            rhs[{k, e}] = v;
    for (auto& [key, row] : eqs) {
        std::sort(row.begin(), row.end());
        auto it = rhs.find(key);
        sys.add_row(row, it == rhs.end() ? Rat(0) : it->second);
        if (it != rhs.end()) rhs.erase(it);
    }
    for (const auto& [key, v] : rhs)
        if (v != 0) return {false, {}};
    if (sys.inconsistent())
        return {false, {}};
    auto sol = sys.particular();
    std::vector<ScalarExpr> f(r, ScalarExpr(nvars));
    for (int c = 0; c < r; ++c)
        for (int m = 0; m < M; ++m)
            if (sol[c * M + m] != 0)
                f[c] += ScalarExpr::monomial(nvars, monos[m], sol[c * M + m]);
    return {true, f};
}

// Pointwise solvability probe at pseudo-random rational points; used to tell
// a genuine closure failure from a degree-bound artifact.
inline bool pointwise_solvable(const std::vector<std::vector<ScalarExpr>>& cols,
                               const std::vector<ScalarExpr>& target, int nvars, int samples,
                               uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
    for (int s = 0; s < samples; ++s) {
        std::vector<Rat> pt;
        for (int i = 0; i < nvars; ++i)
            pt.emplace_back(num(rng), den(rng));
        LinSystem sys((int)cols.size());
        for (int k = 0; k < (int)target.size(); ++k) {
            SparseRow row;
            for (int c = 0; c < (int)cols.size(); ++c) {
                Rat v = cols[c][k].eval(pt);
                if (v != 0) row.emplace_back(c, v);
            }
            sys.add_row(row, target[k].eval(pt));
        }
        if (sys.inconsistent())
            return false;
    }
    return true;
}

struct DiracResult {
    enum class Status { pass, fail, inconclusive };
    Status status = Status::fail;
    std::string witness;
    // Structure functions C^c_{ab} of the induced algebroid, filled on pass.
    std::vector<PolyMat> C;  // C[c](a,b)
};

// Conditions: pointwise independence at the origin, isotropy, and closure of
// the frame under the H-twisted Dorfman bracket with polynomial coefficients.
inline DiracResult is_dirac(const DiracFrame& frame, const GradedElement& H) {
    require_closed(H);
    const Ctx& ctx = H.ctx();
    const int n = ctx->ncoords();
    DiracResult res;
    if ((int)frame.secs.size() != n) {
        res.witness = "frame must have exactly dim M sections";
        return res;
    }
    // rank of the constant parts of the stacked (v, alpha) components
    {
        LinSystem sys(n);
        std::vector<Rat> zero(n, Rat(0));
        for (int k = 0; k < 2 * n; ++k) {
            SparseRow row;
            for (int a = 0; a < n; ++a) {
                const ScalarExpr& c =
                    k < n ? frame.secs[a].v.comp[k] : frame.secs[a].alpha[k - n];
                Rat v = c.eval(std::vector<Rat>(n, Rat(0)));
                if (v != 0) row.emplace_back(a, v);
            }
            sys.add_row(row, Rat(0));
        }
        if (sys.rank() < n) {
            res.witness = "frame is rank-deficient at the origin";
            return res;
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            if (!pairing(frame.secs[a], frame.secs[b]).is_zero()) {
                res.witness = "isotropy fails for sections " + std::to_string(a + 1) + "," +
                              std::to_string(b + 1);
                return res;
            }
    int degin = 0;
    for (const auto& s : frame.secs) {
        for (const auto& c : s.v.comp) degin = std::max(degin, c.degree());
        for (const auto& c : s.alpha) degin = std::max(degin, c.degree());
    }
    for (const auto& [m, c] : H.terms()) degin = std::max(degin, c.degree());
    const int bound = degin + 4;

    std::vector<std::vector<ScalarExpr>> cols(n);
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < n; ++i) cols[a].push_back(frame.secs[a].v.comp[i]);
        for (int i = 0; i < n; ++i) cols[a].push_back(frame.secs[a].alpha[i]);
    }
    res.C.assign(n, PolyMat(n, n, n));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            GeneralizedSection br = dorfman(frame.secs[a], frame.secs[b], H);
            std::vector<ScalarExpr> target;
            for (int i = 0; i < n; ++i) target.push_back(br.v.comp[i]);
            for (int i = 0; i < n; ++i) target.push_back(br.alpha[i]);
            auto dec = poly_decompose(cols, target, n, bound);
            if (!dec.ok) {
                if (pointwise_solvable(cols, target, n, 5, 20240901u + a * 16 + b)) {
                    res.status = DiracResult::Status::inconclusive;
                    res.witness = "closure coefficients exceed degree bound " +
                                  std::to_string(bound) + " for sections " +
                                  std::to_string(a + 1) + "," + std::to_string(b + 1);
                } else {
                    res.witness = "bracket of sections " + std::to_string(a + 1) + "," +
                                  std::to_string(b + 1) + " leaves the frame span";
                }
                return res;
            }
            for (int c = 0; c < n; ++c) {
                res.C[c](a, b) = dec.f[c];
                res.C[c](b, a) = -dec.f[c];
            }
        }
    res.status = DiracResult::Status::pass;
    return res;
}

// Dirac structure as the graph of a pointwise g-orthogonal operator O = P/q.
struct OOperator {
    PolyMat P;
    ScalarExpr q;
    PolyMat g;  // constant symmetric positive-definite

    int dim() const { return P.rows(); }
    // O^T g O = g, i.e. P^T g P = q^2 g.
    bool orthogonal() const {
        PolyMat lhs = P.transposed() * g * P;
        PolyMat rhs = g.scaled(q * q);
        return (lhs - rhs).is_zero();
    }
};

inline PolyMat constant_inverse(const PolyMat& g) {
    ScalarExpr d = det(g);
    if (!d.is_constant() || d.is_zero())
        throw std::invalid_argument("metric must be a constant invertible matrix");
    Rat dv = d.constant_value();
    PolyMat adj = adjugate(g);
    PolyMat r = adj;
    for (auto& row : r.m)
        for (auto& e : row) e = e.scaled(Rat(1) / dv);
    return r;
}

// Solve the parametrization (v_a, alpha_a) = (w_a - O w_a, g(w_a + O w_a, .))
// for O: with u = g^{-1} alpha, O (u+v) = (u-v) columnwise.
inline OOperator o_from_dirac(const DiracFrame& frame, const PolyMat& g) {
    const int n = frame.n;
    const int nv = g(0, 0).nvars();
    PolyMat ginv = constant_inverse(g);
    PolyMat U(n, n, nv), V(n, n, nv);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) {
            V(i, a) = frame.secs[a].v.comp[i];
            ScalarExpr u(nv);
            for (int j = 0; j < n; ++j)
                u += ginv(i, j) * frame.secs[a].alpha[j];
            U(i, a) = u;
        }
    PolyMat M = U + V;
    ScalarExpr q = det(M);
    if (q.is_zero())
        throw std::invalid_argument("frame parametrization is singular (rank failure)");
    PolyMat P = (U - V) * adjugate(M);
    // strip common rational content, normalize the sign of q's leading term
    Rat content = 0;
    for (const auto& row : P.m)
        for (const auto& e : row)
            for (const auto& [ex, c] : e.terms()) content = rat_gcd(content, c);
    for (const auto& [ex, c] : q.terms()) content = rat_gcd(content, c);
    if (q.terms().rbegin()->second < 0)
        content = -content;
    for (auto& row : P.m)
        for (auto& e : row) e = e.scaled(Rat(1) / content);
    q = q.scaled(Rat(1) / content);
    OOperator O{P, q, g};
    if (!O.orthogonal())
        throw std::invalid_argument("frame does not define an orthogonal operator (not isotropic?)");
    return O;
}

inline DiracFrame dirac_from_o(const OOperator& O) {
    const int n = O.dim();
    const int nv = O.q.nvars();
    DiracFrame f;
    f.n = n;
    for (int a = 0; a < n; ++a) {
        VectorField v(n, nv);
        std::vector<ScalarExpr> alpha(n, ScalarExpr(nv));
        for (int i = 0; i < n; ++i) {
            ScalarExpr wi = (i == a) ? O.q : ScalarExpr(nv);
            v.comp[i] = wi - O.P(i, a);
            ScalarExpr plus(nv);
            for (int j = 0; j < n; ++j) {
                ScalarExpr wj = (j == a) ? O.q : ScalarExpr(nv);
                plus += O.g(i, j) * (wj + O.P(j, a));
            }
            alpha[i] = plus;
        }
        f.secs.emplace_back(std::move(v), std::move(alpha));
    }
    return f;
}

struct GjacResult {
    bool pass = false;
    std::string witness;
};

// Twisted Jacobi-type integrability condition for O, flat connection of a
// constant metric:
//   g(O^{-1} grad_{(id-O)xi_a}(O) xi_b, xi_c) + cycl(a,b,c)
//     = (1/2) H((id-O)xi_a, (id-O)xi_b, (id-O)xi_c).
inline GjacResult gjac_check(const OOperator& O, const GradedElement& H) {
    require_closed(H);
    if (!O.orthogonal())
        return {false, "operator is not orthogonal"};
    const int n = O.dim();
    const int nv = O.q.nvars();
    Tensor3 h = threeform_tensor(H);
    PolyMat ginv = constant_inverse(O.g);
    // O^{-1} = (g^{-1} P^T g)/q
    PolyMat Pinv = ginv * O.P.transposed() * O.g;
    // W = q id - P  (= q (id - O))
    PolyMat W = PolyMat::identity(n, nv).scaled(O.q) - O.P;
    // D_k O = (q dP - dq P)/q^2
    std::vector<PolyMat> dO_num(n, PolyMat(n, n, nv));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dO_num[k](i, j) = O.P(i, j).derivative(k) * O.q - O.P(i, j) * O.q.derivative(k);
    // M_k = g O^{-1} D_k O, numerator over q^3
    std::vector<PolyMat> Mk(n, PolyMat(n, n, nv));
    for (int k = 0; k < n; ++k)
        Mk[k] = O.g * Pinv * dO_num[k];
    auto term = [&](int a, int b, int c) {
        // sum_k (W_{ka}/q) (Mk)_{cb} / q^3
        ScalarExpr s(nv);
        for (int k = 0; k < n; ++k)
            s += W(k, a) * Mk[k](c, b);
        return s;  // over q^4
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                ScalarExpr lhs = term(a, b, c) + term(b, c, a) + term(c, a, b);
                ScalarExpr rhs(nv);
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m)
                        for (int p = 0; p < n; ++p) {
                            ScalarExpr hc = h.at(l, m, p, nv);
                            if (hc.is_zero()) continue;
                            rhs += hc * W(l, a) * W(m, b) * W(p, c);
                        }
                // lhs/q^4 = rhs/(2 q^3)  <=>  2 lhs = q rhs
                if (!(lhs + lhs - O.q * rhs).is_zero())
                    return GjacResult{false, "integrability residual at basis triple (" +
                                                 std::to_string(a + 1) + "," +
                                                 std::to_string(b + 1) + "," +
                                                 std::to_string(c + 1) + ")"};
            }
    return {true, ""};
}

}  // namespace dsigma
