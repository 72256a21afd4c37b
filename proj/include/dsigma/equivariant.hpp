#pragma once

#include "dsigma/qmanifold.hpp"

#include <array>
#include <string>
#include <vector>

namespace dsigma {

// Embed a de Rham form into T[1]E[1] (shared theta generators come first
// there, in the same order).
inline GradedElement embed_form(const GradedElement& H, const Ctx& lifted) {
    GradedElement r(lifted, H.nscalars());
    for (const auto& [m, c] : H.terms()) {
        GenMono mm(lifted->ngens(), 0);
        for (size_t g = 0; g < m.size(); ++g) mm[g] = m[g];
        r.set_term(mm, c);
    }
    return r;
}

// Restriction to ghost number zero: eta -> 0, psi -> 0.
inline GradedElement ghost_zero_part(const GradedElement& e) {
    const Ctx& ctx = e.ctx();
    GradedElement r(ctx, e.nscalars());
    for (const auto& [m, c] : e.terms()) {
        bool keep = true;
        for (int g = 0; g < (int)m.size(); ++g)
            if (m[g] && ctx->gen(g).ghost != 0) {
                keep = false;
                break;
            }
        if (keep) r.set_term(m, c);
    }
    return r;
}

// Standard equivariant extension checker for an action algebroid (constant
// C), candidate Htilde = H + alpha_a ^ psi^a.  Verifies:
//   (i)   restriction recovers H              (holds by construction)
//   (ii)  iota_{v_a} H = d alpha_a
//   (iii) L_{v_a} alpha_b = C^c_{ab} alpha_c
//   (iv)  iota_{v_a} alpha_b + iota_{v_b} alpha_a = 0
struct StandardExtensionReport {
    bool restriction = true;
    std::vector<GradedElement> moment;                 // (ii) residuals, per a
    std::vector<std::vector<GradedElement>> equivar;   // (iii) residuals, per (a,b)
    std::vector<std::vector<ScalarExpr>> isotropy;     // (iv) residuals, per (a,b)
    bool pass_moment = true, pass_equivar = true, pass_isotropy = true;

    bool pass() const { return restriction && pass_moment && pass_equivar && pass_isotropy; }
};

inline StandardExtensionReport check_standard_extension(const GradedElement& H,
                                                        const std::vector<std::vector<ScalarExpr>>& alphas,
                                                        const AlgebroidData& E) {
    require_closed(H);
    for (int c = 0; c < E.rank; ++c)
        if (!E.C[c].is_constant())
            throw std::invalid_argument("standard extension requires constant structure functions");
    const Ctx& ctx = H.ctx();
    const int n = ctx->ncoords();
    StandardExtensionReport rep;
    std::vector<VectorField> v;
    for (int a = 0; a < E.rank; ++a) v.push_back(E.anchor_of_basis(a));
    for (int a = 0; a < E.rank; ++a) {
        GradedElement res = interior(v[a], H) - exterior_d(oneform_element(ctx, alphas[a]));
        if (!res.is_zero()) rep.pass_moment = false;
        rep.moment.push_back(std::move(res));
    }
    rep.equivar.resize(E.rank);
    rep.isotropy.resize(E.rank);
    for (int a = 0; a < E.rank; ++a)
        for (int b = 0; b < E.rank; ++b) {
            GradedElement res = lie(v[a], oneform_element(ctx, alphas[b]));
            for (int c = 0; c < E.rank; ++c)
                res -= oneform_element(ctx, alphas[c]).scaled(E.C[c](a, b));
            if (!res.is_zero()) rep.pass_equivar = false;
            rep.equivar[a].push_back(std::move(res));

            ScalarExpr iso(n);
            for (int i = 0; i < n; ++i)
                iso += v[a].comp[i] * alphas[b][i] + v[b].comp[i] * alphas[a][i];
            if (!iso.is_zero()) rep.pass_isotropy = false;
            rep.isotropy[a].push_back(std::move(iso));
        }
    return rep;
}

// E-equivariant extension conditions for a total-degree-3 superfunction.
struct EExtensionReport {
    GradedElement restriction;  // ghost-zero part minus H
    GradedElement qclosed;      // Qtilde Htilde
    std::vector<GradedElement> symmetry;
    bool pass() const {
        if (!restriction.is_zero() || !qclosed.is_zero()) return false;
        for (const auto& e : symmetry)
            if (!e.is_zero()) return false;
        return true;
    }
};

inline EExtensionReport check_E_extension(const GradedElement& Htilde, const AlgebroidData& E,
                                          const std::vector<ExtendedSymmetry>& S,
                                          const GradedElement& H) {
    Ctx lifted = Htilde.ctx();
    EExtensionReport rep;
    rep.restriction = ghost_zero_part(Htilde) - embed_form(H, lifted);
    rep.qclosed = lift_Qtilde(E).apply(Htilde);
    for (const auto& s : S)
        rep.symmetry.push_back(extended_op(lifted, E, s).apply(Htilde));
    return rep;
}

// The six term families of a total-degree-3 superfunction on T[1]E[1]; the
// theta^3 family is pinned to H by the restriction condition, the other five
// carry the unknowns.
enum AnsatzFamily {
    kEta3 = 0,
    kEta2Theta = 1,
    kEtaTheta2 = 2,
    kEtaPsi = 3,
    kThetaPsi = 4,
    kFamilyCount = 5,
};

inline std::vector<GenMono> ansatz_slots(const Ctx& lifted, int n, int r,
                                         const std::array<bool, kFamilyCount>& families) {
    std::vector<GenMono> slots;
    auto mono = [&](std::initializer_list<int> gens) {
        GenMono m(lifted->ngens(), 0);
        for (int g : gens) m[g] += 1;
        return m;
    };
    const auto theta = [&](int i) { return i; };
    const auto eta = [&](int a) { return n + a; };
    const auto psi = [&](int a) { return n + r + a; };
    if (families[kEta3])
        for (int a = 0; a < r; ++a)
            for (int b = a + 1; b < r; ++b)
                for (int c = b + 1; c < r; ++c)
                    slots.push_back(mono({eta(a), eta(b), eta(c)}));
    if (families[kEta2Theta])
        for (int a = 0; a < r; ++a)
            for (int b = a + 1; b < r; ++b)
                for (int i = 0; i < n; ++i)
                    slots.push_back(mono({eta(a), eta(b), theta(i)}));
    if (families[kEtaTheta2])
        for (int a = 0; a < r; ++a)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    slots.push_back(mono({eta(a), theta(i), theta(j)}));
    if (families[kEtaPsi])
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b)
                slots.push_back(mono({eta(a), psi(b)}));
    if (families[kThetaPsi])
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < r; ++b)
                slots.push_back(mono({theta(i), psi(b)}));
    return slots;
}

enum class ExtStatus { unique, family, none, inconclusive };

inline const char* ext_status_name(ExtStatus s) {
    switch (s) {
        case ExtStatus::unique: return "unique";
        case ExtStatus::family: return "family";
        case ExtStatus::none: return "none";
        case ExtStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

struct ExtensionReport {
    ExtStatus status = ExtStatus::inconclusive;
    int dimension = 0;
    GradedElement particular;
    std::vector<GradedElement> basis;
    std::vector<std::string> caveats;
};

// Assemble the degree-3 ansatz with unknown polynomial coefficients of degree
// <= N, impose Qtilde-closure and invariance under every symmetry in S as one
// exact linear system, and return the particular solution plus a basis of the
// homogeneous solution space (reduced echelon form, so results are
// deterministic).
inline ExtensionReport solve_extension(const GradedElement& H, const AlgebroidData& E,
                                       const std::vector<ExtendedSymmetry>& S, int N,
                                       std::array<bool, kFamilyCount> families = {true, true, true,
                                                                                  true, true}) {
    require_closed(H);
    Ctx lifted = t1e1_context(E);
    const int n = E.dim();
    const int r = E.rank;
    const auto slots = ansatz_slots(lifted, n, r, families);
    const auto monos = monomials_upto(n, N);
    const int M = (int)monos.size();
    const int U = (int)slots.size() * M;
    const int ext = n + U;

    GradedElement ansatz = embed_form(H, lifted).extended(ext);
    for (int s = 0; s < (int)slots.size(); ++s)
        for (int m = 0; m < M; ++m) {
            ScalarExpr::Exps e(ext, 0);
            for (int i = 0; i < n; ++i) e[i] = monos[m][i];
            e[n + s * M + m] = 1;
            GradedElement t(lifted, ext);
            t.set_term(slots[s], ScalarExpr::monomial(ext, e, 1));
            ansatz += t;
        }

    LinSystem sys(U);
    auto add_rows = [&](const GradedElement& cond) {
        std::map<std::pair<GenMono, ScalarExpr::Exps>, std::pair<SparseRow, Rat>> eqs;
        for (const auto& [gm, c] : cond.terms())
            for (const auto& [e, k] : c.terms()) {
                ScalarExpr::Exps xpart(n);
                for (int i = 0; i < n; ++i) xpart[i] = e[i];
                int uvar = -1;
                unsigned utot = 0;
                for (int i = n; i < ext; ++i)
                    if (e[i]) {
                        uvar = i - n;
                        utot += e[i];
                    }
                if (utot > 1)
                    throw std::logic_error("extension conditions are not linear in the unknowns");
                auto& slot = eqs[{gm, xpart}];
                if (uvar < 0)
                    slot.second -= k;  // constants move to the right-hand side
                else
                    slot.first.emplace_back(uvar, k);
            }
        for (auto& [key, row] : eqs) {
            std::sort(row.first.begin(), row.first.end());
            sys.add_row(row.first, row.second);
        }
    };

    add_rows(lift_Qtilde(E).apply(ansatz));
    for (const auto& s : S)
        add_rows(extended_op(lifted, E, s).apply(ansatz));

    ExtensionReport rep;
    rep.caveats.push_back("solution space computed over polynomial coefficients of degree <= " +
                          std::to_string(N));
    rep.caveats.push_back(
        "uniqueness is relative to the supplied symmetry set (all members of degree <= " +
        std::to_string(N) + ")");
    if (sys.inconsistent()) {
        rep.status = ExtStatus::inconclusive;
        rep.caveats.push_back(
            "no extension exists with coefficient degree <= " + std::to_string(N) +
            "; higher-degree coefficients were not explored");
        rep.particular = GradedElement(lifted);
        return rep;
    }

    auto materialize = [&](const std::vector<Rat>& vec, bool with_H) {
        GradedElement out = with_H ? embed_form(H, lifted) : GradedElement(lifted);
        for (int s = 0; s < (int)slots.size(); ++s) {
            ScalarExpr c(n);
            for (int m = 0; m < M; ++m)
                if (vec[s * M + m] != 0)
                    c += ScalarExpr::monomial(n, monos[m], vec[s * M + m]);
            if (c.is_zero()) continue;
            GradedElement t(lifted);
            t.set_term(slots[s], c);
            out += t;
        }
        return out;
    };

    rep.particular = materialize(sys.particular(), true);
    for (const auto& vec : sys.nullspace_basis())
        rep.basis.push_back(materialize(vec, false));
    rep.dimension = (int)rep.basis.size();
    rep.status = rep.dimension == 0 ? ExtStatus::unique : ExtStatus::family;
    return rep;
}

}  // namespace dsigma
