#include "dsigma/engine.hpp"

#include "dsigma/oracle.hpp"

#include <algorithm>
#include <sstream>

namespace dsigma {

namespace {

std::string poly_str(const ScalarExpr& p, const std::vector<std::string>& names) {
    return p.str(names);
}

Json oracle_json(const OracleResult& o) {
    Json j;
    j["samples"] = o.samples;
    j["seed"] = o.seed;
    j["confirmed"] = o.pass;
    return j;
}

// Oracle re-confirmation of a set of symbolically-zero scalars; a failure
// here is a kernel bug and is surfaced loudly.
OracleResult confirm_zero(const std::vector<ScalarExpr>& coeffs, int nvars, const RunOptions& opt) {
    OracleResult o = oracle_sample_scalars(coeffs, nvars, opt.samples, opt.seed);
    if (!o.pass)
        throw std::logic_error("numeric oracle contradicts a symbolic zero: " + o.witness);
    return o;
}

std::vector<ScalarExpr> element_coeffs(const GradedElement& e) {
    std::vector<ScalarExpr> out;
    for (const auto& [m, c] : e.terms()) out.push_back(c);
    return out;
}

struct DiracSetup {
    GradedElement H;
    DiracFrame frame;
    DiracResult closure;
    AlgebroidData E;
};

DiracSetup resolve_dirac(const ModelSpec& model) {
    DiracSetup s;
    s.H = model.h_element();
    require_closed(s.H);
    if (model.pi) {
        model.pi->validate();
        s.frame = graph_of_bivector(*model.pi);
    } else if (model.frame) {
        s.frame = *model.frame;
    } else if (model.oper) {
        OOperator O{model.oper->first, model.oper->second, model.metric_or_identity()};
        if (!O.orthogonal())
            throw std::invalid_argument("ooperator is not orthogonal for the given metric");
        s.frame = dirac_from_o(O);
    } else {
        throw std::invalid_argument(
            "model defines no Dirac structure (need bivector, frame or ooperator)");
    }
    s.closure = is_dirac(s.frame, s.H);
    if (s.closure.status == DiracResult::Status::pass)
        s.E = algebroid_from_frame(s.frame, s.closure.C, model.coords);
    return s;
}

std::vector<ExtendedSymmetry> symmetry_set(const DiracSetup& s, const std::string& algebra,
                                           int N, SymmetrySpace* eps_out = nullptr,
                                           std::vector<PolyMat>* gamma_out = nullptr) {
    SymmetrySpace space = solve_symmetries(s.frame, s.H, N);
    std::vector<ExtendedSymmetry> out;
    for (const auto& c : space.coeffs) {
        SymmetrySection eps;
        for (const auto& e : c) eps.push_back(e);
        out.push_back(ExtendedSymmetry::lie(std::move(eps)));
    }
    if (algebra == "gtilde") {
        auto gb = gamma_basis(s.frame, N);
        for (const auto& g : reduce_gamma_generators(gb))
            out.push_back(ExtendedSymmetry::extension(g));
        if (gamma_out) *gamma_out = std::move(gb);
    }
    if (eps_out) *eps_out = std::move(space);
    return out;
}

Json section_json(const GeneralizedSection& sec, const std::vector<std::string>& names) {
    Json j;
    Json v = Json::array(), a = Json::array();
    for (const auto& c : sec.v.comp) v.push_back(poly_str(c, names));
    for (const auto& c : sec.alpha) a.push_back(poly_str(c, names));
    j["v"] = v;
    j["alpha"] = a;
    return j;
}

Json tensor3_json(const Tensor3& t, int nvars, const std::vector<std::string>& names) {
    Json j = Json::array();
    for (const auto& [ix, c] : t.comp) {
        if (c.is_zero()) continue;
        Json e;
        e["indices"] = {ix[0] + 1, ix[1] + 1, ix[2] + 1};
        e["value"] = poly_str(c, names);
        j.push_back(e);
    }
    (void)nvars;
    return j;
}

RunResult check_poisson(const ModelSpec& model, const RunOptions& opt) {
    if (!model.pi)
        throw std::invalid_argument("check poisson requires a bivector");
    auto res = twisted_poisson_check(*model.pi, model.h_element());
    RunResult r;
    r.report["schema"] = 1;
    r.report["command"] = "check poisson";
    r.report["model"] = model.name;
    r.report["status"] = res.pass ? "pass" : "fail";
    r.report["residual"] = tensor3_json(res.residual, model.dim, model.coords);
    r.report["caveats"] = Json::array();
    if (res.pass) {
        std::vector<ScalarExpr> coeffs;
        for (const auto& [ix, c] : res.residual.comp) coeffs.push_back(c);
        r.report["oracle"] = oracle_json(confirm_zero(coeffs, model.dim, opt));
    }
    r.exit_code = res.pass ? 0 : 1;
    return r;
}

RunResult check_dirac(const ModelSpec& model, const RunOptions& opt) {
    DiracSetup s = resolve_dirac(model);
    RunResult r;
    r.report["schema"] = 1;
    r.report["command"] = "check dirac";
    r.report["model"] = model.name;
    switch (s.closure.status) {
        case DiracResult::Status::pass: r.report["status"] = "pass"; break;
        case DiracResult::Status::fail: r.report["status"] = "fail"; break;
        case DiracResult::Status::inconclusive: r.report["status"] = "inconclusive"; break;
    }
    r.report["witness"] = s.closure.witness;
    if (s.closure.status == DiracResult::Status::pass) {
        Json c = Json::array();
        for (int k = 0; k < s.frame.n; ++k)
            for (int a = 0; a < s.frame.n; ++a)
                for (int b = a + 1; b < s.frame.n; ++b)
                    if (!s.closure.C[k](a, b).is_zero()) {
                        Json e;
                        e["c"] = k + 1;
                        e["a"] = a + 1;
                        e["b"] = b + 1;
                        e["value"] = poly_str(s.closure.C[k](a, b), model.coords);
                        c.push_back(e);
                    }
        r.report["structure_functions"] = c;
        // isotropy residuals are identically zero on pass; re-confirm numerically
        std::vector<ScalarExpr> coeffs;
        for (int a = 0; a < s.frame.n; ++a)
            for (int b = a; b < s.frame.n; ++b)
                coeffs.push_back(pairing(s.frame.secs[a], s.frame.secs[b]));
        r.report["oracle"] = oracle_json(confirm_zero(coeffs, model.dim, opt));
    }
    r.report["caveats"] = Json::array();
    r.exit_code = s.closure.status == DiracResult::Status::pass ? 0
                  : s.closure.status == DiracResult::Status::fail ? 1 : 3;
    return r;
}

RunResult check_gjac(const ModelSpec& model, const RunOptions& opt) {
    OOperator O;
    if (model.oper) {
        O = OOperator{model.oper->first, model.oper->second, model.metric_or_identity()};
        if (!O.orthogonal())
            throw std::invalid_argument("ooperator is not orthogonal for the given metric");
    } else {
        DiracFrame f;
        if (model.pi)
            f = graph_of_bivector(*model.pi);
        else if (model.frame)
            f = *model.frame;
        else
            throw std::invalid_argument("check gjac requires an ooperator, bivector or frame");
        O = o_from_dirac(f, model.metric_or_identity());
    }
    auto res = gjac_check(O, model.h_element());
    RunResult r;
    r.report["schema"] = 1;
    r.report["command"] = "check gjac";
    r.report["model"] = model.name;
    r.report["status"] = res.pass ? "pass" : "fail";
    r.report["witness"] = res.witness;
    r.report["caveats"] = Json::array();
    if (res.pass) {
        // the integrability residuals are zero; cross-check the orthogonality
        // identity numerically as the oracle channel
        PolyMat lhs = O.P.transposed() * O.g * O.P - O.g.scaled(O.q * O.q);
        std::vector<ScalarExpr> coeffs;
        for (const auto& row : lhs.m)
            for (const auto& e : row) coeffs.push_back(e);
        r.report["oracle"] = oracle_json(confirm_zero(coeffs, model.dim, opt));
    }
    r.exit_code = res.pass ? 0 : 1;
    return r;
}

RunResult run_symmetries(const ModelSpec& model, const RunOptions& opt) {
    const int N = opt.degree >= 0 ? opt.degree : model.degree;
    DiracSetup s = resolve_dirac(model);
    RunResult r;
    r.report["schema"] = 1;
    r.report["command"] = "symmetries";
    r.report["model"] = model.name;
    r.report["algebra"] = opt.algebra;
    r.report["degree"] = N;
    if (s.closure.status != DiracResult::Status::pass) {
        r.report["status"] = "fail";
        r.report["witness"] = "is_dirac: " + s.closure.witness;
        r.exit_code = 1;
        return r;
    }
    SymmetrySpace space;
    std::vector<PolyMat> gammas;
    symmetry_set(s, opt.algebra, N, &space, &gammas);
    r.report["status"] = "pass";
    r.report["dimension"] = space.dimension;
    Json basis = Json::array();
    for (size_t k = 0; k < space.sections.size(); ++k) {
        Json member = section_json(space.sections[k], model.coords);
        Json coeff = Json::array();
        for (const auto& c : space.coeffs[k]) coeff.push_back(poly_str(c, model.coords));
        member["frame_coefficients"] = coeff;
        // every reported member is re-verified through the membership check
        auto mem = membership_g(space.sections[k], s.frame, s.H);
        member["membership_residual_zero"] = mem.pass;
        if (!mem.pass)
            throw std::logic_error("symmetry solver returned a non-member section");
        basis.push_back(member);
    }
    r.report["basis"] = basis;
    if (opt.algebra == "gtilde") {
        r.report["gamma_dimension"] = (int)gammas.size();
        Json gj = Json::array();
        for (const auto& g : gammas) {
            Json entries = Json::array();
            for (int a = 0; a < g.rows(); ++a)
                for (int i = 0; i < g.cols(); ++i)
                    if (!g(a, i).is_zero()) {
                        Json e;
                        e["section"] = a + 1;
                        e["coordinate"] = i + 1;
                        e["value"] = poly_str(g(a, i), model.coords);
                        entries.push_back(e);
                    }
            gj.push_back(entries);
        }
        r.report["gamma_basis"] = gj;
    }
    r.report["caveats"] = Json::array(
        {"basis is complete for polynomial coefficients of degree <= " + std::to_string(N)});
    {
        std::vector<ScalarExpr> coeffs;
        for (const auto& sec : space.sections) {
            GradedElement resid = interior(sec.v, s.H) -
                                  exterior_d(oneform_element(s.H.ctx(), sec.alpha));
            for (const auto& c : element_coeffs(resid)) coeffs.push_back(c);
        }
        r.report["oracle"] = oracle_json(confirm_zero(coeffs, model.dim, opt));
    }
    r.exit_code = 0;
    return r;
}

Json superfunction_json(const GradedElement& e) {
    Json j = Json::array();
    for (const auto& [m, c] : e.terms()) {
        std::string mono;
        for (int g = 0; g < (int)m.size(); ++g)
            for (unsigned k = 0; k < m[g]; ++k)
                mono += (mono.empty() ? "" : "*") + e.ctx()->gen(g).name;
        Json t;
        t["monomial"] = mono;
        t["coefficient"] = c.str(e.ctx()->coords());
        j.push_back(t);
    }
    return j;
}

struct ExtendOutcome {
    DiracSetup setup;
    ExtensionReport ext;
    int N = 0;
    bool ok = false;
    std::string witness;
};

ExtendOutcome run_extension_pipeline(const ModelSpec& model, const RunOptions& opt) {
    ExtendOutcome out;
    out.N = opt.degree >= 0 ? opt.degree : model.degree;
    out.setup = resolve_dirac(model);
    if (out.setup.closure.status != DiracResult::Status::pass) {
        out.witness = "is_dirac: " + out.setup.closure.witness;
        return out;
    }
    Derivation Q = build_Q(out.setup.E);
    if (!q_square(Q).is_zero()) {
        out.witness = "induced algebroid fails Q^2 = 0";
        return out;
    }
    auto S = symmetry_set(out.setup, opt.algebra, out.N);
    out.ext = solve_extension(out.setup.H, out.setup.E, S, out.N);
    out.ok = true;
    return out;
}

RunResult run_extend(const ModelSpec& model, const RunOptions& opt) {
    RunResult r;
    r.report["schema"] = 1;
    r.report["command"] = "extend";
    r.report["model"] = model.name;
    r.report["algebra"] = opt.algebra;
    ExtendOutcome out = run_extension_pipeline(model, opt);
    r.report["degree"] = out.N;
    if (!out.ok) {
        r.report["status"] = "fail";
        r.report["witness"] = out.witness;
        r.exit_code = 1;
        return r;
    }
    r.report["status"] = ext_status_name(out.ext.status);
    r.report["dimension"] = out.ext.dimension;
    r.report["particular"] = superfunction_json(out.ext.particular);
    Json basis = Json::array();
    for (const auto& b : out.ext.basis) basis.push_back(superfunction_json(b));
    r.report["homogeneous_basis"] = basis;
    Json caveats = Json::array();
    for (const auto& c : out.ext.caveats) caveats.push_back(c);
    if (opt.assert_orbit)
        caveats.push_back(
            "user asserted: pullback of H to a dense set of orbits is non-zero (not verified)");
    else
        caveats.push_back("orbit non-degeneracy was not asserted; uniqueness statements "
                          "presuppose it");
    r.report["caveats"] = caveats;
    {
        // every returned solution satisfies the three conditions symbolically;
        // re-confirm the Qtilde-closure of the particular solution numerically
        GradedElement resid = lift_Qtilde(out.setup.E).apply(out.ext.particular);
        r.report["oracle"] = oracle_json(confirm_zero(element_coeffs(resid), model.dim, opt));
    }
    r.exit_code = out.ext.status == ExtStatus::inconclusive ? 3
                  : out.ext.status == ExtStatus::none ? 1 : 0;
    return r;
}

RunResult run_gauge(const ModelSpec& model, const RunOptions& opt) {
    RunResult r;
    r.report["schema"] = 1;
    r.report["command"] = "gauge";
    r.report["model"] = model.name;

    if (model.oper) {
        OOperator O{model.oper->first, model.oper->second, model.metric_or_identity()};
        if (!O.orthogonal())
            throw std::invalid_argument("ooperator is not orthogonal for the given metric");
        DsmForms forms = dsm_assemble(O);
        const bool has_wz = model.h && !model.h->comp.empty();
        r.report["status"] = forms.equal ? "pass" : "fail";
        r.report["dsm"] = Json{
            {"forms_agree", forms.equal},
            {"alternate_convention_agrees", forms.collapsed_equal},
            {"convention", "A = g((id+O)A_gauge, .), V = (id-O)A_gauge"},
        };
        ActionExpression act{forms.top_num, GradedElement(forms.top_num.ctx())};
        r.report["action"] = action_json(act, has_wz);
        if (opt.emit == "latex")
            r.latex = action_latex(act, has_wz);
        r.exit_code = forms.equal ? 0 : 1;
        return r;
    }

    ExtendOutcome out = run_extension_pipeline(model, opt);
    r.report["degree"] = out.N;
    r.report["algebra"] = opt.algebra;
    if (!out.ok) {
        r.report["status"] = "fail";
        r.report["witness"] = out.witness;
        r.exit_code = 1;
        return r;
    }
    if (out.ext.status == ExtStatus::inconclusive) {
        r.report["status"] = "inconclusive";
        r.exit_code = 3;
        return r;
    }
    // canonical representative: the particular solution, or the first basis
    // vector (normalization 1) when extending H = 0
    GradedElement Htilde = out.ext.particular;
    if (Htilde.is_zero()) {
        if (out.ext.basis.empty()) {
            r.report["status"] = "none";
            r.exit_code = 1;
            return r;
        }
        Htilde = out.ext.basis.front();
    }
    Ctx ws = worldsheet_ctx(model.dim, out.setup.E.rank);
    GradedElement image = pullback_f(Htilde, out.setup.E, ws);
    GradedElement bulk = bulk_image(out.setup.H, out.setup.E, ws);
    ActionExpression act = localize_boundary(image, bulk);
    const bool has_wz = model.h && !model.h->comp.empty();
    r.report["status"] = ext_status_name(out.ext.status);
    r.report["dimension"] = out.ext.dimension;
    r.report["extension"] = superfunction_json(Htilde);
    r.report["action"] = action_json(act, has_wz);
    Json caveats = Json::array();
    for (const auto& c : out.ext.caveats) caveats.push_back(c);
    if (out.ext.status == ExtStatus::family)
        caveats.push_back("action emitted for the canonical representative of a solution family");
    r.report["caveats"] = caveats;
    {
        GradedElement resid = exterior_d(act.boundary) - (image - bulk);
        r.report["oracle"] = oracle_json(confirm_zero(element_coeffs(resid), model.dim, opt));
    }
    if (opt.emit == "latex")
        r.latex = action_latex(act, has_wz);
    r.exit_code = 0;
    return r;
}

RunResult run_standard_extend(const ModelSpec& model, const RunOptions& opt) {
    if (!model.algebroid)
        throw std::invalid_argument("standard-extend requires an algebroid declaration");
    const AlgebroidData& E = *model.algebroid;
    if ((int)model.oneforms.size() != E.rank)
        throw std::invalid_argument("standard-extend requires one oneform per algebroid basis "
                                    "element (in declaration order)");
    std::vector<std::vector<ScalarExpr>> alphas;
    for (const auto& [name, comps] : model.oneforms) alphas.push_back(comps);
    GradedElement H = model.h_element();
    auto rep = check_standard_extension(H, alphas, E);
    RunResult r;
    r.report["schema"] = 1;
    r.report["command"] = "standard-extend";
    r.report["model"] = model.name;
    r.report["status"] = rep.pass() ? "pass" : "fail";
    Json conds;
    conds["restriction_recovers_H"] = rep.restriction;
    Json c2 = Json::array();
    for (size_t a = 0; a < rep.moment.size(); ++a) {
        Json e;
        e["basis"] = (int)a + 1;
        e["residual"] = rep.moment[a].str();
        e["zero"] = rep.moment[a].is_zero();
        c2.push_back(e);
    }
    conds["moment_map"] = Json{{"pass", rep.pass_moment}, {"residuals", c2}};
    Json c3 = Json::array(), c4 = Json::array();
    for (size_t a = 0; a < rep.equivar.size(); ++a)
        for (size_t b = 0; b < rep.equivar[a].size(); ++b) {
            if (!rep.equivar[a][b].is_zero()) {
                Json e;
                e["pair"] = {(int)a + 1, (int)b + 1};
                e["residual"] = rep.equivar[a][b].str();
                c3.push_back(e);
            }
            if (!rep.isotropy[a][b].is_zero()) {
                Json e;
                e["pair"] = {(int)a + 1, (int)b + 1};
                e["residual"] = poly_str(rep.isotropy[a][b], model.coords);
                c4.push_back(e);
            }
        }
    conds["equivariance"] = Json{{"pass", rep.pass_equivar}, {"violations", c3}};
    conds["isotropy"] = Json{{"pass", rep.pass_isotropy}, {"violations", c4}};
    r.report["conditions"] = conds;
    r.report["caveats"] = Json::array();
    if (rep.pass()) {
        std::vector<ScalarExpr> coeffs;
        for (const auto& e : rep.moment)
            for (const auto& c : element_coeffs(e)) coeffs.push_back(c);
        for (const auto& row : rep.isotropy)
            for (const auto& c : row) coeffs.push_back(c);
        r.report["oracle"] = oracle_json(confirm_zero(coeffs, model.dim, opt));
    }
    r.exit_code = rep.pass() ? 0 : 1;
    return r;
}

RunResult run_oracle(const ModelSpec& model, const RunOptions& opt) {
    RunResult r;
    r.report["schema"] = 1;
    r.report["command"] = "oracle";
    r.report["model"] = model.name;
    r.report["samples"] = opt.samples;
    r.report["seed"] = opt.seed;
    Json identities = Json::array();
    bool all = true;
    auto record = [&](const std::string& name, const std::vector<ScalarExpr>& coeffs) {
        OracleResult o = oracle_sample_scalars(coeffs, model.dim, opt.samples, opt.seed);
        Json e;
        e["identity"] = name;
        e["pass"] = o.pass;
        if (!o.pass) e["witness"] = o.witness;
        identities.push_back(e);
        all = all && o.pass;
    };
    if (model.pi) {
        auto res = twisted_poisson_check(*model.pi, model.h_element());
        std::vector<ScalarExpr> coeffs;
        for (const auto& [ix, c] : res.residual.comp) coeffs.push_back(c);
        record("twisted_poisson_residual", coeffs);
    }
    if (model.pi || model.frame || model.oper) {
        DiracSetup s = resolve_dirac(model);
        std::vector<ScalarExpr> iso;
        for (int a = 0; a < s.frame.n; ++a)
            for (int b = a; b < s.frame.n; ++b)
                iso.push_back(pairing(s.frame.secs[a], s.frame.secs[b]));
        record("frame_isotropy", iso);
        GradedElement dH = exterior_d(s.H);
        record("dH_closed", element_coeffs(dH));
    }
    r.report["identities"] = identities;
    r.report["status"] = all ? "pass" : "fail";
    r.exit_code = all ? 0 : 1;
    return r;
}

}  // namespace

RunResult run_command(const ModelSpec& model, const RunOptions& opt) {
    if (opt.command == "check") {
        if (opt.sub == "poisson") return check_poisson(model, opt);
        if (opt.sub == "dirac") return check_dirac(model, opt);
        if (opt.sub == "gjac") return check_gjac(model, opt);
        throw std::invalid_argument("unknown check '" + opt.sub + "'");
    }
    if (opt.command == "symmetries") return run_symmetries(model, opt);
    if (opt.command == "extend") return run_extend(model, opt);
    if (opt.command == "gauge") return run_gauge(model, opt);
    if (opt.command == "standard-extend") return run_standard_extend(model, opt);
    if (opt.command == "oracle") return run_oracle(model, opt);
    throw std::invalid_argument("unknown command '" + opt.command + "'");
}

}  // namespace dsigma
