#include "dsigma/engine.hpp"

#include <functional>
#include <sstream>

namespace dsigma {

namespace {

// One flattened term: exact rational coefficient plus the list of factors
// (coordinate powers first, then generators in context order).
void flatten(const GradedElement& e, const std::function<void(const Rat&, const std::vector<std::pair<std::string, unsigned>>&)>& sink) {
    const Ctx& ctx = e.ctx();
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [exp, k] : c.terms()) {
            std::vector<std::pair<std::string, unsigned>> factors;
            for (int i = 0; i < ctx->ncoords(); ++i)
                if (exp[i]) factors.emplace_back(ctx->coord(i), exp[i]);
            for (int g = 0; g < ctx->ngens(); ++g)
                if (m[g]) factors.emplace_back(ctx->gen(g).name, m[g]);
            sink(k, factors);
        }
    }
}

Json terms_json(const GradedElement& e) {
    Json out = Json::array();
    flatten(e, [&](const Rat& k, const std::vector<std::pair<std::string, unsigned>>& factors) {
        Json mono = Json::array();
        for (const auto& [name, pow] : factors)
            mono.push_back(pow == 1 ? name : name + "^" + std::to_string(pow));
        out.push_back(Json::array({rat_str(k), mono}));
    });
    return out;
}

std::string latex_name(const std::string& name) {
    auto tail = [](const std::string& s, size_t k) { return s.substr(k); };
    if (name.rfind("dX", 0) == 0) return "d X^" + tail(name, 2);
    if (name.rfind("dA", 0) == 0) return "d A_" + tail(name, 2);
    if (name.rfind("cA", 0) == 0) return "\\mathcal{A}^" + tail(name, 2);
    if (name.rfind("X", 0) == 0) return "X^" + tail(name, 1);
    if (name.rfind("A", 0) == 0) return "A_" + tail(name, 1);
    return name;
}

bool is_form_factor(const std::string& name) {
    return name.rfind("dX", 0) == 0 || name.rfind("dA", 0) == 0 || name.rfind("cA", 0) == 0 ||
           name.rfind("A", 0) == 0;
}

std::string latex_terms(const GradedElement& e) {
    std::ostringstream os;
    bool first = true;
    flatten(e, [&](const Rat& k, const std::vector<std::pair<std::string, unsigned>>& factors) {
        Rat a = k;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        std::string scalars, forms;
        for (const auto& [name, pow] : factors) {
            std::string f = latex_name(name);
            if (is_form_factor(name)) {
                for (unsigned p = 0; p < pow; ++p) {
                    if (!forms.empty()) forms += " \\wedge ";
                    forms += f;
                }
            } else {
                if (!scalars.empty()) scalars += " ";
                scalars += pow == 1 ? f : "(" + f + ")^{" + std::to_string(pow) + "}";
            }
        }
        if (a != 1 || (scalars.empty() && forms.empty())) {
            if (denominator(a) == 1)
                os << numerator(a).str();
            else
                os << "\\frac{" << numerator(a).str() << "}{" << denominator(a).str() << "}";
            if (!scalars.empty() || !forms.empty()) os << " ";
        }
        os << scalars;
        if (!scalars.empty() && !forms.empty()) os << " \\, ";
        os << forms;
    });
    if (first) os << "0";
    return os.str();
}

}  // namespace

Json action_json(const ActionExpression& a, bool has_wz) {
    const Ctx& ctx = a.boundary.ctx();
    Json fields;
    int nX = ctx->ncoords();
    int nA = 0, ncA = 0;
    for (int g = 0; g < ctx->ngens(); ++g) {
        const std::string& n = ctx->gen(g).name;
        if (n.rfind("cA", 0) == 0) ++ncA;
        else if (n[0] == 'A') ++nA;
    }
    fields["X"] = nX;
    if (nA) fields["A"] = nA;
    if (ncA) fields["cA"] = ncA;
    Json j;
    j["fields"] = fields;
    j["boundary"] = terms_json(a.boundary);
    j["bulk"] = terms_json(a.bulk);
    j["wess_zumino"] = has_wz;
    return j;
}

ActionExpression action_from_json(const Json& j) {
    const Json& fields = j.at("fields");
    int n = fields.at("X").get<int>();
    Ctx ctx;
    if (fields.contains("cA"))
        ctx = dsm_ctx(n);
    else
        ctx = worldsheet_ctx(n, fields.contains("A") ? fields.at("A").get<int>() : 0);
    auto read = [&](const Json& terms) {
        GradedElement e(ctx);
        for (const auto& t : terms) {
            Rat coef = rat_parse(t.at(0).get<std::string>());
            ScalarExpr sc = ScalarExpr::constant(ctx->ncoords(), coef);
            GenMono m(ctx->ngens(), 0);
            for (const auto& fj : t.at(1)) {
                std::string f = fj.get<std::string>();
                unsigned pow = 1;
                auto caret = f.find('^');
                if (caret != std::string::npos) {
                    pow = (unsigned)std::stoul(f.substr(caret + 1));
                    f = f.substr(0, caret);
                }
                int ci = ctx->coord_index(f);
                if (ci >= 0) {
                    sc = sc * ScalarExpr::variable(ctx->ncoords(), ci, pow);
                    continue;
                }
                int gi = ctx->gen_index(f);
                if (gi < 0)
                    throw std::invalid_argument("unknown field in action JSON: " + f);
                m[gi] = (uint8_t)(m[gi] + pow);
            }
            GradedElement term(ctx);
            term.set_term(m, sc);
            e += term;
        }
        return e;
    };
    return {read(j.at("boundary")), read(j.at("bulk"))};
}

std::string action_latex(const ActionExpression& a, bool has_wz) {
    std::ostringstream os;
    os << "S = \\int_{\\Sigma} " << latex_terms(a.boundary);
    if (has_wz)
        os << " \\; + \\; \\int_{\\tilde{\\Sigma}} \\tilde{X}^{*} H";
    os << "\n";
    return os.str();
}

}  // namespace dsigma
