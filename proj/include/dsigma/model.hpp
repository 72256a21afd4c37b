#pragma once

#include "dsigma/qmanifold.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dsigma {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " (line " + std::to_string(l) + ", column " +
                             std::to_string(c) + ")"),
          line(l), col(c) {}
};

// Parsed model description: base manifold, at most one Dirac-structure
// definition (bivector / explicit frame / orthogonal operator), optional
// 3-form and metric, optional action-algebroid data, solver options.
struct ModelSpec {
    std::string name = "M";
    int dim = 0;
    std::vector<std::string> coords;
    std::optional<Bivector> pi;
    std::optional<Tensor3> h;
    std::optional<PolyMat> metric;
    std::optional<std::pair<PolyMat, ScalarExpr>> oper;  // O = P / q
    std::optional<DiracFrame> frame;
    std::optional<AlgebroidData> algebroid;
    std::vector<std::pair<std::string, std::vector<ScalarExpr>>> oneforms;
    int degree = 2;
    bool assert_orbit_nondegenerate = false;

    Ctx derham() const { return derham_ctx(coords); }
    GradedElement h_element() const {
        Ctx ctx = derham();
        if (!h) return GradedElement(ctx);
        return threeform_element(ctx, *h);
    }
    PolyMat metric_or_identity() const {
        if (metric) return *metric;
        return PolyMat::identity(dim, dim);
    }
    int dirac_sources() const {
        return (pi ? 1 : 0) + (frame ? 1 : 0) + (oper ? 1 : 0);
    }
};

namespace detail_parse {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }
    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++line_;
                colbase_ = ++pos_;
            } else if (isspace((unsigned char)c)) {
                ++pos_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = (int)(pos_ - colbase_) + 1;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::End;
            tok_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (isalpha((unsigned char)c) || c == '_') {
            size_t s = pos_;
            while (pos_ < src_.size() &&
                   (isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Ident;
            tok_.text = src_.substr(s, pos_ - s);
        } else if (isdigit((unsigned char)c)) {
            size_t s = pos_;
            while (pos_ < src_.size() && isdigit((unsigned char)src_[pos_])) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.')
                throw ParseError("floating-point literals are not allowed; use p/q rationals",
                                 tok_.line, tok_.col);
            tok_.kind = Token::Number;
            tok_.text = src_.substr(s, pos_ - s);
        } else {
            tok_.kind = Token::Punct;
            tok_.text = std::string(1, c);
            ++pos_;
        }
    }

    const std::string& src_;
    size_t pos_ = 0;
    size_t colbase_ = 0;
    int line_ = 1;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    ModelSpec parse() {
        ModelSpec m;
        bool have_manifold = false;
        while (lex_.peek().kind != Token::End) {
            Token t = expect(Token::Ident, "declaration keyword");
            if (t.text == "manifold") {
                parse_manifold(m);
                have_manifold = true;
            } else if (!have_manifold) {
                throw ParseError("missing manifold declaration", t.line, t.col);
            } else if (t.text == "bivector") {
                parse_bivector(m);
            } else if (t.text == "threeform") {
                parse_threeform(m);
            } else if (t.text == "metric") {
                parse_metric(m);
            } else if (t.text == "ooperator") {
                parse_ooperator(m);
            } else if (t.text == "frame") {
                parse_frame(m);
            } else if (t.text == "algebroid") {
                parse_algebroid(m);
            } else if (t.text == "oneform") {
                parse_oneform(m);
            } else if (t.text == "degree") {
                Token d = expect(Token::Number, "degree bound");
                m.degree = std::stoi(d.text);
                punct(";");
            } else if (t.text == "assert_orbit_nondegenerate") {
                m.assert_orbit_nondegenerate = true;
                punct(";");
            } else {
                throw ParseError("unknown declaration '" + t.text + "'", t.line, t.col);
            }
        }
        if (!have_manifold)
            throw ParseError("missing manifold declaration", 1, 1);
        if (m.dirac_sources() > 1)
            throw ParseError("bivector, frame and ooperator are mutually exclusive", 1, 1);
        return m;
    }

private:
    Token expect(Token::Kind k, const std::string& what) {
        Token t = lex_.next();
        if (t.kind != k)
            throw ParseError("expected " + what + ", found '" + t.text + "'", t.line, t.col);
        return t;
    }
    void punct(const std::string& p) {
        Token t = lex_.next();
        if (t.kind != Token::Punct || t.text != p)
            throw ParseError("expected '" + p + "', found '" + t.text + "'", t.line, t.col);
    }
    bool accept_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }
    int index1(const ModelSpec& m) {
        Token t = expect(Token::Number, "coordinate index");
        int v = std::stoi(t.text);
        if (v < 1 || v > m.dim)
            throw ParseError("index out of range: " + t.text, t.line, t.col);
        return v - 1;
    }

    void parse_manifold(ModelSpec& m) {
        m.name = expect(Token::Ident, "manifold name").text;
        Token t = expect(Token::Ident, "'dim'");
        if (t.text != "dim") throw ParseError("expected 'dim'", t.line, t.col);
        m.dim = std::stoi(expect(Token::Number, "dimension").text);
        if (m.dim < 1)
            throw ParseError("dimension must be positive", t.line, t.col);
        t = expect(Token::Ident, "'coords'");
        if (t.text != "coords") throw ParseError("expected 'coords'", t.line, t.col);
        while (lex_.peek().kind == Token::Ident)
            m.coords.push_back(lex_.next().text);
        if ((int)m.coords.size() != m.dim)
            throw ParseError("coordinate count does not match dimension", t.line, t.col);
        for (size_t i = 0; i < m.coords.size(); ++i)
            for (size_t j = i + 1; j < m.coords.size(); ++j)
                if (m.coords[i] == m.coords[j])
                    throw ParseError("duplicate coordinate name " + m.coords[i], t.line, t.col);
        punct(";");
    }

    // polynomial expression in the declared coordinates
    ScalarExpr parse_poly(const ModelSpec& m) { return parse_sum(m); }
    ScalarExpr parse_sum(const ModelSpec& m) {
        ScalarExpr e = parse_product(m);
        while (lex_.peek().kind == Token::Punct &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            std::string op = lex_.next().text;
            ScalarExpr rhs = parse_product(m);
            e = op == "+" ? e + rhs : e - rhs;
        }
        return e;
    }
    ScalarExpr parse_product(const ModelSpec& m) {
        ScalarExpr e = parse_factor(m);
        while (lex_.peek().kind == Token::Punct && lex_.peek().text == "*") {
            lex_.next();
            e = e * parse_factor(m);
        }
        return e;
    }
    ScalarExpr parse_factor(const ModelSpec& m) {
        if (accept_punct("-"))
            return -parse_factor(m);
        ScalarExpr base = parse_atom(m);
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == "^") {
            lex_.next();
            Token p = expect(Token::Number, "exponent");
            int k = std::stoi(p.text);
            ScalarExpr r = ScalarExpr::constant(m.dim, 1);
            for (int i = 0; i < k; ++i) r = r * base;
            return r;
        }
        return base;
    }
    ScalarExpr parse_atom(const ModelSpec& m) {
        Token t = lex_.next();
        if (t.kind == Token::Number) {
            Int num(t.text);
            if (lex_.peek().kind == Token::Punct && lex_.peek().text == "/") {
                lex_.next();
                Token d = expect(Token::Number, "denominator");
                return ScalarExpr::constant(m.dim, Rat(num, Int(d.text)));
            }
            return ScalarExpr::constant(m.dim, Rat(num));
        }
        if (t.kind == Token::Ident) {
            int i = -1;
            for (int k = 0; k < m.dim; ++k)
                if (m.coords[k] == t.text) i = k;
            if (i < 0)
                throw ParseError("unknown coordinate '" + t.text + "'", t.line, t.col);
            return ScalarExpr::variable(m.dim, i);
        }
        if (t.kind == Token::Punct && t.text == "(") {
            ScalarExpr e = parse_sum(m);
            punct(")");
            return e;
        }
        throw ParseError("expected polynomial term, found '" + t.text + "'", t.line, t.col);
    }

    void parse_bivector(ModelSpec& m) {
        expect(Token::Ident, "bivector name");
        punct("{");
        Bivector b{PolyMat(m.dim, m.dim, m.dim)};
        std::vector<std::pair<int, int>> seen;
        while (!accept_punct("}")) {
            punct("(");
            Token here = lex_.peek();
            int i = index1(m);
            punct(",");
            int j = index1(m);
            punct(")");
            punct(":");
            ScalarExpr p = parse_poly(m);
            if (i == j)
                throw ParseError("diagonal bivector entry violates antisymmetry", here.line,
                                 here.col);
            for (auto& s : seen)
                if ((s.first == i && s.second == j) || (s.first == j && s.second == i))
                    throw ParseError("duplicate bivector component", here.line, here.col);
            seen.emplace_back(i, j);
            b.pi(i, j) = p;
            b.pi(j, i) = -p;
            if (!accept_punct(",") && lex_.peek().text != "}")
                throw ParseError("expected ',' or '}'", lex_.peek().line, lex_.peek().col);
        }
        punct(";");
        m.pi = std::move(b);
    }

    void parse_threeform(ModelSpec& m) {
        expect(Token::Ident, "threeform name");
        punct("{");
        Tensor3 h;
        h.n = m.dim;
        while (!accept_punct("}")) {
            punct("(");
            Token here = lex_.peek();
            int i = index1(m);
            punct(",");
            int j = index1(m);
            punct(",");
            int k = index1(m);
            punct(")");
            punct(":");
            ScalarExpr p = parse_poly(m);
            if (i == j || j == k || i == k)
                throw ParseError("repeated index in 3-form component", here.line, here.col);
            if (!h.at(i, j, k, m.dim).is_zero())
                throw ParseError("duplicate 3-form component", here.line, here.col);
            // store at sorted indices with the permutation sign
            int a = i, b = j, c = k, sign = 1;
            if (a > b) { std::swap(a, b); sign = -sign; }
            if (b > c) { std::swap(b, c); sign = -sign; }
            if (a > b) { std::swap(a, b); sign = -sign; }
            h.set(a, b, c, sign < 0 ? -p : p);
            if (!accept_punct(",") && lex_.peek().text != "}")
                throw ParseError("expected ',' or '}'", lex_.peek().line, lex_.peek().col);
        }
        punct(";");
        m.h = std::move(h);
    }

    void parse_metric(ModelSpec& m) {
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "identity") {
            lex_.next();
            m.metric = PolyMat::identity(m.dim, m.dim);
            punct(";");
            return;
        }
        punct("{");
        PolyMat g(m.dim, m.dim, m.dim);
        while (!accept_punct("}")) {
            punct("(");
            Token here = lex_.peek();
            int i = index1(m);
            punct(",");
            int j = index1(m);
            punct(")");
            punct(":");
            ScalarExpr p = parse_poly(m);
            if (!p.is_constant())
                throw ParseError("metric entries must be constant", here.line, here.col);
            if (!g(i, j).is_zero())
                throw ParseError("duplicate metric component", here.line, here.col);
            g(i, j) = p;
            g(j, i) = p;
            if (!accept_punct(",") && lex_.peek().text != "}")
                throw ParseError("expected ',' or '}'", lex_.peek().line, lex_.peek().col);
        }
        punct(";");
        m.metric = std::move(g);
    }

    void parse_ooperator(ModelSpec& m) {
        punct("{");
        PolyMat P(m.dim, m.dim, m.dim);
        std::vector<std::pair<int, int>> seen;
        while (!accept_punct("}")) {
            punct("(");
            Token here = lex_.peek();
            int i = index1(m);
            punct(",");
            int j = index1(m);
            punct(")");
            punct(":");
            for (auto& s : seen)
                if (s.first == i && s.second == j)
                    throw ParseError("duplicate operator component", here.line, here.col);
            seen.emplace_back(i, j);
            P(i, j) = parse_poly(m);
            if (!accept_punct(",") && lex_.peek().text != "}")
                throw ParseError("expected ',' or '}'", lex_.peek().line, lex_.peek().col);
        }
        punct(";");
        m.oper = {std::move(P), ScalarExpr::constant(m.dim, 1)};
    }

    void parse_frame(ModelSpec& m) {
        expect(Token::Ident, "frame name");
        punct("{");
        DiracFrame f;
        f.n = m.dim;
        while (!accept_punct("}")) {
            Token t = expect(Token::Ident, "'section'");
            if (t.text != "section")
                throw ParseError("expected 'section'", t.line, t.col);
            punct("{");
            GeneralizedSection s(VectorField(m.dim, m.dim),
                                 std::vector<ScalarExpr>(m.dim, ScalarExpr(m.dim)));
            while (!accept_punct("}")) {
                Token w = expect(Token::Ident, "'v' or 'a'");
                bool isv = w.text == "v";
                if (!isv && w.text != "a")
                    throw ParseError("expected component tag 'v' or 'a'", w.line, w.col);
                punct("(");
                int i = index1(m);
                punct(")");
                punct(":");
                ScalarExpr p = parse_poly(m);
                if (isv)
                    s.v.comp[i] += p;
                else
                    s.alpha[i] += p;
                if (!accept_punct(",") && lex_.peek().text != "}")
                    throw ParseError("expected ',' or '}'", lex_.peek().line, lex_.peek().col);
            }
            f.secs.push_back(std::move(s));
            if (!accept_punct(",") && lex_.peek().text != "}")
                throw ParseError("expected ',' or '}'", lex_.peek().line, lex_.peek().col);
        }
        punct(";");
        if ((int)f.secs.size() != m.dim)
            throw ParseError("frame must have exactly dim sections", 0, 0);
        m.frame = std::move(f);
    }

    void parse_algebroid(ModelSpec& m) {
        expect(Token::Ident, "algebroid name");
        Token t = expect(Token::Ident, "'rank'");
        if (t.text != "rank") throw ParseError("expected 'rank'", t.line, t.col);
        int r = std::stoi(expect(Token::Number, "rank").text);
        if (r < 1) throw ParseError("rank must be positive", t.line, t.col);
        AlgebroidData E;
        E.coords = m.coords;
        E.rank = r;
        E.rho = PolyMat(r, m.dim, m.dim);
        E.C.assign(r, PolyMat(r, r, m.dim));
        punct("{");
        while (!accept_punct("}")) {
            Token w = expect(Token::Ident, "'anchor' or 'structure'");
            if (w.text == "anchor") {
                punct("(");
                Token n = expect(Token::Number, "basis index");
                int a = std::stoi(n.text);
                if (a < 1 || a > r)
                    throw ParseError("basis index out of range", n.line, n.col);
                punct(",");
                int i = index1(m);
                punct(")");
                punct(":");
                E.rho(a - 1, i) = parse_poly(m);
            } else if (w.text == "structure") {
                punct("(");
                auto idx = [&]() {
                    Token n = expect(Token::Number, "basis index");
                    int v = std::stoi(n.text);
                    if (v < 1 || v > r)
                        throw ParseError("basis index out of range", n.line, n.col);
                    return v - 1;
                };
                int c = idx();
                punct(",");
                int a = idx();
                punct(",");
                int b = idx();
                punct(")");
                punct(":");
                ScalarExpr p = parse_poly(m);
                if (a == b)
                    throw ParseError("structure functions are antisymmetric", w.line, w.col);
                E.C[c](a, b) = p;
                E.C[c](b, a) = -p;
            } else {
                throw ParseError("expected 'anchor' or 'structure'", w.line, w.col);
            }
            if (!accept_punct(",") && lex_.peek().text != "}")
                throw ParseError("expected ',' or '}'", lex_.peek().line, lex_.peek().col);
        }
        punct(";");
        m.algebroid = std::move(E);
    }

    void parse_oneform(ModelSpec& m) {
        std::string name = expect(Token::Ident, "oneform name").text;
        punct("{");
        std::vector<ScalarExpr> comps(m.dim, ScalarExpr(m.dim));
        while (!accept_punct("}")) {
            punct("(");
            Token here = lex_.peek();
            int i = index1(m);
            punct(")");
            punct(":");
            if (!comps[i].is_zero())
                throw ParseError("duplicate one-form component", here.line, here.col);
            comps[i] = parse_poly(m);
            if (!accept_punct(",") && lex_.peek().text != "}")
                throw ParseError("expected ',' or '}'", lex_.peek().line, lex_.peek().col);
        }
        punct(";");
        m.oneforms.emplace_back(name, std::move(comps));
    }

    Lexer lex_;
};

}  // namespace detail_parse

inline ModelSpec parse_model(const std::string& text) {
    detail_parse::Parser p(text);
    return p.parse();
}

// Canonical rendering; parse(render(m)) reproduces the model exactly.
inline std::string render_model(const ModelSpec& m) {
    std::ostringstream os;
    os << "manifold " << m.name << " dim " << m.dim << " coords";
    for (const auto& c : m.coords) os << " " << c;
    os << ";\n";
    auto poly = [&](const ScalarExpr& p) { return p.str(m.coords); };
    if (m.pi) {
        os << "bivector Pi {";
        bool first = true;
        for (int i = 0; i < m.dim; ++i)
            for (int j = i + 1; j < m.dim; ++j)
                if (!m.pi->pi(i, j).is_zero()) {
                    os << (first ? " " : ", ") << "(" << i + 1 << "," << j + 1
                       << "): " << poly(m.pi->pi(i, j));
                    first = false;
                }
        os << " };\n";
    }
    if (m.h) {
        os << "threeform H {";
        bool first = true;
        for (const auto& [ix, c] : m.h->comp)
            if (!c.is_zero()) {
                os << (first ? " " : ", ") << "(" << ix[0] + 1 << "," << ix[1] + 1 << ","
                   << ix[2] + 1 << "): " << poly(c);
                first = false;
            }
        os << " };\n";
    }
    if (m.metric) {
        os << "metric {";
        bool first = true;
        for (int i = 0; i < m.dim; ++i)
            for (int j = i; j < m.dim; ++j)
                if (!(*m.metric)(i, j).is_zero()) {
                    os << (first ? " " : ", ") << "(" << i + 1 << "," << j + 1
                       << "): " << poly((*m.metric)(i, j));
                    first = false;
                }
        os << " };\n";
    }
    if (m.oper) {
        os << "ooperator {";
        bool first = true;
        for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j)
                if (!m.oper->first(i, j).is_zero()) {
                    os << (first ? " " : ", ") << "(" << i + 1 << "," << j + 1
                       << "): " << poly(m.oper->first(i, j));
                    first = false;
                }
        os << " };\n";
    }
    if (m.frame) {
        os << "frame D {";
        for (size_t a = 0; a < m.frame->secs.size(); ++a) {
            os << (a ? ", " : " ") << "section {";
            bool first = true;
            for (int i = 0; i < m.dim; ++i)
                if (!m.frame->secs[a].v.comp[i].is_zero()) {
                    os << (first ? " " : ", ") << "v(" << i + 1
                       << "): " << poly(m.frame->secs[a].v.comp[i]);
                    first = false;
                }
            for (int i = 0; i < m.dim; ++i)
                if (!m.frame->secs[a].alpha[i].is_zero()) {
                    os << (first ? " " : ", ") << "a(" << i + 1
                       << "): " << poly(m.frame->secs[a].alpha[i]);
                    first = false;
                }
            os << " }";
        }
        os << " };\n";
    }
    if (m.algebroid) {
        os << "algebroid E rank " << m.algebroid->rank << " {";
        bool first = true;
        for (int a = 0; a < m.algebroid->rank; ++a)
            for (int i = 0; i < m.dim; ++i)
                if (!m.algebroid->rho(a, i).is_zero()) {
                    os << (first ? " " : ", ") << "anchor(" << a + 1 << "," << i + 1
                       << "): " << poly(m.algebroid->rho(a, i));
                    first = false;
                }
        for (int c = 0; c < m.algebroid->rank; ++c)
            for (int a = 0; a < m.algebroid->rank; ++a)
                for (int b = a + 1; b < m.algebroid->rank; ++b)
                    if (!m.algebroid->C[c](a, b).is_zero()) {
                        os << (first ? " " : ", ") << "structure(" << c + 1 << "," << a + 1 << ","
                           << b + 1 << "): " << poly(m.algebroid->C[c](a, b));
                        first = false;
                    }
        os << " };\n";
    }
    for (const auto& [name, comps] : m.oneforms) {
        os << "oneform " << name << " {";
        bool first = true;
        for (int i = 0; i < m.dim; ++i)
            if (!comps[i].is_zero()) {
                os << (first ? " " : ", ") << "(" << i + 1 << "): " << poly(comps[i]);
                first = false;
            }
        os << " };\n";
    }
    os << "degree " << m.degree << ";\n";
    if (m.assert_orbit_nondegenerate)
        os << "assert_orbit_nondegenerate;\n";
    return os.str();
}

}  // namespace dsigma
