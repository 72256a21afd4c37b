#pragma once

#include "dsigma/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsigma {

// Multivariate polynomial over exact rationals.  The coefficient ring of
// everything in this library.  Variables are indexed; names live elsewhere.
class ScalarExpr {
public:
    using Exps = std::vector<unsigned>;

    ScalarExpr() : nvars_(0) {}
    explicit ScalarExpr(int nvars) : nvars_(nvars) {}

    static ScalarExpr constant(int nvars, const Rat& c) {
        ScalarExpr p(nvars);
        if (c != 0)
            p.terms_[Exps(nvars, 0)] = c;
        return p;
    }
    static ScalarExpr variable(int nvars, int i, unsigned pow = 1) {
        if (i < 0 || i >= nvars)
            throw std::out_of_range("variable index");
        ScalarExpr p(nvars);
        Exps e(nvars, 0);
        e[i] = pow;
        p.terms_[e] = 1;
        return p;
    }
    static ScalarExpr monomial(int nvars, const Exps& e, const Rat& c) {
        ScalarExpr p(nvars);
        if (c != 0)
            p.terms_[e] = c;
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_deg(terms_.begin()->first) == 0);
    }
    Rat constant_value() const {
        if (terms_.empty()) return 0;
        if (!is_constant()) throw std::logic_error("not a constant polynomial");
        return terms_.begin()->second;
    }
    const std::map<Exps, Rat>& terms() const { return terms_; }

    // Total degree; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, (int)total_deg(e));
        return d;
    }

    ScalarExpr operator-() const {
        ScalarExpr r(nvars_);
        for (const auto& [e, c] : terms_)
            r.terms_[e] = -c;
        return r;
    }
    ScalarExpr& operator+=(const ScalarExpr& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) {
            auto it = terms_.find(e);
            if (it == terms_.end()) {
                terms_.emplace(e, c);
            } else {
                it->second += c;
                if (it->second == 0)
                    terms_.erase(it);
            }
        }
        return *this;
    }
    ScalarExpr& operator-=(const ScalarExpr& o) { return *this += -o; }
    friend ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
    friend ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }

    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
        a.check(b);
        ScalarExpr r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exps e(a.nvars_);
                for (int i = 0; i < a.nvars_; ++i)
                    e[i] = ea[i] + eb[i];
                auto it = r.terms_.find(e);
                if (it == r.terms_.end()) {
                    Rat c = ca * cb;
                    if (c != 0)
                        r.terms_.emplace(std::move(e), std::move(c));
                } else {
                    it->second += ca * cb;
                    if (it->second == 0)
                        r.terms_.erase(it);
                }
            }
        return r;
    }
    ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }

    ScalarExpr scaled(const Rat& c) const {
        ScalarExpr r(nvars_);
        if (c == 0) return r;
        for (const auto& [e, k] : terms_)
            r.terms_[e] = k * c;
        return r;
    }

    bool operator==(const ScalarExpr& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const ScalarExpr& o) const { return !(*this == o); }
    bool operator<(const ScalarExpr& o) const { return terms_ < o.terms_; }

    ScalarExpr derivative(int var) const {
        ScalarExpr r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exps d = e;
            d[var] -= 1;
            r.terms_[d] = c * e[var];
        }
        return r;
    }

    // Embed into a polynomial ring with more variables (same leading indices).
    ScalarExpr extended(int nvars) const {
        if (nvars == nvars_) return *this;
        if (nvars < nvars_) throw std::logic_error("cannot shrink variable set");
        ScalarExpr r(nvars);
        for (const auto& [e, c] : terms_) {
            Exps x(nvars, 0);
            for (int i = 0; i < nvars_; ++i) x[i] = e[i];
            r.terms_[std::move(x)] = c;
        }
        return r;
    }

    Rat eval(const std::vector<Rat>& pt) const {
        if ((int)pt.size() != nvars_) throw std::logic_error("eval arity mismatch");
        Rat acc = 0;
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (int i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k)
                    t *= pt[i];
            acc += t;
        }
        return acc;
    }

    // Substitute variable i by the value of another polynomial of the same arity.
    ScalarExpr substitute(int var, const ScalarExpr& val) const {
        check(val);
        ScalarExpr r(nvars_);
        for (const auto& [e, c] : terms_) {
            Exps rest = e;
            rest[var] = 0;
            ScalarExpr t = monomial(nvars_, rest, c);
            for (unsigned k = 0; k < e[var]; ++k)
                t = t * val;
            r += t;
        }
        return r;
    }

    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rat a = c;
            if (first) {
                if (a < 0) { out += "-"; a = -a; }
            } else {
                out += a < 0 ? " - " : " + ";
                if (a < 0) a = -a;
            }
            first = false;
            std::string mono;
            for (int i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += i < (int)names.size() ? names[i] : ("v" + std::to_string(i));
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty()) {
                out += rat_str(a);
            } else {
                if (a != 1) out += rat_str(a) + "*";
                out += mono;
            }
        }
        return out;
    }

private:
    static unsigned total_deg(const Exps& e) {
        unsigned d = 0;
        for (unsigned k : e) d += k;
        return d;
    }
    void check(const ScalarExpr& o) const {
        if (nvars_ != o.nvars_)
            throw std::logic_error("polynomial arity mismatch");
    }

    int nvars_;
    std::map<Exps, Rat> terms_;
};

}  // namespace dsigma
