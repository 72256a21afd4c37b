#pragma once

#include "dsigma/scalar.hpp"

#include <stdexcept>
#include <vector>

namespace dsigma {

// Small dense matrices with polynomial entries; enough exact linear algebra
// for the operator manipulations here (n <= 4 in practice).
struct PolyMat {
    std::vector<std::vector<ScalarExpr>> m;

    PolyMat() = default;
    PolyMat(int rows, int cols, int nvars)
        : m(rows, std::vector<ScalarExpr>(cols, ScalarExpr(nvars))) {}
    static PolyMat identity(int n, int nvars) {
        PolyMat r(n, n, nvars);
        for (int i = 0; i < n; ++i)
            r.m[i][i] = ScalarExpr::constant(nvars, 1);
        return r;
    }

    int rows() const { return (int)m.size(); }
    int cols() const { return m.empty() ? 0 : (int)m[0].size(); }
    ScalarExpr& operator()(int i, int j) { return m[i][j]; }
    const ScalarExpr& operator()(int i, int j) const { return m[i][j]; }

    bool is_zero() const {
        for (const auto& row : m)
            for (const auto& e : row)
                if (!e.is_zero()) return false;
        return true;
    }
    bool is_constant() const {
        for (const auto& row : m)
            for (const auto& e : row)
                if (!e.is_constant()) return false;
        return true;
    }

    PolyMat operator-() const {
        PolyMat r = *this;
        for (auto& row : r.m)
            for (auto& e : row) e = -e;
        return r;
    }
    friend PolyMat operator+(const PolyMat& a, const PolyMat& b) {
        PolyMat r = a;
        for (int i = 0; i < r.rows(); ++i)
            for (int j = 0; j < r.cols(); ++j) r.m[i][j] += b.m[i][j];
        return r;
    }
    friend PolyMat operator-(const PolyMat& a, const PolyMat& b) { return a + (-b); }
    friend PolyMat operator*(const PolyMat& a, const PolyMat& b) {
        if (a.cols() != b.rows())
            throw std::logic_error("matrix shape mismatch");
        int nv = a.rows() && a.cols() ? a.m[0][0].nvars() : 0;
        PolyMat r(a.rows(), b.cols(), nv);
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j)
                for (int k = 0; k < a.cols(); ++k)
                    r.m[i][j] += a.m[i][k] * b.m[k][j];
        return r;
    }
    PolyMat transposed() const {
        PolyMat r(cols(), rows(), rows() && cols() ? m[0][0].nvars() : 0);
        for (int i = 0; i < rows(); ++i)
            for (int j = 0; j < cols(); ++j) r.m[j][i] = m[i][j];
        return r;
    }
    PolyMat scaled(const ScalarExpr& c) const {
        PolyMat r = *this;
        for (auto& row : r.m)
            for (auto& e : row) e = e * c;
        return r;
    }
    bool operator==(const PolyMat& o) const { return m == o.m; }
};

inline ScalarExpr det(const PolyMat& a) {
    const int n = a.rows();
    if (n != a.cols())
        throw std::logic_error("determinant of non-square matrix");
    if (n == 0) return ScalarExpr::constant(0, 1);
    if (n == 1) return a(0, 0);
    const int nv = a(0, 0).nvars();
    ScalarExpr s(nv);
    for (int j = 0; j < n; ++j) {
        if (a(0, j).is_zero()) continue;
        PolyMat minor(n - 1, n - 1, nv);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = a(r, c);
            }
        }
        ScalarExpr t = a(0, j) * det(minor);
        s += (j % 2) ? -t : t;
    }
    return s;
}

inline PolyMat adjugate(const PolyMat& a) {
    const int n = a.rows();
    const int nv = a(0, 0).nvars();
    PolyMat adj(n, n, nv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            PolyMat minor(n - 1, n - 1, nv);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = a(r, c);
                }
                ++rr;
            }
            ScalarExpr cof = n == 1 ? ScalarExpr::constant(nv, 1) : det(minor);
            adj(j, i) = ((i + j) % 2) ? -cof : cof;
        }
    return adj;
}

// Quotient of polynomials with exact equality testing (cross-multiplication).
// Internal helper only; the public coefficient ring stays polynomial.
struct PolyFrac {
    ScalarExpr num, den;

    PolyFrac() = default;
    explicit PolyFrac(const ScalarExpr& n)
        : num(n), den(ScalarExpr::constant(n.nvars(), 1)) {}
    PolyFrac(ScalarExpr n, ScalarExpr d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero())
            throw std::logic_error("zero denominator");
    }

    bool is_zero() const { return num.is_zero(); }
    PolyFrac operator-() const { return {-num, den}; }
    friend PolyFrac operator+(const PolyFrac& a, const PolyFrac& b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend PolyFrac operator-(const PolyFrac& a, const PolyFrac& b) { return a + (-b); }
    friend PolyFrac operator*(const PolyFrac& a, const PolyFrac& b) {
        return {a.num * b.num, a.den * b.den};
    }
    bool operator==(const PolyFrac& o) const {
        return (num * o.den - o.num * den).is_zero();
    }
};

}  // namespace dsigma
