#pragma once

#include "dsigma/rational.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace dsigma {

// Sparse row: sorted (column, coefficient) pairs, no zeros.
using SparseRow = std::vector<std::pair<int, Rat>>;

// Incremental exact Gaussian elimination over Q.  Rows are reduced against
// the current pivot set as they arrive; finalize() back-substitutes to RREF.
// Deterministic: pivots are always the leftmost columns.
class LinSystem {
public:
    explicit LinSystem(int ncols) : ncols_(ncols) {}

    int ncols() const { return ncols_; }
    int rank() const { return (int)rows_.size(); }
    bool inconsistent() const { return inconsistent_; }

    void add_row(SparseRow r, Rat rhs = Rat(0)) {
        reduce(r, rhs);
        if (r.empty()) {
            if (rhs != 0)
                inconsistent_ = true;
            return;
        }
        const Rat lead = r.front().second;
        const int pivot = r.front().first;
        for (auto& [c, v] : r) v /= lead;
        rhs /= lead;
        rows_.emplace(pivot, Row{std::move(r), std::move(rhs)});
        finalized_ = false;
    }

    // Reduce to RREF (each pivot column appears in exactly one row).
    void finalize() {
        if (finalized_) return;
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            for (auto jt = rows_.begin(); jt != rows_.end(); ++jt) {
                if (jt->first == it->first) break;
                Rat c = coeff(jt->second.e, it->first);
                if (c != 0)
                    axpy(jt->second, -c, it->second);
            }
        }
        finalized_ = true;
    }

    bool is_pivot(int col) const { return rows_.count(col) > 0; }

    std::vector<int> free_columns() const {
        std::vector<int> f;
        for (int c = 0; c < ncols_; ++c)
            if (!rows_.count(c)) f.push_back(c);
        return f;
    }

    // Basis of the homogeneous solution space, one vector per free column,
    // in ascending free-column order (reduced echelon normalization).
    std::vector<std::vector<Rat>> nullspace_basis() {
        finalize();
        std::vector<std::vector<Rat>> out;
        for (int f : free_columns()) {
            std::vector<Rat> v(ncols_, Rat(0));
            v[f] = 1;
            for (const auto& [p, row] : rows_) {
                Rat c = coeff(row.e, f);
                if (c != 0) v[p] = -c;
            }
            out.push_back(std::move(v));
        }
        return out;
    }

    // Particular solution with all free variables set to zero.
    // Only valid when consistent.
    std::vector<Rat> particular() {
        finalize();
        std::vector<Rat> v(ncols_, Rat(0));
        for (const auto& [p, row] : rows_)
            v[p] = row.rhs;
        return v;
    }

    // Residual check helper: evaluate a stored original row against a vector.
    static Rat dot(const SparseRow& r, const std::vector<Rat>& v) {
        Rat s = 0;
        for (const auto& [c, k] : r) s += k * v[c];
        return s;
    }

private:
    struct Row {
        SparseRow e;  // normalized, e.front() is the pivot with coefficient 1
        Rat rhs;
    };

    static Rat coeff(const SparseRow& r, int col) {
        auto it = std::lower_bound(r.begin(), r.end(), col,
                                   [](const auto& p, int c) { return p.first < c; });
        return (it != r.end() && it->first == col) ? it->second : Rat(0);
    }

    // target += c * src (rows kept sorted, zero-pruned), rhs too.
    static void axpy(Row& target, const Rat& c, const Row& src) {
        SparseRow merged;
        merged.reserve(target.e.size() + src.e.size());
        auto a = target.e.begin();
        auto b = src.e.begin();
        while (a != target.e.end() || b != src.e.end()) {
            if (b == src.e.end() || (a != target.e.end() && a->first < b->first)) {
                merged.push_back(*a++);
            } else if (a == target.e.end() || b->first < a->first) {
                Rat v = c * b->second;
                if (v != 0) merged.emplace_back(b->first, std::move(v));
                ++b;
            } else {
                Rat v = a->second + c * b->second;
                if (v != 0) merged.emplace_back(a->first, std::move(v));
                ++a;
                ++b;
            }
        }
        target.e = std::move(merged);
        target.rhs += c * src.rhs;
    }

    void reduce(SparseRow& r, Rat& rhs) const {
        while (!r.empty()) {
            auto it = rows_.find(r.front().first);
            if (it == rows_.end()) return;
            Rat c = -r.front().second;
            // r += c * pivot row
            SparseRow merged;
            merged.reserve(r.size() + it->second.e.size());
            auto a = r.begin();
            auto b = it->second.e.begin();
            while (a != r.end() || b != it->second.e.end()) {
                if (b == it->second.e.end() || (a != r.end() && a->first < b->first)) {
                    merged.push_back(*a++);
                } else if (a == r.end() || b->first < a->first) {
                    Rat v = c * b->second;
                    if (v != 0) merged.emplace_back(b->first, std::move(v));
                    ++b;
                } else {
                    Rat v = a->second + c * b->second;
                    if (v != 0) merged.emplace_back(a->first, std::move(v));
                    ++a;
                    ++b;
                }
            }
            r = std::move(merged);
            rhs += c * it->second.rhs;
        }
    }

    int ncols_;
    std::map<int, Row> rows_;  // pivot column -> row
    bool inconsistent_ = false;
    bool finalized_ = false;
};

}  // namespace dsigma
