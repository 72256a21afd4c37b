#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsigma {

// A generator of a graded-commutative algebra, carrying the Z x Z bidegree
// (ghost degree, form degree).  Parity is the total degree mod 2; odd
// generators square to zero, even ones commute and admit powers.
struct Generator {
    std::string name;
    int ghost = 0;
    int form = 0;

    int degree() const { return ghost + form; }
    int parity() const { return (ghost + form) & 1; }
    bool operator==(const Generator& o) const {
        return name == o.name && ghost == o.ghost && form == o.form;
    }
};

// Base coordinates (bidegree (0,0)) plus an ordered generator list.  The
// generator order is global: all Koszul signs are relative to it.
class GradedContext {
public:
    GradedContext(std::vector<std::string> coords, std::vector<Generator> gens)
        : coords_(std::move(coords)), gens_(std::move(gens)),
          coord_d_(coords_.size(), -1), gen_d_(gens_.size(), kNoDifferential) {
        for (size_t i = 0; i < gens_.size(); ++i)
            for (size_t j = i + 1; j < gens_.size(); ++j)
                if (gens_[i].name == gens_[j].name)
                    throw std::invalid_argument("duplicate generator name: " + gens_[i].name);
    }

    static constexpr int kZeroDifferential = -1;   // d(gen) = 0
    static constexpr int kNoDifferential = -2;     // d(gen) undefined in this context

    int ncoords() const { return (int)coords_.size(); }
    int ngens() const { return (int)gens_.size(); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<Generator>& gens() const { return gens_; }
    const Generator& gen(int i) const { return gens_.at(i); }
    const std::string& coord(int i) const { return coords_.at(i); }

    int coord_index(const std::string& name) const {
        for (int i = 0; i < ncoords(); ++i)
            if (coords_[i] == name) return i;
        return -1;
    }
    int gen_index(const std::string& name) const {
        for (int i = 0; i < ngens(); ++i)
            if (gens_[i].name == name) return i;
        return -1;
    }

    // Differential structure: d(coord i) = generator coord_d[i] (or undefined),
    // d(gen g) = generator gen_d[g], zero, or undefined.
    void set_coord_d(int coord, int gen) { coord_d_.at(coord) = gen; }
    void set_gen_d(int g, int image) { gen_d_.at(g) = image; }
    int coord_d(int i) const { return coord_d_.at(i); }
    int gen_d(int g) const { return gen_d_.at(g); }
    bool has_full_d() const {
        for (int v : coord_d_)
            if (v < 0) return false;
        for (int v : gen_d_)
            if (v == kNoDifferential) return false;
        return true;
    }

    bool operator==(const GradedContext& o) const {
        return coords_ == o.coords_ && gens_ == o.gens_ && coord_d_ == o.coord_d_ &&
               gen_d_ == o.gen_d_;
    }

private:
    std::vector<std::string> coords_;
    std::vector<Generator> gens_;
    std::vector<int> coord_d_;
    std::vector<int> gen_d_;
};

using Ctx = std::shared_ptr<const GradedContext>;

inline bool same_ctx(const Ctx& a, const Ctx& b) {
    return a == b || (a && b && *a == *b);
}

// de Rham context on R^n: coordinates plus their differentials d<coord>.
inline Ctx derham_ctx(const std::vector<std::string>& coords) {
    std::vector<Generator> gens;
    for (const auto& c : coords)
        gens.push_back({"d" + c, 0, 1});
    auto ctx = std::make_shared<GradedContext>(coords, gens);
    for (int i = 0; i < ctx->ncoords(); ++i)
        ctx->set_coord_d(i, i);
    for (int g = 0; g < ctx->ngens(); ++g)
        ctx->set_gen_d(g, GradedContext::kZeroDifferential);
    return ctx;
}

// E[1]: base coordinates and rank-r degree-(1,0) fiber generators eta_a.
// No differentials; the de Rham d does not live here.
inline Ctx algebroid_ctx(const std::vector<std::string>& coords, int rank) {
    std::vector<Generator> gens;
    for (int a = 1; a <= rank; ++a)
        gens.push_back({"eta" + std::to_string(a), 1, 0});
    return std::make_shared<GradedContext>(coords, gens);
}

// T[1]E[1]: theta^i = dx^i (0,1), eta^a (1,0), psi^a = d eta^a (1,1),
// in that global order.
inline Ctx lifted_ctx(const std::vector<std::string>& coords, int rank) {
    std::vector<Generator> gens;
    const int n = (int)coords.size();
    for (const auto& c : coords)
        gens.push_back({"d" + c, 0, 1});
    for (int a = 1; a <= rank; ++a)
        gens.push_back({"eta" + std::to_string(a), 1, 0});
    for (int a = 1; a <= rank; ++a)
        gens.push_back({"deta" + std::to_string(a), 1, 1});
    auto ctx = std::make_shared<GradedContext>(coords, gens);
    for (int i = 0; i < n; ++i)
        ctx->set_coord_d(i, i);
    for (int i = 0; i < n; ++i)
        ctx->set_gen_d(i, GradedContext::kZeroDifferential);
    for (int a = 0; a < rank; ++a) {
        ctx->set_gen_d(n + a, n + rank + a);
        ctx->set_gen_d(n + rank + a, GradedContext::kZeroDifferential);
    }
    return ctx;
}

// Free worldsheet field algebra: scalars X^i as coordinates, gauge fields
// A_a and the differentials dX^i, dA_a as generators.  Gauge fields come
// first in the order so the emitted integrands read A ^ dX.
inline Ctx worldsheet_ctx(int n, int rank) {
    std::vector<std::string> coords;
    for (int i = 1; i <= n; ++i)
        coords.push_back("X" + std::to_string(i));
    std::vector<Generator> gens;
    for (int a = 1; a <= rank; ++a)
        gens.push_back({"A" + std::to_string(a), 0, 1});
    for (int i = 1; i <= n; ++i)
        gens.push_back({"dX" + std::to_string(i), 0, 1});
    for (int a = 1; a <= rank; ++a)
        gens.push_back({"dA" + std::to_string(a), 0, 2});
    auto ctx = std::make_shared<GradedContext>(coords, gens);
    for (int i = 0; i < n; ++i)
        ctx->set_coord_d(i, rank + i);
    for (int a = 0; a < rank; ++a) {
        ctx->set_gen_d(a, rank + n + a);
        ctx->set_gen_d(rank + n + a, GradedContext::kZeroDifferential);
    }
    for (int i = 0; i < n; ++i)
        ctx->set_gen_d(rank + i, GradedContext::kZeroDifferential);
    return ctx;
}

}  // namespace dsigma
