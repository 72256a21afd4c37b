#pragma once

#include "dsigma/element.hpp"

#include <random>
#include <string>
#include <vector>

namespace dsigma {

struct OracleResult {
    bool pass = true;
    int samples = 0;
    uint64_t seed = 0;
    std::string witness;
};

// Numeric cross-check of a symbolic zero claim: evaluate every scalar
// coefficient at K pseudo-random rational points (denominators <= 97).
// A symbolic zero failing here is a kernel bug by definition.
inline OracleResult oracle_sample_scalars(const std::vector<ScalarExpr>& coeffs, int nvars, int K,
                                          uint64_t seed) {
    OracleResult res;
    res.samples = K;
    res.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-97, 97), den(1, 97);
    for (int s = 0; s < K; ++s) {
        std::vector<Rat> pt;
        for (int i = 0; i < nvars; ++i)
            pt.emplace_back(num(rng), den(rng));
        for (const auto& c : coeffs) {
            std::vector<Rat> use(pt.begin(), pt.begin() + std::min<size_t>(c.nvars(), pt.size()));
            while ((int)use.size() < c.nvars()) use.emplace_back(0);
            if (c.eval(use) != 0) {
                res.pass = false;
                res.witness = "nonzero value at sample " + std::to_string(s);
                return res;
            }
        }
    }
    return res;
}

inline OracleResult oracle_sample(const GradedElement& claimed_zero, int K, uint64_t seed) {
    std::vector<ScalarExpr> coeffs;
    for (const auto& [m, c] : claimed_zero.terms())
        coeffs.push_back(c);
    return oracle_sample_scalars(coeffs, claimed_zero.nscalars(), K, seed);
}

}  // namespace dsigma
