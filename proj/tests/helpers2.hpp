#pragma once

#include "helpers.hpp"

namespace tests {

// Random parity-consistent graded derivation: every generator image has the
// parity of the generator shifted by the derivation's parity.
inline Derivation rderivation(std::mt19937_64& rng, const Ctx& ctx, int parity) {
    Derivation D(ctx, parity, 0);
    auto pick_image = [&](int src_parity) {
        GradedElement full = relement(rng, ctx, 3, 1);
        GradedElement out(ctx);
        for (const auto& [m, c] : full.terms())
            if (GradedElement::mono_parity(ctx, m) == ((src_parity + parity) & 1))
                out.set_term(m, c);
        return out;
    };
    for (int i = 0; i < ctx->ncoords(); ++i)
        D.coord_img[i] = pick_image(0);
    for (int g = 0; g < ctx->ngens(); ++g)
        D.gen_img[g] = pick_image(ctx->gen(g).parity());
    return D;
}

}  // namespace tests
