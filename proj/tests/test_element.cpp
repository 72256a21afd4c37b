#include <doctest.h>

#include "dsigma/oracle.hpp"
#include "helpers2.hpp"

using namespace dsigma;
using tests::relement;
using tests::rpoly;

namespace {
Ctx r4() { return derham_ctx({"x1", "x2", "x3", "x4"}); }
}

TEST_CASE("Koszul normalization of generator products") {
    Ctx ctx = r4();
    ScalarExpr one = ScalarExpr::constant(4, 1);

    // dx2*dx1 -> -dx1*dx2
    GradedElement e = GradedElement::term(ctx, one, {"dx2", "dx1"});
    GradedElement expected = -GradedElement::term(ctx, one, {"dx1", "dx2"});
    CHECK(e == expected);

    // odd squares vanish
    CHECK(GradedElement::term(ctx, one, {"dx1", "dx1"}).is_zero());

    // even coefficients commute through
    ScalarExpr x1 = ScalarExpr::variable(4, 0), x2 = ScalarExpr::variable(4, 1);
    GradedElement a = GradedElement::term(ctx, x1, {"dx1"});
    GradedElement b = GradedElement::term(ctx, x2, {"dx2"});
    CHECK(a * b == GradedElement::term(ctx, x1 * x2, {"dx1", "dx2"}));
}

TEST_CASE("unknown generator names are a context error") {
    Ctx ctx = r4();
    CHECK_THROWS(GradedElement::term(ctx, ScalarExpr::constant(4, 1), {"deta7"}));
}

TEST_CASE("normalize is idempotent and linear") {
    std::mt19937_64 rng(7);
    Ctx ctx = lifted_ctx({"x1", "x2"}, 2);
    for (int t = 0; t < 50; ++t) {
        GradedElement e = relement(rng, ctx);
        CHECK(normalize(e) == e);
        GradedElement f = relement(rng, ctx);
        CHECK(normalize(e + f) == normalize(e) + normalize(f));
    }
}

TEST_CASE("graded commutativity on homogeneous elements") {
    std::mt19937_64 rng(8);
    Ctx ctx = lifted_ctx({"x1", "x2"}, 2);
    // single-monomial homogeneous elements a, b
    for (int t = 0; t < 200; ++t) {
        GradedElement a = relement(rng, ctx), b = relement(rng, ctx);
        // pick one term of each to get homogeneous parity
        if (a.terms().empty() || b.terms().empty()) continue;
        auto ta = *a.terms().begin();
        auto tb = *b.terms().begin();
        GradedElement ha(ctx), hb(ctx);
        ha.set_term(ta.first, ta.second);
        hb.set_term(tb.first, tb.second);
        int pa = GradedElement::mono_parity(ctx, ta.first);
        int pb = GradedElement::mono_parity(ctx, tb.first);
        GradedElement lhs = ha * hb;
        GradedElement rhs = hb * ha;
        if (pa && pb) rhs = -rhs;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("left graded derivative on generators") {
    Ctx ctx = lifted_ctx({"x"}, 2);  // theta=dx, eta1, eta2, deta1, deta2
    ScalarExpr one = ScalarExpr::constant(1, 1);
    auto dd = [&](const GradedElement& e, const std::string& gen) {
        int g = ctx->gen_index(gen);
        // derivative w.r.t. an even generator is an even derivation
        Derivation D(ctx, -ctx->gen(g).ghost, -ctx->gen(g).form);
        D.gen_img[g] = GradedElement::constant(ctx, 1);
        return D.apply(e);
    };
    GradedElement e12 = GradedElement::term(ctx, one, {"eta1", "eta2"});
    CHECK(dd(e12, "eta1") == GradedElement::generator(ctx, "eta2"));
    CHECK(dd(e12, "eta2") == -GradedElement::generator(ctx, "eta1"));

    // d/dpsi (x psi theta) = x theta for the even psi
    ScalarExpr x = ScalarExpr::variable(1, 0);
    GradedElement m = GradedElement::term(ctx, x, {"deta1", "dx"});
    CHECK(dd(m, "deta1") == GradedElement::term(ctx, x, {"dx"}));
}

TEST_CASE("graded Leibniz rule for derivations (randomized)") {
    std::mt19937_64 rng(9);
    Ctx ctx = lifted_ctx({"x1", "x2"}, 2);
    for (int t = 0; t < 200; ++t) {
        Derivation D = tests::rderivation(rng, ctx, t % 2);
        REQUIRE(D.parity_consistent());
        GradedElement a = relement(rng, ctx, 2, 1);
        GradedElement b = relement(rng, ctx, 2, 1);
        GradedElement lhs = D.apply(a * b);
        GradedElement rhs(ctx);
        rhs += D.apply(a) * b;
        // sum over homogeneous components of a with the Koszul sign
        for (const auto& [m, c] : a.terms()) {
            GradedElement ha(ctx);
            ha.set_term(m, c);
            GradedElement t2 = ha * D.apply(b);
            if (GradedElement::mono_parity(ctx, m) && D.parity())
                t2 = -t2;
            rhs += t2;
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("is_zero agrees with numeric evaluation at random points") {
    std::mt19937_64 rng(10);
    Ctx ctx = derham_ctx({"x1", "x2", "x3"});
    for (int t = 0; t < 40; ++t) {
        GradedElement e = relement(rng, ctx);
        GradedElement z = e - e;
        CHECK(z.is_zero());
        CHECK(oracle_sample(z, 20, 42 + t).pass);
        if (!e.is_zero()) {
            // a nonzero element should be caught by sampling almost surely
            bool caught = !oracle_sample(e, 20, 42 + t).pass;
            CHECK(caught);
        }
    }
}
