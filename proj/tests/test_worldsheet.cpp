#include <doctest.h>

#include "dsigma/engine.hpp"
#include "helpers2.hpp"

using namespace dsigma;
using tests::cayley_orthogonal;
using tests::rpoly;

namespace {

Bivector symplectic_r2() {
    Bivector b{PolyMat(2, 2, 2)};
    b.pi(0, 1) = ScalarExpr::constant(2, 1);
    b.pi(1, 0) = -b.pi(0, 1);
    return b;
}

AlgebroidData graph_algebroid(const Bivector& P, const GradedElement& H) {
    DiracFrame frame = graph_of_bivector(P);
    auto res = is_dirac(frame, H);
    REQUIRE(res.status == DiracResult::Status::pass);
    std::vector<std::string> coords = H.ctx()->coords();
    return algebroid_from_frame(frame, res.C, coords);
}

// random action algebroid: a faithful family on R^1 (span of d/dx, x d/dx,
// x^2 d/dx -- sl2) conjugated by a random affine change x -> a x + b, plus
// abelian constant examples on R^2.
AlgebroidData random_action_algebroid(std::mt19937_64& rng, int which) {
    if (which % 2 == 0) {
        // sl2 on R^1: e1 = d, e2 = x d, e3 = x^2 d
        // [e1,e2] = e1, [e1,e3] = 2 e2, [e2,e3] = e3
        AlgebroidData E;
        E.coords = {"x"};
        E.rank = 3;
        E.rho = PolyMat(3, 1, 1);
        std::uniform_int_distribution<int> ai(1, 3), bi(-2, 2);
        Rat a(ai(rng)), b(bi(rng));
        // conjugate by x -> a x + b: d/dx -> (1/a) d, etc.
        ScalarExpr x = ScalarExpr::variable(1, 0);
        ScalarExpr ax_b = x.scaled(a) + ScalarExpr::constant(1, b);
        E.rho(0, 0) = ScalarExpr::constant(1, Rat(1) / a);
        E.rho(1, 0) = ax_b.scaled(Rat(1) / a);
        E.rho(2, 0) = (ax_b * ax_b).scaled(Rat(1) / a);
        E.C.assign(3, PolyMat(3, 3, 1));
        auto set = [&](int c, int i, int j, const Rat& v) {
            E.C[c](i, j) = ScalarExpr::constant(1, v);
            E.C[c](j, i) = ScalarExpr::constant(1, -v);
        };
        set(0, 0, 1, 1);
        set(1, 0, 2, 2);
        set(2, 1, 2, 1);
        return E;
    }
    // abelian with random constant anchors on R^2
    AlgebroidData E;
    E.coords = {"x1", "x2"};
    E.rank = 2;
    E.rho = PolyMat(2, 2, 2);
    std::uniform_int_distribution<int> v(-3, 3);
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i) E.rho(a, i) = ScalarExpr::constant(2, v(rng));
    E.C.assign(2, PolyMat(2, 2, 2));
    return E;
}

}  // namespace

TEST_CASE("pullback images implement minimal coupling and the curvature") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
        AlgebroidData E = random_action_algebroid(rng, t);
        REQUIRE(q_square(build_Q(E)).is_zero());
        Ctx ws = worldsheet_ctx(E.dim(), E.rank);
        Ctx lifted = t1e1_context(E);
        auto img = pullback_images(E, ws);
        const int n = E.dim(), r = E.rank;
        // f*(x) = X, f*(eta) = A
        for (int a = 0; a < r; ++a)
            CHECK(img[n + a] == GradedElement::generator(ws, "A" + std::to_string(a + 1)));
        // f*(theta^i) = dX^i - rho^i_a(X) A^a
        for (int i = 0; i < n; ++i) {
            GradedElement expect = GradedElement::generator(ws, "dX" + std::to_string(i + 1));
            for (int a = 0; a < r; ++a)
                expect -= GradedElement::generator(ws, "A" + std::to_string(a + 1))
                              .scaled(E.rho(a, i));
            CHECK(img[i] == expect);
        }
        // f*(psi^a) = dA^a + (1/2) C^a_{bc} A^b A^c
        for (int a = 0; a < r; ++a) {
            GradedElement expect = GradedElement::generator(ws, "dA" + std::to_string(a + 1));
            for (int b = 0; b < r; ++b)
                for (int c = b + 1; c < r; ++c)
                    if (!E.C[a](b, c).is_zero())
                        expect += GradedElement::term(ws, E.C[a](b, c),
                                                      {"A" + std::to_string(b + 1),
                                                       "A" + std::to_string(c + 1)});
            CHECK(img[n + r + a] == expect);
        }
    }
}

TEST_CASE("chain map property on algebroids and random superfunctions") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 4; ++t) {
        AlgebroidData E = random_action_algebroid(rng, t);
        CHECK(chain_map_check(E, 20, 1000 + t));
    }
    // the cotangent algebroid of symplectic R^2
    Ctx ctx2 = derham_ctx({"x1", "x2"});
    AlgebroidData E = graph_algebroid(symplectic_r2(), GradedElement(ctx2));
    CHECK(chain_map_check(E, 50, 7));
}

TEST_CASE("localize_boundary: Poisson sigma model from the symplectic form") {
    Ctx ctx2 = derham_ctx({"x1", "x2"});
    AlgebroidData E = graph_algebroid(symplectic_r2(), GradedElement(ctx2));
    Ctx lifted = t1e1_context(E);
    Ctx ws = worldsheet_ctx(2, 2);

    // Htilde = lambda omega; the boundary 2-form is
    // lambda (A_i ^ dX^i + 1/2 Pi^{ij} A_i A_j)
    for (Rat lambda : {Rat(1), Rat(-3, 2)}) {
        GradedElement w(lifted);
        for (int i = 0; i < 2; ++i)
            w += GradedElement::term(lifted, ScalarExpr::constant(2, lambda),
                                     {lifted->gen(i).name, "deta" + std::to_string(i + 1)});
        GradedElement img = pullback_f(w, E, ws);
        ActionExpression act = localize_boundary(img, GradedElement(ws));
        GradedElement expect(ws);
        expect += GradedElement::term(ws, ScalarExpr::constant(2, lambda), {"A1", "dX1"});
        expect += GradedElement::term(ws, ScalarExpr::constant(2, lambda), {"A2", "dX2"});
        expect += GradedElement::term(ws, ScalarExpr::constant(2, lambda), {"A1", "A2"});
        CHECK(act.boundary == expect);
        CHECK(act.bulk.is_zero());
        CHECK(exterior_d(act.boundary) == img);
    }

    // the Jacobi-obstruction trivector vanishes for a Poisson bivector:
    // cyclic sum of Pi^{ij},_l Pi^{lk} is the zero polynomial
    Bivector P = symplectic_r2();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                ScalarExpr s(2);
                for (int l = 0; l < 2; ++l)
                    s += P.pi(i, j).derivative(l) * P.pi(l, k) +
                         P.pi(j, k).derivative(l) * P.pi(l, i) +
                         P.pi(k, i).derivative(l) * P.pi(l, j);
                CHECK(s.is_zero());
            }
}

TEST_CASE("localize_boundary: exact input round-trip and error on non-closed input") {
    std::mt19937_64 rng(43);
    Ctx ws = worldsheet_ctx(2, 2);
    // d of a random 2-form field polynomial is closed and localizes with zero bulk
    GradedElement two(ws);
    two += GradedElement::term(ws, rpoly(rng, 2, 2), {"A1", "dX2"});
    two += GradedElement::term(ws, rpoly(rng, 2, 2), {"A1", "A2"});
    two += GradedElement::term(ws, rpoly(rng, 2, 2), {"dX1", "dX2"});
    two += GradedElement::term(ws, rpoly(rng, 2, 2), {"dA1"});
    GradedElement F = exterior_d(two);
    ActionExpression act = localize_boundary(F, GradedElement(ws));
    CHECK(exterior_d(act.boundary) == F);

    // a non-closed 3-form is rejected
    GradedElement bad = GradedElement::term(ws, ScalarExpr::variable(2, 0), {"A1", "A2", "dX1"});
    if (!exterior_d(bad).is_zero())
        CHECK_THROWS(localize_boundary(bad, GradedElement(ws)));
}

TEST_CASE("dsm_assemble: the two action forms agree; the collapsed A-convention fails") {
    std::mt19937_64 rng(44);
    int done = 0;
    while (done < 20) {
        int n = 2 + done % 2;
        // random constant metric g = T^T T and g-orthogonal O = T^{-1} O_e T
        PolyMat T(n, n, n);
        std::uniform_int_distribution<int> v(-2, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) T(i, j) = ScalarExpr::constant(n, v(rng));
        ScalarExpr dT = det(T);
        if (dT.is_zero()) continue;
        PolyMat g = T.transposed() * T;
        PolyMat Oe = cayley_orthogonal(rng, n, n);
        PolyMat Tinv = adjugate(T);
        Rat dv = dT.constant_value();
        for (auto& row : Tinv.m)
            for (auto& e : row) e = e.scaled(Rat(1) / dv);
        PolyMat O = Tinv * Oe * T;
        OOperator op{O, ScalarExpr::constant(n, 1), g};
        REQUIRE(op.orthogonal());
        DsmForms f = dsm_assemble(op);
        CHECK(f.equal);
        ++done;
    }

    // O = +-id degenerate cases
    PolyMat id2 = PolyMat::identity(2, 2);
    DsmForms fplus = dsm_assemble(OOperator{id2, ScalarExpr::constant(2, 1), id2});
    CHECK(fplus.equal);
    DsmForms fminus = dsm_assemble(OOperator{-id2, ScalarExpr::constant(2, 1), id2});
    CHECK(fminus.equal);
    CHECK(fminus.top_num.is_zero());  // A = g(id+O) cA = 0: bulk-only action

    // the convention A = g((id-O) cA) collapses the quadratic term
    // (symmetric x antisymmetric) and cannot reproduce the forms
    std::mt19937_64 rng2(45);
    PolyMat Oe = cayley_orthogonal(rng2, 3, 3);
    DsmForms f3 = dsm_assemble(OOperator{Oe, ScalarExpr::constant(3, 1),
                                         PolyMat::identity(3, 3)});
    CHECK(f3.equal);
    CHECK(!f3.collapsed_equal);
}

TEST_CASE("dsm graph specialization reduces to the twisted PSM integrand") {
    // second form with V^i = Pi^{ji} A_j equals A_i dX^i + 1/2 Pi^{ij} A_i A_j
    Ctx ws = worldsheet_ctx(4, 4);
    Bivector P{PolyMat(4, 4, 4)};
    auto set = [&](int i, int j, const ScalarExpr& v) {
        P.pi(i, j) = v;
        P.pi(j, i) = -v;
    };
    set(0, 1, ScalarExpr::constant(4, 1));
    set(2, 3, ScalarExpr::constant(4, 1));
    set(1, 2, ScalarExpr::variable(4, 0) * ScalarExpr::variable(4, 1));
    GradedElement got = dsm_top_graph(P, ws);
    GradedElement expect(ws);
    for (int i = 1; i <= 4; ++i)
        expect += GradedElement::term(ws, ScalarExpr::constant(4, 1),
                                      {"A" + std::to_string(i), "dX" + std::to_string(i)});
    expect += GradedElement::term(ws, ScalarExpr::constant(4, 1), {"A1", "A2"});
    expect += GradedElement::term(ws, ScalarExpr::constant(4, 1), {"A3", "A4"});
    expect += GradedElement::term(ws, ScalarExpr::variable(4, 0) * ScalarExpr::variable(4, 1),
                                  {"A2", "A3"});
    CHECK(got == expect);
}

TEST_CASE("emit: latex and json round-trip") {
    Ctx ws = worldsheet_ctx(2, 2);
    GradedElement b(ws);
    b += GradedElement::term(ws, ScalarExpr::constant(2, 1), {"A1", "dX1"});
    b += GradedElement::term(ws, ScalarExpr::constant(2, 1), {"A2", "dX2"});
    b += GradedElement::term(ws, ScalarExpr::constant(2, Rat(1, 2)), {"A1", "A2"});
    b += GradedElement::term(ws, ScalarExpr::variable(2, 0), {"A1", "A2"});
    ActionExpression act{b, GradedElement(ws)};

    std::string latex = action_latex(act, false);
    CHECK(latex.find("A_1 \\wedge d X^1") != std::string::npos);
    CHECK(latex.find("A_2 \\wedge d X^2") != std::string::npos);
    CHECK(latex.find("\\frac{1}{2}") != std::string::npos);

    Json j = action_json(act, false);
    ActionExpression back = action_from_json(j);
    CHECK(back.boundary == act.boundary);
    CHECK(back.bulk == act.bulk);
    // byte-identical re-serialization
    CHECK(action_json(back, false).dump() == j.dump());

    // empty action
    ActionExpression empty{GradedElement(ws), GradedElement(ws)};
    CHECK(action_latex(empty, false).find("0") != std::string::npos);
    Json je = action_json(empty, false);
    CHECK(je["boundary"].empty());

    // bulk marker for Wess-Zumino terms
    GradedElement bulk = GradedElement::term(ws, ScalarExpr::variable(2, 0),
                                             {"dX1", "dX2"});
    // (not a 3-form on this small context, but emission is format-only)
    ActionExpression wz{b, bulk};
    std::string latex_wz = action_latex(wz, true);
    CHECK(latex_wz.find("\\tilde{X}^{*} H") != std::string::npos);
    ActionExpression back2 = action_from_json(action_json(wz, true));
    CHECK(back2.bulk == wz.bulk);
}

TEST_CASE("PSM pipeline on a non-constant Poisson structure") {
    // Pi = d1^d2 + x1 d2^d3 on R^3 is Poisson (its Jacobiator vanishes);
    // the pullback of omega localizes to A_i dX^i + 1/2 Pi^{ij} A_i A_j with
    // the Jacobi-proportional trivector dropping out exactly
    Ctx ctx = derham_ctx({"x1", "x2", "x3"});
    Bivector P{PolyMat(3, 3, 3)};
    P.pi(0, 1) = ScalarExpr::constant(3, 1);
    P.pi(1, 0) = -P.pi(0, 1);
    P.pi(1, 2) = ScalarExpr::variable(3, 0);
    P.pi(2, 1) = -P.pi(1, 2);
    // cyclic Jacobi sum is the zero polynomial
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                ScalarExpr s(3);
                for (int l = 0; l < 3; ++l)
                    s += P.pi(i, j).derivative(l) * P.pi(l, k) +
                         P.pi(j, k).derivative(l) * P.pi(l, i) +
                         P.pi(k, i).derivative(l) * P.pi(l, j);
                CHECK(s.is_zero());
            }
    AlgebroidData E = graph_algebroid(P, GradedElement(ctx));
    REQUIRE(q_square(build_Q(E)).is_zero());
    Ctx lifted = t1e1_context(E);
    Ctx ws = worldsheet_ctx(3, 3);
    GradedElement w(lifted);
    for (int i = 0; i < 3; ++i)
        w += GradedElement::term(lifted, ScalarExpr::constant(3, 1),
                                 {lifted->gen(i).name, "deta" + std::to_string(i + 1)});
    REQUIRE(check_E_extension(w, E, {}, GradedElement(ctx)).restriction.is_zero());
    GradedElement img = pullback_f(w, E, ws);
    ActionExpression act = localize_boundary(img, GradedElement(ws));
    GradedElement expect(ws);
    for (int i = 1; i <= 3; ++i)
        expect += GradedElement::term(ws, ScalarExpr::constant(3, 1),
                                      {"A" + std::to_string(i), "dX" + std::to_string(i)});
    expect += GradedElement::term(ws, ScalarExpr::constant(3, 1), {"A1", "A2"});
    expect += GradedElement::term(ws, ScalarExpr::variable(3, 0), {"A2", "A3"});
    CHECK(act.boundary == expect);
}
