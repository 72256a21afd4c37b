// Acceptance suite: end-to-end checks of the derivations this engine exists
// to reproduce, one verdict line per criterion.  Everything is exact; there
// are no tolerances anywhere.
//
// Criterion 3 carries a documented deviation: its degree-2 wording is
// infeasible for this structure (the closure data forces a degree-3
// coefficient) and the naive eta2-eta3 ambiguity directions are not invariant
// under the c-direction symmetry.  The literal commands are still run and
// their honest outcome (inconclusive) is asserted; the substance of the
// criterion (ambiguity for the plain symmetry algebra versus uniqueness for
// the extended one, and the f(X1) A2^A3 action shifts) is checked one degree
// up and at the action level.  See tests/DEVIATIONS.md.

#include "dsigma/engine.hpp"
#include "dsigma/oracle.hpp"

#include <chrono>
#include <iostream>
#include <random>

using namespace dsigma;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void verdict(const std::string& name, bool pass, const Clock::time_point& t0,
             const std::string& note = "") {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << " (" << ms << " ms)"
              << (note.empty() ? "" : "  -- " + note) << "\n";
    if (!pass) ++g_failures;
}

void info(const std::string& name, bool as_expected, const std::string& note) {
    std::cout << (as_expected ? "[NOTE] " : "[FAIL] ") << name << "  -- " << note << "\n";
    if (!as_expected) ++g_failures;
}

#define REQUIRE_ACC(cond)                                                        \
    do {                                                                         \
        if (!(cond)) {                                                           \
            std::cout << "  assertion failed at " << __FILE__ << ":" << __LINE__ \
                      << ": " #cond "\n";                                        \
            ok = false;                                                          \
        }                                                                        \
    } while (0)

Bivector pi_r4() {
    Bivector b{PolyMat(4, 4, 4)};
    auto set = [&](int i, int j, const ScalarExpr& v) {
        b.pi(i, j) = v;
        b.pi(j, i) = -v;
    };
    set(0, 1, ScalarExpr::constant(4, 1));
    set(2, 3, ScalarExpr::constant(4, 1));
    set(1, 2, ScalarExpr::variable(4, 0) * ScalarExpr::variable(4, 1));
    return b;
}

const char* kR4Model =
    "manifold M dim 4 coords x1 x2 x3 x4;\n"
    "bivector Pi { (1,2): 1, (3,4): 1, (2,3): x1*x2 };\n"
    "threeform H { (1,2,4): -x1 };\n";

const char* kR2Model =
    "manifold M dim 2 coords x1 x2;\n"
    "bivector Pi { (1,2): 1 };\n";

GradedElement h_r4(const Ctx& ctx) {
    return GradedElement::term(ctx, -ScalarExpr::variable(4, 0), {"dx1", "dx2", "dx4"});
}

struct Pipeline {
    DiracFrame frame;
    AlgebroidData E;
    GradedElement H;
    ExtensionReport ext;
    GradedElement boundary;
    GradedElement bulk;
    bool ok = false;
};

Pipeline run_pipeline(const Bivector& P, const GradedElement& H, int N, bool gtilde) {
    Pipeline p;
    p.H = H;
    p.frame = graph_of_bivector(P);
    auto dres = is_dirac(p.frame, H);
    if (dres.status != DiracResult::Status::pass) return p;
    p.E = algebroid_from_frame(p.frame, dres.C, H.ctx()->coords());
    SymmetrySpace space = solve_symmetries(p.frame, H, N);
    std::vector<ExtendedSymmetry> S;
    for (const auto& c : space.coeffs) S.push_back(ExtendedSymmetry::lie(c));
    if (gtilde)
        for (const auto& g : reduce_gamma_generators(gamma_basis(p.frame, N)))
            S.push_back(ExtendedSymmetry::extension(g));
    p.ext = solve_extension(H, p.E, S, N);
    if (p.ext.status == ExtStatus::inconclusive) return p;
    GradedElement Htilde = p.ext.particular.is_zero() && !p.ext.basis.empty()
                               ? p.ext.basis.front()
                               : p.ext.particular;
    Ctx ws = worldsheet_ctx(p.E.dim(), p.E.rank);
    GradedElement img = pullback_f(Htilde, p.E, ws);
    p.bulk = bulk_image(H, p.E, ws);
    ActionExpression act = localize_boundary(img, p.bulk);
    p.boundary = act.boundary;
    p.ok = true;
    return p;
}

// criterion 1: R^4 twisted Poisson verification via the CLI path
void criterion1() {
    auto t0 = Clock::now();
    bool ok = true;
    ModelSpec m = parse_model(kR4Model);
    RunOptions opt;
    opt.command = "check";
    opt.sub = "poisson";
    RunResult r = run_command(m, opt);
    REQUIRE_ACC(r.exit_code == 0);
    REQUIRE_ACC(r.report["status"] == "pass");
    REQUIRE_ACC(r.report["residual"].empty());
    // identically zero residual, reconfirmed numerically inside the report
    REQUIRE_ACC(r.report["oracle"]["confirmed"] == true);
    verdict("criterion 1: R^4 twisted-Poisson check (exact zero residual)", ok, t0);
}

// criterion 2: symmetry family reproduction at degree 2
void criterion2() {
    auto t0 = Clock::now();
    bool ok = true;
    Ctx ctx = derham_ctx({"x1", "x2", "x3", "x4"});
    GradedElement H = h_r4(ctx);
    Bivector P = pi_r4();
    DiracFrame frame = graph_of_bivector(P);
    SymmetrySpace space = solve_symmetries(frame, H, 2);
    ScalarExpr x1 = ScalarExpr::variable(4, 0), x2 = ScalarExpr::variable(4, 1);

    // membership residual vanishes on every basis vector
    for (const auto& s : space.sections)
        REQUIRE_ACC(membership_g(s, frame, H).pass);

    // the c-direction alpha = x1 x2 dx1 + dx3 lies in the space
    auto contains = [&](const std::vector<ScalarExpr>& alpha) {
        std::vector<std::vector<ScalarExpr>> cols;
        for (const auto& c : space.coeffs) cols.push_back(c);
        return poly_decompose(cols, alpha, 4, 3).ok;
    };
    std::vector<ScalarExpr> cdir(4, ScalarExpr(4));
    cdir[0] = x1 * x2;
    cdir[2] = ScalarExpr::constant(4, 1);
    REQUIRE_ACC(contains(cdir));
    {
        GeneralizedSection s(P.sharp(cdir), cdir);
        REQUIRE_ACC(membership_g(s, frame, H).pass);
    }

    // members of the (g,h) family truncated to degree <= 2, with the
    // computed constraint h_{,1} = +x1 g + g_{,4} (the opposite sign fails
    // the invariance condition; see tests/DEVIATIONS.md):
    //   g = 1,  h = 1/2 x1^2 + phi(x4), phi in {1, x4, x4^2}
    auto member = [&](const ScalarExpr& g, const ScalarExpr& h) {
        std::vector<ScalarExpr> alpha(4, ScalarExpr(4));
        alpha[0] = g;
        alpha[3] = h;
        GeneralizedSection s(P.sharp(alpha), alpha);
        return membership_g(s, frame, H).pass && contains(alpha);
    };
    ScalarExpr one = ScalarExpr::constant(4, 1);
    ScalarExpr x4 = ScalarExpr::variable(4, 3);
    REQUIRE_ACC(member(one, (x1 * x1).scaled(Rat(1, 2))));
    REQUIRE_ACC(member(ScalarExpr(4), one));
    REQUIRE_ACC(member(ScalarExpr(4), x4));
    REQUIRE_ACC(member(ScalarExpr(4), x4 * x4));
    // and the membership check rejects the opposite-sign variant
    {
        std::vector<ScalarExpr> alpha(4, ScalarExpr(4));
        alpha[0] = one;
        alpha[3] = (x1 * x1).scaled(Rat(-1, 2));
        GeneralizedSection s(P.sharp(alpha), alpha);
        REQUIRE_ACC(!membership_g(s, frame, H).pass);
    }
    // dimension cross-check against the closed-form count: {c} + {g0} + phi
    // up to degree 2
    REQUIRE_ACC(space.dimension == 5);
    verdict("criterion 2: R^4 symmetry family at degree 2 (membership residual 0)", ok, t0);
}

// criterion 3: ambiguity for g, uniqueness for gtilde
void criterion3() {
    auto t0 = Clock::now();
    Ctx ctx = derham_ctx({"x1", "x2", "x3", "x4"});
    GradedElement H = h_r4(ctx);
    ModelSpec m = parse_model(kR4Model);

    // literal wording: degree-2 runs.  The closure data has degree-3 entries
    // (C^4_{23} = -x1^2 x2), so no degree-2 extension exists; the honest
    // outcome is "inconclusive" for both algebras, and the criterion as
    // literally stated cannot pass.  Assert the analyzed outcome.
    {
        RunOptions opt;
        opt.command = "extend";
        opt.degree = 2;
        opt.algebra = "g";
        RunResult rg = run_command(m, opt);
        opt.algebra = "gtilde";
        RunResult rt = run_command(m, opt);
        bool as_analyzed = rg.report["status"] == "inconclusive" &&
                           rt.report["status"] == "inconclusive" &&
                           rg.exit_code == 3 && rt.exit_code == 3;
        info("criterion 3 (degree-2 variant): recorded deviation", as_analyzed,
             "extend --degree 2 is infeasible for this structure (its closure "
             "functions have degree 3); both runs report 'inconclusive'; see "
             "tests/DEVIATIONS.md");
    }

    // substance, one degree up: family for g, unique for gtilde
    bool ok = true;
    Pipeline pg = run_pipeline(pi_r4(), H, 3, false);
    REQUIRE_ACC(pg.ok);
    REQUIRE_ACC(pg.ext.status == ExtStatus::family);
    REQUIRE_ACC(pg.ext.dimension >= 1);
    Pipeline pt = run_pipeline(pi_r4(), H, 3, true);
    REQUIRE_ACC(pt.ok);
    REQUIRE_ACC(pt.ext.status == ExtStatus::unique);
    REQUIRE_ACC(pt.ext.dimension == 0);
    REQUIRE_ACC(pt.ext.dimension < pg.ext.dimension);
    verdict("criterion 3a: g-family vs gtilde-uniqueness at degree 3 (exact dimensions)", ok,
            t0);

    // the f(X1) A2 ^ A3 ambiguity at the action level: gauging the modified
    // bivector Pi + f d2^d3 shifts the unique action by exactly f(X1) A2^A3,
    // for f = 1, x1, x1^2
    auto t1 = Clock::now();
    ok = true;
    Ctx ws = worldsheet_ctx(4, 4);
    GradedElement base = pt.boundary;
    for (int k = 0; k <= 2 && ok; ++k) {
        ScalarExpr f = ScalarExpr::constant(4, 1);
        for (int j = 0; j < k; ++j) f = f * ScalarExpr::variable(4, 0);
        Bivector Pf = pi_r4();
        Pf.pi(1, 2) += f;
        Pf.pi(2, 1) = -Pf.pi(1, 2);
        Pipeline pf = run_pipeline(Pf, H, k < 2 ? 3 : 4, true);
        REQUIRE_ACC(pf.ok);
        REQUIRE_ACC(pf.ext.status == ExtStatus::unique);
        GradedElement expect = base + GradedElement::term(ws, f, {"A2", "A3"});
        REQUIRE_ACC(pf.boundary == expect);
    }
    verdict("criterion 3b: f(X1) A2^A3 ambiguity directions at the action level (exact)", ok,
            t1);
}

// criterion 4: PSM derivation on symplectic R^2
void criterion4() {
    auto t0 = Clock::now();
    bool ok = true;
    Ctx ctx = derham_ctx({"x1", "x2"});
    Bivector P{PolyMat(2, 2, 2)};
    P.pi(0, 1) = ScalarExpr::constant(2, 1);
    P.pi(1, 0) = -P.pi(0, 1);
    Pipeline p = run_pipeline(P, GradedElement(ctx), 2, false);
    REQUIRE_ACC(p.ok);
    REQUIRE_ACC(p.ext.dimension == 1);
    REQUIRE_ACC(p.ext.particular.is_zero());
    // solution space = span{omega}
    Ctx lifted = t1e1_context(p.E);
    GradedElement omega(lifted);
    for (int i = 0; i < 2; ++i)
        omega += GradedElement::term(lifted, ScalarExpr::constant(2, 1),
                                     {lifted->gen(i).name, "deta" + std::to_string(i + 1)});
    REQUIRE_ACC(p.ext.basis.size() == 1);
    REQUIRE_ACC(p.ext.basis[0] == omega);
    // emitted boundary = A_i ^ dX^i + 1/2 Pi^{ij} A_i A_j, coefficient by
    // coefficient
    Ctx ws = worldsheet_ctx(2, 2);
    GradedElement expect(ws);
    expect += GradedElement::term(ws, ScalarExpr::constant(2, 1), {"A1", "dX1"});
    expect += GradedElement::term(ws, ScalarExpr::constant(2, 1), {"A2", "dX2"});
    expect += GradedElement::term(ws, ScalarExpr::constant(2, 1), {"A1", "A2"});
    REQUIRE_ACC(p.boundary == expect);
    REQUIRE_ACC(p.bulk.is_zero());
    // Jacobi-proportional trivector vanishes identically
    for (int i = 0; i < 2 && ok; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                ScalarExpr s(2);
                for (int l = 0; l < 2; ++l)
                    s += P.pi(i, j).derivative(l) * P.pi(l, k) +
                         P.pi(j, k).derivative(l) * P.pi(l, i) +
                         P.pi(k, i).derivative(l) * P.pi(l, j);
                REQUIRE_ACC(s.is_zero());
            }
    verdict("criterion 4: PSM derivation (span{omega}, exact boundary form)", ok, t0);
}

// criterion 5: twisted PSM derivation on R^4
void criterion5() {
    auto t0 = Clock::now();
    bool ok = true;
    Ctx ctx = derham_ctx({"x1", "x2", "x3", "x4"});
    Pipeline p = run_pipeline(pi_r4(), h_r4(ctx), 3, true);
    REQUIRE_ACC(p.ok);
    REQUIRE_ACC(p.ext.status == ExtStatus::unique);
    Ctx ws = worldsheet_ctx(4, 4);
    GradedElement expect(ws);
    for (int i = 1; i <= 4; ++i)
        expect += GradedElement::term(ws, ScalarExpr::constant(4, 1),
                                      {"A" + std::to_string(i), "dX" + std::to_string(i)});
    expect += GradedElement::term(ws, ScalarExpr::constant(4, 1), {"A1", "A2"});
    expect += GradedElement::term(ws, ScalarExpr::constant(4, 1), {"A3", "A4"});
    expect += GradedElement::term(ws, ScalarExpr::variable(4, 0) * ScalarExpr::variable(4, 1),
                                  {"A2", "A3"});
    REQUIRE_ACC(p.boundary == expect);
    // bulk is the untwisted Wess-Zumino image of H
    GradedElement bulk_expect =
        GradedElement::term(ws, -ScalarExpr::variable(4, 0), {"dX1", "dX2", "dX4"});
    REQUIRE_ACC(p.bulk == bulk_expect);
    verdict("criterion 5: twisted-PSM integrand from the unique extension (exact)", ok, t0);
}

// criterion 6: minimal coupling and chain map on randomized action algebroids
void criterion6() {
    auto t0 = Clock::now();
    bool ok = true;
    std::mt19937_64 rng(607);
    int built = 0;
    while (built < 10 && ok) {
        // sl2 on R^1 conjugated by a random affine map, or a random abelian
        // constant-anchor algebroid on R^2
        AlgebroidData E;
        if (built % 2 == 0) {
            E.coords = {"x"};
            E.rank = 3;
            E.rho = PolyMat(3, 1, 1);
            std::uniform_int_distribution<int> ai(1, 3), bi(-2, 2);
            Rat a(ai(rng)), b(bi(rng));
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
        } else {
            E.coords = {"x1", "x2"};
            E.rank = 2;
            E.rho = PolyMat(2, 2, 2);
            std::uniform_int_distribution<int> v(-3, 3);
            for (int a = 0; a < 2; ++a)
                for (int i = 0; i < 2; ++i) E.rho(a, i) = ScalarExpr::constant(2, v(rng));
            E.C.assign(2, PolyMat(2, 2, 2));
        }
        REQUIRE_ACC(q_square(build_Q(E)).is_zero());
        Ctx ws = worldsheet_ctx(E.dim(), E.rank);
        auto img = pullback_images(E, ws);
        const int n = E.dim(), r = E.rank;
        for (int i = 0; i < n; ++i) {
            GradedElement expect = GradedElement::generator(ws, "dX" + std::to_string(i + 1));
            for (int a = 0; a < r; ++a)
                expect -= GradedElement::generator(ws, "A" + std::to_string(a + 1))
                              .scaled(E.rho(a, i));
            REQUIRE_ACC(img[i] == expect);
        }
        for (int a = 0; a < r; ++a) {
            GradedElement expect = GradedElement::generator(ws, "dA" + std::to_string(a + 1));
            for (int b = 0; b < r; ++b)
                for (int c = b + 1; c < r; ++c)
                    if (!E.C[a](b, c).is_zero())
                        expect += GradedElement::term(ws, E.C[a](b, c),
                                                      {"A" + std::to_string(b + 1),
                                                       "A" + std::to_string(c + 1)});
            REQUIRE_ACC(img[n + r + a] == expect);
        }
        REQUIRE_ACC(chain_map_check(E, 50, 6000 + built));
        ++built;
    }
    verdict("criterion 6: minimal coupling + chain map, 10 algebroids x 50 samples (exact)",
            ok, t0);
}

// criterion 7: DSM form equality and graph specialization
void criterion7() {
    auto t0 = Clock::now();
    bool ok = true;
    std::mt19937_64 rng(707);
    int done = 0;
    while (done < 20 && ok) {
        int n = 2 + done % 2;
        PolyMat T(n, n, n);
        std::uniform_int_distribution<int> v(-2, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) T(i, j) = ScalarExpr::constant(n, v(rng));
        ScalarExpr dT = det(T);
        if (dT.is_zero()) continue;
        PolyMat g = T.transposed() * T;
        // random rational antisymmetric seed -> orthogonal via Cayley
        PolyMat S(n, n, n);
        std::uniform_int_distribution<int> w(-3, 3);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                ScalarExpr val = ScalarExpr::constant(n, Rat(w(rng), 2));
                S(i, j) = val;
                S(j, i) = -val;
            }
        PolyMat I = PolyMat::identity(n, n);
        PolyMat M = I + S;
        PolyMat Oe = (I - S) * adjugate(M);
        Rat dv = det(M).constant_value();
        for (auto& row : Oe.m)
            for (auto& e : row) e = e.scaled(Rat(1) / dv);
        PolyMat Tinv = adjugate(T);
        Rat tdv = dT.constant_value();
        for (auto& row : Tinv.m)
            for (auto& e : row) e = e.scaled(Rat(1) / tdv);
        PolyMat O = Tinv * Oe * T;
        OOperator op{O, ScalarExpr::constant(n, 1), g};
        REQUIRE_ACC(op.orthogonal());
        DsmForms f = dsm_assemble(op);
        REQUIRE_ACC(f.equal);
        ++done;
    }
    // graph-of-Pi specialization reduces to the twisted-PSM integrand
    Ctx ws = worldsheet_ctx(4, 4);
    GradedElement got = dsm_top_graph(pi_r4(), ws);
    GradedElement expect(ws);
    for (int i = 1; i <= 4; ++i)
        expect += GradedElement::term(ws, ScalarExpr::constant(4, 1),
                                      {"A" + std::to_string(i), "dX" + std::to_string(i)});
    expect += GradedElement::term(ws, ScalarExpr::constant(4, 1), {"A1", "A2"});
    expect += GradedElement::term(ws, ScalarExpr::constant(4, 1), {"A3", "A4"});
    expect += GradedElement::term(ws, ScalarExpr::variable(4, 0) * ScalarExpr::variable(4, 1),
                                  {"A2", "A3"});
    REQUIRE_ACC(got == expect);
    verdict("criterion 7: DSM two-form equality (20 random O) + graph reduction (exact)", ok,
            t0);
}

// criterion 8: calculus substrate, >= 200 randomized instances per identity
void criterion8() {
    auto t0 = Clock::now();
    bool ok = true;
    std::mt19937_64 rng(808);
    Ctx ctx = derham_ctx({"x1", "x2", "x3"});
    auto rpoly = [&](int maxdeg) {
        ScalarExpr p(3);
        std::uniform_int_distribution<int> deg(0, maxdeg), var(0, 2), num(-4, 4), den(1, 3);
        for (int t = 0; t < 3; ++t) {
            ScalarExpr::Exps e(3, 0);
            int d = deg(rng);
            for (int k = 0; k < d; ++k) e[var(rng)] += 1;
            p += ScalarExpr::monomial(3, e, Rat(num(rng), den(rng)));
        }
        return p;
    };
    auto relem = [&]() {
        GradedElement e(ctx);
        std::vector<std::vector<std::string>> monos{
            {}, {"dx1"}, {"dx2"}, {"dx3"}, {"dx1", "dx2"}, {"dx1", "dx3"},
            {"dx2", "dx3"}, {"dx1", "dx2", "dx3"}};
        std::uniform_int_distribution<int> pick(0, (int)monos.size() - 1);
        for (int t = 0; t < 3; ++t)
            e += GradedElement::term(ctx, rpoly(2), monos[pick(rng)]);
        return e;
    };
    auto rvec = [&]() {
        VectorField v(3, 3);
        for (int i = 0; i < 3; ++i) v.comp[i] = rpoly(2);
        return v;
    };
    int oracle_seed = 9000;
    auto confirm_zero = [&](const GradedElement& z) {
        return z.is_zero() && oracle_sample(z, 20, ++oracle_seed).pass;
    };
    Derivation d = exterior_d_op(ctx);
    for (int t = 0; t < 200 && ok; ++t) {
        GradedElement e = relem();
        REQUIRE_ACC(confirm_zero(d.apply(d.apply(e))));
        VectorField v = rvec();
        Derivation io = interior_op(ctx, v);
        REQUIRE_ACC(confirm_zero(lie(v, e) - d.apply(io.apply(e)) - io.apply(d.apply(e))));
    }
    // graded Jacobi on random derivation triples of the lifted context
    Ctx lifted = lifted_ctx({"x1", "x2"}, 1);
    std::mt19937_64 rng2(809);
    for (int t = 0; t < 200 && ok; ++t) {
        auto rd = [&](int par) {
            Derivation D(lifted, par, 0);
            std::uniform_int_distribution<int> num(-3, 3), den(1, 2);
            auto pick_img = [&](int src_par) {
                GradedElement out(lifted);
                // random element filtered to the required parity
                for (int g = 0; g < lifted->ngens(); ++g) {
                    GenMono m(lifted->ngens(), 0);
                    m[g] = 1;
                    if (GradedElement::mono_parity(lifted, m) == ((src_par + par) & 1)) {
                        ScalarExpr c(2);
                        c += ScalarExpr::constant(2, Rat(num(rng2), den(rng2)));
                        GradedElement term(lifted);
                        term.set_term(m, c);
                        out += term;
                    }
                }
                if (((src_par + par) & 1) == 0) {
                    ScalarExpr c(2);
                    c += ScalarExpr::monomial(2, {1, 0}, Rat(num(rng2), 1));
                    out += GradedElement::scalar(lifted, c);
                }
                return out;
            };
            for (int i = 0; i < 2; ++i) D.coord_img[i] = pick_img(0);
            for (int g = 0; g < lifted->ngens(); ++g)
                D.gen_img[g] = pick_img(lifted->gen(g).parity());
            return D;
        };
        Derivation X = rd(t % 2), Y = rd((t / 2) % 2), Z = rd(1);
        Derivation lhs = graded_commutator(X, graded_commutator(Y, Z));
        Derivation r1 = graded_commutator(graded_commutator(X, Y), Z);
        Derivation r2 = graded_commutator(Y, graded_commutator(X, Z));
        const int sign = (X.parity() && Y.parity()) ? -1 : 1;
        for (int g = 0; g < lifted->ngens() && ok; ++g) {
            GradedElement diff =
                lhs.gen_img[g] - r1.gen_img[g] - r2.gen_img[g].scaled(Rat(sign));
            REQUIRE_ACC(confirm_zero(diff));
        }
    }
    // homotopy: d K + K d = id on >= 200 random positive-degree forms
    std::vector<std::vector<std::string>> combos1{{"dx1"}, {"dx2"}, {"dx3"}};
    std::vector<std::vector<std::string>> combos2{{"dx1", "dx2"}, {"dx1", "dx3"},
                                                  {"dx2", "dx3"}};
    int checked = 0;
    while (checked < 200 && ok) {
        int p = 1 + checked % 3;
        GradedElement w(ctx);
        const auto& combos = p == 1 ? combos1 : combos2;
        if (p == 3) {
            w += GradedElement::term(ctx, rpoly(3), {"dx1", "dx2", "dx3"});
        } else {
            for (const auto& c : combos)
                w += GradedElement::term(ctx, rpoly(3), c);
        }
        if (w.is_zero()) continue;
        GradedElement lhs = exterior_d(homotopy_K(w, p));
        if (p < 3) lhs += homotopy_K(exterior_d(w), p + 1);
        REQUIRE_ACC(confirm_zero(lhs - w));
        ++checked;
    }
    verdict("criterion 8: calculus substrate, 200+ random instances per identity + oracle",
            ok, t0);
}

// criterion 9: standard equivariant checker on the R^3 rotation example
void criterion9() {
    auto t0 = Clock::now();
    bool ok = true;
    Ctx ctx = derham_ctx({"x1", "x2", "x3"});
    ScalarExpr one = ScalarExpr::constant(3, 1);
    ScalarExpr x1 = ScalarExpr::variable(3, 0), x2 = ScalarExpr::variable(3, 1);
    GradedElement H = GradedElement::term(ctx, one, {"dx1", "dx2", "dx3"});
    AlgebroidData so2;
    so2.coords = {"x1", "x2", "x3"};
    so2.rank = 1;
    so2.rho = PolyMat(1, 3, 3);
    so2.rho(0, 0) = -x2;
    so2.rho(0, 1) = x1;
    so2.C.assign(1, PolyMat(1, 1, 3));
    std::vector<std::vector<ScalarExpr>> alphas(1, std::vector<ScalarExpr>(3, ScalarExpr(3)));
    alphas[0][2] = (x1 * x1 + x2 * x2).scaled(Rat(-1, 2));
    auto rep = check_standard_extension(H, alphas, so2);
    REQUIRE_ACC(rep.pass());
    // alpha + x3 dx1 fails the moment-map condition (ii)
    auto broken = alphas;
    broken[0][0] += ScalarExpr::variable(3, 2);
    auto rep2 = check_standard_extension(H, broken, so2);
    REQUIRE_ACC(!rep2.pass());
    REQUIRE_ACC(!rep2.pass_moment);
    // alpha + dx1 keeps (ii) (the shift is closed) but fails isotropy (iv)
    auto broken2 = alphas;
    broken2[0][0] += one;
    auto rep3 = check_standard_extension(H, broken2, so2);
    REQUIRE_ACC(!rep3.pass());
    REQUIRE_ACC(rep3.pass_moment);
    REQUIRE_ACC(!rep3.pass_isotropy);
    verdict("criterion 9: standard equivariant checker, R^3 rotation example (exact)", ok, t0);
}

}  // namespace

int main() {
    auto t0 = Clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    auto total = std::chrono::duration_cast<std::chrono::seconds>(Clock::now() - t0).count();
    std::cout << (g_failures ? "ACCEPTANCE: FAILED (" : "ACCEPTANCE: OK (") << total
              << " s total)\n";
    return g_failures ? 1 : 0;
}
