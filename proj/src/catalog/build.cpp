#include "superint/catalog/catalog.hpp"

namespace superint::catalog {

namespace {

using op::Mechanics;
using op::RelationKind;

const Expr x = Expr::var("x");
const Expr y = Expr::var("y");
const Expr h = Expr::param("hbar");
const Expr a = Expr::param("alpha1");
const Expr b = Expr::param("beta");
const Expr I = Expr::i();

RelationKind kind_of(char t) {
    switch (t) {
    case 'a': return RelationKind::Abelian;
    case 'b': return RelationKind::Heisenberg;
    case 'c': return RelationKind::Conformal;
    default: return RelationKind::LadderLower;
    }
}

det::SolvedPair solved(Mechanics m, char t, int M, bool keep, const std::string& branch = "generic") {
    det::SolveOptions o;
    o.keep_constants = keep;
    for (auto& s : det::solve_all(det::generate(m, M, kind_of(t)), o))
        if (s.branch == branch) return s;
    throw CatalogError(std::string("solver has no branch ") + branch);
}

CatalogEntry entry(const std::string& id, Mechanics m, char t, int M, bool keep = false,
                   const std::string& branch = "generic") {
    CatalogEntry e;
    e.id = id;
    e.pair = solved(m, t, M, keep, branch);
    e.keep_constants = keep;
    e.mode = e.pair.potential.variant == det::PotentialVariant::ClosedForm ? Mode::SymbolicClosed
                                                                         : Mode::SymbolicModOde;
    if (m == Mechanics::Quantum && t == 'd') e.ladder_polynomial = det::ladder_product(e.pair);
    return e;
}

CatalogEntry sub(CatalogEntry e, const std::string& id, const std::string& parent) {
    e.id = id;
    e.parent = parent;
    e.ladder_polynomial.clear();
    e.annotations = nlohmann::json::object();
    return e;
}

Expr f(const char* name, int k = 0) { return Expr::func(name, "x", k); }

void note(CatalogEntry& e, const std::string& key, const std::string& text) { e.annotations[key] = text; }

void quantum(Catalog& c) {
    const auto Q = Mechanics::Quantum;
    for (int M = 2; M <= 5; ++M) {
        auto e = entry("q-a" + std::to_string(M), Q, 'a', M);
        c.add(e);
        if (M == 3) {
            auto s = sub(e, "q-a3-inv", "q-a3");
            s.from_solver = false;
            s.mode = Mode::SymbolicClosed;
            Expr V = h.pow(2) / x.pow(2);
            s.pair.potential = det::PotentialSpec{};
            s.pair.potential.variant = det::PotentialVariant::ClosedForm;
            s.pair.potential.potential = V;
            s.pair.f = {-3 * I * h * sym::differentiate(V, sym::var_atom("x")), 6 * V, Expr(0), Expr(2)};
            s.pair.branch = "special";
            note(s, "printed", "V = hbar^2/x^2, K = 2p^3 + {3hbar^2/x^2, p}");
            c.add(s);
        }
        if (M == 3 || M == 4) {
            auto k = entry("q-a" + std::to_string(M) + "-wp", Q, 'a', M, true);
            k.parent = "q-a" + std::to_string(M);
            Expr g2 = Expr::param("g2"), g3 = Expr::param("g3");
            Expr W = f("W"), W1 = f("W", 1);
            if (M == 3)
                k.bindings = {{"beta1", Expr(0)}, {"k", -I * g2 * h.pow(4) / 8}};
            else
                k.bindings = {{"beta2", Expr(0)}, {"k", -I * b * g2 * h.pow(4) / 8}};
            k.representation = Representation{"W", h.pow(2) * W, f("W", 2) - 6 * W.pow(2) + g2 / 2, 2,
                                              {W1.pow(2) - 4 * W.pow(3) + g2 * W + g3},
                                              "Weierstrass function wp(x; g2, g3)"};
            note(k, "printed", M == 3 ? "K_{a_3}=p_x^3+beta p_x^2+3hbar^2 wp p_x" : "V = hbar^2 wp(x)");
            c.add(k);
        }
    }
    for (int M = 1; M <= 5; ++M) {
        auto e = entry("q-b" + std::to_string(M), Q, 'b', M);
        if (M == 3) note(e, "transcendent", "first Painleve equation");
        if (M == 4) note(e, "typo", "printed K_{b_4} omits a p_x factor");
        if (M == 5) note(e, "transcendent", "fourth-order member of the first Painleve hierarchy");
        c.add(e);
    }
    for (int M = 2; M <= 5; ++M) {
        auto e = entry("q-c" + std::to_string(M), Q, 'c', M);
        if (M == 2) note(e, "typo", "printed Z_2 carries 2 beta_1/x^2 with hbar instead of hbar^2");
        c.add(e);
        if (M == 3) {
            Expr q = f("Q"), q1 = f("Q", 1), q2 = f("Q", 2);
            auto k0 = sub(e, "q-c3-k0", "q-c3");
            Expr lam = Expr::root(-I * a / h.pow(3), 3);
            k0.representation = Representation{"Q", h.pow(2) * lam.pow(2) * q.pow(2) - I * a * x / (2 * h),
                                               q2 - 2 * lam.pow(2) * q.pow(3) - lam.pow(3) * x * q, 2, {},
                                               "second Painleve equation, k = 0 branch"};
            c.add(k0);
            auto k1 = sub(e, "q-c3-k", "q-c3");
            Expr mu = Expr::root(2 * I * a / h.pow(3), 3), cc = Expr::param("c");
            k1.representation = Representation{"Q", h.pow(2) * (mu * q1 + mu.pow(2) * q.pow(2)) / 2,
                                               q2 - mu.pow(2) * (2 * q.pow(3) + mu * x * q - cc - Expr(1) / 2), 2,
                                               {}, "second Painleve equation via Ince XXXIV, k != 0 branch"};
            c.add(k1);
        }
        if (M == 4) c.add(sub(entry("q-c4", Q, 'c', 4, false, "beta=0"), "q-c4-beta0", "q-c4"));
    }
    for (int M = 1; M <= 5; ++M) {
        auto e = entry("q-d" + std::to_string(M), Q, 'd', M);
        if (M == 3) note(e, "transcendent", "fourth Painleve equation");
        if (M == 4) note(e, "transcendent", "Chazy class I, canonical form SD-I.b");
        if (M == 5) note(e, "transcendent", "fifth Painleve equation");
        c.add(e);
        if (M == 3) {
            auto k = entry("q-d3-p4", Q, 'd', 3, true);
            k.parent = "q-d3";
            k.ladder_polynomial.clear();
            Expr k1 = Expr::param("k1"), k2 = Expr::param("k2"), eps = Expr::sign("eps");
            Expr A = a.pow(2) / h.pow(4);
            Expr P = f("P"), P1 = f("P", 1);
            k.bindings = {{"beta1", Expr(0)},
                          {"k", I * (a.pow(2) * h.pow(4) * k2 + a.pow(2) * h.pow(4) / 4 +
                                     eps * a * h.pow(6) * k1 / 6 - h.pow(8) * k1.pow(2) / 24)}};
            Expr V = eps * a * P1 + 2 * a.pow(2) / h.pow(2) * (P.pow(2) + x * P) +
                     a.pow(2) * x.pow(2) / (2 * h.pow(2)) + (eps - 1) * a / 3 - h.pow(2) * k1 / 6;
            Expr rel = 2 * P * f("P", 2) - P1.pow(2) - 12 * A * P.pow(4) - 16 * A * x * P.pow(3) -
                       2 * (2 * A * x.pow(2) - k1) * P.pow(2) - 2 * k2;
            k.representation = Representation{"P", V, rel, 2, {}, "fourth Painleve equation"};
            c.add(k);
        }
    }
}

void classical(Catalog& c) {
    const auto C = Mechanics::Classical;
    const Expr V = f("V"), V1 = f("V", 1);
    for (int M : {3, 4}) c.add(entry("c-a" + std::to_string(M), C, 'a', M));
    for (int M = 1; M <= 5; ++M) {
        auto e = entry("c-b" + std::to_string(M), C, 'b', M);
        if (M == 5) note(e, "typo", "printed block writes h_1 and V_2 for the potential");
        c.add(e);
    }
    for (int M = 2; M <= 5; ++M) {
        auto e = entry("c-c" + std::to_string(M), C, 'c', M);
        if (M == 3) e.first_integrals = {(a * x - 2 * V).pow(2) * V};
        if (M == 4) e.first_integrals = {(2 * b * V - a * x).pow(2) * V};
        if (M == 5) e.reference_equation = 15 * V.pow(2) * V1 - a * x * V1 - 2 * a * V;
        c.add(e);
    }
    for (int M = 1; M <= 5; ++M) {
        auto e = entry("c-d" + std::to_string(M), C, 'd', M);
        if (M == 2) note(e, "typo", "printed as alpha_1 x^2/8 for alpha_1^2 x^2/8");
        if (M == 3) note(e, "typo", "printed K_{d_3} mixes alpha and alpha_1");
        c.add(e);
        if (M == 3) {
            auto k = entry("c-d3-k", C, 'd', 3, true);
            k.parent = "c-d3";
            Expr d = Expr::param("d");
            Expr a2x2 = a.pow(2) * x.pow(2);
            k.bindings = {{"beta1", Expr(0)}, {"k", I * d / 2}};
            k.reference_equation = 24 * x * V * V1 - 4 * a.pow(2) * x.pow(3) * V1 - 12 * V.pow(2) - 12 * a2x2 * V +
                               a.pow(4) * x.pow(4) + 4 * d;
            Expr quartic = 9 * V.pow(4) - 14 * a2x2 * V.pow(3) + (Expr(15) / 2 * a2x2.pow(2) - 6 * d) * V.pow(2) -
                           2 * a2x2 * (Expr(3) / 4 * a2x2.pow(2) - d) * V +
                           (a2x2.pow(4) / 16 + d * a2x2.pow(2) / 2 + d.pow(2));
            k.first_integrals = {quartic / x.pow(2)};
            note(k, "first_integral", "the printed quartic Q(x, V) = 0 is the level set I = 0 of I = Q/x^2");
            c.add(k);
        }
        if (M == 4) {
            auto k = entry("c-d4-k", C, 'd', 4, true);
            k.parent = "c-d4";
            Expr k2 = Expr::param("k2"), u = f("u"), u1 = f("u", 1);
            k.bindings = {{"beta1", Expr(0)}, {"beta2", Expr(0)}, {"k", Expr(0)}, {"k1", -a * k2 / 2}};
            k.reference_equation = 3 * x.pow(2) * u1.pow(2) + 2 * x * u * u1 - a.pow(2) * x.pow(4) * u1 / 3 - u.pow(2) -
                               Expr(2) / 3 * a.pow(2) * x.pow(3) * u + a.pow(4) * x.pow(6) / 72 + k2;
            note(k, "typo",
                 "the printed k_1 x term is inconsistent with the determining equations; it must vanish");
            c.add(k);
        }
    }
}

void families(Catalog& c) {
    Expr w = Expr::param("omega"), g = Expr::param("gamma"), bb = Expr::param("beta");
    Expr m = Expr::param("m"), n = Expr::param("n");
    Expr osc = w.pow(2) * (n.pow(2) * x.pow(2) + m.pow(2) * y.pow(2));
    c.add(FamilyEntry{"jauch-hill", osc, {"omega", "m", "n"}, "DD: q-d1 in x and y, K = (K1^+)^m (K2^-)^n - h.c.",
                      {{"printed", "anisotropic harmonic oscillator potentials"},
                       {"typo", "the text writes n x^2 + m y^2; the (d1,d1) example has squared exponents"}}});
    c.add(FamilyEntry{"smorodinsky-winternitz", w.pow(2) * (x.pow(2) + y.pow(2)) + bb / x.pow(2) + g / y.pow(2),
                      {"omega", "beta", "gamma"}, "DD: q-d2 in x and y with m = n = 1", {}});
    c.add(FamilyEntry{"caged", osc + bb / x.pow(2) + g / y.pow(2), {"omega", "m", "n", "beta", "gamma"},
                      "DD: q-d2 in x and y, coprime (m, n); beta = 0 from (d1, d2)",
                      {{"printed", "caged harmonic oscillators"}}});
}

}  // namespace

Catalog build() {
    Catalog c;
    quantum(c);
    classical(c);
    families(c);
    c.add(Identification{"c-b1", "c-b2", {{"alpha1", a / b}}});
    c.add(Identification{"c-b3", "c-b4", {{"alpha1", a / b}}});
    c.add(Identification{"c-c3", "c-c4", {{"alpha1", a / b}}});
    c.add(Identification{"c-a3", "c-a4", {}});
    return c;
}

}  // namespace superint::catalog
