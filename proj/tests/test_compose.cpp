#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "superint/compose/compose.hpp"
#include "superint/sym/serialize.hpp"

using namespace superint;
using namespace superint::composer;

namespace {

const Expr al = Expr::param("alpha");
const Expr a1 = Expr::param("alpha1");
const Expr a2 = Expr::param("alpha2");

Op2 px() { return DiffOp2::from_x(op::DiffOp::momentum(hbar())); }
Op2 py() { return DiffOp2::from_y(op::DiffOp::momentum(hbar(), sym::var_atom("y"))); }
Op2 X() { return DiffOp2::scalar(Expr::var("x")); }
Op2 Y() { return DiffOp2::scalar(Expr::var("y")); }
// x p_y - y p_x
Op2 L() { return product(X(), py()) - product(Y(), px()); }

Composition dd(const std::string& a, const std::string& b, int m, int n) {
    return compose({Case::DD, a, b, m, n, Expr(n) * al, Expr(m) * al});
}

Op2 jacobi(const Op2& a, const Op2& b, const Op2& c) {
    return bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
}

}  // namespace

TEST_CASE("Jauch-Hill integrals match the compact forms") {
    struct Row {
        int m, n;
    };
    for (Row r : {Row{1, 1}, Row{2, 1}, Row{3, 1}, Row{3, 2}, Row{4, 1}, Row{2, 3}}) {
        INFO("m=" << r.m << " n=" << r.n);
        auto c = dd("q-d1", "q-d1", r.m, r.n);
        CHECK(c.order == c.expected_order);
        CHECK(c.order == r.m + r.n - 1);
        Op2 compact = product(L(), product(power(px(), r.m - 1), power(py(), r.n - 1)));
        auto k = match_leading(c.K, compact);
        REQUIRE(k);
        CHECK_FALSE(k->is_zero());
        auto rep = check_superintegrable(c);
        CHECK(rep.commutes_K);
        CHECK(rep.commutes_A);
        CHECK(rep.independent);
    }
}

TEST_CASE("m = n = 1 gives the angular momentum exactly up to H") {
    auto c = dd("q-d1", "q-d1", 1, 1);
    auto r = match_modulo_hamiltonians(c.K, L(), c.x.H, c.y.H);
    REQUIRE(r);
    CHECK(*r == 2 * Expr::i() * al / hbar());
}

TEST_CASE("Smorodinsky-Winternitz from two singular oscillators") {
    auto c = dd("q-d2", "q-d2", 1, 1);
    auto rep = check_superintegrable(c);
    CHECK(rep.commutes_K);
    CHECK(rep.independent);
    CHECK(c.H.symbol()[{0, 0}] == al.pow(2) * Expr::var("x").pow(2) / (8 * hbar().pow(2)) +
                                      Expr::param("k") / Expr::var("x").pow(2) +
                                      al.pow(2) * Expr::var("y").pow(2) / (8 * hbar().pow(2)) +
                                      Expr::param("k_y") / Expr::var("y").pow(2));
}

TEST_CASE("caged oscillator from (d1, d2)") {
    auto c = compose({Case::DD, "q-d1", "q-d2", 1, 1, al, al});
    CHECK(check_superintegrable(c).commutes_K);
}

TEST_CASE("K = H is flagged as dependent") {
    auto c = dd("q-d1", "q-d1", 2, 1);
    auto rep = check_superintegrable(c.H, c.H, c.A);
    CHECK_FALSE(rep.independent);
    CHECK(rep.rank == 2);
}

TEST_CASE("a non-integral throws with its residual") {
    auto c = dd("q-d1", "q-d1", 2, 1);
    try {
        check_superintegrable(c.H, c.x.K, c.A);
        FAIL("expected NotAnIntegral");
    } catch (const NotAnIntegral& e) {
        CHECK(!e.residual["HK"].is_null());
    }
}

TEST_CASE("composition table rows") {
    SUBCASE("BB") {
        auto c = compose({Case::BB, "q-b3", "q-b1", 1, 1, a1, a2});
        CHECK(c.K == reduce(a2 * c.x.K - a1 * c.y.K, c.rules));
        CHECK(c.order == std::max(c.x.order, c.y.order));
        CHECK(check_superintegrable(c).commutes_K);
    }
    SUBCASE("AA on Weierstrass entries") {
        auto c = compose({Case::AA, "q-a3", "q-a3", 1, 1, a1, a2});
        CHECK(c.order == 3);
        auto rep = check_superintegrable(c);
        CHECK(rep.independent);
    }
    SUBCASE("CB") {
        auto c = compose({Case::CB, "q-c2", "q-b1", 1, 1, a1, a2});
        CHECK(c.order == c.expected_order);
        CHECK(check_superintegrable(c).commutes_K);
    }
    SUBCASE("CC") {
        auto c = compose({Case::CC, "q-c2", "q-c2", 1, 1, a1, a2});
        CHECK(c.order == c.expected_order);
        CHECK(check_superintegrable(c).commutes_K);
    }
    SUBCASE("AD is trivial") {
        auto c = compose({Case::AD, "q-a2", "q-d1", 1, 1, a1, a2});
        CHECK(c.trivial);
        CHECK(c.order == c.expected_order);
        REQUIRE(!c.P.empty());
        CHECK(check_superintegrable(c).commutes_K);
        // K2^- K2^+ is a polynomial in H2
        CHECK(hamiltonian_polynomial(product(c.y.K, adjoint(c.y.K)), c.x.H, c.y.H));
    }
    SUBCASE("exotic: Painleve I on both axes") {
        auto c = compose({Case::BB, "q-b3", "q-b3", 1, 1, a1, a2});
        CHECK(check_superintegrable(c).commutes_K);
    }
    SUBCASE("classical Jauch-Hill") {
        auto c = compose({Case::DD, "c-d1", "c-d1", 2, 1, al, 2 * al});
        CHECK(c.order == 2);
        CHECK(check_superintegrable(c).independent);
    }
}

TEST_CASE("composition errors") {
    CHECK_THROWS_AS(compose({Case::DD, "q-a2", "q-d1", 1, 1, al, al}), KindMismatch);
    CHECK_THROWS_AS(compose({Case::BB, "q-b1", "c-b1", 1, 1, a1, a2}), KindMismatch);
    CHECK_THROWS_AS(compose({Case::DD, "q-d1", "q-d1", 2, 1, al, al}), RationalityViolation);
    CHECK_THROWS_AS(compose({Case::DD, "q-d1", "q-d1", 2, 2, al, al}), RationalityViolation);
}

TEST_CASE("polynomial algebra, DD with m = n = 1") {
    auto s = algebra_structure(dd("q-d1", "q-d1", 1, 1));
    CHECK(bracket(s.A, s.C) == 4 * al.pow(2) * s.B);
    CHECK(s.fitted.at("4lambda^2") == 4 * al.pow(2));
    CHECK(s.template_match);
    CHECK(jacobi(s.A, s.B, s.C).is_zero());
}

TEST_CASE("polynomial algebra, DD with m = 2, n = 1") {
    auto c = dd("q-d1", "q-d1", 2, 1);
    auto s = algebra_structure(c);
    CHECK(s.fitted.at("4lambda^2") == 16 * al.pow(2));
    CHECK(s.BC_B.is_zero());
    CHECK(!s.BC_poly.empty());
    CHECK(s.BC == evaluate(s.BC_poly, c.x.H, c.y.H));
}

TEST_CASE("polynomial algebra, abelian and Heisenberg rows") {
    auto aa = algebra_structure(compose({Case::AA, "q-a3", "q-a3", 1, 1, a1, a2}));
    CHECK(aa.C.is_zero());
    CHECK(aa.AC.is_zero());
    CHECK(aa.BC.is_zero());
    auto bb = algebra_structure(compose({Case::BB, "q-b1", "q-b1", 1, 1, a1, a2}));
    CHECK(bb.C_central);
    CHECK(bb.C == Op2(DiffOp2::scalar(2 * a1 * a2)));
    CHECK(bb.AC.is_zero());
    CHECK(bb.BC.is_zero());
    CHECK(bb.template_match);
}

TEST_CASE("polynomial algebra, conformal rows") {
    auto cb = algebra_structure(compose({Case::CB, "q-c2", "q-b1", 1, 1, a1, a2}));
    CHECK(cb.AC.is_zero());
    CHECK(cb.fitted.at("kappa") == -a1.pow(2) * a2.pow(2));
    auto cc = algebra_structure(compose({Case::CC, "q-c2", "q-c2", 1, 1, a1, a2}));
    CHECK(cc.AC.is_zero());
    CHECK(cc.fitted.at("kappa") == a1.pow(2) * a2.pow(2));
    CHECK(cc.template_match);
}

TEST_CASE("classical DD algebra against T(A,H)") {
    auto s = algebra_structure(compose({Case::DD, "c-d1", "c-d1", 1, 1, al, al}));
    CHECK(s.fitted.at("4lambda^2") == -4 * al.pow(2));
    CHECK(s.fitted.count("T"));
    CHECK(s.template_match);
    CHECK(jacobi(s.A, s.B, s.C).is_zero());
}

TEST_CASE("composition JSON") {
    auto c = dd("q-d1", "q-d1", 2, 1);
    auto j = to_json(c);
    CHECK(j["case"] == "DD");
    CHECK(j["order"] == 2);
    CHECK(j["K"]["order"] == 2);
    CHECK(to_json(algebra_structure(c))["template_match"] == true);
}
