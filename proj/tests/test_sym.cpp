#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "random_expr.hpp"
#include "superint/sym/rewrite.hpp"
#include "superint/sym/serialize.hpp"

using namespace superint::sym;
using superint::testing::random_expr;

namespace {

const Expr x = Expr::var("x");
const Expr hbar = Expr::param("hbar");
const Expr a1 = Expr::param("alpha1");
const Expr I = Expr::i();
Expr V(int k = 0) { return Expr::func("V", "x", k); }
const AtomId X = var_atom("x");

}  // namespace

TEST_CASE("normalize examples") {
    CHECK(((x + 1).pow(2) - x.pow(2) - 2 * x - 1).is_zero());
    CHECK((hbar * V(1) - V(1) * hbar).is_zero());
    Expr lhs = Expr(2) * (-I * hbar).pow(3);
    // oracle: (-i)^3 = i by complex-rational arithmetic
    Coeff mi3 = Coeff(mpq_class(0), mpq_class(-1)).pow(3);
    CHECK(mi3 == Coeff::i());
    CHECK(lhs == Expr(Coeff(2) * mi3) * hbar.pow(3));
    CHECK(to_infix(lhs) == "2*i*hbar^3");
}

TEST_CASE("differentiate examples") {
    CHECK(differentiate(V().pow(2)) == 2 * V() * V(1));
    Expr f3 = Expr::func("f3", "x");
    CHECK(differentiate(x * f3) == f3 + x * Expr::func("f3", "x", 1));
    Expr beta = Expr::param("beta");
    CHECK(differentiate(beta / x.pow(2)) == -2 * beta / x.pow(3));
}

TEST_CASE("reduce_mod examples") {
    Expr rhs = 6 * V().pow(2) / hbar.pow(2) + 4 * I * a1 * x / hbar.pow(3);
    std::vector<RewriteRule> rules{RewriteRule::solved(V(2), rhs)};
    CHECK(reduce_mod(V(2), rules) == rhs);
    // oracle: hand differentiation of the rule, d/dx rhs
    CHECK(reduce_mod(V(3), rules) == 12 * V() * V(1) / hbar.pow(2) + 4 * I * a1 / hbar.pow(3));
    CHECK(reduce_mod(V(), rules) == V());
    std::vector<RewriteRule> bad{RewriteRule::solved(V(2), rhs), RewriteRule::solved(V(2), rhs + 1)};
    CHECK_THROWS_AS(reduce_mod(V(2), bad), InconsistentRules);
}

TEST_CASE("reduce_mod with a nonlinear companion rule") {
    Expr P = Expr::func("wp", "x");
    Expr P1 = Expr::func("wp", "x", 1), P2 = Expr::func("wp", "x", 2);
    Expr g2 = Expr::param("g2"), g3 = Expr::param("g3");
    std::vector<RewriteRule> rules{
        RewriteRule::solved(P2, 6 * P.pow(2) - g2 / 2),
        RewriteRule(P1.terms()[0].mono[0].atom, P1.pow(2) - 4 * P.pow(3) + g2 * P + g3)};
    Expr e = P1.pow(3) + Expr::func("wp", "x", 4);
    // oracle: P'^2 = 4P^3 - g2 P - g3, P'''' = d^2(6P^2 - g2/2) = 12 P'^2 + 12 P P''
    Expr p1sq = 4 * P.pow(3) - g2 * P - g3;
    Expr expect = P1 * p1sq + 12 * p1sq + 12 * P * (6 * P.pow(2) - g2 / 2);
    CHECK(reduce_mod(e, rules) == expect);
}

TEST_CASE("substitute examples") {
    Expr e = I * hbar * V(1);
    CHECK(substitute(e, V().terms()[0].mono[0].atom, a1 * x / (I * hbar)) == a1);
    CHECK(substitute(hbar.pow(4) * V(4), param_atom("hbar"), Expr(1)) == V(4));
    Expr U = Expr::func("U", "x");
    Expr c = Expr::param("c");
    Expr form = 2 * U * Expr::func("U", "x", 2) - Expr::func("U", "x", 1).pow(2) - 8 * U.pow(3);
    CHECK(substitute(form, func_atom("U", X), c) == -8 * c.pow(3));
}

TEST_CASE("sign and radical atoms") {
    Expr eps = Expr::sign("eps");
    CHECK(eps.pow(2) == Expr(1));
    CHECK(eps.pow(-1) == eps);
    Expr r = Expr::root(Expr::rational(2, 3) * a1 * x, 2);
    CHECK(r.pow(2) == Expr::rational(2, 3) * a1 * x);
    CHECK(differentiate(r) == r / (2 * x));
    Expr c = Expr::root(x, 3);
    CHECK(c.pow(3) == x);
    CHECK(differentiate(c.pow(2)) == Expr::rational(2, 3) * c.pow(2) / x);
}

TEST_CASE("serialization round trips") {
    std::mt19937_64 rng(7);
    ParseContext ctx;
    for (int k = 0; k < 200; ++k) {
        Expr e = random_expr(rng);
        CHECK(from_prefix(to_prefix(e)) == e);
        CHECK(from_json(to_json(e)) == e);
        CHECK(parse_infix(to_infix(e), ctx) == e);
    }
    Expr r = Expr::sign("eps") * Expr::root(Expr::rational(2, 3) * a1 * x, 2) + Expr::root(x, 3).pow(2);
    CHECK(from_prefix(to_prefix(r)) == r);
    CHECK(from_json(to_json(r)) == r);
    CHECK(parse_infix(to_infix(r)) == r);
    CHECK(to_prefix(Expr()) == "0");
    CHECK_THROWS_AS(from_prefix("(+ 1"), ParseError);
    CHECK_THROWS_AS(parse_infix("1/(x+1)"), ParseError);
}

TEST_CASE("printing is deterministic") {
    Expr e = parse("6*V^2/hbar^2 + 4*i*alpha1*x/hbar^3", {"V"});
    CHECK(to_infix(e) == "4*i*alpha1*x/hbar^3 + 6*V(x)^2/hbar^2");
    CHECK(to_prefix(e) == "(+ (* (cx 0 4) alpha1 (^ hbar -3) (var x)) (* 6 (^ hbar -2) (^ (fn V x 0) 2)))");
}

TEST_CASE("ring laws on random triples") {
    std::mt19937_64 rng(1234);
    for (int k = 0; k < 200; ++k) {
        Expr a = random_expr(rng), b = random_expr(rng), c = random_expr(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("differentiate is linear and Leibniz") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 200; ++k) {
        Expr a = random_expr(rng), b = random_expr(rng);
        Expr s = Expr(superint::testing::random_coeff(rng));
        CHECK(differentiate(s * a + b) == s * differentiate(a) + differentiate(b));
        CHECK(differentiate(a * b) == differentiate(a) * b + a * differentiate(b));
    }
}

TEST_CASE("reduce_mod confluence on single-function chains") {
    std::mt19937_64 rng(4242);
    Expr k = Expr::param("k");
    for (int n = 0; n < 60; ++n) {
        // rule chain for V: V'' -> r2(V, V', x) ; random lower-order data
        Expr r2 = random_expr(rng, 3, false) * V(1) + random_expr(rng, 2, false) * V().pow(2) + k;
        std::vector<RewriteRule> rules{RewriteRule::solved(V(2), r2)};
        Expr e;
        std::uniform_int_distribution<int> ord(0, 4);
        for (int t = 0; t < 4; ++t) e += random_expr(rng, 2, false) * V(ord(rng)) * V(ord(rng));
        Expr whole = reduce_mod(e, rules);
        CHECK(max_order(whole, func_atom("V", X)) <= 1);
        // oracle: reduce term-by-term in a shuffled order and sum
        std::vector<Term> ts = e.terms();
        std::shuffle(ts.begin(), ts.end(), rng);
        Expr parts;
        for (auto& t : ts) parts += reduce_mod(Expr::from_terms({t}), rules);
        CHECK(parts == whole);
        // oracle: eliminate the highest derivative first by hand (exhaustive descending order)
        Expr manual = e;
        for (int m = 4; m >= 2; --m) {
            Expr rm = differentiate(r2, X, m - 2);
            manual = substitute(manual, func_atom("V", X, m), rm);
        }
        CHECK(manual == whole);
    }
}
