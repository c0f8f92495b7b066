#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "properties.hpp"
#include "superint/op/op2.hpp"
#include "superint/op/relation.hpp"
#include "superint/sym/serialize.hpp"

using namespace superint;
using namespace superint::op;
using sym::Expr;

namespace {

const Expr x = Expr::var("x");
const Expr hbar = Expr::param("hbar");
const Expr a1 = Expr::param("alpha1");
const Expr I = Expr::i();
Expr V(int k = 0) { return Expr::func("V", "x", k); }

}  // namespace

TEST_CASE("compose examples") {
    CHECK(compose(DiffOp::D(), DiffOp::scalar(x)) == DiffOp({Expr(1), x}));
    CHECK(compose(power(DiffOp::D(), 2), DiffOp::scalar(V())) == DiffOp({V(2), 2 * V(1), V()}));
}

TEST_CASE("compose is associative (pointwise action oracle)") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 40; ++k) {
        DiffOp a(testing::random_coeff_list(rng, 2)), b(testing::random_coeff_list(rng, 2)),
            c(testing::random_coeff_list(rng, 2));
        CHECK(compose(a, compose(b, c)) == compose(compose(a, b), c));
        Expr g = testing::random_poly_x(rng, 5) * Expr::func("g", "x");
        CHECK(apply(compose(a, compose(b, c)), g) == apply(a, apply(b, apply(c, g))));
    }
}

TEST_CASE("commutator examples") {
    DiffOp p = DiffOp::momentum(hbar);
    CHECK(commutator(DiffOp::hamiltonian(V(), hbar), p) == DiffOp::scalar(I * hbar * V(1)));
    Expr vb1 = a1 * x / (I * hbar);
    CHECK(commutator(DiffOp::hamiltonian(vb1, hbar), p) == DiffOp::scalar(a1));
    std::mt19937_64 rng(5);
    DiffOp a(testing::random_coeff_list(rng, 3));
    CHECK(commutator(a, a).is_zero());
}

TEST_CASE("adjoint examples") {
    CHECK(adjoint(DiffOp::D()) == -DiffOp::D());
    DiffOp p = DiffOp::momentum(hbar);
    CHECK(adjoint(p) == p);
    DiffOp kd1 = p - DiffOp::scalar(I * a1 * x / hbar);
    CHECK(adjoint(kd1) == p + DiffOp::scalar(I * a1 * x / hbar));
    DiffOp H = DiffOp::hamiltonian(V(), hbar);
    CHECK(adjoint(H) == H);
}

TEST_CASE("poisson examples") {
    // standard orientation {a,b} = a_x b_p - a_p b_x
    CHECK(poisson(PhasePoly::hamiltonian(V()), PhasePoly::p()) == PhasePoly::scalar(V(1)));
    Expr gamma = Expr::param("gamma");
    Expr vd2 = a1.pow(2) * x.pow(2) / 8 + gamma / x.pow(2);
    // oracle: hand expansion gives {H, p^2 + i a x p - x V'} = -i a K
    PhasePoly K({-x * sym::differentiate(vd2), I * a1 * x, Expr(1)});
    PhasePoly H = PhasePoly::hamiltonian(vd2);
    CHECK(poisson(H, K) == (-I * a1) * K);
    CHECK(check_relation(H, K, {RelationKind::LadderLower, a1}).is_zero());
}

TEST_CASE("classical Z list reproduced by poisson") {
    std::mt19937_64 rng(77);
    for (int M = 1; M <= 5; ++M) {
        std::vector<Expr> f;
        for (int l = 0; l <= M; ++l) f.push_back(testing::random_poly_x(rng, 3));
        PhasePoly b = poisson(PhasePoly::hamiltonian(V()), PhasePoly(f));
        auto fl = [&](int l) { return (l >= 0 && l <= M) ? f[l] : Expr(); };
        CHECK(b.coeff(0) == fl(1) * V(1));
        for (int l = 1; l <= M - 1; ++l)
            CHECK(b.coeff(l) == Expr(l + 1) * fl(l + 1) * V(1) - sym::differentiate(fl(l - 1)));
        CHECK(b.coeff(M) == -sym::differentiate(fl(M - 1)));
        CHECK(b.coeff(M + 1) == -sym::differentiate(fl(M)));
    }
}

TEST_CASE("check_relation examples") {
    DiffOp p = DiffOp::momentum(hbar);
    DiffOp Hd1 = DiffOp::hamiltonian(a1.pow(2) * x.pow(2) / (2 * hbar.pow(2)), hbar);
    DiffOp Kd1 = p - DiffOp::scalar(I * a1 * x / hbar);
    CHECK(check_relation(Hd1, Kd1, {RelationKind::LadderLower, a1}).is_zero());
    CHECK(!check_relation(Hd1, Kd1, {RelationKind::LadderRaise, a1}).is_zero());
    CHECK(check_relation(Hd1, adjoint(Kd1), {RelationKind::LadderRaise, a1}).is_zero());

    Expr beta = Expr::param("beta");
    DiffOp Hc2 = DiffOp::hamiltonian(beta / x.pow(2), hbar);
    DiffOp Kc2 = 2 * Hc2 + compose(DiffOp::scalar(I * a1 * x / (2 * hbar)), p);
    CHECK(check_relation(Hc2, Kc2, {RelationKind::Conformal, a1}).is_zero());

    CHECK(check_relation(DiffOp::hamiltonian(Expr(), hbar), p, {}).is_zero());
}

TEST_CASE("check_relation modulo an ODE") {
    // quantum b3: V'' = 6V^2/hbar^2 + 4 i alpha1 x / hbar^3
    Expr beta = Expr::param("beta");
    std::vector<sym::RewriteRule> rules{
        sym::RewriteRule::solved(V(2), 6 * V().pow(2) / hbar.pow(2) + 4 * I * a1 * x / hbar.pow(3))};
    DiffOp K = DiffOp::from_momentum({2 * beta * V() - Expr::rational(3, 2) * I * hbar * V(1), 3 * V(), beta, Expr(1)},
                                     hbar);
    DiffOp H = DiffOp::hamiltonian(V(), hbar);
    CHECK(!check_relation(H, K, {RelationKind::Heisenberg, a1}).is_zero());
    CHECK(check_relation(H, K, {RelationKind::Heisenberg, a1}, rules).is_zero());
}

TEST_CASE("property suites") {
    CHECK(testing::jacobi_commutator_failures(1, 40) == 0);
    CHECK(testing::jacobi_poisson_failures(2, 40) == 0);
    CHECK(testing::adjoint_antihom_failures(3, 40) == 0);
    CHECK(testing::classical_limit_failures(4, 40) == 0);
}

TEST_CASE("2D operators") {
    Expr y = Expr::var("y");
    DiffOp2 px = DiffOp2::from_x(DiffOp::momentum(hbar));
    DiffOp2 py = DiffOp2::from_y(DiffOp::momentum(hbar, sym::var_atom("y")));
    DiffOp2 L = compose(DiffOp2::scalar(x), py) - compose(DiffOp2::scalar(y), px);
    DiffOp2 H = compose(px, px) + compose(py, py);
    CHECK(commutator(H, L).is_zero());
    CHECK(adjoint(L) == L);
    PhasePoly2 Lc({{{0, 1}, x}, {{1, 0}, -y}});
    PhasePoly2 Hc({{{2, 0}, Expr(1)}, {{0, 2}, Expr(1)}});
    CHECK(poisson(Hc, Lc).is_zero());
    CHECK(diffop2_from_json(to_json(L)) == L);
}

TEST_CASE("operator JSON") {
    DiffOp K = DiffOp::from_momentum({V(), x, Expr(1)}, hbar);
    CHECK(diffop_from_json(to_json(K)) == K);
    PhasePoly P({V(), x, Expr(1)});
    CHECK(phasepoly_from_json(to_json(P)) == P);
}
