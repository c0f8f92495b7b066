#include "superint/det/system.hpp"

#include <string>

#include "superint/op/phasepoly.hpp"
#include "superint/sym/serialize.hpp"

namespace superint::det {

namespace {

const AtomId kX = sym::var_atom("x");

long binom(int n, int k) {
    long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

}  // namespace

AtomId coefficient_atom(int l, int order) { return sym::func_atom("f" + std::to_string(l), kX, order); }
Expr coefficient_fn(int l) { return Expr::atom(coefficient_atom(l)); }
AtomId potential_atom(int order) { return sym::func_atom("V", kX, order); }
Expr potential_fn(int order) { return Expr::atom(potential_atom(order)); }
Expr hbar() { return Expr::param("hbar"); }
Expr alpha() { return Expr::param("alpha1"); }

std::vector<Expr> z_list(Mechanics mech, int M) {
    auto f = [&](int l, int k = 0) { return (l < 0 || l > M) ? Expr() : Expr::atom(coefficient_atom(l, k)); };
    auto V = [](int k) { return potential_fn(k); };
    std::vector<Expr> z(M + 2);
    if (mech == Mechanics::Classical) {
        for (int l = 0; l <= M + 1; ++l) z[l] = Expr(l + 1) * f(l + 1) * V(1) - f(l - 1, 1);
        return z;
    }
    const Expr h = hbar();
    const Expr m = -Expr::i() * h;
    const Expr half_h2 = h.pow(2) / 2;
    Expr z0 = -half_h2 * f(0, 2);
    for (int j = 1; j <= M; ++j) z0 -= m.pow(j) * f(j) * V(j);
    z[0] = z0;
    for (int l = 1; l <= M + 1; ++l) {
        Expr e = -half_h2 * m.pow(l - 1) * (2 * f(l - 1, 1) - Expr::i() * h * f(l, 2));
        for (int j = l + 1; j <= M; ++j) e -= m.pow(j) * f(j) * Expr(binom(j, l)) * V(j - l);
        z[l] = e;
    }
    return z;
}

std::vector<Expr> rhs_list(Mechanics mech, int M, const AlgebraRelation& rel) {
    std::vector<Expr> r(M + 2);
    const Expr a = rel.alpha;
    const bool q = mech == Mechanics::Quantum;
    switch (rel.kind) {
        case RelationKind::Abelian:
            break;
        case RelationKind::Heisenberg:
            r[0] = a;
            break;
        case RelationKind::Conformal:
            r[0] = a * potential_fn();
            r[2] = q ? -a * hbar().pow(2) / 2 : a / 2;
            break;
        case RelationKind::LadderLower:
        case RelationKind::LadderRaise: {
            Expr lam = rel.kind == RelationKind::LadderLower ? -a : a;
            if (!q) lam *= Expr::i();
            Expr m = -Expr::i() * hbar();
            for (int l = 0; l <= M; ++l) r[l] = lam * (q ? m.pow(l) : Expr(1)) * coefficient_fn(l);
            break;
        }
    }
    return r;
}

DeterminingSystem generate(Mechanics mech, int M, const AlgebraRelation& rel) {
    if (M < 1) throw Error("order M must be at least 1");
    if (rel.kind == RelationKind::Conformal && M < 2)
        throw ConformalOrderTooLow("conformal relation requires M >= 2");
    DeterminingSystem s;
    s.mechanics = mech;
    s.M = M;
    s.kind = rel;
    s.z = z_list(mech, M);
    auto r = rhs_list(mech, M, rel);
    for (int l = 0; l <= M + 1; ++l) s.constraints.push_back(s.z[l] - r[l]);
    return s;
}

DeterminingSystem generate(Mechanics mech, int M, RelationKind kind) {
    return generate(mech, M, AlgebraRelation{kind, kind == RelationKind::Abelian ? Expr() : alpha()});
}

std::vector<Expr> bracket_coefficients(Mechanics mech, int M) {
    std::vector<Expr> f;
    for (int l = 0; l <= M; ++l) f.push_back(coefficient_fn(l));
    std::vector<Expr> out;
    if (mech == Mechanics::Quantum) {
        auto c = op::commutator(op::DiffOp::hamiltonian(potential_fn(), hbar()), op::DiffOp::from_momentum(f, hbar()));
        for (int l = 0; l <= M + 1; ++l) out.push_back(c.coeff(l));
    } else {
        auto c = op::poisson(op::PhasePoly::hamiltonian(potential_fn()), op::PhasePoly(f));
        for (int l = 0; l <= M + 1; ++l) out.push_back(c.coeff(l));
    }
    return out;
}

nlohmann::json to_json(const DeterminingSystem& s) {
    nlohmann::json z = nlohmann::json::array(), c = nlohmann::json::array();
    for (const auto& e : s.z) z.push_back(sym::to_infix(e));
    for (const auto& e : s.constraints) c.push_back(sym::to_infix(e));
    return {{"mechanics", op::to_string(s.mechanics)},
            {"M", s.M},
            {"kind", op::to_string(s.kind.kind)},
            {"alpha", sym::to_infix(s.kind.alpha)},
            {"z", z},
            {"constraints", c}};
}

}  // namespace superint::det
