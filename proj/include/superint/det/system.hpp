#pragma once

#include <vector>

#include <json.hpp>

#include "superint/op/diffop.hpp"
#include "superint/op/relation.hpp"

namespace superint::det {

using op::AlgebraRelation;
using op::Mechanics;
using op::RelationKind;
using sym::AtomId;
using sym::Expr;

struct ConformalOrderTooLow : Error {
    using Error::Error;
};

// Unknown coefficient f_l(x) of K, and the potential V(x).
Expr coefficient_fn(int l);
AtomId coefficient_atom(int l, int order = 0);
Expr potential_fn(int order = 0);
AtomId potential_atom(int order = 0);
Expr hbar();
Expr alpha();

struct DeterminingSystem {
    Mechanics mechanics = Mechanics::Quantum;
    int M = 1;
    AlgebraRelation kind;
    // [H,K] = sum z_l D^l (quantum) or {H,K} = sum z_l p^l (classical)
    std::vector<Expr> z;
    // z_l - rhs_l, l = 0..M+1; all must vanish
    std::vector<Expr> constraints;
};

// closed-form Z list in the generic f_l, V
std::vector<Expr> z_list(Mechanics mech, int M);
// right-hand side coefficients of the relation, same indexing as z_list
std::vector<Expr> rhs_list(Mechanics mech, int M, const AlgebraRelation& rel);

DeterminingSystem generate(Mechanics mech, int M, const AlgebraRelation& rel);
DeterminingSystem generate(Mechanics mech, int M, RelationKind kind);

// [H,K] (or {H,K}) coefficients computed by opalg for generic f_l
std::vector<Expr> bracket_coefficients(Mechanics mech, int M);

nlohmann::json to_json(const DeterminingSystem& s);

}  // namespace superint::det
