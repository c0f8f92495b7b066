#pragma once

#include <string>
#include <vector>

#include "superint/op/diffop.hpp"
#include "superint/op/phasepoly.hpp"

namespace superint::op {

enum class RelationKind { Abelian, Heisenberg, Conformal, LadderLower, LadderRaise };

const char* to_string(RelationKind k);
RelationKind relation_from_string(const std::string& s);
// 'a'..'d'; ladder kinds both map to 'd'
char type_letter(RelationKind k);

struct AlgebraRelation {
    RelationKind kind = RelationKind::Abelian;
    Expr alpha;

    AlgebraRelation() = default;
    AlgebraRelation(RelationKind k, Expr a);
};

// Right-hand side of [H,K] (quantum) or {H,K} (classical). Classical ladder
// relations carry the factor i: {H,K} = -/+ i alpha K.
DiffOp relation_rhs(const DiffOp& H, const DiffOp& K, const AlgebraRelation& rel);
PhasePoly relation_rhs(const PhasePoly& H, const PhasePoly& K, const AlgebraRelation& rel);

// bracket minus the claimed right-hand side, reduced modulo rules
DiffOp check_relation(const DiffOp& H, const DiffOp& K, const AlgebraRelation& rel,
                      const std::vector<sym::RewriteRule>& rules = {});
PhasePoly check_relation(const PhasePoly& H, const PhasePoly& K, const AlgebraRelation& rel,
                         const std::vector<sym::RewriteRule>& rules = {});

}  // namespace superint::op
