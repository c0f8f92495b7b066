#include "superint/op/relation.hpp"

namespace superint::op {

const char* to_string(RelationKind k) {
    switch (k) {
        case RelationKind::Abelian:
            return "abelian";
        case RelationKind::Heisenberg:
            return "heisenberg";
        case RelationKind::Conformal:
            return "conformal";
        case RelationKind::LadderLower:
            return "ladder-lower";
        case RelationKind::LadderRaise:
            return "ladder-raise";
    }
    return "?";
}

RelationKind relation_from_string(const std::string& s) {
    if (s == "a" || s == "abelian") return RelationKind::Abelian;
    if (s == "b" || s == "heisenberg") return RelationKind::Heisenberg;
    if (s == "c" || s == "conformal") return RelationKind::Conformal;
    if (s == "d" || s == "ladder-lower" || s == "lower") return RelationKind::LadderLower;
    if (s == "ladder-raise" || s == "raise") return RelationKind::LadderRaise;
    throw Error("unknown relation kind '" + s + "'");
}

char type_letter(RelationKind k) {
    switch (k) {
        case RelationKind::Abelian:
            return 'a';
        case RelationKind::Heisenberg:
            return 'b';
        case RelationKind::Conformal:
            return 'c';
        default:
            return 'd';
    }
}

AlgebraRelation::AlgebraRelation(RelationKind k, Expr a) : kind(k), alpha(std::move(a)) {
    if (kind != RelationKind::Abelian && alpha.is_zero()) throw Error("relation constant must be nonzero");
}

DiffOp relation_rhs(const DiffOp& H, const DiffOp& K, const AlgebraRelation& rel) {
    switch (rel.kind) {
        case RelationKind::Abelian:
            return DiffOp({}, H.var());
        case RelationKind::Heisenberg:
            return DiffOp::scalar(rel.alpha, H.var());
        case RelationKind::Conformal:
            return rel.alpha * H;
        case RelationKind::LadderLower:
            return -rel.alpha * K;
        case RelationKind::LadderRaise:
            return rel.alpha * K;
    }
    return {};
}

PhasePoly relation_rhs(const PhasePoly& H, const PhasePoly& K, const AlgebraRelation& rel) {
    switch (rel.kind) {
        case RelationKind::Abelian:
            return PhasePoly({}, H.var());
        case RelationKind::Heisenberg:
            return PhasePoly::scalar(rel.alpha, H.var());
        case RelationKind::Conformal:
            return rel.alpha * H;
        case RelationKind::LadderLower:
            return (-Expr::i() * rel.alpha) * K;
        case RelationKind::LadderRaise:
            return (Expr::i() * rel.alpha) * K;
    }
    return {};
}

DiffOp check_relation(const DiffOp& H, const DiffOp& K, const AlgebraRelation& rel,
                      const std::vector<sym::RewriteRule>& rules) {
    return reduce(commutator(H, K) - relation_rhs(H, K, rel), rules);
}

PhasePoly check_relation(const PhasePoly& H, const PhasePoly& K, const AlgebraRelation& rel,
                         const std::vector<sym::RewriteRule>& rules) {
    return reduce(poisson(H, K) - relation_rhs(H, K, rel), rules);
}

}  // namespace superint::op
