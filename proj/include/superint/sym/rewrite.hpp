#pragma once

#include <optional>
#include <vector>

#include "superint/sym/expr.hpp"

namespace superint::sym {

struct InconsistentRules : Error {
    using Error::Error;
};

// A defining relation P = 0 for one derivative of an unknown function.
// P is polynomial in the target derivative and free of higher derivatives
// of the same function. When P is linear with an invertible initial the rule
// is an ordinary replacement target -> replacement().
class RewriteRule {
public:
    RewriteRule(AtomId target, Expr relation);
    static RewriteRule solved(AtomId target, const Expr& replacement);
    static RewriteRule solved(const Expr& target, const Expr& replacement);

    AtomId target() const { return target_; }
    AtomId function() const { return atom_info(target_).base; }
    int order() const { return atom_info(target_).order; }
    AtomId var() const { return atom_info(target_).var; }
    const Expr& relation() const { return relation_; }
    int degree() const { return degree_; }
    const Expr& initial() const { return initial_; }
    bool exact() const { return initial_.is_invertible_monomial(); }
    std::optional<Expr> replacement() const;

private:
    AtomId target_;
    Expr relation_;
    Expr initial_;
    int degree_ = 1;
};

// Ritt-style reduction. Derivatives above a rule's target are removed with
// the differentiated relation, then the target's degree is lowered by
// pseudo-division. For rules whose initial (or separant) is not an
// invertible monomial the result is the pseudo-remainder, i.e. the reduced
// form multiplied by a power of the initial; zero tests are unaffected.
Expr reduce_mod(const Expr& e, const std::vector<RewriteRule>& rules);

inline bool is_zero_mod(const Expr& e, const std::vector<RewriteRule>& rules) {
    return reduce_mod(e, rules).is_zero();
}

}  // namespace superint::sym
