#pragma once

#include <string>
#include <vector>

#include "superint/det/system.hpp"
#include "superint/op/phasepoly.hpp"
#include "superint/sym/rewrite.hpp"

namespace superint::det {

struct NotClosedUnderQuadrature : Error {
    using Error::Error;
};
struct NotReducible : Error {
    using Error::Error;
};

enum class PotentialVariant { ClosedForm, ODE, Algebraic };
const char* to_string(PotentialVariant v);
PotentialVariant potential_variant_from_string(const std::string& s);

// Constraint on the potential. The unknown is either V itself or u with
// u' = V (the antiderivative convention).
struct PotentialSpec {
    PotentialVariant variant = PotentialVariant::ODE;
    std::string unknown = "V";
    Expr potential;           // V(x), ClosedForm only
    Expr equation;            // = 0, ODE / Algebraic
    int order = 0;            // derivative order of equation in the unknown
    Expr raw_condition;       // condition before any quadrature
    std::vector<std::string> constants;          // k, k1, ... present in equation/potential
    std::vector<Expr> first_integrals;           // I(x, unknown jet) constant on solutions
    std::vector<Expr> parameter_constraints;     // each = 0
    std::vector<Expr> nonzero;                   // assumed != 0

    AtomId unknown_atom(int order = 0) const;
    // V expressed through the unknown (V, or u')
    Expr potential_expr() const;
    std::vector<sym::RewriteRule> rules() const;
    bool unconstrained() const { return variant == PotentialVariant::ODE && equation.is_zero(); }
};

struct SolvedPair {
    Mechanics mechanics = Mechanics::Quantum;
    int M = 1;
    AlgebraRelation kind;
    std::vector<Expr> f;  // f_0..f_M, momentum-form coefficients of K
    PotentialSpec potential;
    std::string branch;   // "generic" or e.g. "beta=0"
    std::vector<std::string> notes;

    Expr V() const { return potential.potential_expr(); }
    op::DiffOp quantum_H() const;
    op::DiffOp quantum_K() const;
    op::PhasePoly classical_H() const;
    op::PhasePoly classical_K() const;
};

struct SolveOptions {
    bool keep_constants = false;  // keep absorbable integration constants
    bool allow_u = true;          // fall back to u = int V dx
    bool force_u = false;
};

// All branches; the generic branch comes first.
std::vector<SolvedPair> solve_all(const DeterminingSystem& sys, const SolveOptions& opt = {});
SolvedPair solve(const DeterminingSystem& sys, const SolveOptions& opt = {});

// bracket minus rhs with the solved f's, reduced modulo the potential spec;
// returned as momentum-form coefficients
std::vector<Expr> residual(const SolvedPair& s);
bool verifies(const SolvedPair& s);

// K^dagger K as a polynomial in H (coefficients a_0..a_n), quantum type d
std::vector<Expr> ladder_product(const SolvedPair& s);

nlohmann::json to_json(const PotentialSpec& p);
PotentialSpec potential_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolvedPair& s);
SolvedPair solved_pair_from_json(const nlohmann::json& j);

}  // namespace superint::det
