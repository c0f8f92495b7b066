#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "superint/catalog/catalog.hpp"
#include "superint/op/op2.hpp"

namespace superint::composer {

using op::DiffOp2;
using op::Index2;
using op::Mechanics;
using op::PhasePoly2;
using sym::Expr;

struct KindMismatch : Error {
    using Error::Error;
};
struct RationalityViolation : Error {
    using Error::Error;
};
struct NotAnIntegral : Error {
    nlohmann::json residual;
    NotAnIntegral(const std::string& what, nlohmann::json r) : Error(what), residual(std::move(r)) {}
};
struct NotReducibleToPolynomialAlgebra : Error {
    nlohmann::json remainder;
    NotReducibleToPolynomialAlgebra(const std::string& what, nlohmann::json r)
        : Error(what), remainder(std::move(r)) {}
};

// A 2D operator (quantum) or phase-space polynomial (classical).
class Op2 {
public:
    Op2() = default;
    Op2(DiffOp2 q) : v_(std::move(q)) {}
    Op2(PhasePoly2 c) : v_(std::move(c)) {}
    static Op2 scalar(Mechanics m, const Expr& c);

    bool quantum() const { return v_.index() == 0; }
    Mechanics mechanics() const { return quantum() ? Mechanics::Quantum : Mechanics::Classical; }
    const DiffOp2& q() const { return std::get<0>(v_); }
    const PhasePoly2& c() const { return std::get<1>(v_); }

    int order() const;
    bool is_zero() const;
    Op2 leading() const;
    // coefficients of px^i py^j (normal order for operators)
    std::map<Index2, Expr> symbol() const;
    Op2 map(const std::function<Expr(const Expr&)>& f) const;

    friend Op2 operator+(const Op2& a, const Op2& b);
    friend Op2 operator-(const Op2& a, const Op2& b);
    friend Op2 operator*(const Expr& s, const Op2& a);
    friend bool operator==(const Op2& a, const Op2& b) { return a.v_ == b.v_; }

private:
    std::variant<DiffOp2, PhasePoly2> v_;
};

// composition (quantum) or product (classical)
Op2 product(const Op2& a, const Op2& b);
Op2 power(const Op2& a, int n);
// commutator or Poisson bracket
Op2 bracket(const Op2& a, const Op2& b);
// formal adjoint or complex conjugate
Op2 adjoint(const Op2& a);
Op2 reduce(const Op2& a, const std::vector<sym::RewriteRule>& rules);
nlohmann::json to_json(const Op2& a);

const Expr& hbar();

enum class Case { AA, BB, CB, DD, CC, AD };
const char* to_string(Case c);
Case case_from_string(const std::string& s);

struct CompositionSpec {
    Case kind = Case::AA;
    std::string entry_x, entry_y;
    int m = 1, n = 1;  // DD exponents
    Expr alpha1 = Expr::param("alpha1");
    Expr alpha2 = Expr::param("alpha2");
};

// One catalog entry placed on an axis.
struct Axis {
    std::string id;
    Op2 H, K;
    int order = 0;  // of K
    std::vector<sym::RewriteRule> rules;
    std::vector<Expr> ladder;  // K^dagger K = sum a_k H^k (type d)
};

// Places the entry on x (alpha1 -> alpha) or on y (also x -> y, V(x) -> V(y)
// and every other constant c -> c_y).
Axis place(const catalog::CatalogEntry& e, bool on_y, const Expr& alpha);

struct Composition {
    CompositionSpec spec;
    Mechanics mechanics = Mechanics::Quantum;
    Axis x, y;
    Op2 H, A, K;  // H = H1 + H2, A = H1 - H2
    std::vector<sym::RewriteRule> rules;
    int expected_order = 0;  // tabulated order
    int order = 0;
    bool trivial = false;        // AD: K is a polynomial in H1, H2
    std::vector<Expr> P;         // AD: K2^dagger K2^- = P(H2)
    std::vector<std::string> notes;
};

Composition compose(const CompositionSpec& spec, const catalog::Catalog& cat = catalog::default_catalog());

struct SuperintegrabilityReport {
    bool commutes_K = false, commutes_A = false, independent = false;
    int rank = 0;  // Jacobian rank of the symbols of {H, A, K}
    nlohmann::json residual;
};
// throws NotAnIntegral unless [H,K] and [H,A] reduce to zero
SuperintegrabilityReport check_superintegrable(const Op2& H, const Op2& K, const Op2& A,
                                               const std::vector<sym::RewriteRule>& rules = {});
SuperintegrabilityReport check_superintegrable(const Composition& c);

// X = sum c_ij H1^i H2^j with constant c_ij, if X has that form
std::optional<std::map<Index2, Expr>> hamiltonian_polynomial(const Op2& X, const Op2& H1, const Op2& H2,
                                                             const std::vector<sym::RewriteRule>& rules = {});
Op2 evaluate(const std::map<Index2, Expr>& poly, const Op2& H1, const Op2& H2);
// X = r * T + (polynomial in H1, H2) for a constant r
std::optional<Expr> match_modulo_hamiltonians(const Op2& X, const Op2& T, const Op2& H1, const Op2& H2,
                                              const std::vector<sym::RewriteRule>& rules = {});
// leading parts: X_top = r * T_top + (leading part of a polynomial in H1, H2)
std::optional<Expr> match_leading(const Op2& X, const Op2& T);
// X = r * T exactly for a constant r
std::optional<Expr> multiple_of(const Op2& X, const Op2& T);

struct AlgebraStructure {
    Case kind = Case::AA;
    Op2 A, B, C, AC, BC;  // AC = [A,C], BC = [B,C]
    bool C_central = false;
    // [A,C] = rB + P(H1,H2) and [B,C] = sB + Q(H1,H2); polynomials in H1, H2
    Expr AC_B, BC_B;
    std::map<Index2, Expr> AC_poly, BC_poly;
    // comparison with the tabulated structure: fitted constants and whether the template matched
    std::map<std::string, Expr> fitted;
    std::map<std::string, Expr> expected;
    bool template_match = false;
    std::vector<std::string> notes;
};

AlgebraStructure algebra_structure(const Composition& c);

nlohmann::json to_json(const Composition& c);
nlohmann::json to_json(const SuperintegrabilityReport& r);
nlohmann::json to_json(const AlgebraStructure& a);

}  // namespace superint::composer
