#pragma once

#include <vector>

#include <json.hpp>

#include "superint/sym/expr.hpp"
#include "superint/sym/rewrite.hpp"

namespace superint::op {

using sym::AtomId;
using sym::Expr;

enum class Mechanics { Quantum, Classical };
const char* to_string(Mechanics m);
Mechanics mechanics_from_string(const std::string& s);

// Sum c_l(x) D^l in normal order.
class DiffOp {
public:
    DiffOp() : var_(sym::var_atom("x")) {}
    explicit DiffOp(std::vector<Expr> coeffs, AtomId var = sym::var_atom("x"));

    static DiffOp scalar(const Expr& c, AtomId var = sym::var_atom("x"));
    static DiffOp D(AtomId var = sym::var_atom("x"));
    // p = -i hbar D
    static DiffOp momentum(const Expr& hbar, AtomId var = sym::var_atom("x"));
    // sum f_l p^l with f_l in front (c_l = (-i hbar)^l f_l)
    static DiffOp from_momentum(const std::vector<Expr>& f, const Expr& hbar, AtomId var = sym::var_atom("x"));
    // -hbar^2/2 D^2 + V
    static DiffOp hamiltonian(const Expr& V, const Expr& hbar, AtomId var = sym::var_atom("x"));

    int order() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Expr>& coeffs() const { return c_; }
    Expr coeff(int l) const { return (l >= 0 && l < int(c_.size())) ? c_[l] : Expr(); }
    AtomId var() const { return var_; }
    std::vector<Expr> momentum_coeffs(const Expr& hbar) const;

    DiffOp operator-() const;
    friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator*(const Expr& s, const DiffOp& a);
    friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.c_ == b.c_; }

    DiffOp map(const std::function<Expr(const Expr&)>& f) const;

private:
    std::vector<Expr> c_;
    AtomId var_;
};

DiffOp compose(const DiffOp& a, const DiffOp& b);
DiffOp commutator(const DiffOp& a, const DiffOp& b);
DiffOp anticommutator(const DiffOp& a, const DiffOp& b);
DiffOp adjoint(const DiffOp& a);
DiffOp power(const DiffOp& a, int n);
DiffOp reduce(const DiffOp& a, const std::vector<sym::RewriteRule>& rules);
// apply to a function expression g(x): sum c_l g^(l)
Expr apply(const DiffOp& a, const Expr& g);

nlohmann::json to_json(const DiffOp& a);
DiffOp diffop_from_json(const nlohmann::json& j);

}  // namespace superint::op
