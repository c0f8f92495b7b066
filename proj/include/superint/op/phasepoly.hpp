#pragma once

#include <vector>

#include <json.hpp>

#include "superint/op/diffop.hpp"

namespace superint::op {

// Sum f_l(x) p^l on a one-dimensional phase space.
class PhasePoly {
public:
    PhasePoly() : var_(sym::var_atom("x")) {}
    explicit PhasePoly(std::vector<Expr> coeffs, AtomId var = sym::var_atom("x"));

    static PhasePoly scalar(const Expr& c, AtomId var = sym::var_atom("x"));
    static PhasePoly p(AtomId var = sym::var_atom("x"));
    // p^2/2 + V
    static PhasePoly hamiltonian(const Expr& V, AtomId var = sym::var_atom("x"));

    int order() const { return int(f_.size()) - 1; }
    bool is_zero() const { return f_.empty(); }
    const std::vector<Expr>& coeffs() const { return f_; }
    Expr coeff(int l) const { return (l >= 0 && l < int(f_.size())) ? f_[l] : Expr(); }
    AtomId var() const { return var_; }

    PhasePoly operator-() const;
    friend PhasePoly operator+(const PhasePoly& a, const PhasePoly& b);
    friend PhasePoly operator-(const PhasePoly& a, const PhasePoly& b);
    friend PhasePoly operator*(const PhasePoly& a, const PhasePoly& b);
    friend PhasePoly operator*(const Expr& s, const PhasePoly& a);
    friend bool operator==(const PhasePoly& a, const PhasePoly& b) { return a.f_ == b.f_; }

    PhasePoly map(const std::function<Expr(const Expr&)>& f) const;
    PhasePoly d_x() const;
    PhasePoly d_p() const;

private:
    std::vector<Expr> f_;
    AtomId var_;
};

// {a, b} = da/dx db/dp - da/dp db/dx
PhasePoly poisson(const PhasePoly& a, const PhasePoly& b);
PhasePoly power(const PhasePoly& a, int n);
PhasePoly reduce(const PhasePoly& a, const std::vector<sym::RewriteRule>& rules);
PhasePoly conj(const PhasePoly& a);

nlohmann::json to_json(const PhasePoly& a);
PhasePoly phasepoly_from_json(const nlohmann::json& j);

}  // namespace superint::op
