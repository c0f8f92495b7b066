#pragma once

#include <map>
#include <utility>

#include <json.hpp>

#include "superint/op/diffop.hpp"
#include "superint/op/phasepoly.hpp"

namespace superint::op {

using Index2 = std::pair<int, int>;

// Sum c_ij(x,y) Dx^i Dy^j, normal ordered.
class DiffOp2 {
public:
    DiffOp2() = default;
    explicit DiffOp2(std::map<Index2, Expr> c);
    static DiffOp2 scalar(const Expr& c);
    static DiffOp2 from_x(const DiffOp& a);  // a must act on x
    static DiffOp2 from_y(const DiffOp& a);  // a must act on y

    const std::map<Index2, Expr>& coeffs() const { return c_; }
    Expr coeff(int i, int j) const;
    bool is_zero() const { return c_.empty(); }
    int order() const;  // max i+j, -1 for zero
    // terms of total order == order()
    DiffOp2 leading() const;
    // coefficients of px^i py^j
    std::map<Index2, Expr> momentum_coeffs(const Expr& hbar) const;

    DiffOp2 operator-() const;
    friend DiffOp2 operator+(const DiffOp2& a, const DiffOp2& b);
    friend DiffOp2 operator-(const DiffOp2& a, const DiffOp2& b);
    friend DiffOp2 operator*(const Expr& s, const DiffOp2& a);
    friend bool operator==(const DiffOp2& a, const DiffOp2& b) { return a.c_ == b.c_; }
    DiffOp2 map(const std::function<Expr(const Expr&)>& f) const;

private:
    std::map<Index2, Expr> c_;
};

DiffOp2 compose(const DiffOp2& a, const DiffOp2& b);
DiffOp2 commutator(const DiffOp2& a, const DiffOp2& b);
DiffOp2 anticommutator(const DiffOp2& a, const DiffOp2& b);
DiffOp2 adjoint(const DiffOp2& a);
DiffOp2 power(const DiffOp2& a, int n);
DiffOp2 reduce(const DiffOp2& a, const std::vector<sym::RewriteRule>& rules);
DiffOp2 from_momentum2(const std::map<Index2, Expr>& f, const Expr& hbar);
nlohmann::json to_json(const DiffOp2& a);
DiffOp2 diffop2_from_json(const nlohmann::json& j);

// Sum f_ij(x,y) px^i py^j.
class PhasePoly2 {
public:
    PhasePoly2() = default;
    explicit PhasePoly2(std::map<Index2, Expr> c);
    static PhasePoly2 scalar(const Expr& c);
    static PhasePoly2 from_x(const PhasePoly& a);
    static PhasePoly2 from_y(const PhasePoly& a);

    const std::map<Index2, Expr>& coeffs() const { return c_; }
    Expr coeff(int i, int j) const;
    bool is_zero() const { return c_.empty(); }
    int order() const;
    PhasePoly2 leading() const;

    PhasePoly2 operator-() const;
    friend PhasePoly2 operator+(const PhasePoly2& a, const PhasePoly2& b);
    friend PhasePoly2 operator-(const PhasePoly2& a, const PhasePoly2& b);
    friend PhasePoly2 operator*(const PhasePoly2& a, const PhasePoly2& b);
    friend PhasePoly2 operator*(const Expr& s, const PhasePoly2& a);
    friend bool operator==(const PhasePoly2& a, const PhasePoly2& b) { return a.c_ == b.c_; }
    PhasePoly2 map(const std::function<Expr(const Expr&)>& f) const;
    PhasePoly2 d_x() const;
    PhasePoly2 d_y() const;
    PhasePoly2 d_px() const;
    PhasePoly2 d_py() const;

private:
    std::map<Index2, Expr> c_;
};

PhasePoly2 poisson(const PhasePoly2& a, const PhasePoly2& b);
PhasePoly2 power(const PhasePoly2& a, int n);
PhasePoly2 reduce(const PhasePoly2& a, const std::vector<sym::RewriteRule>& rules);
PhasePoly2 conj(const PhasePoly2& a);
nlohmann::json to_json(const PhasePoly2& a);
PhasePoly2 phasepoly2_from_json(const nlohmann::json& j);

}  // namespace superint::op
