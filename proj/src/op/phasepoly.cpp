#include "superint/op/phasepoly.hpp"

#include "superint/sym/serialize.hpp"

namespace superint::op {

namespace {

void trim(std::vector<Expr>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

}  // namespace

PhasePoly::PhasePoly(std::vector<Expr> coeffs, AtomId var) : f_(std::move(coeffs)), var_(var) { trim(f_); }

PhasePoly PhasePoly::scalar(const Expr& c, AtomId var) { return PhasePoly({c}, var); }

PhasePoly PhasePoly::p(AtomId var) { return PhasePoly({Expr(), Expr(1)}, var); }

PhasePoly PhasePoly::hamiltonian(const Expr& V, AtomId var) {
    return PhasePoly({V, Expr(), Expr::rational(1, 2)}, var);
}

PhasePoly PhasePoly::operator-() const { return map([](const Expr& e) { return -e; }); }

PhasePoly operator+(const PhasePoly& a, const PhasePoly& b) {
    std::vector<Expr> c(std::max(a.f_.size(), b.f_.size()));
    for (size_t l = 0; l < c.size(); ++l) c[l] = a.coeff(int(l)) + b.coeff(int(l));
    return PhasePoly(std::move(c), a.var_);
}

PhasePoly operator-(const PhasePoly& a, const PhasePoly& b) { return a + (-b); }

PhasePoly operator*(const PhasePoly& a, const PhasePoly& b) {
    if (a.is_zero() || b.is_zero()) return PhasePoly({}, a.var_);
    std::vector<Expr> c(a.f_.size() + b.f_.size() - 1);
    for (size_t i = 0; i < a.f_.size(); ++i)
        for (size_t j = 0; j < b.f_.size(); ++j) c[i + j] += a.f_[i] * b.f_[j];
    return PhasePoly(std::move(c), a.var_);
}

PhasePoly operator*(const Expr& s, const PhasePoly& a) {
    return a.map([&](const Expr& e) { return s * e; });
}

PhasePoly PhasePoly::map(const std::function<Expr(const Expr&)>& f) const {
    std::vector<Expr> c;
    c.reserve(f_.size());
    for (const auto& e : f_) c.push_back(f(e));
    return PhasePoly(std::move(c), var_);
}

PhasePoly PhasePoly::d_x() const {
    return map([&](const Expr& e) { return sym::differentiate(e, var_); });
}

PhasePoly PhasePoly::d_p() const {
    std::vector<Expr> c;
    for (size_t l = 1; l < f_.size(); ++l) c.push_back(Expr(long(l)) * f_[l]);
    return PhasePoly(std::move(c), var_);
}

PhasePoly poisson(const PhasePoly& a, const PhasePoly& b) { return a.d_x() * b.d_p() - a.d_p() * b.d_x(); }

PhasePoly power(const PhasePoly& a, int n) {
    PhasePoly r = PhasePoly::scalar(Expr(1), a.var());
    for (int k = 0; k < n; ++k) r = r * a;
    return r;
}

PhasePoly reduce(const PhasePoly& a, const std::vector<sym::RewriteRule>& rules) {
    if (rules.empty()) return a;
    return a.map([&](const Expr& e) { return sym::reduce_mod(e, rules); });
}

PhasePoly conj(const PhasePoly& a) {
    return a.map([](const Expr& e) { return e.conj(); });
}

nlohmann::json to_json(const PhasePoly& a) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& e : a.coeffs()) c.push_back(sym::to_json(e));
    return {{"mechanics", "classical"},
            {"form", "p"},
            {"var", sym::atom_info(a.var()).name},
            {"order", a.order()},
            {"coeffs", c}};
}

PhasePoly phasepoly_from_json(const nlohmann::json& j) {
    std::vector<Expr> c;
    for (const auto& e : j.at("coeffs")) c.push_back(sym::from_json(e));
    return PhasePoly(std::move(c), sym::var_atom(j.value("var", std::string("x"))));
}

}  // namespace superint::op
