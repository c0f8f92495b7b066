#include "superint/op/diffop.hpp"

#include "superint/sym/serialize.hpp"

namespace superint::op {

const char* to_string(Mechanics m) { return m == Mechanics::Quantum ? "quantum" : "classical"; }

Mechanics mechanics_from_string(const std::string& s) {
    if (s == "quantum" || s == "q") return Mechanics::Quantum;
    if (s == "classical" || s == "c") return Mechanics::Classical;
    throw Error("unknown mechanics '" + s + "'");
}

namespace {

void trim(std::vector<Expr>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

long binom(int n, int k) {
    long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

}  // namespace

DiffOp::DiffOp(std::vector<Expr> coeffs, AtomId var) : c_(std::move(coeffs)), var_(var) { trim(c_); }

DiffOp DiffOp::scalar(const Expr& c, AtomId var) { return DiffOp({c}, var); }

DiffOp DiffOp::D(AtomId var) { return DiffOp({Expr(), Expr(1)}, var); }

DiffOp DiffOp::momentum(const Expr& hbar, AtomId var) { return DiffOp({Expr(), -Expr::i() * hbar}, var); }

DiffOp DiffOp::from_momentum(const std::vector<Expr>& f, const Expr& hbar, AtomId var) {
    std::vector<Expr> c(f.size());
    Expr m = -Expr::i() * hbar, mp(1);
    for (size_t l = 0; l < f.size(); ++l) {
        c[l] = f[l] * mp;
        mp = mp * m;
    }
    return DiffOp(std::move(c), var);
}

DiffOp DiffOp::hamiltonian(const Expr& V, const Expr& hbar, AtomId var) {
    return DiffOp({V, Expr(), -hbar.pow(2) / 2}, var);
}

std::vector<Expr> DiffOp::momentum_coeffs(const Expr& hbar) const {
    std::vector<Expr> f(c_.size());
    Expr m = -Expr::i() * hbar, mp(1);
    for (size_t l = 0; l < c_.size(); ++l) {
        f[l] = c_[l] / mp;
        mp = mp * m;
    }
    return f;
}

DiffOp DiffOp::operator-() const { return map([](const Expr& e) { return -e; }); }

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    std::vector<Expr> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t l = 0; l < c.size(); ++l) c[l] = a.coeff(int(l)) + b.coeff(int(l));
    return DiffOp(std::move(c), a.var_);
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

DiffOp operator*(const Expr& s, const DiffOp& a) {
    return a.map([&](const Expr& e) { return s * e; });
}

DiffOp DiffOp::map(const std::function<Expr(const Expr&)>& f) const {
    std::vector<Expr> c;
    c.reserve(c_.size());
    for (const auto& e : c_) c.push_back(f(e));
    return DiffOp(std::move(c), var_);
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
    if (a.is_zero() || b.is_zero()) return DiffOp({}, a.var());
    const int la = a.order(), lb = b.order();
    // derivatives of b's coefficients up to order la
    std::vector<std::vector<Expr>> db(lb + 1);
    for (int m = 0; m <= lb; ++m) {
        db[m].push_back(b.coeff(m));
        for (int k = 1; k <= la; ++k) db[m].push_back(sym::differentiate(db[m].back(), a.var()));
    }
    std::vector<Expr> c(la + lb + 1);
    for (int l = 0; l <= la; ++l) {
        const Expr& al = a.coeff(l);
        if (al.is_zero()) continue;
        for (int m = 0; m <= lb; ++m)
            for (int j = 0; j <= l; ++j) {
                const Expr& d = db[m][l - j];
                if (d.is_zero()) continue;
                c[j + m] += Expr(binom(l, j)) * al * d;
            }
    }
    return DiffOp(std::move(c), a.var());
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return compose(a, b) - compose(b, a); }

DiffOp anticommutator(const DiffOp& a, const DiffOp& b) { return compose(a, b) + compose(b, a); }

DiffOp adjoint(const DiffOp& a) {
    DiffOp r({}, a.var());
    for (int l = 0; l <= a.order(); ++l) {
        if (a.coeff(l).is_zero()) continue;
        std::vector<Expr> dl(l + 1);
        dl[l] = Expr(l % 2 ? -1 : 1);
        r = r + compose(DiffOp(dl, a.var()), DiffOp::scalar(a.coeff(l).conj(), a.var()));
    }
    return r;
}

DiffOp power(const DiffOp& a, int n) {
    DiffOp r = DiffOp::scalar(Expr(1), a.var());
    for (int k = 0; k < n; ++k) r = compose(r, a);
    return r;
}

DiffOp reduce(const DiffOp& a, const std::vector<sym::RewriteRule>& rules) {
    if (rules.empty()) return a;
    return a.map([&](const Expr& e) { return sym::reduce_mod(e, rules); });
}

Expr apply(const DiffOp& a, const Expr& g) {
    Expr r, d = g;
    for (int l = 0; l <= a.order(); ++l) {
        r += a.coeff(l) * d;
        if (l < a.order()) d = sym::differentiate(d, a.var());
    }
    return r;
}

nlohmann::json to_json(const DiffOp& a) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& e : a.coeffs()) c.push_back(sym::to_json(e));
    return {{"mechanics", "quantum"},
            {"form", "D"},
            {"var", sym::atom_info(a.var()).name},
            {"order", a.order()},
            {"coeffs", c}};
}

DiffOp diffop_from_json(const nlohmann::json& j) {
    std::vector<Expr> c;
    for (const auto& e : j.at("coeffs")) c.push_back(sym::from_json(e));
    return DiffOp(std::move(c), sym::var_atom(j.value("var", std::string("x"))));
}

}  // namespace superint::op
