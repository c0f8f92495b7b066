#include "superint/op/op2.hpp"

#include "superint/sym/serialize.hpp"

namespace superint::op {

namespace {

const AtomId kX = sym::var_atom("x");
const AtomId kY = sym::var_atom("y");

long binom(int n, int k) {
    long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

void prune(std::map<Index2, Expr>& c) {
    for (auto it = c.begin(); it != c.end();) {
        if (it->second.is_zero())
            it = c.erase(it);
        else
            ++it;
    }
}

template <class M>
int max_total(const M& c) {
    int o = -1;
    for (const auto& [k, v] : c) o = std::max(o, k.first + k.second);
    return o;
}

nlohmann::json coeffs_json(const std::map<Index2, Expr>& c) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [k, v] : c) a.push_back({{"i", k.first}, {"j", k.second}, {"c", sym::to_json(v)}});
    return a;
}

std::map<Index2, Expr> coeffs_from_json(const nlohmann::json& j) {
    std::map<Index2, Expr> c;
    for (const auto& t : j.at("coeffs")) c[{t.at("i").get<int>(), t.at("j").get<int>()}] = sym::from_json(t.at("c"));
    return c;
}

}  // namespace

DiffOp2::DiffOp2(std::map<Index2, Expr> c) : c_(std::move(c)) { prune(c_); }

DiffOp2 DiffOp2::scalar(const Expr& c) { return DiffOp2({{{0, 0}, c}}); }

DiffOp2 DiffOp2::from_x(const DiffOp& a) {
    if (a.var() != kX) throw Error("operator does not act on x");
    std::map<Index2, Expr> c;
    for (int l = 0; l <= a.order(); ++l) c[{l, 0}] = a.coeff(l);
    return DiffOp2(std::move(c));
}

DiffOp2 DiffOp2::from_y(const DiffOp& a) {
    if (a.var() != kY) throw Error("operator does not act on y");
    std::map<Index2, Expr> c;
    for (int l = 0; l <= a.order(); ++l) c[{0, l}] = a.coeff(l);
    return DiffOp2(std::move(c));
}

Expr DiffOp2::coeff(int i, int j) const {
    auto it = c_.find({i, j});
    return it == c_.end() ? Expr() : it->second;
}

int DiffOp2::order() const { return max_total(c_); }

DiffOp2 DiffOp2::leading() const {
    int o = order();
    std::map<Index2, Expr> c;
    for (const auto& [k, v] : c_)
        if (k.first + k.second == o) c[k] = v;
    return DiffOp2(std::move(c));
}

std::map<Index2, Expr> DiffOp2::momentum_coeffs(const Expr& hbar) const {
    std::map<Index2, Expr> f;
    Expr m = -Expr::i() * hbar;
    for (const auto& [k, v] : c_) f[k] = v / m.pow(k.first + k.second);
    return f;
}

DiffOp2 from_momentum2(const std::map<Index2, Expr>& f, const Expr& hbar) {
    std::map<Index2, Expr> c;
    Expr m = -Expr::i() * hbar;
    for (const auto& [k, v] : f) c[k] = v * m.pow(k.first + k.second);
    return DiffOp2(std::move(c));
}

DiffOp2 DiffOp2::operator-() const { return map([](const Expr& e) { return -e; }); }

DiffOp2 operator+(const DiffOp2& a, const DiffOp2& b) {
    std::map<Index2, Expr> c = a.c_;
    for (const auto& [k, v] : b.c_) c[k] += v;
    return DiffOp2(std::move(c));
}

DiffOp2 operator-(const DiffOp2& a, const DiffOp2& b) { return a + (-b); }

DiffOp2 operator*(const Expr& s, const DiffOp2& a) {
    return a.map([&](const Expr& e) { return s * e; });
}

DiffOp2 DiffOp2::map(const std::function<Expr(const Expr&)>& f) const {
    std::map<Index2, Expr> c;
    for (const auto& [k, v] : c_) c[k] = f(v);
    return DiffOp2(std::move(c));
}

DiffOp2 compose(const DiffOp2& a, const DiffOp2& b) {
    // (c Dx^i Dy^j) o (d Dx^k Dy^l) = c sum C(i,s) C(j,t) d_{x^(i-s) y^(j-t)} Dx^(s+k) Dy^(t+l)
    std::map<Index2, Expr> out;
    std::map<std::pair<Index2, Index2>, Expr> dcache;
    auto deriv = [&](const Index2& key, const Expr& d, int nx, int ny) -> const Expr& {
        auto ck = std::make_pair(key, Index2{nx, ny});
        auto it = dcache.find(ck);
        if (it != dcache.end()) return it->second;
        Expr r = sym::differentiate(sym::differentiate(d, kX, nx), kY, ny);
        return dcache.emplace(ck, std::move(r)).first->second;
    };
    for (const auto& [ka, c] : a.coeffs()) {
        auto [i, j] = ka;
        for (const auto& [kb, d] : b.coeffs()) {
            auto [k, l] = kb;
            for (int s = 0; s <= i; ++s)
                for (int t = 0; t <= j; ++t) {
                    const Expr& dd = deriv(kb, d, i - s, j - t);
                    if (dd.is_zero()) continue;
                    out[{s + k, t + l}] += Expr(binom(i, s) * binom(j, t)) * c * dd;
                }
        }
    }
    return DiffOp2(std::move(out));
}

DiffOp2 commutator(const DiffOp2& a, const DiffOp2& b) { return compose(a, b) - compose(b, a); }

DiffOp2 anticommutator(const DiffOp2& a, const DiffOp2& b) { return compose(a, b) + compose(b, a); }

DiffOp2 adjoint(const DiffOp2& a) {
    DiffOp2 r;
    for (const auto& [k, v] : a.coeffs()) {
        Expr s((k.first + k.second) % 2 ? -1 : 1);
        r = r + compose(DiffOp2({{k, s}}), DiffOp2::scalar(v.conj()));
    }
    return r;
}

DiffOp2 power(const DiffOp2& a, int n) {
    DiffOp2 r = DiffOp2::scalar(Expr(1));
    for (int k = 0; k < n; ++k) r = compose(r, a);
    return r;
}

DiffOp2 reduce(const DiffOp2& a, const std::vector<sym::RewriteRule>& rules) {
    if (rules.empty()) return a;
    return a.map([&](const Expr& e) { return sym::reduce_mod(e, rules); });
}

nlohmann::json to_json(const DiffOp2& a) {
    return {{"mechanics", "quantum"}, {"form", "D2"}, {"order", a.order()}, {"coeffs", coeffs_json(a.coeffs())}};
}

DiffOp2 diffop2_from_json(const nlohmann::json& j) { return DiffOp2(coeffs_from_json(j)); }

PhasePoly2::PhasePoly2(std::map<Index2, Expr> c) : c_(std::move(c)) { prune(c_); }

PhasePoly2 PhasePoly2::scalar(const Expr& c) { return PhasePoly2({{{0, 0}, c}}); }

PhasePoly2 PhasePoly2::from_x(const PhasePoly& a) {
    if (a.var() != kX) throw Error("polynomial does not live on x");
    std::map<Index2, Expr> c;
    for (int l = 0; l <= a.order(); ++l) c[{l, 0}] = a.coeff(l);
    return PhasePoly2(std::move(c));
}

PhasePoly2 PhasePoly2::from_y(const PhasePoly& a) {
    if (a.var() != kY) throw Error("polynomial does not live on y");
    std::map<Index2, Expr> c;
    for (int l = 0; l <= a.order(); ++l) c[{0, l}] = a.coeff(l);
    return PhasePoly2(std::move(c));
}

Expr PhasePoly2::coeff(int i, int j) const {
    auto it = c_.find({i, j});
    return it == c_.end() ? Expr() : it->second;
}

int PhasePoly2::order() const { return max_total(c_); }

PhasePoly2 PhasePoly2::leading() const {
    int o = order();
    std::map<Index2, Expr> c;
    for (const auto& [k, v] : c_)
        if (k.first + k.second == o) c[k] = v;
    return PhasePoly2(std::move(c));
}

PhasePoly2 PhasePoly2::operator-() const { return map([](const Expr& e) { return -e; }); }

PhasePoly2 operator+(const PhasePoly2& a, const PhasePoly2& b) {
    std::map<Index2, Expr> c = a.c_;
    for (const auto& [k, v] : b.c_) c[k] += v;
    return PhasePoly2(std::move(c));
}

PhasePoly2 operator-(const PhasePoly2& a, const PhasePoly2& b) { return a + (-b); }

PhasePoly2 operator*(const PhasePoly2& a, const PhasePoly2& b) {
    std::map<Index2, Expr> c;
    for (const auto& [ka, va] : a.c_)
        for (const auto& [kb, vb] : b.c_) c[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
    return PhasePoly2(std::move(c));
}

PhasePoly2 operator*(const Expr& s, const PhasePoly2& a) {
    return a.map([&](const Expr& e) { return s * e; });
}

PhasePoly2 PhasePoly2::map(const std::function<Expr(const Expr&)>& f) const {
    std::map<Index2, Expr> c;
    for (const auto& [k, v] : c_) c[k] = f(v);
    return PhasePoly2(std::move(c));
}

PhasePoly2 PhasePoly2::d_x() const {
    return map([](const Expr& e) { return sym::differentiate(e, kX); });
}

PhasePoly2 PhasePoly2::d_y() const {
    return map([](const Expr& e) { return sym::differentiate(e, kY); });
}

PhasePoly2 PhasePoly2::d_px() const {
    std::map<Index2, Expr> c;
    for (const auto& [k, v] : c_)
        if (k.first > 0) c[{k.first - 1, k.second}] = Expr(long(k.first)) * v;
    return PhasePoly2(std::move(c));
}

PhasePoly2 PhasePoly2::d_py() const {
    std::map<Index2, Expr> c;
    for (const auto& [k, v] : c_)
        if (k.second > 0) c[{k.first, k.second - 1}] = Expr(long(k.second)) * v;
    return PhasePoly2(std::move(c));
}

PhasePoly2 poisson(const PhasePoly2& a, const PhasePoly2& b) {
    return a.d_x() * b.d_px() - a.d_px() * b.d_x() + a.d_y() * b.d_py() - a.d_py() * b.d_y();
}

PhasePoly2 power(const PhasePoly2& a, int n) {
    PhasePoly2 r = PhasePoly2::scalar(Expr(1));
    for (int k = 0; k < n; ++k) r = r * a;
    return r;
}

PhasePoly2 reduce(const PhasePoly2& a, const std::vector<sym::RewriteRule>& rules) {
    if (rules.empty()) return a;
    return a.map([&](const Expr& e) { return sym::reduce_mod(e, rules); });
}

PhasePoly2 conj(const PhasePoly2& a) {
    return a.map([](const Expr& e) { return e.conj(); });
}

nlohmann::json to_json(const PhasePoly2& a) {
    return {{"mechanics", "classical"}, {"form", "p2"}, {"order", a.order()}, {"coeffs", coeffs_json(a.coeffs())}};
}

PhasePoly2 phasepoly2_from_json(const nlohmann::json& j) { return PhasePoly2(coeffs_from_json(j)); }

}  // namespace superint::op
