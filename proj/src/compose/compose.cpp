#include "superint/compose/compose.hpp"

#include <numeric>
#include <random>

#include "superint/sym/serialize.hpp"

namespace superint::composer {

namespace {

const sym::AtomId kX = sym::var_atom("x");
const sym::AtomId kY = sym::var_atom("y");
const sym::AtomId kPx = sym::var_atom("px");
const sym::AtomId kPy = sym::var_atom("py");

bool spatial(const Expr& e) {
    return e.depends_on_any([](sym::AtomId a) {
        auto k = sym::atom_info(a).kind;
        return k == sym::AtomKind::Var || k == sym::AtomKind::Func;
    });
}

// symbol as a polynomial in px, py
Expr symbol_expr(const std::map<Index2, Expr>& s) {
    Expr e;
    for (const auto& [k, v] : s) e += v * Expr::atom(kPx).pow(k.first) * Expr::atom(kPy).pow(k.second);
    return e;
}

std::optional<Expr> constant_ratio(const Expr& t, const Expr& x) {
    auto r = catalog::proportional(t, x);
    if (!r || spatial(*r)) return std::nullopt;
    return r;
}

char letter(const catalog::CatalogEntry& e) { return op::type_letter(e.pair.kind.kind); }

}  // namespace

const Expr& hbar() {
    static const Expr h = Expr::param("hbar");
    return h;
}

Op2 Op2::scalar(Mechanics m, const Expr& c) {
    if (m == Mechanics::Quantum) return DiffOp2::scalar(c);
    return PhasePoly2::scalar(c);
}

int Op2::order() const { return quantum() ? q().order() : c().order(); }
bool Op2::is_zero() const { return quantum() ? q().is_zero() : c().is_zero(); }
Op2 Op2::leading() const { return quantum() ? Op2(q().leading()) : Op2(c().leading()); }
std::map<Index2, Expr> Op2::symbol() const { return quantum() ? q().momentum_coeffs(hbar()) : c().coeffs(); }
Op2 Op2::map(const std::function<Expr(const Expr&)>& f) const {
    return quantum() ? Op2(q().map(f)) : Op2(c().map(f));
}

Op2 operator+(const Op2& a, const Op2& b) { return a.quantum() ? Op2(a.q() + b.q()) : Op2(a.c() + b.c()); }
Op2 operator-(const Op2& a, const Op2& b) { return a.quantum() ? Op2(a.q() - b.q()) : Op2(a.c() - b.c()); }
Op2 operator*(const Expr& s, const Op2& a) { return a.quantum() ? Op2(s * a.q()) : Op2(s * a.c()); }

Op2 product(const Op2& a, const Op2& b) { return a.quantum() ? Op2(op::compose(a.q(), b.q())) : Op2(a.c() * b.c()); }
Op2 power(const Op2& a, int n) { return a.quantum() ? Op2(op::power(a.q(), n)) : Op2(op::power(a.c(), n)); }
Op2 bracket(const Op2& a, const Op2& b) {
    return a.quantum() ? Op2(op::commutator(a.q(), b.q())) : Op2(op::poisson(a.c(), b.c()));
}
Op2 adjoint(const Op2& a) { return a.quantum() ? Op2(op::adjoint(a.q())) : Op2(op::conj(a.c())); }
Op2 reduce(const Op2& a, const std::vector<sym::RewriteRule>& rules) {
    if (rules.empty()) return a;
    return a.quantum() ? Op2(op::reduce(a.q(), rules)) : Op2(op::reduce(a.c(), rules));
}
nlohmann::json to_json(const Op2& a) {
    nlohmann::json j = a.quantum() ? op::to_json(a.q()) : op::to_json(a.c());
    return {{"mechanics", op::to_string(a.mechanics())}, {"order", a.order()}, {"terms", j}};
}

const char* to_string(Case c) {
    switch (c) {
    case Case::AA: return "AA";
    case Case::BB: return "BB";
    case Case::CB: return "CB";
    case Case::DD: return "DD";
    case Case::CC: return "CC";
    case Case::AD: return "AD";
    }
    return "?";
}

Case case_from_string(const std::string& s) {
    for (Case c : {Case::AA, Case::BB, Case::CB, Case::DD, Case::CC, Case::AD})
        if (s == to_string(c)) return c;
    throw Error("unknown composition case " + s);
}

Axis place(const catalog::CatalogEntry& e, bool on_y, const Expr& alpha) {
    det::SolvedPair p = e.pair;
    sym::Bindings bound;
    for (const auto& [k, v] : e.bindings) bound[sym::param_atom(k)] = v;
    auto bind = [&](const Expr& x) { return bound.empty() ? x : sym::substitute(x, bound); };
    for (auto& f : p.f) f = bind(f);
    p.potential.equation = bind(p.potential.equation);
    p.potential.potential = bind(p.potential.potential);

    std::set<sym::AtomId> atoms;
    auto gather = [&](const Expr& x) {
        auto s = x.atoms();
        atoms.insert(s.begin(), s.end());
    };
    for (const auto& f : p.f) gather(f);
    gather(p.V());
    gather(p.potential.equation);

    sym::Bindings b;
    b[sym::param_atom("alpha1")] = alpha;
    auto target = [&](sym::AtomId a) {
        const auto& info = sym::atom_info(a);
        return on_y && info.kind == sym::AtomKind::Func && info.var == kX
                   ? sym::func_atom(sym::atom_info(info.base).name, kY, info.order)
                   : a;
    };
    if (on_y) {
        b[kX] = Expr::atom(kY);
        for (auto a : atoms) {
            const auto& info = sym::atom_info(a);
            if (info.kind == sym::AtomKind::Func && info.var == kX) b[a] = Expr::atom(target(a));
            if (info.kind == sym::AtomKind::Param && info.name != "hbar" && info.name != "alpha1")
                b[a] = Expr::param(info.name + "_y");
            if (info.kind == sym::AtomKind::Sign) b[a] = Expr::sign(info.name + "_y");
        }
        for (int k = 0; k <= p.potential.order + 1; ++k) {
            auto u = p.potential.unknown_atom(k);
            b[u] = Expr::atom(target(u));
        }
    }
    auto mv = [&](const Expr& x) { return sym::substitute(x, b); };

    Axis ax;
    ax.id = e.id;
    sym::AtomId var = on_y ? kY : kX;
    if (p.mechanics == Mechanics::Quantum) {
        auto lift = [&](const op::DiffOp& d) {
            std::vector<Expr> c;
            for (const auto& x : d.coeffs()) c.push_back(mv(x));
            op::DiffOp o(c, var);
            return Op2(on_y ? DiffOp2::from_y(o) : DiffOp2::from_x(o));
        };
        ax.H = lift(p.quantum_H());
        ax.K = lift(p.quantum_K());
    } else {
        auto lift = [&](const op::PhasePoly& d) {
            std::vector<Expr> c;
            for (const auto& x : d.coeffs()) c.push_back(mv(x));
            op::PhasePoly o(c, var);
            return Op2(on_y ? PhasePoly2::from_y(o) : PhasePoly2::from_x(o));
        };
        ax.H = lift(p.classical_H());
        ax.K = lift(p.classical_K());
    }
    ax.order = ax.K.order();
    for (const auto& r : p.potential.rules()) ax.rules.emplace_back(target(r.target()), mv(r.relation()));
    if (p.mechanics == Mechanics::Quantum && letter(e) == 'd') {
        try {
            for (const auto& a : det::ladder_product(p)) ax.ladder.push_back(mv(a));
        } catch (const Error&) {
        }
    }
    return ax;
}

std::optional<std::map<Index2, Expr>> hamiltonian_polynomial(const Op2& X0, const Op2& H1, const Op2& H2,
                                                             const std::vector<sym::RewriteRule>& rules) {
    std::map<Index2, Expr> out;
    Expr h1 = H1.leading().symbol()[{2, 0}], h2 = H2.leading().symbol()[{0, 2}];
    if (h1.is_zero() || h2.is_zero() || spatial(h1) || spatial(h2)) return std::nullopt;
    Mechanics m = H1.mechanics();
    Op2 X = reduce(X0, rules);
    while (!X.is_zero()) {
        Op2 sub = Op2::scalar(m, Expr(0));
        for (const auto& [k, v] : X.leading().symbol()) {
            if (k.first % 2 || k.second % 2 || spatial(v)) return std::nullopt;
            int i = k.first / 2, j = k.second / 2;
            Expr c = v / (h1.pow(i) * h2.pow(j));
            out[{i, j}] += c;
            sub = sub + c * product(power(H1, i), power(H2, j));
        }
        int before = X.order();
        X = reduce(X - sub, rules);
        if (!X.is_zero() && X.order() >= before) return std::nullopt;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

Op2 evaluate(const std::map<Index2, Expr>& poly, const Op2& H1, const Op2& H2) {
    Op2 r = Op2::scalar(H1.mechanics(), Expr(0));
    for (const auto& [k, c] : poly) r = r + c * product(power(H1, k.first), power(H2, k.second));
    return r;
}

std::optional<Expr> multiple_of(const Op2& X, const Op2& T) {
    if (X.is_zero()) return Expr(0);
    if (T.is_zero()) return std::nullopt;
    auto r = constant_ratio(symbol_expr(T.symbol()), symbol_expr(X.symbol()));
    if (!r || !(X - *r * T).is_zero()) return std::nullopt;
    return r;
}

std::optional<Expr> match_leading(const Op2& X, const Op2& T) {
    if (X.order() != T.order() || T.is_zero()) return std::nullopt;
    std::map<Index2, Expr> x;
    for (const auto& [k, v] : X.leading().symbol())
        if (k.first % 2 || k.second % 2 || spatial(v)) x[k] = v;
    return constant_ratio(symbol_expr(T.leading().symbol()), symbol_expr(x));
}

std::optional<Expr> match_modulo_hamiltonians(const Op2& X, const Op2& T, const Op2& H1, const Op2& H2,
                                              const std::vector<sym::RewriteRule>& rules) {
    if (X.order() != T.order()) return std::nullopt;
    auto r = constant_ratio(symbol_expr(T.leading().symbol()), symbol_expr(X.leading().symbol()));
    if (!r) return std::nullopt;
    if (!hamiltonian_polynomial(X - *r * T, H1, H2, rules)) return std::nullopt;
    return r;
}

Composition compose(const CompositionSpec& spec, const catalog::Catalog& cat) {
    const auto& ex = cat.find(spec.entry_x);
    const auto& ey = cat.find(spec.entry_y);
    static const std::map<Case, std::pair<char, char>> letters{{Case::AA, {'a', 'a'}}, {Case::BB, {'b', 'b'}},
                                                               {Case::CB, {'c', 'b'}}, {Case::DD, {'d', 'd'}},
                                                               {Case::CC, {'c', 'c'}}, {Case::AD, {'a', 'd'}}};
    auto [lx, ly] = letters.at(spec.kind);
    if (letter(ex) != lx || letter(ey) != ly)
        throw KindMismatch(std::string("case ") + to_string(spec.kind) + " needs types (" + lx + "," + ly + "), got (" +
                           letter(ex) + "," + letter(ey) + ")");
    if (ex.pair.mechanics != ey.pair.mechanics) throw KindMismatch("entries mix quantum and classical mechanics");
    if (spec.kind == Case::DD) {
        if (spec.m < 1 || spec.n < 1 || std::gcd(spec.m, spec.n) != 1)
            throw RationalityViolation("m and n must be coprime positive integers");
        if (Expr(spec.m) * spec.alpha1 != Expr(spec.n) * spec.alpha2)
            throw RationalityViolation("alpha1/alpha2 must equal n/m");
    }

    Composition c;
    c.spec = spec;
    c.mechanics = ex.pair.mechanics;
    c.x = place(ex, false, spec.alpha1);
    c.y = place(ey, true, spec.alpha2);
    c.rules = c.x.rules;
    c.rules.insert(c.rules.end(), c.y.rules.begin(), c.y.rules.end());
    c.H = c.x.H + c.y.H;
    c.A = c.x.H - c.y.H;
    const Op2 &H1 = c.x.H, &H2 = c.y.H, &K1 = c.x.K, &K2 = c.y.K;
    const Expr &a1 = spec.alpha1, &a2 = spec.alpha2;
    int k1 = c.x.order, k2 = c.y.order;
    switch (spec.kind) {
    case Case::AA:
        c.K = K1 + K2;
        c.expected_order = std::max(k1, k2);
        break;
    case Case::BB:
        c.K = a2 * K1 - a1 * K2;
        c.expected_order = std::max(k1, k2);
        break;
    case Case::CB:
        c.K = a2 * K1 - a1 * product(H1, K2);
        c.expected_order = std::max(k1, k2 + 2);
        break;
    case Case::DD:
        c.K = product(power(adjoint(K1), spec.m), power(K2, spec.n)) -
              product(power(K1, spec.m), power(adjoint(K2), spec.n));
        c.expected_order = spec.m * k1 + spec.n * k2 - 1;
        break;
    case Case::CC:
        c.K = a2 * product(H2, K1) - a1 * product(H1, K2);
        c.expected_order = std::max(k1 + 2, k2 + 2);
        break;
    case Case::AD:
        c.K = K1 - product(K2, adjoint(K2));
        c.expected_order = std::max(k1, 2 * k2);
        c.trivial = true;
        if (c.mechanics == Mechanics::Quantum) {
            c.P = c.y.ladder;
        } else if (auto p = hamiltonian_polynomial(product(adjoint(K2), K2), H1, H2, c.rules)) {
            for (const auto& [k, v] : *p) {
                if (int(c.P.size()) <= k.second) c.P.resize(k.second + 1);
                c.P[k.second] = v;
            }
        }
        c.notes.push_back("K2^- K2^+ is a polynomial in H2, so K is trivial; the tabulated minus sign is used "
                          "(K1 + K2^- K2^+ also appears)");
        break;
    }
    c.K = reduce(c.K, c.rules);
    c.order = c.K.order();
    if (c.order != c.expected_order)
        c.notes.push_back("order " + std::to_string(c.order) + " differs from the tabulated " +
                          std::to_string(c.expected_order));
    return c;
}

namespace {

// rank of a matrix over the Gaussian rationals
int rank(std::vector<std::vector<sym::Coeff>> m) {
    int r = 0, rows = int(m.size()), cols = rows ? int(m[0].size()) : 0;
    for (int col = 0; col < cols && r < rows; ++col) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][col].is_zero()) piv = i;
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][col].is_zero()) continue;
            sym::Coeff f = m[i][col] / m[r][col];
            for (int j = col; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

int jacobian_rank(const std::vector<Op2>& fs, std::uint32_t seed) {
    std::vector<Expr> sym;
    for (const auto& f : fs) sym.push_back(symbol_expr(f.symbol()));
    const sym::AtomId vars[] = {kX, kY, kPx, kPy};
    std::vector<std::vector<Expr>> J;
    std::set<sym::AtomId> atoms;
    for (const auto& s : sym) {
        J.emplace_back();
        for (auto v : vars) {
            J.back().push_back(sym::differentiate(s, v));
            auto a = J.back().back().atoms();
            atoms.insert(a.begin(), a.end());
        }
    }
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(1, 97);
    sym::Bindings point;
    for (auto a : atoms)
        point[a] = sym::atom_info(a).kind == sym::AtomKind::Sign ? Expr(1) : Expr::rational(num(rng), 13 + num(rng));
    std::vector<std::vector<sym::Coeff>> m;
    for (const auto& row : J) {
        m.emplace_back();
        for (const auto& e : row) {
            Expr v = sym::substitute(e, point);
            if (!v.is_constant() && !v.is_zero()) throw Error("symbol does not evaluate to a number");
            m.back().push_back(v.constant_value());
        }
    }
    return rank(m);
}

nlohmann::json residual_json(const Op2& r) { return r.is_zero() ? nlohmann::json(nullptr) : to_json(r); }

}  // namespace

SuperintegrabilityReport check_superintegrable(const Op2& H, const Op2& K, const Op2& A,
                                               const std::vector<sym::RewriteRule>& rules) {
    SuperintegrabilityReport r;
    Op2 hk = reduce(bracket(H, K), rules), ha = reduce(bracket(H, A), rules);
    r.commutes_K = hk.is_zero();
    r.commutes_A = ha.is_zero();
    r.residual = {{"HK", residual_json(hk)}, {"HA", residual_json(ha)}};
    if (!r.commutes_K || !r.commutes_A) throw NotAnIntegral("not an integral of motion", r.residual);
    for (std::uint32_t s : {1u, 2u}) r.rank = std::max(r.rank, jacobian_rank({H, A, K}, s));
    r.independent = r.rank == 3;
    return r;
}

SuperintegrabilityReport check_superintegrable(const Composition& c) {
    return check_superintegrable(c.H, c.K, c.A, c.rules);
}

nlohmann::json to_json(const SuperintegrabilityReport& r) {
    return {{"commutes_K", r.commutes_K},
            {"commutes_A", r.commutes_A},
            {"independent", r.independent},
            {"rank", r.rank},
            {"residual", r.residual}};
}

nlohmann::json to_json(const Composition& c) {
    nlohmann::json P = nlohmann::json::array();
    for (const auto& p : c.P) P.push_back(sym::to_infix(p));
    return {{"case", to_string(c.spec.kind)},
            {"entry_x", c.spec.entry_x},
            {"entry_y", c.spec.entry_y},
            {"m", c.spec.m},
            {"n", c.spec.n},
            {"alpha1", sym::to_infix(c.spec.alpha1)},
            {"alpha2", sym::to_infix(c.spec.alpha2)},
            {"mechanics", op::to_string(c.mechanics)},
            {"H", to_json(c.H)},
            {"A", to_json(c.A)},
            {"K", to_json(c.K)},
            {"order", c.order},
            {"expected_order", c.expected_order},
            {"trivial", c.trivial},
            {"P", P},
            {"notes", c.notes}};
}

}  // namespace superint::composer
