#include "superint/painleve/painleve.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "superint/sym/serialize.hpp"

namespace superint::painleve {

namespace {

using sym::AtomInfo;
using sym::AtomKind;
using sym::Term;

struct Group {
    std::vector<int> e;  // exponent of u^(j)
    int D = 0;           // total degree in the jet
    int J = 0;           // total derivative count
    Expr coeff;          // function of x and parameters
};

std::vector<Group> groups_of(const OdePoly& ode) {
    std::map<std::vector<int>, Expr> acc;
    for (const Term& t : ode.equation.terms()) {
        std::vector<int> e(ode.order + 1, 0);
        sym::Monomial rest;
        for (auto f : t.mono) {
            const AtomInfo& info = sym::atom_info(f.atom);
            if (info.kind == AtomKind::Func && info.base == ode.unknown)
                e[info.order] += f.exp;
            else
                rest.push_back(f);
        }
        acc[e] += Expr::from_terms({Term{rest, t.coeff}});
    }
    std::vector<Group> out;
    for (auto& [e, c] : acc) {
        if (c.is_zero()) continue;
        Group g{e, 0, 0, c};
        for (int j = 0; j < int(e.size()); ++j) {
            g.D += e[j];
            g.J += j * e[j];
        }
        out.push_back(std::move(g));
    }
    return out;
}

mpq_class weight(const Group& g, const mpq_class& p) { return g.D * p - g.J; }

// falling factorial p (p-1) ... (p-j+1)
Coeff falling(const mpq_class& p, int j) {
    mpq_class r = 1;
    for (int k = 0; k < j; ++k) r *= p - k;
    return Coeff(r);
}

Expr falling(const Expr& p, int j) {
    Expr r(1);
    for (int k = 0; k < j; ++k) r *= p - Expr(k);
    return r;
}

const Expr& x0() {
    static const Expr e = Expr::param("x0");
    return e;
}

Expr at_x0(const OdePoly& ode, const Expr& c) { return sym::substitute(c, ode.var, x0()); }

std::vector<const Group*> dominant(const std::vector<Group>& gs, const mpq_class& p, mpq_class& w) {
    std::vector<const Group*> out;
    bool first = true;
    for (const auto& g : gs) {
        mpq_class wg = weight(g, p);
        if (first || wg < w) {
            w = wg;
            out.clear();
            first = false;
        }
        if (wg == w) out.push_back(&g);
    }
    return out;
}

std::string q_string(const mpq_class& q) { return sym::rational_string(q); }

// monomial^(1/q): exact when all exponents divide, otherwise a radical
std::optional<Expr> mono_root(const Term& t, int q) {
    bool divisible = true;
    for (auto f : t.mono) divisible = divisible && f.exp % q == 0;
    if (divisible) {
        sym::Monomial m;
        for (auto f : t.mono) m.push_back({f.atom, f.exp / q});
        return Expr::from_terms({Term{m, Coeff(1)}});
    }
    try {
        return Expr::root(Expr::from_terms({Term{t.mono, Coeff(1)}}), q);
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::vector<Balance> solve_d0(const mpq_class& p, const std::map<int, Expr>& poly) {
    std::vector<Balance> out;
    int m = poly.begin()->first, n = poly.rbegin()->first, q = n - m;
    const Expr& Cn = poly.at(n);
    const Expr& Cm = poly.at(m);
    auto unresolved = [&](const std::string& why) {
        Balance b{p, Expr(), false, why};
        out.push_back(b);
        return out;
    };
    if (!Cn.is_invertible_monomial() || !Cm.is_monomial()) return unresolved("leading-order polynomial not reducible");
    Expr ratio = Cm / Cn;
    const Term& rt = ratio.terms()[0];
    auto mu = mono_root(rt, q);
    if (!mu) return unresolved("leading-order scale not a monomial root");
    // mu^q as a plain monomial
    Expr muq = Expr::from_terms({Term{rt.mono, Coeff(1)}});
    std::vector<Coeff> c(q + 1);
    for (const auto& [D, C] : poly) {
        Expr T = C * mu->pow(D - m) / (Cn * muq);
        if (!T.is_constant()) return unresolved("leading-order polynomial not homogeneous");
        c[D - m] = T.constant_value();
    }
    int left = 0;
    auto roots = rational_roots(c, left);
    for (const auto& t : roots)
        if (sgn(t) != 0) out.push_back(Balance{p, Expr(Coeff(t)) * *mu, true, ""});
    if (left == 2 && q == 2 && roots.empty() && c[1].is_zero()) {
        // t^2 = -c0/c2
        Coeff s = -c[0] / c[2];
        Expr r = Expr::root(Expr(s), 2);
        out.push_back(Balance{p, r * *mu, true, ""});
        out.push_back(Balance{p, -r * *mu, true, ""});
    } else if (left > 0) {
        out.push_back(Balance{p, Expr(), false, std::to_string(left) + " leading coefficients not rational"});
    }
    return out;
}

struct Series {
    mpq_class lead;
    std::vector<Expr> c;
};

Series derivative(const Series& s) {
    Series out{s.lead - 1, s.c};
    for (size_t k = 0; k < out.c.size(); ++k) out.c[k] *= Expr(Coeff(s.lead + long(k)));
    return out;
}

Series multiply(const Series& a, const Series& b, int N) {
    Series out{a.lead + b.lead, std::vector<Expr>(N + 1)};
    for (int i = 0; i <= N && i < int(a.c.size()); ++i) {
        if (a.c[i].is_zero()) continue;
        for (int j = 0; i + j <= N && j < int(b.c.size()); ++j)
            if (!b.c[j].is_zero()) out.c[i + j] += a.c[i] * b.c[j];
    }
    return out;
}

Expr d_symbol(int k) { return Expr::param("d" + std::to_string(k)); }

}  // namespace

OdePoly OdePoly::make(const Expr& equation, const std::string& unknown, const std::string& var) {
    OdePoly o;
    o.var = sym::var_atom(var);
    o.unknown = sym::func_atom(unknown, o.var);
    o.equation = sym::clear_denominators(equation);
    o.order = sym::max_order(o.equation, o.unknown);
    if (o.order < 1) throw InvalidOde("equation does not involve a derivative of " + unknown);
    for (AtomId a : o.equation.atoms()) {
        const AtomInfo& info = sym::atom_info(a);
        if (info.kind == AtomKind::Func && info.base != o.unknown)
            throw InvalidOde("second unknown function " + info.name);
    }
    return o;
}

std::vector<mpq_class> rational_roots(std::vector<Coeff> c, int& unresolved) {
    std::vector<mpq_class> roots;
    unresolved = 0;
    while (!c.empty() && c.back().is_zero()) c.pop_back();
    if (c.size() <= 1) return roots;
    size_t z = 0;
    while (c[z].is_zero()) ++z;
    for (size_t k = 0; k < z; ++k) roots.push_back(0);
    c.erase(c.begin(), c.begin() + z);
    Coeff lc = c.back();
    for (auto& v : c) v /= lc;
    int deg = int(c.size()) - 1;
    for (const auto& v : c)
        if (!v.is_real()) {
            unresolved = deg;
            return roots;
        }
    std::vector<mpq_class> a;
    for (const auto& v : c) a.push_back(v.re());
    auto divisors = [](mpz_class v) {
        std::vector<mpz_class> d;
        v = abs(v);
        if (v > mpz_class("1000000000000")) return d;
        for (mpz_class k = 1; k * k <= v; ++k)
            if (v % k == 0) {
                d.push_back(k);
                if (k * k != v) d.push_back(v / k);
            }
        return d;
    };
    auto eval = [&](const mpq_class& t) {
        mpq_class r = 0;
        for (int k = int(a.size()) - 1; k >= 0; --k) r = r * t + a[k];
        return r;
    };
    auto deflate = [&](const mpq_class& t) {
        std::vector<mpq_class> b(a.size() - 1);
        mpq_class carry = 0;
        for (int k = int(a.size()) - 1; k >= 1; --k) {
            carry = carry * t + a[k];
            b[k - 1] = carry;
        }
        a = b;
    };
    bool found = true;
    while (found && a.size() > 1) {
        found = false;
        mpz_class L = 1;
        for (const auto& v : a) L = lcm(L, v.get_den());
        mpz_class c0 = mpz_class(a.front() * L), cn = mpz_class(a.back() * L);
        if (c0 == 0) {
            roots.push_back(0);
            deflate(0);
            found = true;
            continue;
        }
        for (const auto& num : divisors(c0)) {
            for (const auto& den : divisors(cn)) {
                for (int s : {1, -1}) {
                    mpq_class t(s * num, den);
                    t.canonicalize();
                    if (eval(t) == 0) {
                        roots.push_back(t);
                        deflate(t);
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
    }
    unresolved = int(a.size()) - 1;
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<Balance> dominant_balance(const OdePoly& ode) {
    auto gs = groups_of(ode);
    std::set<mpq_class> cand;
    for (size_t i = 0; i < gs.size(); ++i)
        for (size_t j = i + 1; j < gs.size(); ++j) {
            if (gs[i].D == gs[j].D) continue;
            mpq_class p(gs[i].J - gs[j].J, gs[i].D - gs[j].D);
            p.canonicalize();
            if (p < 0) cand.insert(p);
        }
    std::vector<mpq_class> ordered(cand.rbegin(), cand.rend());
    std::stable_partition(ordered.begin(), ordered.end(), [](const mpq_class& p) { return p.get_den() == 1; });
    std::vector<Balance> out;
    for (const auto& p : ordered) {
        mpq_class w;
        auto dom = dominant(gs, p, w);
        std::map<int, Expr> poly;
        for (const Group* g : dom) {
            Coeff k(1);
            for (int j = 0; j < int(g->e.size()); ++j) k *= falling(p, j).pow(g->e[j]);
            poly[g->D] += at_x0(ode, g->coeff).scale(k);
        }
        for (auto it = poly.begin(); it != poly.end();)
            it = it->second.is_zero() ? poly.erase(it) : std::next(it);
        if (poly.size() < 2) continue;
        for (auto& b : solve_d0(p, poly)) out.push_back(std::move(b));
    }
    if (out.empty()) throw NoNegativeBalance("no negative exponent balances the equation");
    return out;
}

ResonanceSet resonances(const OdePoly& ode, const mpq_class& p, const Expr& d0) {
    auto gs = groups_of(ode);
    mpq_class w;
    auto dom = dominant(gs, p, w);
    Expr r = Expr::param("_r");
    Expr pr = Expr(Coeff(p)) + r;
    Expr Q;
    for (const Group* g : dom) {
        Expr base = at_x0(ode, g->coeff) * d0.pow(g->D - 1);
        for (int j = 0; j < int(g->e.size()); ++j) {
            if (g->e[j] == 0) continue;
            Coeff k(g->e[j]);
            for (int i = 0; i < int(g->e.size()); ++i)
                k *= falling(p, i).pow(i == j ? g->e[i] - 1 : g->e[i]);
            Q += base.scale(k) * falling(pr, j);
        }
    }
    ResonanceSet rs;
    auto parts = sym::collect(Q, sym::param_atom("_r"));
    if (parts.empty()) {
        rs.non_integer.push_back("indicial polynomial vanishes");
        return rs;
    }
    rs.degree = parts.rbegin()->first;
    const Expr& lc = parts.rbegin()->second;
    if (!lc.is_invertible_monomial()) {
        rs.non_integer.push_back("indicial polynomial not normalizable");
        rs.polynomial = Q;
        return rs;
    }
    rs.polynomial = Q / lc;
    std::vector<Coeff> c(rs.degree + 1);
    for (const auto& [k, e] : parts) {
        Expr v = e / lc;
        if (!v.is_constant()) {
            rs.non_integer.push_back("indicial coefficients depend on parameters");
            return rs;
        }
        c[k] = v.constant_value();
    }
    int left = 0;
    for (const auto& t : rational_roots(c, left)) {
        if (t.get_den() == 1)
            rs.integer.push_back(t.get_num().get_si());
        else
            rs.non_integer.push_back(q_string(t));
    }
    for (int k = 0; k < left; ++k) rs.non_integer.push_back("irrational");
    return rs;
}

std::vector<Compatibility> compatibility(const OdePoly& ode, const Balance& b, const ResonanceSet& rs) {
    std::vector<Compatibility> out;
    if (!b.integer() || !b.exact) return out;
    std::set<long> pos;
    for (long r : rs.integer)
        if (r > 0) pos.insert(r);
    if (pos.empty()) return out;
    int N = int(*pos.rbegin());

    auto gs = groups_of(ode);
    mpq_class w;
    dominant(gs, b.p, w);

    std::vector<Series> jet;
    Series u{b.p, std::vector<Expr>(N + 1)};
    u.c[0] = b.d0;
    for (int k = 1; k <= N; ++k) u.c[k] = d_symbol(k);
    jet.push_back(u);
    for (int j = 1; j <= ode.order; ++j) jet.push_back(derivative(jet.back()));

    Expr tau = Expr::param("_tau");
    AtomId tau_id = sym::param_atom("_tau");
    std::vector<Expr> E(N + 1);
    for (const auto& g : gs) {
        Series s{0, std::vector<Expr>(N + 1)};
        for (const auto& [k, c] : sym::collect(sym::substitute(g.coeff, ode.var, x0() + tau), tau_id))
            if (k <= N) s.c[k] = c;
        for (int j = 0; j <= ode.order; ++j)
            for (int e = 0; e < g.e[j]; ++e) s = multiply(s, jet[j], N);
        mpq_class off = s.lead - w;
        long o = off.get_num().get_si();
        for (int k = 0; k + o <= N; ++k) E[k + o] += s.c[k];
    }

    bool determined = true;
    for (int k = 1; k <= N; ++k) {
        AtomId dk = sym::param_atom("d" + std::to_string(k));
        auto parts = sym::collect(E[k], dk);
        Expr A = parts.count(1) ? parts.at(1) : Expr();
        Expr B = parts.count(0) ? parts.at(0) : Expr();
        if (pos.count(k)) {
            Compatibility c{k, determined && A.is_zero() && B.is_zero(), determined, B};
            out.push_back(c);
            continue;
        }
        if (!determined) continue;
        if (A.is_zero() || !A.is_invertible_monomial() || parts.size() > 2 || parts.rbegin()->first > 1) {
            determined = false;
            continue;
        }
        Expr val = -B / A;
        for (int j = k + 1; j <= N; ++j) E[j] = sym::substitute(E[j], dk, val);
    }
    return out;
}

BalanceReport painleve_verdict(const OdePoly& ode) {
    BalanceReport rep;
    rep.order = ode.order;
    std::vector<Balance> bs;
    try {
        bs = dominant_balance(ode);
    } catch (const NoNegativeBalance& e) {
        rep.verdict = "inapplicable";
        rep.notes.push_back(e.what());
        return rep;
    }
    bool all = true;
    for (auto& b : bs) {
        BranchReport br;
        br.balance = b;
        if (!b.exact) {
            br.notes.push_back(b.note);
            all = false;
            rep.branches.push_back(std::move(br));
            continue;
        }
        br.resonances = resonances(ode, b.p, b.d0);
        const auto& ri = br.resonances.integer;
        br.principal = int(ri.size()) == ode.order && std::count_if(ri.begin(), ri.end(), [](long r) { return r < 0; }) == 1 &&
                       std::count(ri.begin(), ri.end(), -1L) == 1;
        if (int(ri.size()) == ode.order && !br.principal) br.notes.push_back("secondary branch");
        br.checks = compatibility(ode, b, br.resonances);
        bool ok = b.integer() && br.resonances.non_integer.empty();
        if (!b.integer()) br.notes.push_back("non-integer leading exponent: algebraic branch point");
        for (const auto& c : br.checks) {
            if (!c.determined) br.notes.push_back("condition at r=" + std::to_string(c.r) + " not determined");
            ok = ok && c.compatible;
        }
        br.passes = ok;
        all = all && ok;
        rep.branches.push_back(std::move(br));
    }
    std::stable_sort(rep.branches.begin(), rep.branches.end(), [](const BranchReport& a, const BranchReport& b) {
        return a.balance.p != b.balance.p ? a.balance.p > b.balance.p : a.principal > b.principal;
    });
    rep.verdict = all ? "passes" : "fails";
    return rep;
}

nlohmann::json to_json(const BalanceReport& r) {
    nlohmann::json j;
    j["verdict"] = r.verdict;
    j["order"] = r.order;
    j["notes"] = r.notes;
    j["branches"] = nlohmann::json::array();
    for (const auto& b : r.branches) {
        nlohmann::json jb;
        jb["p"] = q_string(b.balance.p);
        jb["d0"] = b.balance.exact ? sym::to_infix(b.balance.d0) : "";
        jb["exact"] = b.balance.exact;
        jb["resonances"] = b.resonances.integer;
        jb["non_integer"] = b.resonances.non_integer;
        jb["indicial"] = sym::to_infix(b.resonances.polynomial);
        jb["principal"] = b.principal;
        jb["passes"] = b.passes;
        jb["notes"] = b.notes;
        jb["checks"] = nlohmann::json::array();
        for (const auto& c : b.checks)
            jb["checks"].push_back({{"r", c.r},
                                    {"compatible", c.compatible},
                                    {"determined", c.determined},
                                    {"condition", sym::to_infix(c.condition)}});
        j["branches"].push_back(jb);
    }
    return j;
}

}  // namespace superint::painleve
