#include "superint/det/solve.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "superint/det/quadrature.hpp"
#include "superint/sym/serialize.hpp"

namespace superint::det {

namespace {

using sym::AtomInfo;
using sym::AtomKind;
using sym::Bindings;

const AtomId kX = sym::var_atom("x");

AtomId unknown_of(bool u, int k = 0) { return sym::func_atom(u ? "u" : "V", kX, k); }

bool is_beta(AtomId a) {
    const AtomInfo& info = sym::atom_info(a);
    return info.kind == AtomKind::Param && info.name.rfind("beta", 0) == 0;
}

std::string indexed(const std::string& stem, int n) { return n == 0 ? stem : stem + std::to_string(n); }

Expr apply_bindings(const Expr& e, const Bindings& b) { return b.empty() ? e : sym::substitute(e, b); }

// leading coefficient of e in its highest derivative of `base`, made 1 when
// it is an invertible monomial
Expr normalize_leading(const Expr& e, AtomId base_atom) {
    if (e.is_zero()) return e;
    int n = sym::max_order(e, base_atom);
    if (n < 0) return e;
    AtomId top = sym::func_derivative(base_atom, n);
    auto parts = sym::collect(e, top);
    const Expr& lead = parts.rbegin()->second;
    if (lead.is_invertible_monomial()) return e / lead;
    return e;
}

// strip invertible monomial content; beta factors are reported
Expr strip_content(const Expr& e, std::vector<AtomId>& beta_factors) {
    Expr c = sym::monomial_content(e);
    if (c.is_constant()) return e;
    Expr keep(1);
    for (const auto& f : c.terms().front().mono) {
        const AtomInfo& info = sym::atom_info(f.atom);
        if (info.kind == AtomKind::Func) continue;
        if (is_beta(f.atom) && f.exp > 0) beta_factors.push_back(f.atom);
        keep *= Expr::atom(f.atom).pow(f.exp);
    }
    return e / keep;
}

struct Integrated {
    Expr eq;
    std::vector<std::string> constants;
};

Integrated integrate_condition(const Expr& cond, bool u, bool keep, int& kcount) {
    AtomId base = unknown_of(u);
    Integrated out{cond, {}};
    while (sym::max_order(out.eq, base) >= 1) {
        auto r = integrate_with_factor(out.eq, kX);
        if (!r) break;
        Expr next = r->result;
        if (keep) {
            std::string name = indexed("k", kcount++);
            next += Expr::param(name);
            out.constants.push_back(name);
        }
        out.eq = next;
    }
    return out;
}

bool explicit_x(const Expr& e) { return e.depends_on(kX); }

// Classify the integrated condition. nullopt: the branch is inconsistent.
std::optional<PotentialSpec> classify(const Expr& raw, const Integrated& in, bool u) {
    PotentialSpec p;
    p.unknown = u ? "u" : "V";
    p.raw_condition = raw;
    p.constants = in.constants;
    AtomId base = unknown_of(u);
    Expr eq = in.eq;
    int n = sym::max_order(eq, base);
    if (n < 0) {
        if (!eq.is_zero()) return std::nullopt;
        p.variant = PotentialVariant::ODE;
        p.order = 0;
        return p;
    }
    if (n >= 1) {
        p.variant = PotentialVariant::ODE;
        p.equation = normalize_leading(eq, base);
        p.order = n;
        return p;
    }
    auto parts = sym::collect(eq, base);
    p.order = 0;
    p.equation = normalize_leading(eq, base);
    p.variant = PotentialVariant::Algebraic;
    auto closed = [&](const Expr& val) {
        p.variant = PotentialVariant::ClosedForm;
        p.potential = u ? sym::differentiate(val, kX) : val;
        p.equation = Expr::atom(base) - val;
        return p;
    };
    int top = parts.rbegin()->first;
    if (parts.size() == 1 && top > 0) return closed(Expr());
    if (parts.size() == 2 && parts.begin()->first == 0 && top > 0) {
        const Expr& lead = parts.at(top);
        if (!lead.is_invertible_monomial()) return p;
        Expr val = -parts.at(0) / lead;
        if (top == 1) return closed(val);
        if (!val.is_monomial() || val.depends_on_any([](AtomId a) {
                return sym::atom_info(a).kind == AtomKind::Func;
            }))
            return p;
        Expr r = Expr::root(val, top);
        if (top % 2 == 0) r = Expr::sign("eps") * r;
        return closed(r);
    }
    if (!explicit_x(eq)) {
        // x-independent polynomial relation: the unknown is one of its constant roots
        p.variant = PotentialVariant::ClosedForm;
        p.potential = u ? Expr() : Expr::param("v0");
        return p;
    }
    return p;
}

bool trivial_potential(const PotentialSpec& p) {
    return p.variant == PotentialVariant::ClosedForm && !p.potential.depends_on(kX);
}

struct Draft {
    std::vector<Expr> f;
    Expr condition;
    bool u = false;
    std::vector<std::string> notes;
};

std::optional<Draft> descend(const DeterminingSystem& sys, bool u, const SolveOptions& opt, std::string& why) {
    const int M = sys.M;
    const bool ladder =
        sys.kind.kind == RelationKind::LadderLower || sys.kind.kind == RelationKind::LadderRaise;
    std::vector<Expr> c = sys.constraints;
    if (u) {
        Bindings vb{{potential_atom(), Expr::atom(unknown_of(true, 1))}};
        for (auto& e : c) e = sym::substitute(e, vb);
    }
    Draft d;
    d.u = u;
    d.f.assign(M + 1, Expr());
    d.f[M] = Expr(1);
    Bindings known{{coefficient_atom(M), Expr(1)}};
    int beta_count = 1;
    for (int l = M - 1; l >= (ladder ? 1 : 0); --l) {
        Expr e = sym::substitute(c[l + 1], known);
        auto parts = sym::collect(e, coefficient_atom(l, 1));
        if (!parts.count(1) || parts.size() > 2 || !parts.at(1).is_invertible_monomial())
            throw Error("determining equation " + std::to_string(l + 1) + " is not linear in f" +
                        std::to_string(l) + "'");
        Expr fp = -(parts.count(0) ? parts.at(0) : Expr()) / parts.at(1);
        auto F = antiderivative(fp, kX);
        if (!F) {
            why = "f" + std::to_string(l) + "' = " + sym::to_infix(fp) + " has no antiderivative in the ring";
            return std::nullopt;
        }
        Expr val = *F;
        if (l == M - 1) {
            // a non-constant f_{M-1} fixes its constant by translation of x
            if (!val.depends_on(kX)) val += Expr::param("beta");
        } else if (opt.keep_constants) {
            val += Expr::param(indexed("beta", beta_count++));
        }
        d.f[l] = val;
        known[coefficient_atom(l)] = val;
    }
    if (!ladder) {
        d.condition = sym::substitute(c[0], known);
        return d;
    }
    // f0' from the l = 1 equation, f0 algebraically from l = 0
    Expr e1 = sym::substitute(c[1], known);
    auto p1 = sym::collect(e1, coefficient_atom(0, 1));
    if (!p1.count(1) || p1.size() > 2) throw Error("determining equation 1 is not linear in f0'");
    Expr fp0 = -(p1.count(0) ? p1.at(0) : Expr()) / p1.at(1);
    Expr e0 = sym::substitute(c[0], known);
    e0 = sym::substitute(e0, coefficient_atom(0, 2), sym::differentiate(fp0, kX));
    e0 = sym::substitute(e0, coefficient_atom(0, 1), fp0);
    auto p0 = sym::collect(e0, coefficient_atom(0));
    if (!p0.count(1) || p0.size() > 2 || !p0.at(1).is_invertible_monomial())
        throw Error("determining equation 0 is not linear in f0");
    Expr f0 = -(p0.count(0) ? p0.at(0) : Expr()) / p0.at(1);
    d.f[0] = f0;
    d.condition = sym::differentiate(f0, kX) - fp0;
    d.notes.push_back("f0 determined algebraically from the l=0 equation");
    return d;
}

SolvedPair finish(const DeterminingSystem& sys, const Draft& d, PotentialSpec spec, const Bindings& params,
                  const std::string& branch) {
    SolvedPair s;
    s.mechanics = sys.mechanics;
    s.M = sys.M;
    s.kind = sys.kind;
    s.branch = branch;
    s.notes = d.notes;
    Bindings b = params;
    if (spec.variant == PotentialVariant::ClosedForm) {
        if (d.u) {
            // u itself is recovered from the closed form of its equation
            auto parts = sym::collect(spec.equation, unknown_of(true));
            if (parts.size() == 2 && parts.count(1) && parts.at(1) == Expr(1))
                b[unknown_of(true)] = -parts.at(0);
        } else {
            b[potential_atom()] = spec.potential;
        }
    }
    for (auto& fl : d.f) s.f.push_back(apply_bindings(fl, b));
    if (!params.empty()) {
        spec.raw_condition = apply_bindings(spec.raw_condition, params);
        for (const auto& [a, v] : params) spec.parameter_constraints.push_back(Expr::atom(a) - v);
    }
    if (d.u) s.notes.push_back("u = int V dx");
    s.potential = std::move(spec);
    return s;
}

struct Processed {
    std::optional<PotentialSpec> spec;
    Integrated used;
};

// Drops closed-form constants that only shift the energy or translate x,
// renames the survivors k, k1, ...
PotentialSpec prune_constants(PotentialSpec p, bool u) {
    Bindings zero;
    for (const auto& n : p.constants) zero[sym::param_atom(n)] = Expr();
    Expr v0 = apply_bindings(p.potential, zero);
    Expr dv0 = sym::differentiate(v0, kX);
    Bindings drop;
    std::vector<std::string> survivors;
    for (const auto& n : p.constants) {
        AtomId k = sym::param_atom(n);
        auto parts = sym::collect(p.potential, k);
        bool removable = false;
        if (parts.size() <= 2 && parts.count(1) && (parts.size() == 1 || parts.count(0))) {
            Expr d = apply_bindings(parts.at(1), zero);
            if (!d.depends_on(kX))
                removable = true;
            else if (!dv0.is_zero() && d.is_invertible_monomial() && !(dv0 / d).depends_on(kX))
                removable = true;
        }
        if (removable)
            drop[k] = Expr();
        else
            survivors.push_back(n);
    }
    Bindings rename;
    std::vector<std::string> names;
    for (size_t i = 0; i < survivors.size(); ++i) {
        std::string n = indexed("k", int(i));
        names.push_back(n);
        if (n != survivors[i]) rename[sym::param_atom(survivors[i])] = Expr::param(n);
    }
    auto fix = [&](const Expr& e) { return apply_bindings(apply_bindings(e, drop), rename); };
    p.potential = fix(p.potential);
    p.equation = fix(p.equation);
    // absorb numeric and parameter factors of a constant entering one term
    for (const auto& n : names) {
        AtomId k = sym::param_atom(n);
        auto parts = sym::collect(p.potential, k);
        if (!parts.count(1) || parts.size() > 2 || (parts.size() == 2 && !parts.count(0)) || !parts.at(1).is_monomial())
            continue;
        auto byx = sym::collect(parts.at(1), kX);
        Expr c = byx.begin()->second;
        if (!c.is_invertible_monomial() || c == Expr(1)) continue;
        Bindings sc{{k, Expr::param(n) / c}};
        p.potential = sym::substitute(p.potential, sc);
        p.equation = sym::substitute(p.equation, sc);
    }
    p.constants = names;
    (void)u;
    return p;
}

Processed process(const Expr& cond, bool u, const SolveOptions& opt) {
    int kc = 0;
    Integrated kept = integrate_condition(cond, u, true, kc);
    auto pk = classify(cond, kept, u);
    if (opt.keep_constants) return {pk, kept};
    if (pk && pk->variant == PotentialVariant::ClosedForm && !trivial_potential(*pk))
        return {prune_constants(*pk, u), kept};
    kc = 0;
    Integrated zero = integrate_condition(cond, u, false, kc);
    auto pz = classify(cond, zero, u);
    if (!pz) return {pk, kept};
    if (trivial_potential(*pz) && !u) {
        // any constant potential solves the condition: report it as v0
        Expr v0 = Expr::param("v0");
        if (sym::substitute(cond, potential_atom(), v0).is_zero()) {
            pz->potential = v0;
            pz->equation = potential_fn() - v0;
            pz->constants = {"v0"};
        }
    }
    return {pz, zero};
}

int complexity(const PotentialSpec& p) {
    switch (p.variant) {
        case PotentialVariant::ClosedForm:
            return 0;
        case PotentialVariant::Algebraic:
            return 1;
        case PotentialVariant::ODE:
            return 2 + p.order;
    }
    return 99;
}

std::vector<SolvedPair> branches_from(const DeterminingSystem& sys, const Draft& d, const SolveOptions& opt) {
    std::vector<SolvedPair> out;
    std::vector<AtomId> beta_factors;
    Expr cond = strip_content(d.condition, beta_factors);
    std::vector<Expr> nonzero;
    for (AtomId b : beta_factors) {
        Bindings zb{{b, Expr()}};
        Expr cz = apply_bindings(d.condition, zb);
        auto pr = process(cz, d.u, opt);
        if (pr.spec) {
            auto s = finish(sys, d, *pr.spec, zb, sym::atom_info(b).name + "=0");
            s.notes.push_back("degenerate branch");
            out.push_back(std::move(s));
        }
        nonzero.push_back(Expr::atom(b));
    }
    if (cond.is_zero()) cond = d.condition;
    auto pr = process(cond, d.u, opt);
    std::vector<SolvedPair> result;
    if (pr.spec) {
        PotentialSpec spec = *pr.spec;
        spec.raw_condition = d.condition;
        spec.nonzero = nonzero;
        result.push_back(finish(sys, d, spec, {}, "generic"));
        // a constant that simplifies the condition when it vanishes gives a
        // separate degenerate branch
        for (AtomId b : cond.atoms()) {
            if (!is_beta(b) || std::count(beta_factors.begin(), beta_factors.end(), b)) continue;
            Bindings zb{{b, Expr()}};
            auto pz = process(apply_bindings(d.condition, zb), d.u, opt);
            if (pz.spec && complexity(*pz.spec) < complexity(spec)) {
                auto s = finish(sys, d, *pz.spec, zb, sym::atom_info(b).name + "=0");
                s.notes.push_back("degenerate branch");
                out.push_back(std::move(s));
            }
        }
    }
    result.insert(result.end(), out.begin(), out.end());
    return result;
}

}  // namespace

const char* to_string(PotentialVariant v) {
    switch (v) {
        case PotentialVariant::ClosedForm:
            return "closed-form";
        case PotentialVariant::ODE:
            return "ode";
        case PotentialVariant::Algebraic:
            return "algebraic";
    }
    return "?";
}

PotentialVariant potential_variant_from_string(const std::string& s) {
    if (s == "closed-form") return PotentialVariant::ClosedForm;
    if (s == "ode") return PotentialVariant::ODE;
    if (s == "algebraic") return PotentialVariant::Algebraic;
    throw Error("unknown potential variant '" + s + "'");
}

AtomId PotentialSpec::unknown_atom(int k) const { return sym::func_atom(unknown, kX, k); }

Expr PotentialSpec::potential_expr() const {
    if (variant == PotentialVariant::ClosedForm) return potential;
    if (unknown == "u") return Expr::atom(unknown_atom(1));
    return Expr::atom(unknown_atom(0));
}

std::vector<sym::RewriteRule> PotentialSpec::rules() const {
    if (variant == PotentialVariant::ClosedForm || equation.is_zero()) return {};
    return {sym::RewriteRule(unknown_atom(order), equation)};
}

op::DiffOp SolvedPair::quantum_H() const { return op::DiffOp::hamiltonian(V(), hbar()); }
op::DiffOp SolvedPair::quantum_K() const { return op::DiffOp::from_momentum(f, hbar()); }
op::PhasePoly SolvedPair::classical_H() const { return op::PhasePoly::hamiltonian(V()); }
op::PhasePoly SolvedPair::classical_K() const { return op::PhasePoly(f); }

std::vector<SolvedPair> solve_all(const DeterminingSystem& sys, const SolveOptions& opt) {
    std::string why_v, why_u;
    std::optional<Draft> d;
    if (!opt.force_u) d = descend(sys, false, opt, why_v);
    if (!d && (opt.allow_u || opt.force_u)) {
        d = descend(sys, true, opt, why_u);
        if (d && !opt.force_u) d->notes.push_back("V convention failed: " + why_v);
    }
    if (!d) throw NotClosedUnderQuadrature(why_u.empty() ? why_v : why_u);
    auto out = branches_from(sys, *d, opt);
    if (out.empty()) throw Error("determining system has no consistent branch");
    return out;
}

SolvedPair solve(const DeterminingSystem& sys, const SolveOptions& opt) { return solve_all(sys, opt).front(); }

std::vector<Expr> residual(const SolvedPair& s) {
    auto rules = s.potential.rules();
    AlgebraRelation rel = s.kind;
    std::vector<Expr> out;
    if (s.mechanics == Mechanics::Quantum) {
        auto r = op::check_relation(s.quantum_H(), s.quantum_K(), rel, rules);
        out = r.momentum_coeffs(hbar());
    } else {
        auto r = op::check_relation(s.classical_H(), s.classical_K(), rel, rules);
        out = r.coeffs();
    }
    return out;
}

bool verifies(const SolvedPair& s) {
    for (const auto& e : residual(s))
        if (!e.is_zero()) return false;
    return true;
}

std::vector<Expr> ladder_product(const SolvedPair& s) {
    if (s.mechanics != Mechanics::Quantum) throw Error("ladder_product needs a quantum pair");
    auto rules = s.potential.rules();
    op::DiffOp K = s.quantum_K();
    op::DiffOp H = s.quantum_H();
    op::DiffOp P = op::reduce(op::compose(op::adjoint(K), K), rules);
    int n = P.order();
    if (n % 2) throw NotReducible("K^dagger K has odd order");
    std::vector<Expr> a(n / 2 + 1);
    std::vector<op::DiffOp> Hp{op::DiffOp::scalar(Expr(1))};
    for (int k = 1; k <= n / 2; ++k) Hp.push_back(op::reduce(op::compose(Hp.back(), H), rules));
    const Expr lead = -hbar().pow(2) / 2;
    for (int k = n / 2; k >= 0 && !P.is_zero(); --k) {
        if (P.order() > 2 * k) throw NotReducible("residual of odd order " + std::to_string(P.order()));
        if (P.order() < 2 * k) continue;
        Expr c = sym::reduce_mod(P.coeff(2 * k) / lead.pow(k), rules);
        // a coefficient in the jet must be a first integral of the potential's ODE
        if ((c.depends_on(kX) || c.depends_on_any([](AtomId t) { return sym::atom_info(t).kind == AtomKind::Func; })) &&
            !sym::reduce_mod(sym::differentiate(c, kX), rules).is_zero())
            throw NotReducible("coefficient of H^" + std::to_string(k) + " depends on x: " + sym::to_infix(c));
        a[k] = c;
        P = op::reduce(P - c * Hp[k], rules);
    }
    if (!P.is_zero()) throw NotReducible("nonzero remainder after eliminating powers of H");
    return a;
}

nlohmann::json to_json(const PotentialSpec& p) {
    auto list = [](const std::vector<Expr>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& e : v) a.push_back(sym::to_infix(e));
        return a;
    };
    nlohmann::json j{{"variant", to_string(p.variant)},
                     {"unknown", p.unknown},
                     {"order", p.order},
                     {"equation", sym::to_infix(p.equation)},
                     {"raw_condition", sym::to_infix(p.raw_condition)},
                     {"constants", p.constants},
                     {"first_integrals", list(p.first_integrals)},
                     {"parameter_constraints", list(p.parameter_constraints)},
                     {"nonzero", list(p.nonzero)}};
    if (p.variant == PotentialVariant::ClosedForm) j["potential"] = sym::to_infix(p.potential);
    return j;
}

namespace {

sym::ParseContext parse_context() {
    sym::ParseContext ctx;
    for (const char* n : {"V", "u", "f0", "f1", "f2", "f3", "f4", "f5", "P", "W", "U"}) ctx.funcs[n] = "x";
    return ctx;
}

Expr parse_expr(const nlohmann::json& j) {
    if (j.is_string()) return sym::parse_infix(j.get<std::string>(), parse_context());
    return sym::from_json(j);
}

std::vector<Expr> parse_list(const nlohmann::json& j) {
    std::vector<Expr> v;
    for (const auto& e : j) v.push_back(parse_expr(e));
    return v;
}

}  // namespace

PotentialSpec potential_from_json(const nlohmann::json& j) {
    PotentialSpec p;
    p.variant = potential_variant_from_string(j.at("variant").get<std::string>());
    p.unknown = j.value("unknown", "V");
    p.order = j.value("order", 0);
    if (j.contains("equation")) p.equation = parse_expr(j.at("equation"));
    if (j.contains("raw_condition")) p.raw_condition = parse_expr(j.at("raw_condition"));
    if (j.contains("potential")) p.potential = parse_expr(j.at("potential"));
    if (j.contains("constants")) p.constants = j.at("constants").get<std::vector<std::string>>();
    if (j.contains("first_integrals")) p.first_integrals = parse_list(j.at("first_integrals"));
    if (j.contains("parameter_constraints")) p.parameter_constraints = parse_list(j.at("parameter_constraints"));
    if (j.contains("nonzero")) p.nonzero = parse_list(j.at("nonzero"));
    return p;
}

nlohmann::json to_json(const SolvedPair& s) {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& e : s.f) f.push_back(sym::to_infix(e));
    return {{"mechanics", op::to_string(s.mechanics)},
            {"M", s.M},
            {"kind", op::to_string(s.kind.kind)},
            {"alpha", sym::to_infix(s.kind.alpha)},
            {"branch", s.branch},
            {"f", f},
            {"potential", to_json(s.potential)},
            {"notes", s.notes}};
}

SolvedPair solved_pair_from_json(const nlohmann::json& j) {
    SolvedPair s;
    s.mechanics = op::mechanics_from_string(j.at("mechanics").get<std::string>());
    s.M = j.at("M").get<int>();
    auto kind = op::relation_from_string(j.at("kind").get<std::string>());
    Expr a = j.contains("alpha") ? parse_expr(j.at("alpha")) : Expr();
    s.kind = AlgebraRelation(kind, kind == RelationKind::Abelian ? Expr() : a);
    s.f = parse_list(j.at("f"));
    s.potential = potential_from_json(j.at("potential"));
    s.branch = j.value("branch", "generic");
    if (j.contains("notes")) s.notes = j.at("notes").get<std::vector<std::string>>();
    return s;
}

}  // namespace superint::det
