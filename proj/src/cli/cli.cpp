#include "superint/cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <gmpxx.h>
#include <json.hpp>

#include "superint/catalog/catalog.hpp"
#include "superint/compose/compose.hpp"
#include "superint/det/system.hpp"
#include "superint/numeric/residual.hpp"
#include "superint/painleve/painleve.hpp"
#include "superint/sym/serialize.hpp"

namespace superint::cli {

namespace {

using nlohmann::json;
using op::Mechanics;
using sym::Expr;

struct UsageError : Error {
    UsageError(const std::string& flag, const std::string& what) : Error(flag + ": " + what) {}
};

struct Report {
    json j;
    std::string text;
    int code = Ok;
};

struct Common {
    std::string format = "text";
    std::string output;
    std::uint64_t seed = 20240607;
    std::string catalog;
};

const catalog::Catalog& open_catalog(const Common& c) {
    static catalog::Catalog loaded;
    static std::string loaded_path;
    if (c.catalog.empty()) return catalog::default_catalog();
    if (loaded_path != c.catalog) {
        try {
            loaded = catalog::Catalog::load(c.catalog);
        } catch (const catalog::CatalogError& e) {
            throw UsageError("--catalog", e.what());
        }
        loaded_path = c.catalog;
    }
    return loaded;
}

const catalog::CatalogEntry& entry(const catalog::Catalog& cat, const std::string& id, const char* flag) {
    if (!cat.contains(id)) throw UsageError(flag, "no catalog entry '" + id + "'");
    return cat.find(id);
}

Mechanics mechanics(const std::string& s) { return s[0] == 'q' ? Mechanics::Quantum : Mechanics::Classical; }

op::RelationKind relation(char t) {
    switch (t) {
    case 'a': return op::RelationKind::Abelian;
    case 'b': return op::RelationKind::Heisenberg;
    case 'c': return op::RelationKind::Conformal;
    default: return op::RelationKind::LadderLower;
    }
}

std::pair<double, double> window(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("--window", "expected a,b");
    try {
        double a = std::stod(s.substr(0, comma)), b = std::stod(s.substr(comma + 1));
        if (!(a < b)) throw UsageError("--window", "need a < b");
        return {a, b};
    } catch (const std::logic_error&) {
        throw UsageError("--window", "not a number pair: " + s);
    }
}

std::vector<double> numbers(const std::string& s, const char* flag) {
    std::vector<double> v;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            v.push_back(std::stod(tok));
        } catch (const std::logic_error&) {
            throw UsageError(flag, "not a number: " + tok);
        }
    }
    return v;
}

// name=rational or name=decimal
std::pair<std::string, double> binding(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param", "expected name=value, got '" + s + "'");
    std::string name = s.substr(0, eq), val = s.substr(eq + 1);
    try {
        if (val.find('/') != std::string::npos) return {name, mpq_class(val).get_d()};
        size_t used = 0;
        double d = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
        return {name, d};
    } catch (const std::exception&) {
        throw UsageError("--param", "bad value for " + name + ": '" + val + "'");
    }
}

Expr symbolic(const std::string& s, const char* flag) {
    try {
        return sym::parse_infix(s);
    } catch (const sym::ParseError& e) {
        throw UsageError(flag, e.what());
    }
}

std::string monomial(const char* v, int k) {
    if (k == 0) return "";
    return std::string(v) + (k > 1 ? "^" + std::to_string(k) : "");
}

// sum of (coefficient) px^i py^j, highest order first
std::string op_text(const composer::Op2& a) {
    auto s = a.symbol();
    std::string r;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        if (it->second.is_zero()) continue;
        std::string m = monomial("px", it->first.first);
        std::string n = monomial("py", it->first.second);
        std::string mono = m.empty() ? n : n.empty() ? m : m + "*" + n;
        if (!r.empty()) r += "\n  + ";
        r += "(" + sym::to_infix(it->second) + ")" + (mono.empty() ? "" : "*" + mono);
    }
    return r.empty() ? "0" : r;
}


json strip_seconds(json j) {
    j.erase("seconds");
    return j;
}

// ---- derive / solve ----

struct SystemArgs {
    std::string mech;
    char type = 'a';
    int order = 1;
    bool keep_constants = false;
};

void add_system_flags(CLI::App* s, SystemArgs& a) {
    s->add_option("--mechanics", a.mech, "quantum or classical")
        ->required()
        ->check(CLI::IsMember({"quantum", "classical"}));
    s->add_option("--type", a.type, "relation type a, b, c or d")->required()->check(CLI::IsMember({'a', 'b', 'c', 'd'}));
    s->add_option("--order", a.order, "order M of K")->required()->check(CLI::Range(1, 8));
    s->add_flag("--keep-constants", a.keep_constants, "keep absorbable integration constants");
}

json branch_json(const det::SolvedPair& p) {
    json j = det::to_json(p);
    j["condition"] = sym::to_infix(p.potential.variant == det::PotentialVariant::ClosedForm
                                       ? Expr::func("V", "x") - p.potential.potential
                                       : p.potential.equation);
    j["verifies"] = det::verifies(p);
    return j;
}

std::string branch_text(const det::SolvedPair& p) {
    std::ostringstream t;
    t << "branch " << p.branch << ": ";
    if (p.potential.variant == det::PotentialVariant::ClosedForm)
        t << "V = " << sym::to_infix(p.potential.potential);
    else
        t << sym::to_infix(p.potential.equation) << " = 0  (" << det::to_string(p.potential.variant) << " in "
          << p.potential.unknown << ")";
    t << "\n";
    for (size_t l = 0; l < p.f.size(); ++l) t << "  f_" << l << " = " << sym::to_infix(p.f[l]) << "\n";
    for (const auto& c : p.potential.parameter_constraints) t << "  constraint: " << sym::to_infix(c) << " = 0\n";
    return t.str();
}

// annotation of the matching catalog entry, e.g. the transcendent it defines
std::string transcendent(const Common& c, const SystemArgs& a) {
    std::string id = std::string(1, a.mech[0]) + "-" + a.type + std::to_string(a.order);
    const auto& cat = open_catalog(c);
    if (!cat.contains(id)) return "";
    const auto& ann = cat.find(id).annotations;
    return ann.contains("transcendent") ? ann["transcendent"].get<std::string>() : "";
}

Report derive(const Common& c, const SystemArgs& a, bool with_system) {
    Mechanics m = mechanics(a.mech);
    auto sys = det::generate(m, a.order, relation(a.type));
    det::SolveOptions o;
    o.keep_constants = a.keep_constants;
    auto branches = det::solve_all(sys, o);
    Report r;
    r.j = {{"command", with_system ? "derive" : "solve"},
           {"mechanics", a.mech},
           {"type", std::string(1, a.type)},
           {"order", a.order}};
    std::ostringstream t;
    t << a.mech << " type " << a.type << " order " << a.order << "\n";
    if (with_system) {
        r.j["system"] = det::to_json(sys);
        for (size_t l = 0; l < sys.constraints.size(); ++l)
            t << "Z_" << l << " - rhs_" << l << " = " << sym::to_infix(sys.constraints[l]) << "\n";
    }
    json bs = json::array();
    bool ok = true;
    for (const auto& b : branches) {
        bs.push_back(branch_json(b));
        t << branch_text(b);
        ok = ok && det::verifies(b);
    }
    r.j["branches"] = bs;
    std::string tr = transcendent(c, a);
    if (!tr.empty()) {
        r.j["transcendent"] = tr;
        t << "potential condition: " << tr << "\n";
    }
    r.j["verified"] = ok;
    r.text = t.str();
    r.code = ok ? Ok : Failed;
    return r;
}

// ---- verify / list ----

struct VerifyArgs {
    std::vector<std::string> entries;
    bool all = false;
    std::string report;
};

json verify_one(const catalog::CatalogEntry& e) {
    json j = strip_seconds(catalog::to_json(catalog::check_entry(e)));
    j["entry"] = catalog::to_json(e);
    return j;
}

Report verify(const Common& c, const VerifyArgs& a) {
    std::vector<json> reps;
    json previous;
    if (!a.report.empty()) {
        std::ifstream in(a.report);
        if (!in) throw UsageError("--report", "cannot read " + a.report);
        try {
            previous = json::parse(in);
            for (const auto& p : previous.at("reports")) reps.push_back(p);
        } catch (const json::exception& e) {
            throw UsageError("--report", e.what());
        }
    }
    std::vector<catalog::CatalogEntry> todo;
    try {
        for (const auto& p : reps) todo.push_back(catalog::entry_from_json(p.at("entry")));
    } catch (const std::exception& e) {
        throw UsageError("--report", e.what());
    }
    const auto& cat = open_catalog(c);
    if (a.all)
        for (const auto& id : catalog::list_entries(cat, {.sub_entries = true})) todo.push_back(cat.find(id));
    for (const auto& id : a.entries) todo.push_back(entry(cat, id, "--entry"));
    if (todo.empty()) throw UsageError("--entry", "give --entry, --all or --report");

    std::vector<json> out(todo.size());
#pragma omp parallel for schedule(dynamic)
    for (size_t k = 0; k < todo.size(); ++k) out[k] = verify_one(todo[k]);

    Report r;
    bool ok = true, agree = true;
    std::ostringstream t;
    json arr = json::array();
    for (size_t k = 0; k < out.size(); ++k) {
        const json& o = out[k];
        ok = ok && o["verified"].get<bool>();
        if (k < reps.size()) {
            bool same = reps[k]["verified"] == o["verified"] && reps[k]["residual"] == o["residual"];
            agree = agree && same;
        }
        t << o["id"].get<std::string>() << ": " << (o["verified"].get<bool>() ? "verified" : "FAILED") << " ("
          << o["mode"].get<std::string>() << ")\n";
        for (const auto& ch : o["checks"])
            if (!ch["ok"].get<bool>()) t << "  " << ch["name"].get<std::string>() << ": " << ch["detail"].get<std::string>() << "\n";
        for (const auto& res : o["residual"]) t << "  residual: " << res.get<std::string>() << "\n";
        arr.push_back(o);
    }
    r.j = {{"command", "verify"}, {"verified", ok}, {"reports", arr}};
    if (!reps.empty()) {
        r.j["agrees_with_report"] = agree;
        t << "re-ingested report: " << (agree ? "same verdicts" : "verdicts differ") << "\n";
    }
    r.text = t.str();
    r.code = ok && agree ? Ok : Failed;
    return r;
}

struct ListArgs {
    std::string mech;
    char type = 0;
    int order = 0;
    bool sub = false;
    bool families = false;
};

Report list(const Common& c, const ListArgs& a) {
    const auto& cat = open_catalog(c);
    catalog::Filter f;
    if (!a.mech.empty()) f.mechanics = mechanics(a.mech);
    if (a.type) f.type = a.type;
    if (a.order) f.M = a.order;
    f.sub_entries = a.sub;
    Report r;
    std::ostringstream t;
    json arr = json::array();
    for (const auto& id : catalog::list_entries(cat, f)) {
        const auto& e = cat.find(id);
        arr.push_back({{"id", id},
                       {"mode", catalog::to_string(e.mode)},
                       {"parent", e.parent},
                       {"V", sym::to_infix(e.pair.V())}});
        t << id << "  " << catalog::to_string(e.mode) << "  V = " << sym::to_infix(e.pair.V()) << "\n";
    }
    r.j = {{"command", "list"}, {"entries", arr}};
    if (a.families) {
        json fam = json::array();
        for (const auto& fe : cat.families()) {
            fam.push_back({{"id", fe.id}, {"potential", sym::to_infix(fe.potential)}, {"construction", fe.construction}});
            t << fe.id << "  V = " << sym::to_infix(fe.potential) << "\n";
        }
        r.j["families"] = fam;
    }
    r.text = t.str();
    return r;
}

// ---- compose / check / algebra ----

struct ComposeArgs {
    std::string kind, x, y;
    int m = 1, n = 1;
    std::string alpha1, alpha2;
    bool check = false;
};

void add_compose_flags(CLI::App* s, ComposeArgs& a) {
    s->add_option("--case", a.kind, "aa, bb, cb, dd, cc or ad")
        ->required()
        ->check(CLI::IsMember({"aa", "bb", "cb", "dd", "cc", "ad", "AA", "BB", "CB", "DD", "CC", "AD"}));
    s->add_option("--x", a.x, "catalog entry on the x axis")->required();
    s->add_option("--y", a.y, "catalog entry on the y axis")->required();
    s->add_option("--m", a.m, "DD exponent of the x ladder")->check(CLI::PositiveNumber);
    s->add_option("--n", a.n, "DD exponent of the y ladder")->check(CLI::PositiveNumber);
    s->add_option("--alpha1", a.alpha1, "x-axis constant (DD default: n*alpha)");
    s->add_option("--alpha2", a.alpha2, "y-axis constant (DD default: m*alpha)");
}

composer::Composition build_composition(const Common& c, const ComposeArgs& a) {
    std::string k = a.kind;
    for (auto& ch : k) ch = char(std::toupper(ch));
    composer::CompositionSpec s;
    s.kind = composer::case_from_string(k);
    s.entry_x = a.x;
    s.entry_y = a.y;
    s.m = a.m;
    s.n = a.n;
    const auto& cat = open_catalog(c);
    entry(cat, a.x, "--x");
    entry(cat, a.y, "--y");
    Expr al = Expr::param("alpha");
    if (s.kind == composer::Case::DD) {
        s.alpha1 = Expr(a.n) * al;
        s.alpha2 = Expr(a.m) * al;
    }
    if (!a.alpha1.empty()) s.alpha1 = symbolic(a.alpha1, "--alpha1");
    if (!a.alpha2.empty()) s.alpha2 = symbolic(a.alpha2, "--alpha2");
    try {
        return composer::compose(s, cat);
    } catch (const composer::KindMismatch& e) {
        throw UsageError("--case", e.what());
    } catch (const composer::RationalityViolation& e) {
        throw UsageError("--m", e.what());
    }
}

std::string composition_text(const composer::Composition& c) {
    std::ostringstream t;
    t << to_string(c.spec.kind) << "(" << c.spec.entry_x << ", " << c.spec.entry_y << ")";
    if (c.spec.kind == composer::Case::DD) t << " m=" << c.spec.m << " n=" << c.spec.n;
    t << "\nH = " << op_text(c.H) << "\nK = " << op_text(c.K) << "\norder " << c.order << " (table "
      << c.expected_order << ")\n";
    if (c.trivial) t << "K is a polynomial in H1, H2\n";
    for (const auto& n : c.notes) t << "note: " << n << "\n";
    return t.str();
}

Report check_report(const composer::Composition& c, Report r, std::ostream& t) {
    try {
        auto s = composer::check_superintegrable(c);
        r.j["superintegrable"] = composer::to_json(s);
        t << "[H,K] = 0: " << (s.commutes_K ? "yes" : "no") << "\n[H,A] = 0: " << (s.commutes_A ? "yes" : "no")
          << "\nindependent: " << (s.independent ? "yes" : "no") << " (rank " << s.rank << ")\n";
        if (!s.independent) r.code = Failed;
    } catch (const composer::NotAnIntegral& e) {
        r.j["superintegrable"] = {{"error", e.what()}, {"residual", e.residual}};
        t << "not an integral: " << e.what() << "\n" << e.residual.dump() << "\n";
        r.code = Failed;
    }
    return r;
}

Report compose_cmd(const Common& c, const ComposeArgs& a, bool force_check, const char* name) {
    auto comp = build_composition(c, a);
    Report r;
    r.j = composer::to_json(comp);
    r.j["command"] = name;
    std::ostringstream t;
    t << composition_text(comp);
    if (a.check || force_check) r = check_report(comp, std::move(r), t);
    r.text = t.str();
    return r;
}

Report algebra_cmd(const Common& c, const ComposeArgs& a) {
    auto comp = build_composition(c, a);
    Report r;
    std::ostringstream t;
    t << composition_text(comp);
    try {
        auto s = composer::algebra_structure(comp);
        r.j = composer::to_json(s);
        t << "C = [A,B] = " << op_text(s.C) << (s.C_central ? "  (central)" : "") << "\n";
        t << "[A,C] = " << sym::to_infix(s.AC_B) << " B + P(H1,H2)\n";
        t << "[B,C] = " << sym::to_infix(s.BC_B) << " B + Q(H1,H2)\n";
        for (const auto& [k, v] : s.fitted) t << k << " = " << sym::to_infix(v) << "\n";
        t << "table template: " << (s.template_match ? "matches" : "does not match") << "\n";
        for (const auto& n : s.notes) t << "note: " << n << "\n";
        r.code = s.template_match ? Ok : Failed;
    } catch (const composer::NotReducibleToPolynomialAlgebra& e) {
        r.j = {{"error", e.what()}, {"remainder", e.remainder}};
        t << e.what() << "\n";
        r.code = Failed;
    }
    r.j["command"] = "algebra";
    r.j["composition"] = composer::to_json(comp);
    r.text = t.str();
    return r;
}

// ---- painleve ----

struct PainleveArgs {
    std::string entry, equation, unknown = "V";
    std::string expect;
};

Report painleve_cmd(const Common& c, const PainleveArgs& a) {
    Expr eq;
    std::string unknown = a.unknown;
    if (!a.entry.empty()) {
        const auto& e = entry(open_catalog(c), a.entry, "--entry");
        if (e.pair.potential.variant != det::PotentialVariant::ODE)
            throw UsageError("--entry", a.entry + " is not defined by an ODE");
        eq = e.pair.potential.equation;
        unknown = e.pair.potential.unknown;
    } else if (!a.equation.empty()) {
        sym::ParseContext ctx;
        ctx.funcs[unknown] = "x";
        try {
            eq = sym::parse_infix(a.equation, ctx);
        } catch (const sym::ParseError& e) {
            throw UsageError("--equation", e.what());
        }
    } else {
        throw UsageError("--entry", "give --entry or --equation");
    }
    painleve::BalanceReport rep;
    try {
        rep = painleve::painleve_verdict(painleve::OdePoly::make(eq, unknown));
    } catch (const painleve::InvalidOde& e) {
        throw UsageError("--equation", e.what());
    }
    Report r;
    r.j = painleve::to_json(rep);
    r.j["command"] = "painleve";
    r.j["equation"] = sym::to_infix(eq);
    std::ostringstream t;
    t << sym::to_infix(eq) << " = 0\nverdict: " << rep.verdict << "\n";
    for (const auto& b : rep.branches) {
        t << "balance p = " << b.balance.p.get_str() << ", d0 = " << sym::to_infix(b.balance.d0)
          << (b.principal ? " (principal)" : "") << "\n  resonances:";
        for (long k : b.resonances.integer) t << " " << k;
        for (const auto& s : b.resonances.non_integer) t << " " << s;
        t << "\n";
        for (const auto& ch : b.checks)
            t << "  r = " << ch.r << ": " << (ch.compatible ? "compatible" : "condition " + sym::to_infix(ch.condition))
              << "\n";
    }
    for (const auto& n : rep.notes) t << "note: " << n << "\n";
    r.text = t.str();
    if (!a.expect.empty() && a.expect != rep.verdict) r.code = Failed;
    return r;
}

// ---- numcheck ----

struct NumArgs {
    std::string entry;
    std::vector<std::string> params;
    double tol = 1e-10;
    std::string window;
    double step = 0.25;
    std::string init;
    double threshold = 1e-6;
};

void scan_params(const Expr& e, std::set<std::string>& names);

std::set<std::string> parameter_names(const det::SolvedPair& p) {
    std::set<std::string> names;
    auto scan = [&](const Expr& e) { scan_params(e, names); };
    for (const auto& f : p.f) scan(f);
    scan(p.V());
    scan(p.potential.equation);
    scan(p.kind.alpha);
    return names;
}

numeric::cplx value(const Expr& e, const numeric::Params& p) {
    numeric::SlotMap slots;
    numeric::Evaluator ev(e, slots);
    auto v = slots.bind(p);
    return ev(v.data());
}

void scan_params(const Expr& e, std::set<std::string>& names) {
    for (auto a : e.atoms()) {
        auto k = sym::atom_info(a).kind;
        if (k == sym::AtomKind::Param || k == sym::AtomKind::Sign) names.insert(sym::atom_info(a).name);
    }
}

bool implicit(const std::string& n) {
    return n == "hbar" || n == "alpha1" || n == "alpha2" || n == "eps" || n == "epsilon";
}

// the entry, or the sub-entry whose representation supplies its initial data
const catalog::CatalogEntry& integration_entry(const catalog::Catalog& cat, const catalog::CatalogEntry& e,
                                               bool user_init) {
    if (user_init || e.representation || e.pair.potential.variant != det::PotentialVariant::ODE) return e;
    for (const auto& s : cat.entries())
        if (s.parent == e.id && s.representation && s.pair.potential.variant == det::PotentialVariant::ODE) return s;
    return e;
}

json number(numeric::cplx v) {
    if (v.imag() == 0) return v.real();
    return json::array({v.real(), v.imag()});
}

Report numcheck(const Common& c, const NumArgs& a) {
    const auto& cat = open_catalog(c);
    const auto& asked = entry(cat, a.entry, "--entry");
    if (!(a.tol > 0)) throw UsageError("--tol", "must be > 0");
    if (!(a.step > 0)) throw UsageError("--step", "must be > 0");
    const auto& e = integration_entry(cat, asked, !a.init.empty());
    const auto& sp = e.pair;
    const auto* rep = e.representation && a.init.empty() ? &*e.representation : nullptr;

    std::set<std::string> own = parameter_names(sp), extra;
    if (rep) {
        scan_params(rep->potential, extra);
        scan_params(rep->equation, extra);
        for (const auto& [k, v] : e.bindings) scan_params(v, extra);
    }
    numeric::Params params;
    for (const auto& b : a.params) {
        auto [name, v] = binding(b);
        if (!own.count(name) && !extra.count(name))
            throw UsageError("--param", "unknown parameter '" + name + "' for " + asked.id);
        params[name] = v;
    }
    json defaulted = json::array();
    auto fill = [&](const std::set<std::string>& names) {
        for (const auto& n : names) {
            if (params.count(n) || implicit(n) || (rep && e.bindings.count(n))) continue;
            params[n] = 0.0;
            defaulted.push_back(n);
        }
    };
    fill(extra);
    if (rep)
        for (const auto& [k, v] : e.bindings)
            if (!params.count(k)) params[k] = value(v, params);
    fill(own);
    auto win = a.window.empty() ? std::pair{0.5, 2.5} : window(a.window);
    bool quantum = sp.mechanics == Mechanics::Quantum;

    Report r;
    r.j = {{"command", "numcheck"}, {"entry", asked.id}, {"tol", a.tol}, {"threshold", a.threshold}};
    if (&e != &asked) r.j["via"] = e.id;
    std::ostringstream t;
    numeric::ResidualReport res;
    std::mt19937_64 rng(c.seed);
    try {
        if (sp.potential.variant == det::PotentialVariant::ClosedForm) {
            if (quantum) {
                std::vector<double> grid;
                for (double x = win.first; x <= win.second + 1e-12; x += a.step / 4) grid.push_back(x);
                res = numeric::quantum_residual(sp.quantum_H(), sp.quantum_K(), sp.kind, params, grid);
            } else {
                std::uniform_real_distribution<double> X(win.first, win.second), P(-2, 2);
                std::vector<std::pair<double, double>> pts;
                for (int k = 0; k < 64; ++k) pts.emplace_back(X(rng), P(rng));
                res = numeric::classical_residual(sp.classical_H(), sp.classical_K(), sp.kind, params, pts);
            }
            r.j["source"] = "closed form";
        } else {
            int n = std::max(1, sp.potential.order);
            std::vector<numeric::cplx> init;
            std::string fixture;
            if (!a.init.empty()) {
                for (double v : numbers(a.init, "--init")) init.emplace_back(v);
                if (int(init.size()) < n) throw UsageError("--init", "need " + std::to_string(n) + " values");
                fixture = "user";
            } else if (rep) {
                std::vector<numeric::cplx> w{-1.4, 1.8};
                w.resize(std::max(1, rep->order), 0.3);
                numeric::Prolongation pr(rep->equation, rep->unknown, params);
                init = numeric::derived_jet(rep->potential, pr, win.first, w, n);
                fixture = rep->unknown + " = -1.4, " + rep->unknown + "' = 1.8 at the window start (" + rep->note + ")";
            } else {
                init.assign(n, numeric::cplx(0));
                init[0] = 0.5;
                fixture = "V = 0.5, higher derivatives 0 at the window start";
            }
            init.resize(n);
            r.j["init_fixture"] = fixture;
            numeric::JetSolution js;
            if (quantum) {
                auto plain = numeric::integrate_jet(sp.potential, params, init, win, a.step, a.tol);
                auto r0 = numeric::quantum_residual(sp.quantum_H(), sp.quantum_K(), sp.kind, plain);
                int carry = std::max(0, r0.jet_order_used - (plain.order - 1));
                js = carry ? numeric::integrate_jet(sp.potential, params, init, win, a.step, a.tol, carry) : plain;
                res = numeric::quantum_residual(sp.quantum_H(), sp.quantum_K(), sp.kind, js);
                r.j["carry"] = carry;
            } else {
                js = numeric::integrate_jet(sp.potential, params, init, win, a.step, a.tol);
                res = numeric::classical_residual(sp.classical_H(), sp.classical_K(), sp.kind, js, {-1, -0.5, 0.5, 1});
            }
            r.j["window"] = {js.window.first, js.window.second};
            if (js.pole) r.j["pole"] = *js.pole;
            r.j["source"] = "integrated jet";
        }
    } catch (const numeric::NumericError& err) {
        r.j["error"] = err.what();
        r.j["passed"] = false;
        r.text = asked.id + ": numeric failure: " + err.what() + "\n";
        r.code = Failed;
        return r;
    }
    json pj = json::object();
    for (const auto& [k, v] : params) pj[k] = number(v);
    r.j["params"] = pj;
    r.j["defaulted_to_zero"] = defaulted;
    r.j["residual"] = numeric::to_json(res);
    bool ok = std::isfinite(res.max_abs) && res.max_abs <= a.threshold;
    r.j["passed"] = ok;
    t << asked.id;
    if (&e != &asked) t << " (via " << e.id << ")";
    t << ": max residual " << res.max_abs << " at x = " << res.at_x << " over " << res.points << " points ("
      << (ok ? "within" : "above") << " " << a.threshold << ")\n";
    if (!defaulted.empty()) t << "parameters set to 0: " << defaulted.dump() << "\n";
    r.text = t.str();
    r.code = ok ? Ok : Failed;
    return r;
}

void emit(const Common& c, const Report& r, std::ostream& out) {
    std::ofstream file;
    std::ostream* o = &out;
    if (!c.output.empty()) {
        file.open(c.output);
        if (!file) throw UsageError("--output", "cannot write " + c.output);
        o = &file;
    }
    if (c.format == "json")
        *o << r.j.dump(2) << "\n";
    else
        *o << r.text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"superintegrable systems with ladder and polynomial algebra integrals", "superint"};
    app.require_subcommand(1, 1);
    Common c;
    if (const char* p = std::getenv("SUPERINT_CATALOG")) c.catalog = p;
    auto common = [&](CLI::App* s) {
        s->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        s->add_option("--output,-o", c.output, "write the report to a file");
        s->add_option("--seed", c.seed, "seed for sampled points");
        s->add_option("--catalog", c.catalog, "catalog file (default: $SUPERINT_CATALOG or the shipped one)");
    };

    SystemArgs sa;
    auto* derive_cmd = app.add_subcommand("derive", "determining equations and the potential condition");
    add_system_flags(derive_cmd, sa);
    auto* solve_cmd = app.add_subcommand("solve", "solve the determining equations");
    add_system_flags(solve_cmd, sa);

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "verify catalog entries");
    verify_cmd->add_option("--entry", va.entries, "entry id (repeatable)");
    verify_cmd->add_flag("--all", va.all, "every entry, sub-entries included");
    verify_cmd->add_option("--report", va.report, "re-verify the entries of a JSON verify report");

    ListArgs la;
    auto* list_cmd = app.add_subcommand("list", "list catalog entries");
    list_cmd->add_option("--mechanics", la.mech)->check(CLI::IsMember({"quantum", "classical"}));
    list_cmd->add_option("--type", la.type)->check(CLI::IsMember({'a', 'b', 'c', 'd'}));
    list_cmd->add_option("--order", la.order)->check(CLI::Range(1, 8));
    list_cmd->add_flag("--sub-entries", la.sub, "include specialisations");
    list_cmd->add_flag("--families", la.families, "also list the 2D families");

    ComposeArgs ca;
    auto* compose_c = app.add_subcommand("compose", "compose two catalog entries into a 2D system");
    add_compose_flags(compose_c, ca);
    compose_c->add_flag("--check", ca.check, "also check [H,K] = 0 and independence");
    auto* check_c = app.add_subcommand("check", "compose and check superintegrability");
    add_compose_flags(check_c, ca);
    auto* algebra_c = app.add_subcommand("algebra", "polynomial algebra of a composition");
    add_compose_flags(algebra_c, ca);

    PainleveArgs pa;
    auto* painleve_c = app.add_subcommand("painleve", "Painleve test of an ODE");
    painleve_c->add_option("--entry", pa.entry, "use the entry's potential ODE");
    painleve_c->add_option("--equation", pa.equation, "ODE = 0 in infix, e.g. \"V''(x) - 6*V(x)^2\"");
    painleve_c->add_option("--unknown", pa.unknown, "unknown function of --equation");
    painleve_c->add_option("--expect", pa.expect, "exit 1 unless the verdict is this")
        ->check(CLI::IsMember({"passes", "fails", "inapplicable"}));

    NumArgs na;
    auto* num_c = app.add_subcommand("numcheck", "numeric residual of an entry's relation");
    num_c->add_option("--entry", na.entry, "catalog entry")->required();
    num_c->add_option("--param", na.params, "name=value (rational or decimal), repeatable");
    num_c->add_option("--tol", na.tol, "integrator tolerance");
    num_c->add_option("--window", na.window, "a,b");
    num_c->add_option("--step", na.step, "sampling step");
    num_c->add_option("--init", na.init, "v0,v1,... jet at the window start");
    num_c->add_option("--threshold", na.threshold, "largest residual accepted");

    for (auto* s : app.get_subcommands({})) common(s);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return Usage;
    }

    try {
        Report r;
        if (derive_cmd->parsed())
            r = derive(c, sa, true);
        else if (solve_cmd->parsed())
            r = derive(c, sa, false);
        else if (verify_cmd->parsed())
            r = verify(c, va);
        else if (list_cmd->parsed())
            r = list(c, la);
        else if (compose_c->parsed())
            r = compose_cmd(c, ca, false, "compose");
        else if (check_c->parsed())
            r = compose_cmd(c, ca, true, "check");
        else if (algebra_c->parsed())
            r = algebra_cmd(c, ca);
        else if (painleve_c->parsed())
            r = painleve_cmd(c, pa);
        else
            r = numcheck(c, na);
        emit(c, r, out);
        return r.code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return Usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Failed;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace superint::cli
