#include "superint/catalog/catalog.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>

#include "superint/sym/serialize.hpp"

#ifndef SUPERINT_DATA_DIR
#define SUPERINT_DATA_DIR "data"
#endif

namespace superint::catalog {

namespace {

sym::ParseContext context() {
    sym::ParseContext ctx;
    for (const char* n : {"V", "u", "P", "Q", "W", "U"}) ctx.funcs[n] = "x";
    return ctx;
}

Expr parse(const nlohmann::json& j) { return sym::parse_infix(j.get<std::string>(), context()); }

nlohmann::json list(const std::vector<Expr>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& e : v) a.push_back(sym::to_infix(e));
    return a;
}

std::vector<Expr> parse_list(const nlohmann::json& j) {
    std::vector<Expr> v;
    for (const auto& e : j) v.push_back(parse(e));
    return v;
}

nlohmann::json bindings_json(const std::map<std::string, Expr>& b) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : b) j[k] = sym::to_infix(v);
    return j;
}

std::map<std::string, Expr> parse_bindings(const nlohmann::json& j) {
    std::map<std::string, Expr> b;
    for (const auto& [k, v] : j.items()) b[k] = parse(v);
    return b;
}

Expr bound_by(const Expr& e, const std::map<std::string, Expr>& b) {
    sym::Bindings s;
    for (const auto& [k, v] : b) s[sym::param_atom(k)] = v;
    return s.empty() ? e : sym::substitute(e, s);
}

det::SolvedPair bound_by(const det::SolvedPair& p, const std::map<std::string, Expr>& b) {
    if (b.empty()) return p;
    det::SolvedPair q = p;
    for (auto& f : q.f) f = bound_by(f, b);
    q.potential.equation = bound_by(q.potential.equation, b);
    q.potential.potential = bound_by(q.potential.potential, b);
    return q;
}

std::string join(const std::vector<Expr>& v) {
    std::string s;
    for (const auto& e : v) {
        if (!s.empty()) s += "; ";
        s += sym::to_infix(e);
    }
    return s;
}

bool all_zero(const std::vector<Expr>& v) {
    for (const auto& e : v)
        if (!e.is_zero()) return false;
    return true;
}

template <class F>
Check run(const std::string& name, F&& f) {
    Check c{name, false, ""};
    try {
        f(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("error: ") + e.what();
    }
    return c;
}

}  // namespace

const char* to_string(Mode m) {
    switch (m) {
    case Mode::SymbolicClosed: return "symbolic-closed";
    case Mode::SymbolicModOde: return "symbolic-mod-ode";
    case Mode::NumericJet: return "numeric-jet";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "symbolic-closed") return Mode::SymbolicClosed;
    if (s == "symbolic-mod-ode") return Mode::SymbolicModOde;
    if (s == "numeric-jet") return Mode::NumericJet;
    throw CatalogError("unknown verification mode " + s);
}

std::optional<Expr> proportional(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero() ? std::optional<Expr>(Expr(1)) : std::nullopt;
    // splits a term into its unknown-function factors and the invertible rest
    auto split = [](const sym::Term& t) {
        sym::Term rest{{}, t.coeff};
        sym::Monomial funcs;
        for (const auto& f : t.mono)
            (sym::atom_info(f.atom).kind == sym::AtomKind::Func ? funcs : rest.mono).push_back(f);
        return std::pair{Expr::from_terms({rest}), funcs};
    };
    auto [la, fa] = split(a.terms().front());
    for (const auto& t : b.terms()) {
        auto [lb, fb] = split(t);
        if (fa != fb) continue;
        Expr r = lb / la;
        if (a * r == b) return r;
    }
    return std::nullopt;
}

nlohmann::json to_json(const CatalogEntry& e) {
    nlohmann::json j{{"id", e.id},
                     {"mode", to_string(e.mode)},
                     {"from_solver", e.from_solver},
                     {"keep_constants", e.keep_constants},
                     {"pair", det::to_json(e.pair)},
                     {"annotations", e.annotations}};
    if (!e.parent.empty()) j["parent"] = e.parent;
    if (!e.bindings.empty()) j["bindings"] = bindings_json(e.bindings);
    if (e.representation) {
        const auto& r = *e.representation;
        j["representation"] = {{"unknown", r.unknown},
                               {"potential", sym::to_infix(r.potential)},
                               {"equation", sym::to_infix(r.equation)},
                               {"order", r.order},
                               {"first_integrals", list(r.first_integrals)},
                               {"note", r.note}};
    }
    if (!e.first_integrals.empty()) j["first_integrals"] = list(e.first_integrals);
    if (e.reference_equation) j["reference_equation"] = sym::to_infix(*e.reference_equation);
    if (!e.ladder_polynomial.empty()) j["ladder_polynomial"] = list(e.ladder_polynomial);
    return j;
}

CatalogEntry entry_from_json(const nlohmann::json& j) {
    CatalogEntry e;
    e.id = j.at("id").get<std::string>();
    e.mode = mode_from_string(j.at("mode").get<std::string>());
    e.from_solver = j.value("from_solver", false);
    e.keep_constants = j.value("keep_constants", false);
    e.pair = det::solved_pair_from_json(j.at("pair"));
    e.parent = j.value("parent", "");
    if (j.contains("bindings")) e.bindings = parse_bindings(j.at("bindings"));
    if (j.contains("representation")) {
        const auto& r = j.at("representation");
        Representation rep;
        rep.unknown = r.at("unknown").get<std::string>();
        rep.potential = parse(r.at("potential"));
        rep.equation = parse(r.at("equation"));
        rep.order = r.at("order").get<int>();
        if (r.contains("first_integrals")) rep.first_integrals = parse_list(r.at("first_integrals"));
        rep.note = r.value("note", "");
        e.representation = rep;
    }
    if (j.contains("first_integrals")) e.first_integrals = parse_list(j.at("first_integrals"));
    if (j.contains("reference_equation")) e.reference_equation = parse(j.at("reference_equation"));
    if (j.contains("ladder_polynomial")) e.ladder_polynomial = parse_list(j.at("ladder_polynomial"));
    if (j.contains("annotations")) e.annotations = j.at("annotations");
    return e;
}

Catalog Catalog::from_json(const nlohmann::json& j) {
    Catalog c;
    c.version_ = j.value("version", 1);
    for (const auto& e : j.at("entries")) c.entries_.push_back(entry_from_json(e));
    if (j.contains("families"))
        for (const auto& f : j.at("families")) {
            FamilyEntry fe;
            fe.id = f.at("id").get<std::string>();
            fe.potential = parse(f.at("potential"));
            fe.parameters = f.value("parameters", std::vector<std::string>{});
            fe.construction = f.value("construction", "");
            fe.annotations = f.value("annotations", nlohmann::json::object());
            c.families_.push_back(std::move(fe));
        }
    if (j.contains("identifications"))
        for (const auto& i : j.at("identifications"))
            c.idents_.push_back({i.at("a").get<std::string>(), i.at("b").get<std::string>(),
                                 parse_bindings(i.value("rename", nlohmann::json::object()))});
    return c;
}

nlohmann::json Catalog::to_json() const {
    nlohmann::json es = nlohmann::json::array(), fs = nlohmann::json::array(), is = nlohmann::json::array();
    for (const auto& e : entries_) es.push_back(catalog::to_json(e));
    for (const auto& f : families_)
        fs.push_back({{"id", f.id},
                      {"potential", sym::to_infix(f.potential)},
                      {"parameters", f.parameters},
                      {"construction", f.construction},
                      {"annotations", f.annotations}});
    for (const auto& i : idents_) is.push_back({{"a", i.a}, {"b", i.b}, {"rename", bindings_json(i.rename)}});
    return {{"version", version_}, {"entries", es}, {"families", fs}, {"identifications", is}};
}

Catalog Catalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open catalog " + path);
    nlohmann::json j;
    try {
        in >> j;
        return from_json(j);
    } catch (const CatalogError&) {
        throw;
    } catch (const std::exception& e) {
        throw CatalogError("malformed catalog " + path + ": " + e.what());
    }
}

const CatalogEntry& Catalog::find(const std::string& id) const {
    for (const auto& e : entries_)
        if (e.id == id) return e;
    throw CatalogError("no catalog entry " + id);
}

bool Catalog::contains(const std::string& id) const {
    for (const auto& e : entries_)
        if (e.id == id) return true;
    return false;
}

std::string default_path() {
    if (const char* p = std::getenv("SUPERINT_CATALOG"); p && *p) return p;
    return std::string(SUPERINT_DATA_DIR) + "/catalog.json";
}

const Catalog& default_catalog() {
    static std::once_flag once;
    static Catalog c;
    std::call_once(once, [] { c = Catalog::load(default_path()); });
    return c;
}

VerificationFailed::VerificationFailed(VerifyReport r)
    : CatalogError("verification of " + r.id + " failed"), report(std::move(r)) {}

VerifyReport check_entry(const CatalogEntry& e) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.id = e.id;
    rep.mode = e.mode;
    const auto& p = e.pair;
    const sym::AtomId X = sym::var_atom("x");

    rep.checks.push_back(run("mode", [&](Check& c) {
        bool closed = p.potential.variant == det::PotentialVariant::ClosedForm;
        c.ok = (e.mode == Mode::SymbolicClosed) == closed || e.mode == Mode::NumericJet;
        if (!c.ok) c.detail = std::string("potential is ") + det::to_string(p.potential.variant);
    }));

    rep.checks.push_back(run("relation", [&](Check& c) {
        auto r = det::residual(p);
        c.ok = all_zero(r);
        if (!c.ok) {
            for (const auto& x : r) rep.residual.push_back(sym::to_infix(x));
            c.detail = join(r);
        }
    }));

    if (e.from_solver)
        rep.checks.push_back(run("solver", [&](Check& c) {
            det::SolveOptions o;
            o.keep_constants = e.keep_constants;
            auto all = det::solve_all(det::generate(p.mechanics, p.M, p.kind), o);
            for (const auto& s : all)
                if (s.branch == p.branch) {
                    c.ok = s.f == p.f && s.potential.equation == p.potential.equation &&
                           s.potential.potential == p.potential.potential && s.potential.unknown == p.potential.unknown;
                    if (!c.ok) c.detail = "solver output differs from the stored pair";
                    return;
                }
            c.detail = "solver has no branch " + p.branch;
        }));

    det::SolvedPair bound = bound_by(p, e.bindings);
    auto rules = bound.potential.rules();

    for (size_t k = 0; k < e.first_integrals.size(); ++k)
        rep.checks.push_back(run("first_integral_" + std::to_string(k), [&](Check& c) {
            Expr d = sym::reduce_mod(sym::differentiate(bound_by(e.first_integrals[k], e.bindings), X), rules);
            c.ok = d.is_zero();
            if (!c.ok) c.detail = sym::to_infix(d);
        }));

    if (e.reference_equation)
        rep.checks.push_back(run("reference_equation", [&](Check& c) {
            auto r = proportional(bound.potential.equation, *e.reference_equation);
            c.ok = r.has_value();
            c.detail = r ? "factor " + sym::to_infix(*r) : "not proportional to " + sym::to_infix(bound.potential.equation);
        }));

    if (e.representation)
        rep.checks.push_back(run("representation", [&](Check& c) {
            const auto& r = *e.representation;
            sym::AtomId w = sym::func_atom(r.unknown, X);
            sym::RewriteRule rule(sym::func_derivative(w, r.order), r.equation);
            Expr eq = sym::substitute(bound.potential.equation, bound.potential.unknown_atom(0), r.potential);
            Expr red = sym::reduce_mod(eq, {rule});
            c.ok = red.is_zero();
            if (!c.ok) c.detail = sym::to_infix(red);
            for (const auto& fi : r.first_integrals) {
                Expr d = sym::reduce_mod(sym::differentiate(fi, X), {rule});
                if (!d.is_zero()) {
                    c.ok = false;
                    c.detail += " first integral: " + sym::to_infix(d);
                }
            }
        }));

    if (!e.ladder_polynomial.empty())
        rep.checks.push_back(run("ladder_polynomial", [&](Check& c) {
            auto a = det::ladder_product(p);
            c.ok = a == e.ladder_polynomial;
            if (!c.ok) c.detail = "K^dagger K = " + join(a);
        }));

    rep.verified = true;
    for (const auto& c : rep.checks) rep.verified = rep.verified && c.ok;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

VerifyReport verify_entry(const Catalog& c, const std::string& id) {
    auto r = check_entry(c.find(id));
    if (!r.verified) throw VerificationFailed(r);
    return r;
}

std::vector<std::string> list_entries(const Catalog& c, const Filter& f) {
    std::vector<std::string> out;
    for (const auto& e : c.entries()) {
        if (f.mechanics && e.pair.mechanics != *f.mechanics) continue;
        if (f.type && op::type_letter(e.pair.kind.kind) != *f.type) continue;
        if (!f.sub_entries && !e.parent.empty()) continue;
        if (f.M && e.pair.M != *f.M) continue;
        out.push_back(e.id);
    }
    return out;
}

Check check_identification(const Catalog& c, const Identification& i) {
    return run(i.a + "=" + i.b, [&](Check& ch) {
        const auto& a = c.find(i.a).pair.potential;
        const auto& b = c.find(i.b).pair.potential;
        if (a.variant != b.variant || a.unknown != b.unknown) {
            ch.detail = "potential kinds differ";
            return;
        }
        if (a.variant == det::PotentialVariant::ClosedForm) {
            Expr d = bound_by(a.potential, i.rename) - b.potential;
            ch.ok = d.is_zero();
            if (!ch.ok) ch.detail = sym::to_infix(d);
        } else {
            auto r = proportional(bound_by(a.equation, i.rename), b.equation);
            ch.ok = r.has_value();
            ch.detail = r ? "factor " + sym::to_infix(*r) : "equations differ";
        }
    });
}

nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    return {{"id", r.id},
            {"mode", to_string(r.mode)},
            {"verified", r.verified},
            {"residual", r.residual},
            {"checks", checks},
            {"seconds", r.seconds}};
}

}  // namespace superint::catalog
