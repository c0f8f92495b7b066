#include "superint/sym/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace superint::sym {

using nlohmann::json;

Monomial ordered_factors(const Monomial& m) {
    Monomial r = m;
    std::sort(r.begin(), r.end(),
              [](const Factor& a, const Factor& b) { return atom_order_compare(a.atom, b.atom) < 0; });
    return r;
}

std::vector<const Term*> ordered_terms(const Expr& e) {
    struct Keyed {
        const Term* t;
        Monomial f;
    };
    std::vector<Keyed> ks;
    for (const auto& t : e.terms()) ks.push_back({&t, ordered_factors(t.mono)});
    std::sort(ks.begin(), ks.end(), [](const Keyed& a, const Keyed& b) {
        size_t n = std::min(a.f.size(), b.f.size());
        for (size_t k = 0; k < n; ++k) {
            int c = atom_order_compare(a.f[k].atom, b.f[k].atom);
            if (c) return c < 0;
            if (a.f[k].exp != b.f[k].exp) return a.f[k].exp > b.f[k].exp;
        }
        return a.f.size() > b.f.size();
    });
    std::vector<const Term*> out;
    for (auto& k : ks) out.push_back(k.t);
    return out;
}

namespace {

std::string coeff_prefix(const Coeff& c) {
    if (c.is_real()) return c.re().get_str();
    return "(cx " + c.re().get_str() + " " + c.im().get_str() + ")";
}

std::string atom_prefix(AtomId a) {
    const AtomInfo& info = atom_info(a);
    switch (info.kind) {
        case AtomKind::Param:
            return info.name;
        case AtomKind::Sign:
            return "(sign " + info.name + ")";
        case AtomKind::Var:
            return "(var " + info.name + ")";
        case AtomKind::Func:
            return "(fn " + info.name + " " + atom_info(info.var).name + " " + std::to_string(info.order) + ")";
        case AtomKind::Radical: {
            Expr base = Expr::from_terms({Term{info.rad_mono, info.rad_coeff}});
            return "(root " + std::to_string(info.rad_q) + " " + to_prefix(base) + ")";
        }
    }
    return "?";
}

std::string term_prefix(const Term& t) {
    Monomial f = ordered_factors(t.mono);
    std::vector<std::string> parts;
    if (!t.coeff.is_one() || f.empty()) parts.push_back(coeff_prefix(t.coeff));
    for (auto x : f) {
        std::string a = atom_prefix(x.atom);
        parts.push_back(x.exp == 1 ? a : "(^ " + a + " " + std::to_string(x.exp) + ")");
    }
    if (parts.size() == 1) return parts[0];
    std::string s = "(*";
    for (auto& p : parts) s += " " + p;
    return s + ")";
}

}  // namespace

std::string to_prefix(const Expr& e) {
    if (e.is_zero()) return "0";
    auto ts = ordered_terms(e);
    if (ts.size() == 1) return term_prefix(*ts[0]);
    std::string s = "(+";
    for (auto* t : ts) s += " " + term_prefix(*t);
    return s + ")";
}

namespace {

struct SNode {
    std::string atom;
    std::vector<SNode> kids;
    bool list = false;
};

class SReader {
public:
    explicit SReader(const std::string& s) : s_(s) {}
    SNode read() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of prefix expression");
        if (s_[pos_] == '(') {
            ++pos_;
            SNode n;
            n.list = true;
            for (;;) {
                skip();
                if (pos_ >= s_.size()) throw ParseError("unbalanced parenthesis");
                if (s_[pos_] == ')') {
                    ++pos_;
                    return n;
                }
                n.kids.push_back(read());
            }
        }
        if (s_[pos_] == ')') throw ParseError("unexpected ')'");
        size_t b = pos_;
        while (pos_ < s_.size() && !std::isspace((unsigned char)s_[pos_]) && s_[pos_] != '(' && s_[pos_] != ')')
            ++pos_;
        SNode n;
        n.atom = s_.substr(b, pos_ - b);
        return n;
    }
    bool done() {
        skip();
        return pos_ >= s_.size();
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    const std::string& s_;
    size_t pos_ = 0;
};

bool is_number(const std::string& a) {
    if (a.empty()) return false;
    size_t k = (a[0] == '-' || a[0] == '+') ? 1 : 0;
    if (k == a.size()) return false;
    bool slash = false;
    for (; k < a.size(); ++k) {
        if (a[k] == '/' && !slash) {
            slash = true;
            continue;
        }
        if (!std::isdigit((unsigned char)a[k])) return false;
    }
    return true;
}

Expr eval_snode(const SNode& n) {
    if (!n.list) {
        if (is_number(n.atom)) return Expr(Coeff::parse_rational(n.atom));
        if (n.atom.empty()) throw ParseError("empty token");
        return Expr::param(n.atom);
    }
    if (n.kids.empty() || n.kids[0].list) throw ParseError("malformed prefix list");
    const std::string& op = n.kids[0].atom;
    auto need = [&](size_t k) {
        if (n.kids.size() != k) throw ParseError("wrong arity for '" + op + "'");
    };
    if (op == "+") {
        Expr s;
        for (size_t k = 1; k < n.kids.size(); ++k) s += eval_snode(n.kids[k]);
        return s;
    }
    if (op == "*") {
        Expr p(1);
        for (size_t k = 1; k < n.kids.size(); ++k) p *= eval_snode(n.kids[k]);
        return p;
    }
    if (op == "^") {
        need(3);
        if (n.kids[2].list) throw ParseError("exponent must be an integer");
        return eval_snode(n.kids[1]).pow(std::stoi(n.kids[2].atom));
    }
    if (op == "cx") {
        need(3);
        return Expr(Coeff(Coeff::parse_rational(n.kids[1].atom).re(), Coeff::parse_rational(n.kids[2].atom).re()));
    }
    if (op == "sign") {
        need(2);
        return Expr::sign(n.kids[1].atom);
    }
    if (op == "var") {
        need(2);
        return Expr::var(n.kids[1].atom);
    }
    if (op == "fn") {
        need(4);
        return Expr::func(n.kids[1].atom, n.kids[2].atom, std::stoi(n.kids[3].atom));
    }
    if (op == "root") {
        need(3);
        return Expr::root(eval_snode(n.kids[2]), std::stoi(n.kids[1].atom));
    }
    throw ParseError("unknown prefix operator '" + op + "'");
}

}  // namespace

Expr from_prefix(const std::string& s) {
    SReader r(s);
    SNode n = r.read();
    if (!r.done()) throw ParseError("trailing input after prefix expression");
    try {
        return eval_snode(n);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

namespace {

json coeff_json(const Coeff& c) {
    json j{{"num", c.re().get_str()}};
    if (!c.is_real()) j["im"] = c.im().get_str();
    return j;
}

json atom_json(AtomId a) {
    const AtomInfo& info = atom_info(a);
    switch (info.kind) {
        case AtomKind::Param:
            return {{"param", info.name}};
        case AtomKind::Sign:
            return {{"sign", info.name}};
        case AtomKind::Var:
            return {{"var", info.name}};
        case AtomKind::Func:
            return {{"fn", info.name}, {"arg", atom_info(info.var).name}, {"order", info.order}};
        case AtomKind::Radical:
            return {{"root", {{"q", info.rad_q}, {"base", to_json(Expr::from_terms({Term{info.rad_mono, info.rad_coeff}}))}}}};
    }
    return nullptr;
}

json term_json(const Term& t) {
    Monomial f = ordered_factors(t.mono);
    json parts = json::array();
    if (!t.coeff.is_one() || f.empty()) parts.push_back(coeff_json(t.coeff));
    for (auto x : f) {
        json a = atom_json(x.atom);
        parts.push_back(x.exp == 1 ? a : json{{"pow", json::array({a, x.exp})}});
    }
    if (parts.size() == 1) return parts[0];
    return {{"mul", parts}};
}

}  // namespace

json to_json(const Expr& e) {
    if (e.is_zero()) return {{"num", "0"}};
    auto ts = ordered_terms(e);
    if (ts.size() == 1) return term_json(*ts[0]);
    json parts = json::array();
    for (auto* t : ts) parts.push_back(term_json(*t));
    return {{"add", parts}};
}

Expr from_json(const json& j) {
    if (!j.is_object() || j.size() == 0) throw ParseError("expression JSON must be an object");
    try {
        if (j.contains("num")) {
            Coeff re = Coeff::parse_rational(j.at("num").get<std::string>());
            if (j.contains("im")) return Expr(Coeff(re.re(), Coeff::parse_rational(j.at("im").get<std::string>()).re()));
            return Expr(re);
        }
        if (j.contains("param")) return Expr::param(j.at("param").get<std::string>());
        if (j.contains("sign")) return Expr::sign(j.at("sign").get<std::string>());
        if (j.contains("var")) return Expr::var(j.at("var").get<std::string>());
        if (j.contains("fn"))
            return Expr::func(j.at("fn").get<std::string>(), j.at("arg").get<std::string>(), j.at("order").get<int>());
        if (j.contains("root")) return Expr::root(from_json(j.at("root").at("base")), j.at("root").at("q").get<int>());
        if (j.contains("add")) {
            Expr s;
            for (const auto& k : j.at("add")) s += from_json(k);
            return s;
        }
        if (j.contains("mul")) {
            Expr p(1);
            for (const auto& k : j.at("mul")) p *= from_json(k);
            return p;
        }
        if (j.contains("pow")) return from_json(j.at("pow").at(0)).pow(j.at("pow").at(1).get<int>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed expression JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    throw ParseError("unknown expression JSON node: " + j.dump());
}

namespace {

std::string atom_infix(AtomId a) {
    const AtomInfo& info = atom_info(a);
    switch (info.kind) {
        case AtomKind::Param:
        case AtomKind::Sign:
        case AtomKind::Var:
            return info.name;
        case AtomKind::Func: {
            std::string s = info.name;
            if (info.order <= 3)
                s += std::string(info.order, '\'');
            else
                s += "{" + std::to_string(info.order) + "}";
            return s + "(" + atom_info(info.var).name + ")";
        }
        case AtomKind::Radical: {
            std::string base = to_infix(Expr::from_terms({Term{info.rad_mono, info.rad_coeff}}));
            if (info.rad_q == 2) return "sqrt(" + base + ")";
            if (info.rad_q == 3) return "cbrt(" + base + ")";
            return "root(" + std::to_string(info.rad_q) + ", " + base + ")";
        }
    }
    return "?";
}

// returns the term text without its leading sign; sets neg
std::string term_infix(const Term& t, bool& neg) {
    std::vector<std::string> num, den;
    const Coeff& c = t.coeff;
    neg = false;
    if (c.is_real() || sgn(c.re()) == 0) {
        const mpq_class& q = c.is_real() ? c.re() : c.im();
        neg = sgn(q) < 0;
        mpq_class a = abs(q);
        if (a.get_num() != 1) num.push_back(a.get_num().get_str());
        if (!c.is_real()) num.push_back("i");
        if (a.get_den() != 1) den.push_back(a.get_den().get_str());
    } else {
        num.push_back(c.to_string());
    }
    for (auto f : ordered_factors(t.mono)) {
        std::string a = atom_infix(f.atom);
        int e = std::abs(f.exp);
        std::string p = e == 1 ? a : a + "^" + std::to_string(e);
        (f.exp > 0 ? num : den).push_back(p);
    }
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (size_t k = 0; k < v.size(); ++k) s += (k ? "*" : "") + v[k];
        return s;
    };
    std::string s = num.empty() ? "1" : join(num);
    if (!den.empty()) s += "/" + (den.size() == 1 ? den[0] : "(" + join(den) + ")");
    return s;
}

}  // namespace

std::string to_infix(const Expr& e) {
    if (e.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (auto* t : ordered_terms(e)) {
        bool neg;
        std::string ts = term_infix(*t, neg);
        if (first)
            s += neg ? "-" + ts : ts;
        else
            s += neg ? " - " + ts : " + " + ts;
        first = false;
    }
    return s;
}

namespace {

class InfixParser {
public:
    InfixParser(const std::string& s, const ParseContext& ctx) : s_(s), ctx_(ctx) {}

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    std::string ident() {
        skip();
        size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_')) ++pos_;
        return s_.substr(b, pos_ - b);
    }
    long integer() {
        skip();
        bool neg = false;
        if (eat('-')) neg = true;
        skip();
        size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
        if (b == pos_) fail("expected integer");
        long v = std::stol(s_.substr(b, pos_ - b));
        return neg ? -v : v;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (eat('+'))
                e += term();
            else if (eat('-'))
                e -= term();
            else
                return e;
        }
    }
    Expr term() {
        Expr e = unary();
        for (;;) {
            if (eat('*')) {
                e *= unary();
            } else if (eat('/')) {
                Expr d = unary();
                if (d.is_zero()) fail("division by zero");
                try {
                    e /= d;
                } catch (const NotInvertible&) {
                    fail("division by a non-monomial expression");
                }
            } else {
                return e;
            }
        }
    }
    Expr unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    Expr power() {
        Expr b = primary();
        if (eat('^')) {
            long n;
            if (eat('(')) {
                n = integer();
                expect(')');
            } else {
                n = integer();
            }
            try {
                return b.pow(int(n));
            } catch (const NotInvertible&) {
                fail("negative power of a non-invertible expression");
            }
        }
        return b;
    }
    Expr primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t b = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
            return Expr(Coeff::parse_rational(s_.substr(b, pos_ - b)));
        }
        if (std::isalpha((unsigned char)c) || c == '_') return named();
        fail("unexpected token");
    }
    Expr named() {
        std::string id = ident();
        if (id == "sqrt" || id == "cbrt") {
            expect('(');
            Expr b = expr();
            expect(')');
            return Expr::root(b, id == "sqrt" ? 2 : 3);
        }
        if (id == "root") {
            expect('(');
            long q = integer();
            expect(',');
            Expr b = expr();
            expect(')');
            return Expr::root(b, int(q));
        }
        int order = 0;
        bool marked = false;
        while (peek() == '\'') {
            ++pos_;
            ++order;
            marked = true;
        }
        if (peek() == '{') {
            ++pos_;
            order += int(integer());
            expect('}');
            marked = true;
        }
        std::string var;
        // explicit application f(x)
        size_t save = pos_;
        if (eat('(')) {
            std::string v = ident();
            if (!v.empty() && ctx_.vars.count(v) && eat(')')) {
                var = v;
            } else {
                pos_ = save;
            }
        }
        if (var.empty()) {
            auto it = ctx_.funcs.find(id);
            if (it != ctx_.funcs.end())
                var = it->second;
            else if (marked)
                var = ctx_.default_var;
        }
        if (!var.empty()) return Expr::func(id, var, order);
        if (id == "i") return Expr::i();
        if (ctx_.vars.count(id)) return Expr::var(id);
        if (ctx_.signs.count(id)) return Expr::sign(id);
        return Expr::param(id);
    }

    const std::string& s_;
    const ParseContext& ctx_;
    size_t pos_ = 0;
};

}  // namespace

Expr parse_infix(const std::string& s, const ParseContext& ctx) {
    try {
        return InfixParser(s, ctx).parse();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

Expr parse(const std::string& s, std::initializer_list<const char*> funcs_of_x) {
    ParseContext ctx;
    for (const char* f : funcs_of_x) ctx.funcs[f] = "x";
    return parse_infix(s, ctx);
}

}  // namespace superint::sym
