#include "superint/sym/expr.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <mutex>

namespace superint::sym {

namespace {

class Registry {
public:
    static constexpr size_t kChunk = 1024;
    static constexpr size_t kChunks = 4096;

    AtomId intern(const std::string& ukey, AtomInfo info) {
        std::lock_guard lk(mu_);
        auto it = by_key_.find(ukey);
        if (it != by_key_.end()) return it->second;
        AtomId id = count_;
        if (id / kChunk >= kChunks) throw Error("atom registry exhausted");
        auto& slot = chunks_[id / kChunk];
        AtomInfo* chunk = slot.load(std::memory_order_acquire);
        if (!chunk) {
            chunk = new AtomInfo[kChunk];
            slot.store(chunk, std::memory_order_release);
        }
        if (info.kind == AtomKind::Func && info.base == kNoAtom) info.base = id;
        chunk[id % kChunk] = std::move(info);
        ++count_;
        by_key_.emplace(ukey, id);
        return id;
    }

    const AtomInfo& get(AtomId id) const {
        return chunks_[id / kChunk].load(std::memory_order_acquire)[id % kChunk];
    }

private:
    std::mutex mu_;
    std::array<std::atomic<AtomInfo*>, kChunks> chunks_{};
    AtomId count_ = 0;
    std::unordered_map<std::string, AtomId> by_key_;
};

Registry& registry() {
    static Registry r;
    return r;
}

int mono_compare(const Monomial& a, const Monomial& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t k = 0; k < n; ++k) {
        if (a[k].atom != b[k].atom) return a[k].atom < b[k].atom ? -1 : 1;
        if (a[k].exp != b[k].exp) return a[k].exp < b[k].exp ? -1 : 1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].atom < b[j].atom)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].atom < a[i].atom) {
            r.push_back(b[j++]);
        } else {
            int e = a[i].exp + b[j].exp;
            if (e) r.push_back({a[i].atom, e});
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial mono_pow(const Monomial& a, int n) {
    Monomial r;
    if (n == 0) return r;
    for (auto f : a) r.push_back({f.atom, f.exp * n});
    return r;
}

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Reduce sign atoms mod 2 and radicals into [0, q).
void normalize_mono(Monomial& m, Coeff& c) {
    bool again = true;
    while (again) {
        again = false;
        Monomial extra;
        for (auto& f : m) {
            const AtomInfo& info = atom_info(f.atom);
            if (info.kind == AtomKind::Sign) {
                f.exp = ((f.exp % 2) + 2) % 2;
            } else if (info.kind == AtomKind::Radical) {
                int k = floor_div(f.exp, info.rad_q);
                if (k != 0) {
                    f.exp -= k * info.rad_q;
                    c *= info.rad_coeff.pow(k);
                    extra = mono_mul(extra, mono_pow(info.rad_mono, k));
                }
            }
        }
        m.erase(std::remove_if(m.begin(), m.end(), [](const Factor& f) { return f.exp == 0; }),
                m.end());
        if (!extra.empty()) {
            m = mono_mul(m, extra);
            again = true;
        }
    }
}

std::vector<Term> combine(std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(),
              [](const Term& a, const Term& b) { return mono_compare(a.mono, b.mono) < 0; });
    std::vector<Term> out;
    out.reserve(ts.size());
    for (auto& t : ts) {
        if (!out.empty() && mono_compare(out.back().mono, t.mono) == 0) {
            out.back().coeff += t.coeff;
        } else {
            if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
            out.push_back(std::move(t));
        }
    }
    if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
    return out;
}

const std::vector<Term>& empty_terms() {
    static const std::vector<Term> e;
    return e;
}

std::string pad_order(int k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d", k);
    return buf;
}

std::string mono_key(const Coeff& c, const Monomial& m) {
    std::string s = c.re().get_str() + "," + c.im().get_str();
    for (auto f : m) s += ";" + atom_info(f.atom).key + "^" + std::to_string(f.exp);
    return s;
}

}  // namespace

const AtomInfo& atom_info(AtomId id) { return registry().get(id); }

AtomId param_atom(std::string_view name) {
    AtomInfo info;
    info.kind = AtomKind::Param;
    info.name = name;
    info.key = "0:" + info.name + ":p";
    std::string ukey = "P:" + info.name;
    return registry().intern(ukey, std::move(info));
}

AtomId sign_atom(std::string_view name) {
    AtomInfo info;
    info.kind = AtomKind::Sign;
    info.name = name;
    info.key = "0:" + info.name + ":s";
    std::string ukey = "S:" + info.name;
    return registry().intern(ukey, std::move(info));
}

AtomId var_atom(std::string_view name) {
    AtomInfo info;
    info.kind = AtomKind::Var;
    info.name = name;
    info.key = "2:" + info.name;
    std::string ukey = "X:" + info.name;
    return registry().intern(ukey, std::move(info));
}

AtomId func_atom(std::string_view name, AtomId var, int order) {
    if (order < 0) throw Error("negative derivative order");
    AtomId base = order == 0 ? kNoAtom : func_atom(name, var, 0);
    AtomInfo info;
    info.kind = AtomKind::Func;
    info.name = name;
    info.var = var;
    info.order = order;
    info.key = "3:" + info.name + ":" + atom_info(var).name + ":" + pad_order(order);
    info.base = base;
    std::string ukey = "F:" + info.name + ":" + atom_info(var).name + ":" + std::to_string(order);
    return registry().intern(ukey, std::move(info));
}

AtomId func_derivative(AtomId f, int extra) {
    const AtomInfo& info = atom_info(f);
    if (info.kind != AtomKind::Func) throw Error("not a function atom");
    return func_atom(info.name, info.var, info.order + extra);
}

int atom_order_compare(AtomId a, AtomId b) {
    if (a == b) return 0;
    int c = atom_info(a).key.compare(atom_info(b).key);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

Expr::Expr(long v) {
    if (v != 0) terms_ = std::make_shared<std::vector<Term>>(std::vector<Term>{{Monomial{}, Coeff(v)}});
}

Expr::Expr(const Coeff& c) {
    if (!c.is_zero()) terms_ = std::make_shared<std::vector<Term>>(std::vector<Term>{{Monomial{}, c}});
}

Expr Expr::atom(AtomId a, int exp) {
    return from_terms({Term{Monomial{{a, exp}}, Coeff(1)}});
}

Expr Expr::root(const Expr& base, int q) {
    if (q < 1) throw Error("root index must be positive");
    if (base.is_zero()) return Expr();
    if (q == 1) return base;
    if (!base.is_monomial()) throw Error("root of a non-monomial expression");
    const Term& t = base.terms()[0];
    for (auto f : t.mono) {
        auto k = atom_info(f.atom).kind;
        if (k != AtomKind::Param && k != AtomKind::Var)
            throw Error("root base may only contain parameters and variables");
    }
    AtomInfo info;
    info.kind = AtomKind::Radical;
    info.rad_coeff = t.coeff;
    info.rad_mono = t.mono;
    info.rad_q = q;
    std::string mk = mono_key(t.coeff, t.mono);
    info.key = "1:" + std::to_string(q) + ":" + mk;
    std::string ukey = "R:" + std::to_string(q) + ":" + mk;
    AtomId id = registry().intern(ukey, std::move(info));
    return atom(id);
}

Expr Expr::from_terms(std::vector<Term> ts) {
    for (auto& t : ts) {
        std::sort(t.mono.begin(), t.mono.end(),
                  [](const Factor& a, const Factor& b) { return a.atom < b.atom; });
        Monomial merged;
        for (auto f : t.mono) {
            if (!merged.empty() && merged.back().atom == f.atom)
                merged.back().exp += f.exp;
            else
                merged.push_back(f);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const Factor& f) { return f.exp == 0; }),
                     merged.end());
        for (auto f : merged)
            if (f.exp < 0 && atom_info(f.atom).kind == AtomKind::Func)
                throw NotInvertible("negative power of an unknown function");
        normalize_mono(merged, t.coeff);
        t.mono = std::move(merged);
    }
    Expr e;
    auto out = combine(std::move(ts));
    if (!out.empty()) e.terms_ = std::make_shared<std::vector<Term>>(std::move(out));
    return e;
}

const std::vector<Term>& Expr::terms() const { return terms_ ? *terms_ : empty_terms(); }

bool Expr::is_constant() const {
    return is_zero() || (size() == 1 && terms()[0].mono.empty());
}

Coeff Expr::constant_value() const {
    for (const auto& t : terms())
        if (t.mono.empty()) return t.coeff;
    return Coeff(0);
}

bool Expr::is_invertible_monomial() const {
    if (size() != 1) return false;
    for (auto f : terms()[0].mono)
        if (atom_info(f.atom).kind == AtomKind::Func) return false;
    return true;
}

Expr Expr::operator-() const { return scale(Coeff(-1)); }

Expr Expr::scale(const Coeff& c) const {
    if (c.is_zero() || is_zero()) return Expr();
    if (c.is_one()) return *this;
    std::vector<Term> ts = terms();
    for (auto& t : ts) t.coeff *= c;
    Expr e;
    e.terms_ = std::make_shared<std::vector<Term>>(std::move(ts));
    return e;
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const auto& x = a.terms();
    const auto& y = b.terms();
    std::vector<Term> out;
    out.reserve(x.size() + y.size());
    size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        int c = (i == x.size()) ? 1 : (j == y.size()) ? -1 : mono_compare(x[i].mono, y[j].mono);
        if (c < 0) {
            out.push_back(x[i++]);
        } else if (c > 0) {
            out.push_back(y[j++]);
        } else {
            Coeff s = x[i].coeff + y[j].coeff;
            if (!s.is_zero()) out.push_back({x[i].mono, std::move(s)});
            ++i;
            ++j;
        }
    }
    Expr e;
    if (!out.empty()) e.terms_ = std::make_shared<std::vector<Term>>(std::move(out));
    return e;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr();
    if (a.is_constant()) return b.scale(a.terms()[0].coeff);
    if (b.is_constant()) return a.scale(b.terms()[0].coeff);
    const auto& x = a.terms();
    const auto& y = b.terms();
    std::vector<Term> out;
    out.reserve(x.size() * y.size());
    for (const auto& s : x)
        for (const auto& t : y) {
            Term p{mono_mul(s.mono, t.mono), s.coeff * t.coeff};
            normalize_mono(p.mono, p.coeff);
            out.push_back(std::move(p));
        }
    Expr e;
    auto c = combine(std::move(out));
    if (!c.empty()) e.terms_ = std::make_shared<std::vector<Term>>(std::move(c));
    return e;
}

Expr operator/(const Expr& a, const Expr& b) {
    if (!b.is_invertible_monomial()) throw NotInvertible("division by a non-monomial or unknown-function expression");
    const Term& t = b.terms()[0];
    Term inv{mono_pow(t.mono, -1), t.coeff.inverse()};
    normalize_mono(inv.mono, inv.coeff);
    Expr ie;
    ie.terms_ = std::make_shared<std::vector<Term>>(std::vector<Term>{std::move(inv)});
    return a * ie;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.terms_ == b.terms_) return true;
    const auto& x = a.terms();
    const auto& y = b.terms();
    if (x.size() != y.size()) return false;
    for (size_t k = 0; k < x.size(); ++k)
        if (!(x[k].coeff == y[k].coeff) || mono_compare(x[k].mono, y[k].mono) != 0) return false;
    return true;
}

Expr Expr::pow(int n) const {
    if (n == 0) return Expr(1);
    if (n < 0) return Expr(1) / pow(-n);
    if (is_monomial()) {
        const Term& t = terms()[0];
        return from_terms({Term{mono_pow(t.mono, n), t.coeff.pow(n)}});
    }
    Expr r(1), b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

Expr Expr::conj() const {
    std::vector<Term> ts;
    for (const auto& t : terms()) {
        Term c{{}, t.coeff.conj()};
        for (auto f : t.mono) {
            const AtomInfo& info = atom_info(f.atom);
            if (info.kind == AtomKind::Radical && !info.rad_coeff.is_real()) {
                Expr r = root(Expr::from_terms({Term{info.rad_mono, info.rad_coeff.conj()}}), info.rad_q);
                c.mono.push_back({r.terms()[0].mono[0].atom, f.exp});
            } else {
                c.mono.push_back(f);
            }
        }
        ts.push_back(std::move(c));
    }
    return from_terms(std::move(ts));
}

size_t Expr::hash() const {
    size_t h = 1469598103934665603ull;
    for (const auto& t : terms()) {
        h = h * 1099511628211ull ^ t.coeff.hash();
        for (auto f : t.mono) h = (h * 1099511628211ull) ^ (size_t(f.atom) << 8 ^ size_t(f.exp + 128));
    }
    return h;
}

std::set<AtomId> Expr::atoms() const {
    std::set<AtomId> s;
    for (const auto& t : terms())
        for (auto f : t.mono) s.insert(f.atom);
    return s;
}

bool Expr::depends_on(AtomId a) const {
    for (const auto& t : terms())
        for (auto f : t.mono)
            if (f.atom == a) return true;
    return false;
}

bool Expr::depends_on_any(const std::function<bool(AtomId)>& pred) const {
    for (const auto& t : terms())
        for (auto f : t.mono)
            if (pred(f.atom)) return true;
    return false;
}

namespace {

// derivative of a single atom; nullopt means zero
std::optional<Expr> atom_derivative(AtomId a, AtomId var) {
    const AtomInfo& info = atom_info(a);
    switch (info.kind) {
        case AtomKind::Param:
        case AtomKind::Sign:
            return std::nullopt;
        case AtomKind::Var:
            if (a == var) return Expr(1);
            return std::nullopt;
        case AtomKind::Func:
            if (info.var != var) return std::nullopt;
            return Expr::atom(func_derivative(a, 1));
        case AtomKind::Radical: {
            int e = 0;
            for (auto f : info.rad_mono)
                if (f.atom == var) e = f.exp;
            if (e == 0) return std::nullopt;
            return Expr::atom(a) * Expr::atom(var, -1) * Expr(Coeff::rational(e, info.rad_q));
        }
    }
    return std::nullopt;
}

}  // namespace

Expr differentiate(const Expr& e, AtomId var) {
    std::unordered_map<AtomId, std::optional<Expr>> cache;
    std::vector<Term> out;
    for (const auto& t : e.terms()) {
        for (size_t k = 0; k < t.mono.size(); ++k) {
            AtomId a = t.mono[k].atom;
            auto it = cache.find(a);
            if (it == cache.end()) it = cache.emplace(a, atom_derivative(a, var)).first;
            if (!it->second) continue;
            Monomial rest = t.mono;
            int ex = rest[k].exp;
            rest[k].exp -= 1;
            if (rest[k].exp == 0) rest.erase(rest.begin() + k);
            Coeff c = t.coeff * Coeff(long(ex));
            for (const auto& dt : it->second->terms()) {
                Term p{mono_mul(rest, dt.mono), c * dt.coeff};
                normalize_mono(p.mono, p.coeff);
                out.push_back(std::move(p));
            }
        }
    }
    Expr r = Expr::from_terms(std::move(out));
    return r;
}

Expr differentiate(const Expr& e, AtomId var, int times) {
    Expr r = e;
    for (int k = 0; k < times && !r.is_zero(); ++k) r = differentiate(r, var);
    return r;
}

Expr substitute(const Expr& e, const Bindings& b) {
    if (b.empty() || e.is_zero()) return e;
    std::unordered_map<AtomId, std::optional<Expr>> repl;
    auto replacement = [&](AtomId a) -> const std::optional<Expr>& {
        auto it = repl.find(a);
        if (it != repl.end()) return it->second;
        std::optional<Expr> r;
        auto bt = b.find(a);
        const AtomInfo& info = atom_info(a);
        if (bt != b.end()) {
            r = bt->second;
        } else if (info.kind == AtomKind::Func && info.order > 0) {
            auto bb = b.find(info.base);
            if (bb != b.end()) r = differentiate(bb->second, info.var, info.order);
        } else if (info.kind == AtomKind::Radical) {
            Expr base = Expr::from_terms({Term{info.rad_mono, info.rad_coeff}});
            bool touched = false;
            for (auto f : info.rad_mono)
                if (b.count(f.atom)) touched = true;
            if (touched) r = Expr::root(substitute(base, b), info.rad_q);
        }
        return repl.emplace(a, std::move(r)).first->second;
    };
    std::map<std::pair<AtomId, int>, Expr> powers;
    std::vector<Term> out;
    for (const auto& t : e.terms()) {
        Monomial keep;
        Expr factor(1);
        bool replaced = false;
        for (auto f : t.mono) {
            const auto& r = replacement(f.atom);
            if (!r) {
                keep.push_back(f);
                continue;
            }
            replaced = true;
            auto key = std::make_pair(f.atom, f.exp);
            auto pit = powers.find(key);
            if (pit == powers.end()) pit = powers.emplace(key, r->pow(f.exp)).first;
            factor = factor * pit->second;
        }
        if (!replaced) {
            out.push_back(t);
            continue;
        }
        for (const auto& ft : factor.terms()) {
            Term p{mono_mul(keep, ft.mono), t.coeff * ft.coeff};
            normalize_mono(p.mono, p.coeff);
            out.push_back(std::move(p));
        }
    }
    return Expr::from_terms(std::move(out));
}

Expr substitute(const Expr& e, AtomId a, const Expr& value) {
    Bindings b;
    b.emplace(a, value);
    return substitute(e, b);
}

std::map<int, Expr> collect(const Expr& e, AtomId a) {
    std::map<int, std::vector<Term>> parts;
    for (const auto& t : e.terms()) {
        int ex = 0;
        Monomial rest;
        for (auto f : t.mono) {
            if (f.atom == a)
                ex = f.exp;
            else
                rest.push_back(f);
        }
        parts[ex].push_back({std::move(rest), t.coeff});
    }
    std::map<int, Expr> out;
    for (auto& [k, ts] : parts) out.emplace(k, Expr::from_terms(std::move(ts)));
    return out;
}

int degree(const Expr& e, AtomId a) {
    int d = 0;
    for (const auto& t : e.terms())
        for (auto f : t.mono)
            if (f.atom == a) d = std::max(d, f.exp);
    return d;
}

int max_order(const Expr& e, AtomId base) {
    int m = -1;
    for (const auto& t : e.terms())
        for (auto f : t.mono) {
            const AtomInfo& info = atom_info(f.atom);
            if (info.kind == AtomKind::Func && info.base == base) m = std::max(m, info.order);
        }
    return m;
}

Expr clear_denominators(const Expr& e) {
    std::map<AtomId, int> need;
    for (const auto& t : e.terms())
        for (auto f : t.mono) {
            if (f.exp < 0) need[f.atom] = std::max(need[f.atom], -f.exp);
        }
    Monomial m;
    for (auto [a, k] : need) m.push_back({a, k});
    if (m.empty()) return e;
    return e * Expr::from_terms({Term{m, Coeff(1)}});
}

Expr monomial_content(const Expr& e) {
    if (e.is_zero()) return Expr(1);
    std::map<AtomId, int> lo;
    bool first = true;
    for (const auto& t : e.terms()) {
        std::map<AtomId, int> cur;
        for (auto f : t.mono) cur[f.atom] = f.exp;
        if (first) {
            lo = cur;
            first = false;
            continue;
        }
        std::map<AtomId, int> next;
        for (auto [a, k] : lo) {
            int other = cur.count(a) ? cur[a] : 0;
            int m = std::min(k, other);
            if (m != 0) next[a] = m;
        }
        for (auto [a, k] : cur)
            if (!lo.count(a) && k < 0) next[a] = k;
        lo = next;
    }
    Monomial m;
    for (auto [a, k] : lo) {
        const AtomInfo& info = atom_info(a);
        if (info.kind == AtomKind::Sign || info.kind == AtomKind::Radical) continue;
        m.push_back({a, k});
    }
    return Expr::from_terms({Term{m, Coeff(1)}});
}

}  // namespace superint::sym
