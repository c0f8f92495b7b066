#include "superint/sym/rewrite.hpp"

#include <algorithm>

#include "superint/sym/serialize.hpp"

namespace superint::sym {

namespace {
std::string atom_infix_name(AtomId a) { return to_infix(Expr::atom(a)); }
}  // namespace

RewriteRule::RewriteRule(AtomId target, Expr relation) : target_(target), relation_(std::move(relation)) {
    const AtomInfo& info = atom_info(target);
    if (info.kind != AtomKind::Func) throw Error("rewrite target must be an unknown-function derivative");
    if (max_order(relation_, info.base) != info.order)
        throw Error("relation " + to_infix(relation_) + " does not have " + atom_infix_name(target) +
                    " as its highest derivative");
    degree_ = sym::degree(relation_, target);
    auto parts = collect(relation_, target);
    initial_ = parts.rbegin()->second;
}

RewriteRule RewriteRule::solved(AtomId target, const Expr& replacement) {
    return RewriteRule(target, Expr::atom(target) - replacement);
}

RewriteRule RewriteRule::solved(const Expr& target, const Expr& replacement) {
    if (!target.is_monomial() || target.terms()[0].mono.size() != 1 || !target.terms()[0].coeff.is_one() ||
        target.terms()[0].mono[0].exp != 1)
        throw Error("rule target must be a single derivative");
    return solved(target.terms()[0].mono[0].atom, replacement);
}

std::optional<Expr> RewriteRule::replacement() const {
    if (degree_ != 1 || !exact()) return std::nullopt;
    return -(relation_ - initial_ * Expr::atom(target_)) / initial_;
}

namespace {

// Replace t by -tail/lead inside e (pseudo form when lead is not invertible).
Expr eliminate_linear(const Expr& e, AtomId t, const Expr& lead, const Expr& tail) {
    auto parts = collect(e, t);
    int d = parts.rbegin()->first;
    if (d <= 0) return e;
    Expr out;
    if (lead.is_invertible_monomial()) {
        Expr r = -tail / lead;
        Expr rp(1);
        int cur = 0;
        for (auto& [j, c] : parts) {
            while (cur < j) {
                rp = rp * r;
                ++cur;
            }
            out += c * rp;
        }
        return out;
    }
    Expr mt = -tail;
    for (auto& [j, c] : parts) out += c * mt.pow(j) * lead.pow(d - j);
    return out;
}

Expr pseudo_remainder(Expr e, const RewriteRule& r) {
    AtomId t = r.target();
    const int dp = r.degree();
    const Expr& init = r.initial();
    if (dp == 1) return eliminate_linear(e, t, init, r.relation() - init * Expr::atom(t));
    bool exact = r.exact();
    for (;;) {
        int de = degree(e, t);
        if (de < dp) return e;
        Expr lc = collect(e, t).rbegin()->second;
        Expr shift = Expr::atom(t, de - dp) * r.relation();
        if (exact)
            e = e - (lc / init) * shift;
        else
            e = init * e - lc * shift;
    }
}

}  // namespace

Expr reduce_mod(const Expr& e, const std::vector<RewriteRule>& rules) {
    if (rules.empty() || e.is_zero()) return e;
    std::vector<AtomId> funcs;
    std::vector<std::vector<const RewriteRule*>> groups;
    for (const auto& r : rules) {
        auto it = std::find(funcs.begin(), funcs.end(), r.function());
        size_t g = it - funcs.begin();
        if (it == funcs.end()) {
            funcs.push_back(r.function());
            groups.emplace_back();
        }
        bool dup = false;
        for (const auto* o : groups[g]) {
            if (o->target() != r.target()) continue;
            bool same = o->relation() == r.relation();
            if (!same && o->degree() == 1 && r.degree() == 1 && o->exact() && r.exact())
                same = *o->replacement() == *r.replacement();
            if (!same)
                throw InconsistentRules("two rules target " + atom_infix_name(r.target()) +
                                        " with different relations");
            dup = true;
        }
        if (!dup) groups[g].push_back(&r);
    }
    for (auto& g : groups)
        std::stable_sort(g.begin(), g.end(),
                         [](const RewriteRule* a, const RewriteRule* b) { return a->order() > b->order(); });

    Expr out = e;
    // rules may mention other constrained functions; iterate to a fixed point
    for (int pass = 0; pass < 8; ++pass) {
    Expr before = out;
    for (size_t g = 0; g < funcs.size(); ++g) {
        for (const RewriteRule* r : groups[g]) {
            const int n = r->order();
            std::vector<Expr> prolong{r->relation()};
            for (;;) {
                int m = max_order(out, funcs[g]);
                if (m <= n) break;
                int k = m - n;
                while (int(prolong.size()) <= k) prolong.push_back(differentiate(prolong.back(), r->var()));
                AtomId top = func_derivative(r->target(), k);
                const Expr& pk = prolong[k];
                auto parts = collect(pk, top);
                Expr lead = parts.count(1) ? parts.at(1) : Expr();
                if (lead.is_zero()) throw Error("degenerate prolongation while reducing");
                out = eliminate_linear(out, top, lead, pk - lead * Expr::atom(top));
            }
            if (degree(out, r->target()) >= r->degree()) out = pseudo_remainder(out, *r);
        }
    }
    if (out == before) break;
    }
    return out;
}

}  // namespace superint::sym
