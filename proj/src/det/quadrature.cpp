#include "superint/det/quadrature.hpp"

#include <algorithm>

namespace superint::det {

namespace {

using sym::AtomInfo;
using sym::AtomKind;

// highest-order function atom depending on var; kNoAtom if none
AtomId top_function(const Expr& e, AtomId var, bool& has_radical_in_var) {
    AtomId best = sym::kNoAtom;
    int best_order = -1;
    has_radical_in_var = false;
    for (AtomId a : e.atoms()) {
        const AtomInfo& info = sym::atom_info(a);
        if (info.kind == AtomKind::Radical && info.rad_mono.end() !=
                std::find_if(info.rad_mono.begin(), info.rad_mono.end(),
                             [&](const sym::Factor& f) { return f.atom == var; }))
            has_radical_in_var = true;
        if (info.kind != AtomKind::Func || info.var != var) continue;
        if (info.order > best_order) {
            best_order = info.order;
            best = a;
        }
    }
    return best;
}

std::optional<Expr> integrate_explicit(const Expr& e, AtomId var) {
    Expr out;
    for (const auto& [k, c] : sym::collect(e, var)) {
        if (k == -1) return std::nullopt;
        out += c * Expr::atom(var).pow(k + 1) / Expr(k + 1);
    }
    return out;
}

}  // namespace

std::optional<Expr> antiderivative(const Expr& e, AtomId var) {
    Expr rest = e, acc;
    for (int guard = 0; guard < 64 && !rest.is_zero(); ++guard) {
        bool radical = false;
        AtomId top = top_function(rest, var, radical);
        if (radical) return std::nullopt;
        if (top == sym::kNoAtom) {
            auto tail = integrate_explicit(rest, var);
            if (!tail) return std::nullopt;
            return acc + *tail;
        }
        const AtomInfo& info = sym::atom_info(top);
        if (info.order == 0) return std::nullopt;
        auto parts = sym::collect(rest, top);
        if (parts.size() > 2 || !parts.count(1) || (parts.size() == 2 && !parts.count(0))) return std::nullopt;
        const Expr& A = parts.at(1);
        AtomId below = sym::func_derivative(top, -1);
        Expr F;
        for (const auto& [j, a] : sym::collect(A, below)) {
            if (j == -1) return std::nullopt;
            F += a * Expr::atom(below).pow(j + 1) / Expr(j + 1);
        }
        acc += F;
        rest -= sym::differentiate(F, var);
    }
    if (!rest.is_zero()) return std::nullopt;
    return acc;
}

std::optional<FactorIntegral> integrate_with_factor(const Expr& e, AtomId var, int max_power) {
    for (int s = 0; s <= 2 * max_power; ++s) {
        int k = (s % 2 ? 1 : -1) * ((s + 1) / 2);
        auto r = antiderivative(e * Expr::atom(var).pow(k), var);
        if (r) return FactorIntegral{k, *r};
    }
    return std::nullopt;
}

}  // namespace superint::det
