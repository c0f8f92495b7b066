#include "superint/numeric/eval.hpp"

#include <cmath>
#include <limits>

namespace superint::numeric {

namespace {

cplx ipow(cplx b, int e) {
    if (e < 0) return 1.0 / ipow(b, -e);
    cplx r = 1;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace

int SlotMap::slot(AtomId a) {
    auto it = index_.find(a);
    if (it != index_.end()) return it->second;
    int k = int(atoms_.size());
    atoms_.push_back(a);
    index_[a] = k;
    return k;
}

int SlotMap::find(AtomId a) const {
    auto it = index_.find(a);
    return it == index_.end() ? -1 : it->second;
}

cplx param_value(AtomId a, const Params& p) {
    const sym::AtomInfo& info = sym::atom_info(a);
    switch (info.kind) {
    case sym::AtomKind::Param: {
        auto it = p.find(info.name);
        if (it != p.end()) return it->second;
        if (info.name == "hbar" || info.name == "alpha1" || info.name == "alpha2") return 1.0;
        throw NumericError("no value for parameter " + info.name);
    }
    case sym::AtomKind::Sign: {
        auto it = p.find(info.name);
        return it != p.end() ? it->second : cplx(1.0);
    }
    case sym::AtomKind::Radical: {
        cplx base = info.rad_coeff.to_complex();
        for (auto f : info.rad_mono) base *= ipow(param_value(f.atom, p), f.exp);
        return std::pow(base, 1.0 / info.rad_q);
    }
    default:
        throw NumericError("not a constant atom: " + info.name);
    }
}

std::vector<cplx> SlotMap::bind(const Params& p) const {
    std::vector<cplx> v(atoms_.size(), cplx(std::numeric_limits<double>::quiet_NaN(), 0));
    for (size_t k = 0; k < atoms_.size(); ++k) {
        auto kind = sym::atom_info(atoms_[k]).kind;
        if (kind == sym::AtomKind::Param || kind == sym::AtomKind::Sign || kind == sym::AtomKind::Radical)
            v[k] = param_value(atoms_[k], p);
    }
    return v;
}

Evaluator::Evaluator(const Expr& e, SlotMap& slots) {
    for (const auto& t : e.terms()) {
        T out{t.coeff.to_complex(), {}};
        for (auto f : t.mono) out.f.emplace_back(slots.slot(f.atom), f.exp);
        terms_.push_back(std::move(out));
    }
}

cplx Evaluator::operator()(const cplx* v) const {
    cplx s = 0;
    for (const auto& t : terms_) {
        cplx r = t.c;
        for (auto [k, e] : t.f) r *= ipow(v[k], e);
        s += r;
    }
    return s;
}

}  // namespace superint::numeric
