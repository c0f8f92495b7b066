#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "superint/sym/expr.hpp"

namespace superint::numeric {

using cplx = std::complex<double>;
using sym::AtomId;
using sym::Expr;

struct NumericError : Error {
    using Error::Error;
};

// parameter and sign values by name; hbar, alpha1 and signs default to 1
using Params = std::map<std::string, cplx>;

// Assigns array positions to atoms. Parameters, signs and radicals are
// constants fixed by bind(); variables and function atoms vary per point.
class SlotMap {
public:
    int slot(AtomId a);
    int find(AtomId a) const;
    int size() const { return int(atoms_.size()); }
    const std::vector<AtomId>& atoms() const { return atoms_; }
    // values for the constant atoms, NaN for the rest
    std::vector<cplx> bind(const Params& p) const;

private:
    std::vector<AtomId> atoms_;
    std::map<AtomId, int> index_;
};

cplx param_value(AtomId a, const Params& p);

// Flattened sum of coefficient * prod slot^exp.
class Evaluator {
public:
    Evaluator() = default;
    Evaluator(const Expr& e, SlotMap& slots);
    cplx operator()(const cplx* v) const;
    bool empty() const { return terms_.empty(); }

private:
    struct T {
        cplx c;
        std::vector<std::pair<int, int>> f;
    };
    std::vector<T> terms_;
};

}  // namespace superint::numeric
