#pragma once

#include <optional>

#include "superint/sym/expr.hpp"

namespace superint::det {

using sym::AtomId;
using sym::Expr;

// Exact antiderivative of a differential polynomial in x, or nullopt when e
// is not a total derivative inside the ring (needs a log, or an integral of
// an undifferentiated unknown). The constant of integration is zero.
std::optional<Expr> antiderivative(const Expr& e, AtomId var);

struct FactorIntegral {
    int power = 0;  // e * x^power = d/dx result
    Expr result;
};

// Tries x^k e for k = 0, 1, -1, 2, -2, ... up to |k| <= max_power.
std::optional<FactorIntegral> integrate_with_factor(const Expr& e, AtomId var, int max_power = 4);

}  // namespace superint::det
