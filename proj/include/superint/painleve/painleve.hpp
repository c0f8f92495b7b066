#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "superint/sym/expr.hpp"

namespace superint::painleve {

using sym::AtomId;
using sym::Coeff;
using sym::Expr;

struct InvalidOde : Error {
    using Error::Error;
};
struct NoNegativeBalance : Error {
    using Error::Error;
};

// equation = 0, polynomial in the unknown and its derivatives with
// coefficients polynomial (after clearing) in x and the parameters
struct OdePoly {
    Expr equation;
    AtomId unknown = sym::kNoAtom;  // order-0 function atom
    AtomId var = sym::kNoAtom;
    int order = 0;

    static OdePoly make(const Expr& equation, const std::string& unknown = "u", const std::string& var = "x");
};

struct Balance {
    mpq_class p;
    Expr d0;
    bool exact = true;   // d0 is an exact root
    std::string note;
    bool integer() const { return p.get_den() == 1; }
};

struct ResonanceSet {
    std::vector<long> integer;            // with multiplicity, ascending
    std::vector<std::string> non_integer; // rational or unresolved roots
    Expr polynomial;                      // indicial polynomial in r, monic
    int degree = 0;
};

struct Compatibility {
    long r = 0;
    bool compatible = false;
    bool determined = true;
    Expr condition;  // must vanish; zero when compatible
};

struct BranchReport {
    Balance balance;
    ResonanceSet resonances;
    std::vector<Compatibility> checks;
    bool principal = false;
    bool passes = false;
    std::vector<std::string> notes;
};

struct BalanceReport {
    std::string verdict;  // "passes", "fails", "inapplicable"
    int order = 0;
    std::vector<BranchReport> branches;
    std::vector<std::string> notes;
    bool passes() const { return verdict == "passes"; }
};

// negative exponents p (integer first, then fractional) with their d0
std::vector<Balance> dominant_balance(const OdePoly& ode);
ResonanceSet resonances(const OdePoly& ode, const mpq_class& p, const Expr& d0);
// coefficient conditions at the positive resonances up to the largest one
std::vector<Compatibility> compatibility(const OdePoly& ode, const Balance& b, const ResonanceSet& r);
BalanceReport painleve_verdict(const OdePoly& ode);

// rational roots with multiplicity of sum c[k] t^k; unresolved counts the rest
std::vector<mpq_class> rational_roots(std::vector<Coeff> c, int& unresolved);

nlohmann::json to_json(const BalanceReport& r);

}  // namespace superint::painleve
