#pragma once

#include <map>
#include <set>
#include <string>

#include <json.hpp>

#include "superint/sym/expr.hpp"

namespace superint::sym {

struct ParseError : Error {
    using Error::Error;
};

// Deterministic term/factor ordering used by every printer.
std::vector<const Term*> ordered_terms(const Expr& e);
Monomial ordered_factors(const Monomial& m);

std::string to_prefix(const Expr& e);
Expr from_prefix(const std::string& s);

nlohmann::json to_json(const Expr& e);
Expr from_json(const nlohmann::json& j);

// Human-readable infix, e.g. "6*V(x)^2/hbar^2 + 4*i*alpha1*x/hbar^3".
std::string to_infix(const Expr& e);

struct ParseContext {
    std::set<std::string> vars{"x", "y"};
    std::set<std::string> signs{"eps", "epsilon"};
    // bare identifiers that denote unknown functions, with their argument
    std::map<std::string, std::string> funcs;
    // argument of primed/braced identifiers without explicit (var)
    std::string default_var = "x";
};

Expr parse_infix(const std::string& s, const ParseContext& ctx = {});

// parse with a context declaring the listed functions of x
Expr parse(const std::string& s, std::initializer_list<const char*> funcs_of_x = {});

}  // namespace superint::sym
