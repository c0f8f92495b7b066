#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "superint/sym/coeff.hpp"

namespace superint {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace superint

namespace superint::sym {

struct NotInvertible : Error {
    using Error::Error;
};

using AtomId = std::uint32_t;
inline constexpr AtomId kNoAtom = ~AtomId(0);

enum class AtomKind : std::uint8_t { Param, Sign, Radical, Var, Func };

struct Factor {
    AtomId atom;
    int exp;
    friend bool operator==(const Factor&, const Factor&) = default;
};

using Monomial = boost::container::small_vector<Factor, 4>;

struct AtomInfo {
    AtomKind kind = AtomKind::Param;
    std::string name;
    AtomId var = kNoAtom;  // Func: argument variable
    int order = 0;         // Func: derivative order
    AtomId base = kNoAtom; // Func: the order-0 atom of the same function
    // Radical: (rad_coeff * rad_mono)^(1/rad_q)
    Coeff rad_coeff;
    Monomial rad_mono;
    int rad_q = 0;
    std::string key;  // deterministic ordering key
};

const AtomInfo& atom_info(AtomId id);
AtomId param_atom(std::string_view name);
AtomId sign_atom(std::string_view name);
AtomId var_atom(std::string_view name);
AtomId func_atom(std::string_view name, AtomId var, int order = 0);
AtomId func_derivative(AtomId f, int extra);
int atom_order_compare(AtomId a, AtomId b);

struct Term {
    Monomial mono;
    Coeff coeff;
};

class Expr {
public:
    Expr() = default;
    Expr(long v);
    Expr(int v) : Expr(long(v)) {}
    Expr(const Coeff& c);

    static Expr atom(AtomId a, int exp = 1);
    static Expr param(std::string_view name) { return atom(param_atom(name)); }
    static Expr sign(std::string_view name) { return atom(sign_atom(name)); }
    static Expr var(std::string_view name) { return atom(var_atom(name)); }
    static Expr func(std::string_view name, std::string_view var, int order = 0) {
        return atom(func_atom(name, var_atom(var), order));
    }
    static Expr i() { return Expr(Coeff::i()); }
    static Expr rational(long num, long den) { return Expr(Coeff::rational(num, den)); }
    // (base)^(1/q); base must be a single term free of unknown functions
    static Expr root(const Expr& base, int q);
    static Expr from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const;
    size_t size() const { return terms().size(); }
    bool is_zero() const { return terms().empty(); }
    bool is_constant() const;
    bool is_monomial() const { return size() == 1; }
    Coeff constant_value() const;  // 0 unless is_constant()
    // true if every atom of a single-term expression is invertible
    bool is_invertible_monomial() const;

    Expr operator-() const;
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    Expr& operator/=(const Expr& o) { return *this = *this / o; }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    // divisor must be an invertible monomial
    friend Expr operator/(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    Expr pow(int n) const;
    Expr conj() const;
    Expr scale(const Coeff& c) const;
    size_t hash() const;

    std::set<AtomId> atoms() const;
    bool depends_on(AtomId a) const;
    bool depends_on_any(const std::function<bool(AtomId)>& pred) const;

private:
    std::shared_ptr<const std::vector<Term>> terms_;
};

// normal form is maintained eagerly; normalize is the identity on canonical
// values and exists for API symmetry with the serializers
inline Expr normalize(const Expr& e) { return e; }

Expr differentiate(const Expr& e, AtomId var);
Expr differentiate(const Expr& e, AtomId var, int times);
inline Expr differentiate(const Expr& e) { return differentiate(e, var_atom("x")); }

// Simultaneous substitution. Binding a function atom of order 0 also binds
// all of its derivatives to the matching derivatives of the replacement.
using Bindings = std::map<AtomId, Expr>;
Expr substitute(const Expr& e, const Bindings& b);
Expr substitute(const Expr& e, AtomId a, const Expr& value);

// e as a polynomial in atom a: exponent -> coefficient
std::map<int, Expr> collect(const Expr& e, AtomId a);
int degree(const Expr& e, AtomId a);
// highest derivative order of function `base` present, -1 if absent
int max_order(const Expr& e, AtomId base);
// multiply through by the monomial that clears all negative exponents
Expr clear_denominators(const Expr& e);
// gcd-like monomial content (minimal exponents) of all terms, coeff 1
Expr monomial_content(const Expr& e);

struct ExprHash {
    size_t operator()(const Expr& e) const { return e.hash(); }
};

}  // namespace superint::sym
