#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "superint/det/solve.hpp"

namespace superint::catalog {

using sym::Expr;

struct CatalogError : Error {
    using Error::Error;
};

enum class Mode { SymbolicClosed, SymbolicModOde, NumericJet };
const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

// V written through a transcendent w(x) obeying its own ODE, e.g. the
// Weierstrass function or a Painleve transcendent.
struct Representation {
    std::string unknown;
    Expr potential;                 // V in terms of the w-jet
    Expr equation;                  // = 0, linear in w^(order)
    int order = 0;
    std::vector<Expr> first_integrals;  // in the w-jet, constant along the ODE
    std::string note;
};

struct CatalogEntry {
    std::string id;
    det::SolvedPair pair;
    Mode mode = Mode::SymbolicClosed;
    bool from_solver = true;        // pair is reproduced by det::solve
    bool keep_constants = false;
    std::string parent;             // set on sub-entries
    // values of the pair's free constants under which the representation,
    // first integrals and reference equation apply
    std::map<std::string, Expr> bindings;
    std::optional<Representation> representation;
    std::vector<Expr> first_integrals;  // in the unknown's jet
    std::optional<Expr> reference_equation; // printed form, equal up to a factor
    std::vector<Expr> ladder_polynomial; // type d quantum: K^dagger K = sum a_k H^k
    nlohmann::json annotations = nlohmann::json::object();
};

struct FamilyEntry {
    std::string id;
    Expr potential;  // in x, y
    std::vector<std::string> parameters;
    std::string construction;
    nlohmann::json annotations = nlohmann::json::object();
};

// H_a and H_b coincide after renaming parameters of a
struct Identification {
    std::string a, b;
    std::map<std::string, Expr> rename;
};

class Catalog {
public:
    Catalog() = default;
    static Catalog load(const std::string& path);
    static Catalog from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    const std::vector<CatalogEntry>& entries() const { return entries_; }
    const std::vector<FamilyEntry>& families() const { return families_; }
    const std::vector<Identification>& identifications() const { return idents_; }
    const CatalogEntry& find(const std::string& id) const;
    bool contains(const std::string& id) const;
    int version() const { return version_; }

    void add(CatalogEntry e) { entries_.push_back(std::move(e)); }
    void add(FamilyEntry f) { families_.push_back(std::move(f)); }
    void add(Identification i) { idents_.push_back(std::move(i)); }

private:
    int version_ = 1;
    std::vector<CatalogEntry> entries_;
    std::vector<FamilyEntry> families_;
    std::vector<Identification> idents_;
};

// $SUPERINT_CATALOG if set, else the catalog shipped in data/
std::string default_path();
const Catalog& default_catalog();

// Builds the catalog from the solver plus the hand-made entries.
Catalog build();

struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct VerifyReport {
    std::string id;
    Mode mode = Mode::SymbolicClosed;
    bool verified = false;
    std::vector<std::string> residual;  // nonzero relation coefficients, if any
    std::vector<Check> checks;
    double seconds = 0;
};

struct VerificationFailed : CatalogError {
    VerifyReport report;
    explicit VerificationFailed(VerifyReport r);
};

// runs every check; never throws on a failed check
VerifyReport check_entry(const CatalogEntry& e);
// throws VerificationFailed unless all checks pass
VerifyReport verify_entry(const Catalog& c, const std::string& id);

struct Filter {
    std::optional<op::Mechanics> mechanics;
    std::optional<char> type;  // 'a'..'d'
    std::optional<int> M;
    bool sub_entries = false;
};
std::vector<std::string> list_entries(const Catalog& c, const Filter& f = {});

// potentials of a and b agree after renaming a's parameters
Check check_identification(const Catalog& c, const Identification& i);

// a * r == b for some factor r (a monomial ratio of terms), if one exists
std::optional<Expr> proportional(const Expr& a, const Expr& b);

nlohmann::json to_json(const CatalogEntry& e);
CatalogEntry entry_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VerifyReport& r);

}  // namespace superint::catalog
