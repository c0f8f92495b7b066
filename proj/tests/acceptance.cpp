// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "properties.hpp"
#include "superint/catalog/catalog.hpp"
#include "superint/cli/cli.hpp"
#include "superint/compose/compose.hpp"
#include "superint/det/solve.hpp"
#include "superint/numeric/residual.hpp"
#include "superint/painleve/painleve.hpp"
#include "superint/sym/serialize.hpp"

using namespace superint;
using op::Mechanics;
using op::RelationKind;
using sym::Expr;

namespace {

const Expr x = Expr::var("x");
const Expr h = Expr::param("hbar");
const Expr a1 = Expr::param("alpha1");
const Expr I = Expr::i();
Expr V(int k = 0) { return det::potential_fn(k); }

struct Line {
    bool ok = true;
    std::ostringstream detail;
    void require(bool c, const std::string& what) {
        if (!c) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Line determining_equations() {
    Line l;
    auto t0 = std::chrono::steady_clock::now();
    int matched = 0, rejected = 0, total = 0;
    for (auto m : {Mechanics::Quantum, Mechanics::Classical})
        for (auto k : {RelationKind::Abelian, RelationKind::Heisenberg, RelationKind::Conformal, RelationKind::LadderLower})
            for (int M = 1; M <= 5; ++M) {
                ++total;
                if (k == RelationKind::Conformal && M == 1) {
                    try {
                        det::generate(m, M, k);
                    } catch (const det::ConformalOrderTooLow&) {
                        ++rejected;
                    }
                    continue;
                }
                auto s = det::generate(m, M, k);
                auto b = det::bracket_coefficients(m, M);
                bool same = s.z.size() == b.size();
                for (size_t i = 0; same && i < b.size(); ++i) same = s.z[i] == b[i];
                matched += same;
            }
    double secs = since(t0);
    l.detail << total << " combinations: " << matched << " Z lists equal the independent bracket, " << rejected
             << " conformal M=1 rejected as required (" << secs << " s)";
    l.require(total == 40 && matched == 38 && rejected == 2, "all combinations");
    l.require(secs < 10, "time < 10 s");
    return l;
}

Line painleve_reproduction() {
    Line l;
    auto b3 = det::solve(det::generate(Mechanics::Quantum, 3, RelationKind::Heisenberg));
    bool p1 = b3.potential.equation == V(2) - 6 * V().pow(2) / h.pow(2) - 4 * I * a1 * x / h.pow(3);
    auto a5 = det::solve(det::generate(Mechanics::Quantum, 5, RelationKind::Abelian));
    Expr target = h.pow(4) * V(4) - 20 * h.pow(2) * V() * V(2) - 10 * h.pow(2) * V(1).pow(2) + 40 * V().pow(3);
    bool a5ok = a5.potential.equation * h.pow(4) == target;
    l.detail << "q-b3: " << sym::to_infix(b3.potential.equation) << " = 0; q-a5 times hbar^4: "
             << sym::to_infix(a5.potential.equation * h.pow(4)) << " = 0";
    l.require(p1, "Painleve I");
    l.require(a5ok, "a5 equation");
    return l;
}

const char* kD5 =
    "9*hbar^10*(x*u{6} - u{5}) + 18*hbar^6*x*(-10*hbar^2*u' + alpha1^2*x^2 - 4*alpha1*hbar^2)*u{4}"
    " + hbar^6*(-360*hbar^2*x*u'' + 180*hbar^2*u' + 126*alpha1^2*x^2 + 72*alpha1*hbar^2)*u''' + 90*hbar^8*u''^2"
    " + (1080*hbar^6*x*u'^2 + 864*alpha1*hbar^6*x*u' - 216*alpha1^2*hbar^4*x^3*u' - 144*alpha1^2*hbar^4*x^2*u"
    " + 6*alpha1^4*hbar^2*x^5 - 144*alpha1^3*hbar^4*x^3 + 288*alpha1^2*hbar^6*x)*u''"
    " - 360*hbar^6*u'^3 - 432*alpha1*hbar^6*u'^2 - 468*alpha1^2*hbar^4*x^2*u'^2 - 144*alpha1^2*hbar^4*x*u*u'"
    " - 288*alpha1^2*hbar^6*u' - 432*alpha1^3*hbar^4*x^2*u' + 42*alpha1^4*hbar^2*x^4*u' + 72*alpha1^2*hbar^4*u^2"
    " + 48*alpha1^4*hbar^2*x^3*u - 90*alpha1^4*hbar^4*x^2 + 36*alpha1^5*hbar^2*x^4 - alpha1^6*x^6";

Line resonances() {
    Line l;
    auto t0 = std::chrono::steady_clock::now();
    Expr eq = sym::parse(kD5, {"u"});
    auto rep = painleve::painleve_verdict(painleve::OdePoly::make(eq));
    double secs = since(t0);
    auto d5 = det::solve(det::generate(Mechanics::Quantum, 5, RelationKind::LadderLower));
    l.require(d5.potential.equation * 9 * h.pow(10) * x == eq, "solver's q-d5 equation equals the displayed one");
    l.require(!rep.branches.empty(), "a balance");
    if (rep.branches.empty()) return l;
    const auto& b = rep.branches[0];
    std::vector<long> pos;
    for (long r : b.resonances.integer)
        if (r != -1) pos.push_back(r);
    l.detail << "p = " << b.balance.p.get_str() << ", d0 = " << sym::to_infix(b.balance.d0) << ", resonances {";
    for (size_t i = 0; i < pos.size(); ++i) l.detail << (i ? "," : "") << pos[i];
    l.detail << "}, verdict " << rep.verdict << " (" << secs << " s)";
    l.require(b.balance.p == -1, "p = -1");
    l.require(b.balance.d0 == -h.pow(2), "d0 = -hbar^2");
    l.require(pos == std::vector<long>{1, 2, 5, 6, 8}, "resonances");
    l.require(secs < 5, "time < 5 s");
    return l;
}

Line catalog_soundness() {
    Line l;
    auto t0 = std::chrono::steady_clock::now();
    const auto& cat = catalog::default_catalog();
    const auto& es = cat.entries();
    std::vector<catalog::VerifyReport> reps(es.size());
#pragma omp parallel for schedule(dynamic)
    for (size_t k = 0; k < es.size(); ++k) reps[k] = catalog::check_entry(es[k]);
    double secs = since(t0);
    int ok = 0, closed = 0;
    std::string bad;
    for (const auto& r : reps) {
        if (r.verified && r.residual.empty())
            ++ok;
        else
            bad += " " + r.id;
        closed += r.mode == catalog::Mode::SymbolicClosed;
    }
    int main_entries = int(catalog::list_entries(cat).size());
    l.detail << ok << "/" << es.size() << " entries verify with zero residual (" << main_entries
             << " main entries plus sub-entries; " << closed << " closed-form, " << es.size() - closed
             << " modulo their ODE) in " << secs << " s";
    l.require(ok == int(es.size()), "entries" + bad);
    l.require(main_entries >= 26, "at least 26 main entries");
    l.require(secs < 60, "time < 60 s");
    return l;
}

Line composition() {
    using namespace composer;
    Line l;
    Expr al = Expr::param("alpha");
    Op2 px = DiffOp2::from_x(op::DiffOp::momentum(hbar()));
    Op2 py = DiffOp2::from_y(op::DiffOp::momentum(hbar(), sym::var_atom("y")));
    Op2 L = product(Op2(DiffOp2::scalar(x)), py) - product(Op2(DiffOp2::scalar(Expr::var("y"))), px);
    int n_ok = 0;
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 1}, {3, 2}, {4, 1}, {2, 3}}) {
        auto c = compose({Case::DD, "q-d1", "q-d1", m, n, Expr(n) * al, Expr(m) * al});
        Op2 compact = product(L, product(power(px, m - 1), power(py, n - 1)));
        auto r = match_leading(c.K, compact);
        bool ok = r && !r->is_zero() && c.order == m + n - 1;
        try {
            auto s = check_superintegrable(c);
            ok = ok && s.commutes_K && s.independent;
        } catch (const NotAnIntegral&) {
            ok = false;
        }
        if (!ok) l.require(false, "(" + std::to_string(m) + "," + std::to_string(n) + ")");
        n_ok += ok;
        if (m == 3 && n == 2 && r) l.detail << "(3,2): K top order = " << sym::to_infix(*r) << " L px^2 py; ";
    }
    l.detail << n_ok << "/6 pairs match L px^(m-1) py^(n-1) at top order with [H,K] = 0 exactly";
    return l;
}

Line polynomial_algebra() {
    using namespace composer;
    Line l;
    Expr al = Expr::param("alpha"), b1 = Expr::param("alpha1"), b2 = Expr::param("alpha2");
    auto dd = algebra_structure(compose({Case::DD, "q-d1", "q-d1", 1, 1, al, al}));
    bool ddok = bracket(dd.A, dd.C) == 4 * al.pow(2) * dd.B;
    auto aa = algebra_structure(compose({Case::AA, "q-a3", "q-a3", 1, 1, b1, b2}));
    bool aaok = aa.C.is_zero() && aa.AC.is_zero() && aa.BC.is_zero();
    auto bb = algebra_structure(compose({Case::BB, "q-b1", "q-b1", 1, 1, b1, b2}));
    bool bbok = bb.C_central && bb.AC.is_zero() && bb.BC.is_zero();
    auto C = bb.C.symbol();
    l.detail << "DD(q-d1,q-d1) [A,C] = 4 alpha^2 B: " << (ddok ? "exact" : "no") << "; AA(q-a3,q-a3) C = [A,C] = [B,C] = 0: "
             << (aaok ? "yes" : "no") << "; BB(q-b1,q-b1) C = " << sym::to_infix(C[{0, 0}])
             << " (central), [A,C] = [B,C] = 0: " << (bbok ? "yes" : "no");
    l.require(ddok, "DD");
    l.require(aaok, "AA");
    l.require(bbok, "BB");
    return l;
}

double loglog_slope(const std::vector<double>& tol, const std::vector<double>& r) {
    double n = double(tol.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < tol.size(); ++i) {
        double u = -std::log10(tol[i]), v = std::log10(r[i]);
        sx += u, sy += v, sxx += u * u, sxy += u * v;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Line numeric_exotic() {
    using namespace numeric;
    Line l;
    auto t0 = std::chrono::steady_clock::now();
    det::SolveOptions o;
    o.keep_constants = true;
    auto sk = det::solve(det::generate(Mechanics::Quantum, 3, RelationKind::LadderLower), o);
    // the constant k drops out of D(x C3)
    Expr eq4 = sym::clear_denominators(sym::differentiate(x * sk.potential.equation, sym::var_atom("x")));
    Expr P = Expr::func("P", "x"), P1 = Expr::func("P", "x", 1), P2 = Expr::func("P", "x", 2);
    Expr A = a1.pow(2) / h.pow(4);
    Expr p4 = 2 * P * P2 - P1.pow(2) - 12 * A * P.pow(4) - 16 * A * x * P.pow(3) - 4 * A * x.pow(2) * P.pow(2);
    Expr pot = a1 * P1 + 2 * a1.pow(2) / h.pow(2) * (P.pow(2) + x * P) + a1.pow(2) * x.pow(2) / (2 * h.pow(2));
    Prolongation pr(p4, "P", {});
    auto init = derived_jet(pot, pr, 0.5, {-1.4, 1.8}, 4);
    Params vp{{"beta1", 0}};
    auto H = sk.quantum_H(), K = sk.quantum_K();
    auto plain = integrate_jet(eq4, "V", vp, init, {0.5, 2.5}, 0.25, 1e-8);
    int carry = quantum_residual(H, K, sk.kind, plain).jet_order_used - (plain.order - 1);
    std::vector<double> tols{1e-7, 1e-8, 1e-9, 1e-10}, res;
    bool pole = false;
    for (double tol : tols) {
        auto js = integrate_jet(eq4, "V", vp, init, {0.5, 2.5}, 0.25, tol, carry);
        pole = pole || js.pole.has_value();
        res.push_back(quantum_residual(H, K, sk.kind, js).max_abs);
    }
    double slope = loglog_slope(tols, res), secs = since(t0);
    l.detail << "residual " << res.back() << " at tol 1e-10 on the pole-free window [0.5, 2.5], log-log slope " << slope
             << " (" << secs << " s)";
    // the catalog route: third-order equation with k bound from k1 = k2 = 0
    std::ostringstream out, err;
    cli::run({"numcheck", "--entry", "q-d3", "--format", "json"}, out, err);
    auto j = nlohmann::json::parse(out.str());
    l.detail << "; via the catalog's k-bound third-order equation: " << j["residual"]["max_abs"].get<double>();
    l.require(!pole, "pole-free window");
    l.require(res.back() <= 1e-6, "residual <= 1e-6");
    l.require(slope >= 0.9, "slope >= 0.9");
    l.require(secs < 30, "time < 30 s");
    return l;
}

Line first_integral() {
    using namespace numeric;
    Line l;
    Expr V0 = Expr::func("V", "x"), V1 = Expr::func("V", "x", 1), d = Expr::param("d");
    Expr a2 = a1.pow(2), a4 = a1.pow(4);
    Expr ode = 24 * x * V0 * V1 - 4 * a2 * x.pow(3) * V1 - 12 * V0.pow(2) - 12 * a2 * x.pow(2) * V0 + a4 * x.pow(4) + 4 * d;
    Expr Q = 9 * V0.pow(4) - 14 * a2 * x.pow(2) * V0.pow(3) + (Expr(15) / 2 * a4 * x.pow(4) - 6 * d) * V0.pow(2) -
             2 * a2 * x.pow(2) * (Expr(3) / 4 * a4 * x.pow(4) - d) * V0 +
             (a4 * a4 * x.pow(8) / 16 + d * a4 * x.pow(4) / 2 + d * d);
    Expr Iq = Q / x.pow(2);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> v0(1.0, 3.0), dd(-1.0, 1.0);
    double worst = 0;
    int n = 0;
    for (int k = 0; k < 10; ++k) {
        auto s = integrate_jet(ode, "V", {{"d", dd(rng)}}, {v0(rng)}, {0.5, 1.5}, 0.01, 1e-12);
        auto vals = evaluate_along(s, Iq);
        for (auto v : vals) worst = std::max(worst, std::abs(v - vals[0]) / std::max(1.0, std::abs(vals[0])));
        n += s.x.size() > 10;
    }
    l.detail << "10 trajectories of the first-order d3 equation, quartic/x^2 max relative drift " << worst;
    l.require(n == 10, "full trajectories");
    l.require(worst <= 1e-8, "drift <= 1e-8");
    return l;
}

Line properties(std::uint64_t seed) {
    Line l;
    int j1 = testing::jacobi_commutator_failures(seed, 200);
    int j2 = testing::jacobi_poisson_failures(seed + 1, 200);
    int ad = testing::adjoint_antihom_failures(seed + 2, 200);
    int cl = testing::classical_limit_failures(seed + 3, 200);
    l.detail << "200 cases each, seed " << seed << ": failures Jacobi[,] " << j1 << ", Jacobi{,} " << j2
             << ", adjoint " << ad << ", classical limit " << cl;
    l.require(j1 + j2 + ad + cl == 0, "zero failures");
    return l;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::uint64_t seed = 20240607;
    app.add_option("--seed", seed, "seed of the property suites");
    CLI11_PARSE(app, argc, argv);

    std::vector<std::pair<std::string, std::function<Line()>>> criteria = {
        {"determining equations", determining_equations},
        {"Painleve I and a5 reproduction", painleve_reproduction},
        {"d5 resonances", resonances},
        {"catalog soundness", catalog_soundness},
        {"Jauch-Hill compositions", composition},
        {"polynomial algebra", polynomial_algebra},
        {"numeric P4 ladder", numeric_exotic},
        {"classical first integral", first_integral},
        {"property suites", [seed] { return properties(seed); }},
    };
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        Line l;
        try {
            l = criteria[k].second();
        } catch (const std::exception& e) {
            l.ok = false;
            l.detail << "exception: " << e.what();
        }
        failed += !l.ok;
        std::cout << "criterion " << k + 1 << " " << (l.ok ? "PASS" : "FAIL") << " " << criteria[k].first << ": "
                  << l.detail.str() << std::endl;
    }
    return failed ? 1 : 0;
}
