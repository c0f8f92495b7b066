#include "superint/numeric/residual.hpp"

#include <cmath>

namespace superint::numeric {

namespace {

const AtomId& X() {
    static const AtomId a = sym::var_atom("x");
    return a;
}
const AtomId& Y() {
    static const AtomId a = sym::var_atom("y");
    return a;
}

void reject_functions(const SlotMap& slots, const std::set<AtomId>& allowed) {
    for (AtomId a : slots.atoms())
        if (sym::atom_info(a).kind == sym::AtomKind::Func && !allowed.count(a))
            throw NumericError("unbound function " + sym::atom_info(a).name + " in coefficients");
}

// the D-coefficients as weight-aligned expressions, and their max jet order
struct Coeffs {
    std::vector<Expr> exprs;
    std::vector<int> orders;  // l for each expression
};

Coeffs coeffs_of(const op::DiffOp& C) {
    Coeffs out;
    for (int l = 0; l <= C.order(); ++l)
        if (!C.coeff(l).is_zero()) {
            out.exprs.push_back(C.coeff(l));
            out.orders.push_back(l);
        }
    return out;
}

Coeffs coeffs_of(const op::PhasePoly& C) {
    Coeffs out;
    for (int l = 0; l <= C.order(); ++l)
        if (!C.coeff(l).is_zero()) {
            out.exprs.push_back(C.coeff(l));
            out.orders.push_back(l);
        }
    return out;
}

void attach_jet(GridProblem& g, SlotMap& slots, const Coeffs& c, const Prolongation& p) {
    int need = -1;
    for (const auto& e : c.exprs) need = std::max(need, sym::max_order(e, p.unknown()));
    if (need > p.max_order()) throw JetOrderInsufficient("coefficients need derivative order " + std::to_string(need));
    g.prolongation = &p;
    g.jet_order = std::max(need, p.order() - 1);
    std::set<AtomId> allowed;
    for (int k = 0; k <= g.jet_order; ++k) {
        AtomId a = sym::func_derivative(p.unknown(), k);
        allowed.insert(a);
        g.jet_slots.push_back(slots.slot(a));
    }
    reject_functions(slots, allowed);
}

ResidualReport finish(const GridProblem& g, Backend b) {
    auto r = grid_max(g, b);
    ResidualReport rep;
    rep.max_abs = r.max_abs;
    rep.points = g.nodes.size();
    rep.jet_order_used = g.jet_order;
    if (!g.nodes.empty()) {
        rep.at_x = g.nodes[r.argmax].x;
        rep.at_y = g.nodes[r.argmax].y;
    }
    return rep;
}

std::vector<cplx> test_weights(const TestFunction& t, double x, const std::vector<int>& orders) {
    int K = 0;
    for (int l : orders) K = std::max(K, l);
    auto d = t.derivatives(x, K);
    std::vector<cplx> w;
    for (int l : orders) w.push_back(d[l]);
    return w;
}

std::vector<cplx> power_weights(double p, const std::vector<int>& orders) {
    std::vector<cplx> w;
    for (int l : orders) w.push_back(std::pow(p, l));
    return w;
}

Expr evaluate_phase(const op::PhasePoly2& a) {
    Expr px = Expr::param("_px"), py = Expr::param("_py"), out;
    for (const auto& [ij, c] : a.coeffs()) out += c * px.pow(ij.first) * py.pow(ij.second);
    return out;
}

}  // namespace

std::vector<double> TestFunction::derivatives(double x, int K) const {
    double s = (x - center) / width, g = std::exp(-s * s);
    // g^(k) = (-1)^k H_k(s) g / width^k
    std::vector<double> gk(K + 1), Hk(K + 2);
    Hk[0] = 1;
    if (K >= 0) Hk[1] = 2 * s;
    for (int k = 1; k + 1 <= K; ++k) Hk[k + 1] = 2 * s * Hk[k] - 2 * k * Hk[k - 1];
    for (int k = 0; k <= K; ++k) gk[k] = ((k % 2) ? -1.0 : 1.0) * Hk[k] * g / std::pow(width, k);
    // d^j x^power
    auto mono = [&](int j) {
        if (j > power) return 0.0;
        double c = 1;
        for (int i = 0; i < j; ++i) c *= power - i;
        return c * std::pow(x, power - j);
    };
    std::vector<double> out(K + 1, 0.0);
    for (int n = 0; n <= K; ++n) {
        double binom = 1;
        for (int k = 0; k <= n; ++k) {
            out[n] += binom * mono(n - k) * gk[k];
            binom = binom * (n - k) / (k + 1);
        }
    }
    return out;
}

std::vector<TestFunction> default_tests(double center) {
    return {{center, 1, 0}, {center, 1, 1}, {center, 1, 2}};
}

ResidualReport quantum_residual(const op::DiffOp& H, const op::DiffOp& K, const op::AlgebraRelation& rel,
                                const JetSolution& jet, const std::vector<TestFunction>& tests, Backend b) {
    Coeffs c = coeffs_of(op::commutator(H, K) - op::relation_rhs(H, K, rel));
    GridProblem g;
    SlotMap slots;
    g.x_slot = slots.slot(X());
    for (const auto& e : c.exprs) g.coeffs.emplace_back(e, slots);
    attach_jet(g, slots, c, *jet.prolongation);
    g.base = slots.bind(jet.params);
    auto ts = tests.empty() ? default_tests(0.5 * (jet.window.first + jet.window.second)) : tests;
    for (size_t i = 0; i < jet.x.size(); ++i) {
        GridProblem::Node n{jet.x[i], 0, jet.jet[i], {}};
        for (const auto& t : ts) n.weights.push_back(test_weights(t, jet.x[i], c.orders));
        g.nodes.push_back(std::move(n));
    }
    return finish(g, b);
}

ResidualReport quantum_residual(const op::DiffOp& H, const op::DiffOp& K, const op::AlgebraRelation& rel,
                                const Params& p, const std::vector<double>& grid,
                                const std::vector<TestFunction>& tests, Backend b) {
    Coeffs c = coeffs_of(op::commutator(H, K) - op::relation_rhs(H, K, rel));
    GridProblem g;
    SlotMap slots;
    g.x_slot = slots.slot(X());
    for (const auto& e : c.exprs) g.coeffs.emplace_back(e, slots);
    reject_functions(slots, {});
    g.base = slots.bind(p);
    double mid = grid.empty() ? 0 : 0.5 * (grid.front() + grid.back());
    auto ts = tests.empty() ? default_tests(mid) : tests;
    for (double x : grid) {
        GridProblem::Node n{x, 0, {}, {}};
        for (const auto& t : ts) n.weights.push_back(test_weights(t, x, c.orders));
        g.nodes.push_back(std::move(n));
    }
    return finish(g, b);
}

ResidualReport quantum_residual2(const op::DiffOp2& H, const op::DiffOp2& K, const Params& p,
                                 const std::vector<std::pair<double, double>>& grid,
                                 const std::vector<std::pair<TestFunction, TestFunction>>& tests, Backend b) {
    op::DiffOp2 C = op::commutator(H, K);
    GridProblem g;
    SlotMap slots;
    g.x_slot = slots.slot(X());
    g.y_slot = slots.slot(Y());
    std::vector<Index2> idx;
    int Kx = 0, Ky = 0;
    for (const auto& [ij, e] : C.coeffs()) {
        idx.push_back(ij);
        g.coeffs.emplace_back(e, slots);
        Kx = std::max(Kx, ij.first);
        Ky = std::max(Ky, ij.second);
    }
    reject_functions(slots, {});
    g.base = slots.bind(p);
    for (auto [x, y] : grid) {
        GridProblem::Node n{x, y, {}, {}};
        for (const auto& [tx, ty] : tests) {
            auto dx = tx.derivatives(x, Kx), dy = ty.derivatives(y, Ky);
            std::vector<cplx> w;
            for (auto [i, j] : idx) w.push_back(dx[i] * dy[j]);
            n.weights.push_back(std::move(w));
        }
        g.nodes.push_back(std::move(n));
    }
    return finish(g, b);
}

ResidualReport classical_residual(const op::PhasePoly& H, const op::PhasePoly& K, const op::AlgebraRelation& rel,
                                  const JetSolution& jet, const std::vector<double>& momenta, Backend b) {
    Coeffs c = coeffs_of(op::poisson(H, K) - op::relation_rhs(H, K, rel));
    GridProblem g;
    SlotMap slots;
    g.x_slot = slots.slot(X());
    for (const auto& e : c.exprs) g.coeffs.emplace_back(e, slots);
    attach_jet(g, slots, c, *jet.prolongation);
    g.base = slots.bind(jet.params);
    for (size_t i = 0; i < jet.x.size(); ++i) {
        GridProblem::Node n{jet.x[i], 0, jet.jet[i], {}};
        for (double pm : momenta) n.weights.push_back(power_weights(pm, c.orders));
        g.nodes.push_back(std::move(n));
    }
    return finish(g, b);
}

ResidualReport classical_residual(const op::PhasePoly& H, const op::PhasePoly& K, const op::AlgebraRelation& rel,
                                  const Params& p, const std::vector<std::pair<double, double>>& points, Backend b) {
    Coeffs c = coeffs_of(op::poisson(H, K) - op::relation_rhs(H, K, rel));
    GridProblem g;
    SlotMap slots;
    g.x_slot = slots.slot(X());
    for (const auto& e : c.exprs) g.coeffs.emplace_back(e, slots);
    reject_functions(slots, {});
    g.base = slots.bind(p);
    for (auto [x, pm] : points) g.nodes.push_back({x, 0, {}, {power_weights(pm, c.orders)}});
    return finish(g, b);
}

std::vector<double> trajectory_drift(const op::PhasePoly2& H, const op::PhasePoly2& K, const Params& p,
                                     const std::vector<std::array<double, 4>>& inits, double T, double tol,
                                     Backend b) {
    TrajectoryProblem t;
    SlotMap slots;
    t.slots[0] = slots.slot(X());
    t.slots[1] = slots.slot(Y());
    t.slots[2] = slots.slot(sym::param_atom("_px"));
    t.slots[3] = slots.slot(sym::param_atom("_py"));
    t.dH[0] = Evaluator(evaluate_phase(H.d_x()), slots);
    t.dH[1] = Evaluator(evaluate_phase(H.d_y()), slots);
    t.dH[2] = Evaluator(evaluate_phase(H.d_px()), slots);
    t.dH[3] = Evaluator(evaluate_phase(H.d_py()), slots);
    t.K = Evaluator(evaluate_phase(K), slots);
    reject_functions(slots, {});
    Params q = p;
    q["_px"] = 0;
    q["_py"] = 0;
    t.base = slots.bind(q);
    t.inits = inits;
    t.T = T;
    t.tol = tol;
    t.samples = 200;
    return trajectory_drifts(t, b);
}

nlohmann::json to_json(const ResidualReport& r) {
    return {{"max_abs", r.max_abs},
            {"at_x", r.at_x},
            {"at_y", r.at_y},
            {"points", r.points},
            {"jet_order_used", r.jet_order_used}};
}

}  // namespace superint::numeric
