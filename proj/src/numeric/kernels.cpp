#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "superint/numeric/residual.hpp"

namespace superint::numeric {

namespace {

double node_max(const GridProblem& g, size_t i) {
    std::vector<cplx> v = g.base;
    const auto& n = g.nodes[i];
    if (g.x_slot >= 0) v[g.x_slot] = n.x;
    if (g.y_slot >= 0) v[g.y_slot] = n.y;
    if (g.prolongation) {
        std::vector<cplx> jet = n.jet;
        g.prolongation->complete(n.x, jet, g.jet_order);
        for (size_t k = 0; k < g.jet_slots.size() && k < jet.size(); ++k)
            if (g.jet_slots[k] >= 0) v[g.jet_slots[k]] = jet[k];
    }
    std::vector<cplx> c(g.coeffs.size());
    for (size_t k = 0; k < c.size(); ++k) c[k] = g.coeffs[k](v.data());
    double m = 0;
    for (const auto& w : n.weights) {
        cplx s = 0;
        for (size_t k = 0; k < c.size(); ++k) s += c[k] * w[k];
        m = std::max(m, std::abs(s));
    }
    return m;
}

void merge(GridResult& r, double m, size_t i) {
    if (m > r.max_abs || (m == r.max_abs && i < r.argmax)) {
        r.max_abs = m;
        r.argmax = i;
    }
}

double drift_one(const TrajectoryProblem& t, const std::array<double, 4>& init) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<double>;
    auto eval = [&](const Evaluator& e, const State& s) {
        std::vector<cplx> v = t.base;
        for (int k = 0; k < 4; ++k)
            if (t.slots[k] >= 0) v[t.slots[k]] = s[k];
        return e(v.data()).real();
    };
    auto rhs = [&](const State& s, State& ds, double) {
        ds.resize(4);
        ds[0] = eval(t.dH[2], s);
        ds[1] = eval(t.dH[3], s);
        ds[2] = -eval(t.dH[0], s);
        ds[3] = -eval(t.dH[1], s);
    };
    State s(init.begin(), init.end());
    double K0 = eval(t.K, s), worst = 0;
    auto obs = [&](const State& st, double) { worst = std::max(worst, std::abs(eval(t.K, st) - K0)); };
    auto stepper = odeint::make_controlled(t.tol, t.tol, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_const(stepper, rhs, s, 0.0, t.T, t.T / t.samples, obs);
    return worst / std::max(1.0, std::abs(K0));
}

}  // namespace

namespace serial {

GridResult grid_max(const GridProblem& g) {
    GridResult r;
    for (size_t i = 0; i < g.nodes.size(); ++i) merge(r, node_max(g, i), i);
    return r;
}

std::vector<double> trajectory_drifts(const TrajectoryProblem& t) {
    std::vector<double> out(t.inits.size());
    for (size_t i = 0; i < t.inits.size(); ++i) out[i] = drift_one(t, t.inits[i]);
    return out;
}

}  // namespace serial

namespace parallel {

GridResult grid_max(const GridProblem& g) {
    GridResult r;
    long n = long(g.nodes.size());
#pragma omp parallel
    {
        GridResult local;
#pragma omp for schedule(static)
        for (long i = 0; i < n; ++i) merge(local, node_max(g, size_t(i)), size_t(i));
#pragma omp critical
        merge(r, local.max_abs, local.argmax);
    }
    return r;
}

std::vector<double> trajectory_drifts(const TrajectoryProblem& t) {
    std::vector<double> out(t.inits.size());
    long n = long(t.inits.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = drift_one(t, t.inits[i]);
    return out;
}

}  // namespace parallel

GridResult grid_max(const GridProblem& g, Backend b) {
    return b == Backend::Serial ? serial::grid_max(g) : parallel::grid_max(g);
}

std::vector<double> trajectory_drifts(const TrajectoryProblem& t, Backend b) {
    return b == Backend::Serial ? serial::trajectory_drifts(t) : parallel::trajectory_drifts(t);
}

}  // namespace superint::numeric
