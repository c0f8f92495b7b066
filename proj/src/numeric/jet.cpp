#include "superint/numeric/jet.hpp"

#include <cmath>
#include <ostream>

#include <boost/numeric/odeint.hpp>

#include "superint/sym/serialize.hpp"

namespace superint::numeric {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kBlowUp = 1e12;

struct BlowUp {
    double x;
};

}  // namespace

Prolongation::Prolongation(const Expr& ode, const std::string& unknown, const Params& p, int extra,
                           const std::string& var)
    : params_(p) {
    var_ = sym::var_atom(var);
    unknown_ = sym::func_atom(unknown, var_);
    ode_ = sym::clear_denominators(ode);
    n_ = sym::max_order(ode_, unknown_);
    if (n_ < 1) throw NumericError("equation has no derivative of " + unknown);
    AtomId top = sym::func_derivative(unknown_, n_);
    auto parts = sym::collect(ode_, top);
    if (parts.rbegin()->first != 1 || parts.begin()->first < 0)
        throw NumericError("equation is not linear in its highest derivative");
    Expr S = parts.at(1);
    x_slot_ = slots_.slot(var_);
    for (int k = 0; k <= n_ + extra; ++k) jet_slot_.push_back(slots_.slot(sym::func_derivative(unknown_, k)));
    separant_ = Evaluator(S, slots_);
    Expr E = ode_;
    for (int k = 0; k <= extra; ++k) {
        auto pk = sym::collect(E, sym::func_derivative(unknown_, n_ + k));
        if (pk.rbegin()->first > 1) throw NumericError("prolongation is not linear");
        rest_.emplace_back(pk.count(0) ? pk.at(0) : Expr(), slots_);
        E = sym::differentiate(E, var_);
    }
    base_ = slots_.bind(p);
}

cplx Prolongation::top(double x, const cplx* lower) const {
    std::vector<cplx> v = base_;
    v[x_slot_] = x;
    for (int j = 0; j < n_; ++j) v[jet_slot_[j]] = lower[j];
    return -rest_[0](v.data()) / separant_(v.data());
}

void Prolongation::extend(double x, std::vector<cplx>& jet, int K) const {
    if (K > max_order()) throw JetOrderInsufficient("derivative order " + std::to_string(K) + " beyond prolongation");
    std::vector<cplx> v = base_;
    v[x_slot_] = x;
    for (int j = 0; j < n_; ++j) v[jet_slot_[j]] = jet[j];
    jet.resize(std::max<int>(K + 1, n_));
    if (K < n_) return;
    cplx S = separant_(v.data());
    for (int k = 0; n_ + k <= K; ++k) {
        cplx val = -rest_[k](v.data()) / S;
        v[jet_slot_[n_ + k]] = val;
        jet[n_ + k] = val;
    }
}

void Prolongation::complete(double x, std::vector<cplx>& jet, int K) const {
    if (int(jet.size()) > K) return;
    std::vector<cplx> full(jet.begin(), jet.begin() + n_);
    extend(x, full, K);
    std::copy(jet.begin(), jet.end(), full.begin());
    jet = std::move(full);
}

std::vector<cplx> JetSolution::full_jet(size_t i, int K) const {
    std::vector<cplx> j = jet[i];
    prolongation->complete(x[i], j, K);
    j.resize(K + 1);
    return j;
}

JetSolution integrate_jet(const Expr& ode, const std::string& unknown, const Params& params,
                          const std::vector<cplx>& init, std::pair<double, double> window, double step, double tol,
                          int carry) {
    if (!(tol > 0)) throw NumericError("tolerance must be positive");
    if (!(step > 0) || !(window.second > window.first)) throw NumericError("empty window or step");
    auto pro = std::make_shared<Prolongation>(ode, unknown, params, std::max(12, carry + 2));
    int n = pro->order();
    if (int(init.size()) != n) throw NumericError("need " + std::to_string(n) + " initial values");
    int m = n + carry;

    JetSolution s;
    s.unknown = unknown;
    s.order = n;
    s.carry = carry;
    s.params = params;
    s.init = init;
    s.window = window;
    s.requested_end = window.second;
    s.tol = tol;
    s.prolongation = pro;

    using State = std::vector<cplx>;
    auto rhs = [&](const State& y, State& dy, double x) {
        for (const auto& v : y)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > kBlowUp) throw BlowUp{x};
        dy.resize(m);
        for (int j = 0; j + 1 < m; ++j) dy[j] = y[j + 1];
        if (carry == 0) {
            dy[n - 1] = pro->top(x, y.data());
        } else {
            std::vector<cplx> low(y.begin(), y.begin() + n);
            pro->extend(x, low, m);
            dy[m - 1] = low[m];
        }
    };
    std::vector<double> times;
    long count = long(std::floor((window.second - window.first) / step + 1e-9));
    for (long i = 0; i <= count; ++i) times.push_back(window.first + double(i) * step);

    State y = init;
    if (carry > 0) pro->extend(window.first, y, m - 1);
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
    auto observe = [&](const State& st, double x) {
        s.x.push_back(x);
        s.jet.push_back(st);
    };
    try {
        odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), step / 4, observe);
    } catch (const BlowUp& b) {
        s.pole = b.x;
    } catch (const odeint::step_adjustment_error&) {
        s.pole = s.x.empty() ? window.first : s.x.back() + step;
    } catch (const odeint::no_progress_error&) {
        s.pole = s.x.empty() ? window.first : s.x.back() + step;
    }
    if (s.pole) {
        // keep a margin of a tenth of the distance to the pole
        double keep = *s.pole - 0.1 * (*s.pole - window.first);
        while (!s.x.empty() && s.x.back() > keep) {
            s.x.pop_back();
            s.jet.pop_back();
        }
        if (s.x.size() < 2) throw SingularityInWindow("singularity next to the window start", *s.pole);
        s.window.second = s.x.back();
    }
    // five-point consistency of the carried jet
    for (size_t i = 2; i + 2 < s.x.size(); ++i)
        for (int j = 0; j + 1 < m; ++j) {
            cplx d = (-s.jet[i + 2][j] + 8.0 * s.jet[i + 1][j] - 8.0 * s.jet[i - 1][j] + s.jet[i - 2][j]) / (12 * step);
            s.jet_inconsistency = std::max(s.jet_inconsistency, std::abs(d - s.jet[i][j + 1]));
        }
    return s;
}

JetSolution integrate_jet(const det::PotentialSpec& spec, const Params& params, const std::vector<cplx>& init,
                          std::pair<double, double> window, double step, double tol, int carry) {
    if (spec.variant != det::PotentialVariant::ODE) throw NumericError("potential is not ODE-defined");
    return integrate_jet(spec.equation, spec.unknown, params, init, window, step, tol, carry);
}

std::vector<cplx> derived_jet(const Expr& target, const Prolongation& p, double x, const std::vector<cplx>& init,
                              int K) {
    SlotMap slots;
    int xs = slots.slot(sym::var_atom("x"));
    std::vector<Evaluator> ev;
    Expr e = target;
    int need = 0;
    for (int k = 0; k < K; ++k) {
        need = std::max(need, sym::max_order(e, p.unknown()));
        ev.emplace_back(e, slots);
        e = sym::differentiate(e, sym::var_atom("x"));
    }
    std::vector<cplx> jet = init;
    p.extend(x, jet, std::max(need, p.order() - 1));
    for (int k = 0; k < int(jet.size()); ++k) slots.slot(sym::func_derivative(p.unknown(), k));
    std::vector<cplx> v = slots.bind(p.params());
    v[xs] = x;
    for (int k = 0; k < int(jet.size()); ++k) v[slots.find(sym::func_derivative(p.unknown(), k))] = jet[k];
    std::vector<cplx> out;
    for (const auto& f : ev) out.push_back(f(v.data()));
    return out;
}

std::vector<cplx> evaluate_along(const JetSolution& s, const Expr& e) {
    const auto& p = *s.prolongation;
    SlotMap slots;
    int xs = slots.slot(sym::var_atom("x"));
    int K = std::max(0, sym::max_order(e, p.unknown()));
    std::vector<int> js;
    for (int k = 0; k <= K; ++k) js.push_back(slots.slot(sym::func_derivative(p.unknown(), k)));
    Evaluator f(e, slots);
    std::vector<cplx> base = slots.bind(s.params), out;
    for (size_t i = 0; i < s.x.size(); ++i) {
        auto jet = s.full_jet(i, K);
        base[xs] = s.x[i];
        for (int k = 0; k <= K; ++k) base[js[k]] = jet[k];
        out.push_back(f(base.data()));
    }
    return out;
}

void write_csv(const JetSolution& s, std::ostream& out, int K) {
    if (K < 0) K = s.order - 1 + s.carry;
    out << "x";
    for (int k = 0; k <= K; ++k) out << ",re_d" << k << ",im_d" << k;
    out << "\n";
    out.precision(17);
    for (size_t i = 0; i < s.x.size(); ++i) {
        auto j = s.full_jet(i, K);
        out << s.x[i];
        for (int k = 0; k <= K; ++k) out << "," << j[k].real() << "," << j[k].imag();
        out << "\n";
    }
}

nlohmann::json to_json(const JetSolution& s) {
    nlohmann::json j;
    j["unknown"] = s.unknown;
    j["order"] = s.order;
    j["carry"] = s.carry;
    j["equation"] = sym::to_infix(s.prolongation->equation());
    j["window"] = {s.window.first, s.window.second};
    j["requested_end"] = s.requested_end;
    j["nodes"] = s.x.size();
    j["tol"] = s.tol;
    j["pole"] = s.pole ? nlohmann::json(*s.pole) : nlohmann::json();
    j["jet_inconsistency"] = s.jet_inconsistency;
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : s.params) p[k] = {v.real(), v.imag()};
    j["params"] = p;
    nlohmann::json init = nlohmann::json::array();
    for (const auto& v : s.init) init.push_back({v.real(), v.imag()});
    j["init"] = init;
    return j;
}

}  // namespace superint::numeric
