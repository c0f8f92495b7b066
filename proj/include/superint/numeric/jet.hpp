#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>

#include <json.hpp>

#include "superint/det/solve.hpp"
#include "superint/numeric/eval.hpp"

namespace superint::numeric {

struct SingularityInWindow : NumericError {
    double x;
    SingularityInWindow(const std::string& what, double at) : NumericError(what), x(at) {}
};
struct JetOrderInsufficient : NumericError {
    using NumericError::NumericError;
};

// Derivatives of an unknown beyond the order of its ODE, from the
// differentiated equation: u^(n+k) = -rest_k / separant.
class Prolongation {
public:
    Prolongation(const Expr& ode, const std::string& unknown, const Params& p, int extra = 12,
                 const std::string& var = "x");
    int order() const { return n_; }
    int max_order() const { return n_ + int(rest_.size()) - 1; }
    AtomId unknown() const { return unknown_; }
    // fills jet[n..K] from jet[0..n-1] at x; jet is resized to K+1
    void extend(double x, std::vector<cplx>& jet, int K) const;
    // like extend, but entries already present above n-1 are kept
    void complete(double x, std::vector<cplx>& jet, int K) const;
    // u^(n) from the lower jet
    cplx top(double x, const cplx* lower) const;
    const Expr& equation() const { return ode_; }
    const Params& params() const { return params_; }

private:
    Expr ode_;
    AtomId unknown_;
    AtomId var_;
    int n_ = 0;
    Params params_;
    SlotMap slots_;
    std::vector<cplx> base_;
    int x_slot_ = 0;
    std::vector<int> jet_slot_;
    Evaluator separant_;
    std::vector<Evaluator> rest_;
};

struct JetSolution {
    std::string unknown;
    int order = 0;
    std::vector<double> x;
    int carry = 0;                       // derivatives above order-1 integrated as state
    std::vector<std::vector<cplx>> jet;  // jet[i][0..order-1+carry]
    Params params;
    std::vector<cplx> init;
    std::pair<double, double> window;
    double requested_end = 0;
    double tol = 0;
    std::optional<double> pole;  // estimated singularity that shrank the window
    // max over interior nodes of |five-point derivative of u^(j) - u^(j+1)|
    double jet_inconsistency = 0;
    std::shared_ptr<const Prolongation> prolongation;

    // derivatives 0..K at node i
    std::vector<cplx> full_jet(size_t i, int K) const;
};

// Adaptive Fehlberg 7(8) integration of an ODE solvable for its highest
// derivative, sampled on a uniform grid of spacing `step`. A blow-up shrinks
// the window to stop short of the estimated pole. With carry > 0 the
// derivatives n..n+carry-1 are integrated as state rather than recomputed
// from the equation, so residuals built on them see the integration error.
JetSolution integrate_jet(const Expr& ode, const std::string& unknown, const Params& params,
                          const std::vector<cplx>& init, std::pair<double, double> window, double step, double tol,
                          int carry = 0);
JetSolution integrate_jet(const det::PotentialSpec& spec, const Params& params, const std::vector<cplx>& init,
                          std::pair<double, double> window, double step, double tol, int carry = 0);

// derivatives 0..K-1 at x of target(x, u-jet), given the u-jet init at x
std::vector<cplx> derived_jet(const Expr& target, const Prolongation& p, double x, const std::vector<cplx>& init, int K);

// expr(x, jet) at every node
std::vector<cplx> evaluate_along(const JetSolution& s, const Expr& e);

void write_csv(const JetSolution& s, std::ostream& out, int K = -1);
nlohmann::json to_json(const JetSolution& s);

}  // namespace superint::numeric
