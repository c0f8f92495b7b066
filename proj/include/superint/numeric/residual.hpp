#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "superint/numeric/jet.hpp"
#include "superint/op/op2.hpp"
#include "superint/op/relation.hpp"

namespace superint::numeric {

using op::Index2;

// x^power exp(-((x - center)/width)^2)
struct TestFunction {
    double center = 0;
    double width = 1;
    int power = 0;
    // psi, psi', ..., psi^(K) at x
    std::vector<double> derivatives(double x, int K) const;
};

// exp(-(x - c)^2) times 1, x, x^2
std::vector<TestFunction> default_tests(double center);

enum class Backend { Serial, Parallel };

// Max-abs evaluation of sum_k c_k(point) w_k over points and weight sets.
// Quantum: c are the D-coefficients of an operator, w the test-function
// derivatives. Classical: c are momentum coefficients, w momentum powers.
struct GridProblem {
    struct Node {
        double x = 0, y = 0;
        std::vector<cplx> jet;                  // lower jet of the unknown, if any
        std::vector<std::vector<cplx>> weights; // one per test, aligned with coeffs
    };
    std::vector<cplx> base;
    int x_slot = -1, y_slot = -1;
    const Prolongation* prolongation = nullptr;
    std::vector<int> jet_slots;
    int jet_order = -1;
    std::vector<Evaluator> coeffs;
    std::vector<Node> nodes;
};

struct GridResult {
    double max_abs = 0;
    size_t argmax = 0;
};

struct TrajectoryProblem {
    // H and K as evaluators of (x, y, px, py)
    std::vector<cplx> base;
    int slots[4] = {-1, -1, -1, -1};
    Evaluator dH[4];  // dH/dx, dH/dy, dH/dpx, dH/dpy
    Evaluator K;
    std::vector<std::array<double, 4>> inits;
    double T = 1;
    int samples = 100;
    double tol = 1e-12;
};

namespace serial {
GridResult grid_max(const GridProblem& g);
std::vector<double> trajectory_drifts(const TrajectoryProblem& t);
}  // namespace serial
namespace parallel {
GridResult grid_max(const GridProblem& g);
std::vector<double> trajectory_drifts(const TrajectoryProblem& t);
}  // namespace parallel

GridResult grid_max(const GridProblem& g, Backend b);
std::vector<double> trajectory_drifts(const TrajectoryProblem& t, Backend b);

struct ResidualReport {
    double max_abs = 0;
    double at_x = 0, at_y = 0;
    size_t points = 0;
    int jet_order_used = 0;
};

// ([H,K] - rhs) psi on the nodes of a jet solution
ResidualReport quantum_residual(const op::DiffOp& H, const op::DiffOp& K, const op::AlgebraRelation& rel,
                                const JetSolution& jet, const std::vector<TestFunction>& tests = {},
                                Backend b = Backend::Parallel);
// closed-form coefficients on an explicit grid
ResidualReport quantum_residual(const op::DiffOp& H, const op::DiffOp& K, const op::AlgebraRelation& rel,
                                const Params& p, const std::vector<double>& grid,
                                const std::vector<TestFunction>& tests = {}, Backend b = Backend::Parallel);
// 2D, [H,K] only, product test functions psi_a(x) psi_b(y)
ResidualReport quantum_residual2(const op::DiffOp2& H, const op::DiffOp2& K, const Params& p,
                                 const std::vector<std::pair<double, double>>& grid,
                                 const std::vector<std::pair<TestFunction, TestFunction>>& tests,
                                 Backend b = Backend::Parallel);

// {H,K} - rhs at phase points (x_i, p) for every p in momenta
ResidualReport classical_residual(const op::PhasePoly& H, const op::PhasePoly& K, const op::AlgebraRelation& rel,
                                  const JetSolution& jet, const std::vector<double>& momenta,
                                  Backend b = Backend::Parallel);
ResidualReport classical_residual(const op::PhasePoly& H, const op::PhasePoly& K, const op::AlgebraRelation& rel,
                                  const Params& p, const std::vector<std::pair<double, double>>& points,
                                  Backend b = Backend::Parallel);

// relative drift max_t |K(t) - K(0)| / max(1, |K(0)|) along Hamilton's flow
// of a closed-form 2D Hamiltonian, one value per initial point
std::vector<double> trajectory_drift(const op::PhasePoly2& H, const op::PhasePoly2& K, const Params& p,
                                     const std::vector<std::array<double, 4>>& inits, double T, double tol,
                                     Backend b = Backend::Parallel);

nlohmann::json to_json(const ResidualReport& r);

}  // namespace superint::numeric
