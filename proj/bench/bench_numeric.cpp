#include <random>

#include <benchmark/benchmark.h>

#include "superint/det/solve.hpp"
#include "superint/numeric/residual.hpp"

using namespace superint;
using namespace superint::numeric;
using sym::Expr;

namespace {

const det::SolvedPair& c_d2() {
    static const auto s = det::solve(det::generate(op::Mechanics::Classical, 2, det::RelationKind::LadderLower));
    return s;
}

std::vector<std::pair<double, double>> points(size_t n) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ux(0.2, 3.0), up(-3.0, 3.0);
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < n; ++i) pts.emplace_back(ux(rng), up(rng));
    return pts;
}

void grid(benchmark::State& st, Backend b) {
    const auto& s = c_d2();
    auto pts = points(size_t(st.range(0)));
    Params prm;
    for (const auto& c : s.potential.constants) prm[c] = 0.5;
    auto H = s.classical_H(), K = s.classical_K();
    for (auto _ : st) benchmark::DoNotOptimize(classical_residual(H, K, s.kind, prm, pts, b).max_abs);
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void trajectories(benchmark::State& st, Backend b) {
    Expr x = Expr::var("x"), y = Expr::var("y"), w = Expr::param("omega");
    auto px = op::PhasePoly2::from_x(op::PhasePoly::p());
    auto py = op::PhasePoly2::from_y(op::PhasePoly::p(sym::var_atom("y")));
    auto H = Expr(1) / 2 * (px * px + py * py) + op::PhasePoly2::scalar(w.pow(2) * (x.pow(2) + y.pow(2)));
    auto L = op::PhasePoly2::scalar(x) * py - op::PhasePoly2::scalar(y) * px;
    std::vector<std::array<double, 4>> inits;
    for (int i = 0; i < st.range(0); ++i) inits.push_back({0.5 + 0.01 * i, -0.3, 0.2, 0.1});
    for (auto _ : st) benchmark::DoNotOptimize(trajectory_drift(H, L, {{"omega", 1.0}}, inits, 50, 1e-10, b));
}

}  // namespace

BENCHMARK_CAPTURE(grid, serial, Backend::Serial)->Arg(1000)->Arg(100000);
BENCHMARK_CAPTURE(grid, parallel, Backend::Parallel)->Arg(1000)->Arg(100000);
BENCHMARK_CAPTURE(trajectories, serial, Backend::Serial)->Arg(16);
BENCHMARK_CAPTURE(trajectories, parallel, Backend::Parallel)->Arg(16);

BENCHMARK_MAIN();
