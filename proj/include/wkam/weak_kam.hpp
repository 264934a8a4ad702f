#pragma once

// Weak KAM pair (u, lambda) with u = T u + lambda dt on a grid state space,
// calibrated chains, and checks of the dominated-function inequalities.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "wkam/action.hpp"
#include "wkam/grid.hpp"
#include "wkam/lax_oleinik.hpp"
#include "wkam/potential.hpp"

namespace wkam {

struct SolveOptions {
    double dt = 0.01;
    double tol = 1e-9;
    std::size_t max_iters = 200000;
    unsigned threads = 0;
    std::optional<double> prune_radius;
    TieBreak tie_break = TieBreak::smallest_id;
};

struct SweepRecord {
    std::size_t iteration = 0;
    double lambda = 0.0;  // mean per-sweep decrease / dt
    double spread = 0.0;  // max - min of the per-sweep decrease
};

struct WeakKamSolution {
    std::vector<double> u;           // u(reference_state) == 0
    double lambda = 0.0;
    double dt = 0.0;
    double residual = 0.0;           // sup |T u + lambda dt - u|
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t reference_state = 0;
    std::vector<SweepRecord> history;
};

StepPlan step_plan(const SolveOptions& opts);

/// Value iteration from v = 0 until the per-sweep shift is constant to within tol.
/// A run that hits max_iters returns its last iterate with converged == false.
WeakKamSolution solve(const GridStateSpace& space, const Potential& w, const SolveOptions& opts);

/// sup over states of |(T u)(M) + lambda dt - u(M)|.
double fixed_point_residual(const LaxOleinik& op, const std::vector<double>& u, double lambda);

struct CalibratedChain {
    std::vector<std::size_t> states;  // states[j] is the chain at time -j dt
    Curve curve;                      // time-ordered, from -horizon to 0
    std::vector<double> defects;      // defects[j] for the step states[j+1] -> states[j]
    double max_defect = 0.0;
};

CalibratedChain calibrated_curve(const LaxOleinik& op, const WeakKamSolution& sol, std::size_t state,
                                 double horizon);

struct DominationReport {
    double c = 0.0;
    std::size_t curves_tested = 0;
    double worst_violation = 0.0;        // max of u(end) - u(start) - action - c (b - a)
    double slack = 0.0;                  // allowance for quadrature and grid error
    double statewise_worst = 0.0;        // max of u - T u - c dt over states
    double lipschitz_estimate = 0.0;
    std::vector<std::size_t> worst_states;
    std::vector<double> worst_times;
    bool passed = false;
};

/// Random piecewise-linear curves between grid states, plus the exact
/// state-wise form u <= T u + lambda dt.
DominationReport check_domination(const LaxOleinik& op, const WeakKamSolution& sol, const Potential& w,
                                  std::size_t samples, std::uint64_t seed);

/// Recomputes the domination violation of a stored curve.
double domination_violation(const GridStateSpace& space, const WeakKamSolution& sol, const Potential& w,
                            const std::vector<std::size_t>& states, const std::vector<double>& times);

struct LipschitzReport {
    double empirical = 0.0;            // max over adjacent states of |u(A) - u(B)| / d(A, B)
    double bound = 0.0;                // 1/2 + K0 + lambda
    double slack = 0.0;
    double implied_domination = 0.0;   // empirical^2 / 2 + K0
    std::size_t pairs = 0;
    bool passed = false;
};

LipschitzReport lipschitz_check(const GridStateSpace& space, const WeakKamSolution& sol, const Potential& w);

/// Grid and time-step allowance 2 (dt + 1/m) K0 used by the checks above.
double grid_slack(const GridStateSpace& space, double dt, double k0);

}  // namespace wkam
