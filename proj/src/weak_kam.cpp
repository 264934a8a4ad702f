#include "wkam/weak_kam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wkam/error.hpp"

namespace wkam {

StepPlan step_plan(const SolveOptions& opts) {
    StepPlan plan;
    plan.dt = opts.dt;
    plan.threads = opts.threads;
    plan.prune_radius = opts.prune_radius;
    plan.tie_break = opts.tie_break;
    return plan;
}

double fixed_point_residual(const LaxOleinik& op, const std::vector<double>& u, double lambda) {
    const std::vector<double> tu = op.apply(u);
    const double shift = lambda * op.plan().dt;
    double r = 0.0;
    for (std::size_t s = 0; s < u.size(); ++s) r = std::max(r, std::abs(tu[s] + shift - u[s]));
    return r;
}

WeakKamSolution solve(const GridStateSpace& space, const Potential& w, const SolveOptions& opts) {
    if (!(opts.tol > 0.0)) fail(ErrorCode::invalid_argument, "tol must be positive");
    const LaxOleinik op(space, w, step_plan(opts));
    const std::size_t s = space.size();

    WeakKamSolution sol;
    sol.dt = opts.dt;
    sol.reference_state = space.origin();

    std::vector<double> v(s, 0.0), next(s);
    double spread = 0.0;
    for (std::size_t it = 1; it <= opts.max_iters; ++it) {
        op.apply(v, next);
        double lo = 0.0, hi = 0.0, sum = 0.0;
        for (std::size_t k = 0; k < s; ++k) {
            const double d = v[k] - next[k];
            if (!std::isfinite(next[k]))
                fail(ErrorCode::numeric, "non-finite value at state " + std::to_string(k) + " in sweep " +
                                             std::to_string(it));
            if (k == 0 || d < lo) lo = d;
            if (k == 0 || d > hi) hi = d;
            sum += d;
        }
        spread = hi - lo;
        sol.lambda = sum / static_cast<double>(s) / opts.dt;
        sol.iterations = it;
        sol.history.push_back({it, sol.lambda, spread});
        // Renormalizing keeps the iterate O(1); constants commute with T.
        const double ref = next[sol.reference_state];
        for (std::size_t k = 0; k < s; ++k) v[k] = next[k] - ref;
        if (spread < opts.tol) {
            sol.converged = true;
            break;
        }
    }
    sol.u = std::move(v);
    sol.residual = fixed_point_residual(op, sol.u, sol.lambda);
    sol.converged = sol.converged && sol.residual <= opts.tol;
    return sol;
}

CalibratedChain calibrated_curve(const LaxOleinik& op, const WeakKamSolution& sol, std::size_t state,
                                 double horizon) {
    const GridStateSpace& space = op.space();
    const double dt = op.plan().dt;
    if (state >= space.size()) fail(ErrorCode::invalid_argument, "state id out of range");
    if (!(horizon >= 0.0)) fail(ErrorCode::invalid_argument, "horizon must be non-negative");
    const double steps_real = horizon / dt;
    const auto steps = static_cast<std::size_t>(std::llround(steps_real));
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real))
        fail(ErrorCode::invalid_argument, "horizon " + std::to_string(horizon) + " is not a multiple of dt " +
                                              std::to_string(dt));

    CalibratedChain chain;
    chain.states.push_back(state);
    const double shift = sol.lambda * dt;
    for (std::size_t j = 0; j < steps; ++j) {
        const std::size_t cur = chain.states.back();
        const std::size_t pred = op.argmin(sol.u, cur).first;
        const double step_cost = op.kinetic_cost(cur, pred) - op.potential_term(cur);
        const double defect = std::abs(sol.u[cur] - sol.u[pred] - step_cost - shift);
        chain.defects.push_back(defect);
        chain.max_defect = std::max(chain.max_defect, defect);
        chain.states.push_back(pred);
    }

    std::vector<double> times(steps + 1);
    std::vector<LiftedConfig> knots;
    knots.reserve(steps + 1);
    const ParticleConfig first = space.config(chain.states.back());
    knots.emplace_back(std::vector<double>(first.points().begin(), first.points().end()));
    for (std::size_t j = 0; j <= steps; ++j) {
        times[j] = -static_cast<double>(steps - j) * dt;
        if (j > 0) knots.push_back(lift_towards(knots.back(), space.config(chain.states[steps - j])));
    }
    chain.curve = Curve(std::move(times), std::move(knots));
    return chain;
}

double grid_slack(const GridStateSpace& space, double dt, double k0) {
    return 2.0 * (dt + 1.0 / static_cast<double>(space.cells())) * k0;
}

double domination_violation(const GridStateSpace& space, const WeakKamSolution& sol, const Potential& w,
                            const std::vector<std::size_t>& states, const std::vector<double>& times) {
    std::vector<LiftedConfig> knots;
    const ParticleConfig first = space.config(states.front());
    knots.emplace_back(std::vector<double>(first.points().begin(), first.points().end()));
    for (std::size_t j = 1; j < states.size(); ++j) knots.push_back(lift_towards(knots.back(), space.config(states[j])));
    const Curve curve(times, std::move(knots));
    const ActionReport a = action(curve, w);
    return sol.u[states.back()] - sol.u[states.front()] - a.total - sol.lambda * curve.duration();
}

LipschitzReport lipschitz_check(const GridStateSpace& space, const WeakKamSolution& sol, const Potential& w) {
    LipschitzReport r;
    const double k0 = w.certify_bound();
    for (std::size_t a = 0; a < space.size(); ++a) {
        for (std::size_t b : space.neighbors(a)) {
            if (b <= a) continue;
            const double d = std::sqrt(space.dist_sq(a, b));
            r.empirical = std::max(r.empirical, std::abs(sol.u[a] - sol.u[b]) / d);
            ++r.pairs;
        }
    }
    r.bound = 0.5 + k0 + sol.lambda;
    r.slack = grid_slack(space, sol.dt, k0);
    r.implied_domination = 0.5 * r.empirical * r.empirical + k0;
    r.passed = r.empirical <= r.bound + r.slack;
    return r;
}

DominationReport check_domination(const LaxOleinik& op, const WeakKamSolution& sol, const Potential& w,
                                  std::size_t samples, std::uint64_t seed) {
    const GridStateSpace& space = op.space();
    const double dt = op.plan().dt;
    DominationReport r;
    r.c = sol.lambda;
    r.slack = grid_slack(space, dt, w.certify_bound());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> any_state(0, space.size() - 1);
    std::uniform_int_distribution<int> segments(1, 6);
    std::uniform_int_distribution<int> hops(1, 3);
    std::uniform_real_distribution<double> duration(dt, 1.0);
    std::bernoulli_distribution local(0.5);

    bool first = true;
    for (std::size_t k = 0; k < samples; ++k) {
        std::vector<std::size_t> states{any_state(rng)};
        std::vector<double> times{0.0};
        const int nseg = segments(rng);
        for (int j = 0; j < nseg; ++j) {
            std::size_t next = any_state(rng);
            if (local(rng)) {
                // Short walk along grid neighbours: probes the nearly calibrated regime.
                next = states.back();
                for (int h = hops(rng); h > 0; --h) {
                    const std::vector<std::size_t> nb = space.neighbors(next);
                    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
                    next = nb[pick(rng)];
                }
            }
            states.push_back(next);
            times.push_back(times.back() + duration(rng));
        }
        const double v = domination_violation(space, sol, w, states, times);
        ++r.curves_tested;
        if (first || v > r.worst_violation) {
            r.worst_violation = v;
            r.worst_states = states;
            r.worst_times = times;
            first = false;
        }
    }

    const std::vector<double> tu = op.apply(sol.u);
    const double shift = sol.lambda * dt;
    r.statewise_worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sol.u.size(); ++s) r.statewise_worst = std::max(r.statewise_worst, sol.u[s] - tu[s] - shift);

    r.lipschitz_estimate = lipschitz_check(space, sol, w).empirical;
    r.passed = r.worst_violation <= r.slack && r.statewise_worst <= sol.residual + 1e-12;
    return r;
}

}  // namespace wkam
