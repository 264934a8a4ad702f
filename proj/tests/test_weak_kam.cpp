#include <doctest.h>

#include "oracles.hpp"
#include "wkam/error.hpp"
#include "wkam/verify.hpp"
#include "wkam/weak_kam.hpp"

using namespace wkam;

namespace {

const Potential cosine = Potential::one_body(PeriodicFunction::cosine());

SolveOptions options(unsigned threads = 0) {
    SolveOptions o;
    o.threads = threads;
    return o;
}

struct Pendulum {
    GridStateSpace space{1, 256};
    WeakKamSolution sol = solve(space, cosine, options());
    LaxOleinik op{space, cosine, step_plan(options())};
};

const Pendulum& pendulum() {
    static const Pendulum p;
    return p;
}

}  // namespace

TEST_CASE("zero potential") {
    const GridStateSpace space(2, 12);
    const WeakKamSolution sol = solve(space, Potential::zero(), options());
    CHECK(sol.converged);
    CHECK(sol.lambda == 0.0);
    for (double x : sol.u) CHECK(x == 0.0);
    const LaxOleinik op(space, Potential::zero(), step_plan(options()));
    const CalibratedChain chain = calibrated_curve(op, sol, 17, 0.5);
    for (std::size_t s : chain.states) CHECK(s == 17);
    CHECK(chain.max_defect == 0.0);
    CHECK(lipschitz_check(space, sol, Potential::zero()).empirical == 0.0);
    const DominationReport dom = check_domination(op, sol, Potential::zero(), 50, 3);
    CHECK(dom.worst_violation <= 0.0);
    CHECK(dom.passed);
}

TEST_CASE("pendulum critical value and profile") {
    const Pendulum& p = pendulum();
    CHECK(p.sol.converged);
    CHECK(std::abs(p.sol.lambda - 1.0) <= 0.03);
    CHECK(p.sol.residual <= 1e-9);
    CHECK(p.sol.u[p.sol.reference_state] == 0.0);
    double err = 0.0, closed = 0.0;
    for (std::size_t s = 0; s < p.space.size(); ++s) {
        const double x = p.space.config(s)[0];
        err = std::max(err, std::abs(p.sol.u[s] - oracle::pendulum_u(x)));
        closed = std::max(closed, std::abs(pendulum_solution(x) - oracle::pendulum_u(x)));
    }
    CHECK(err <= 0.05);
    CHECK(closed <= 1e-9);
}

TEST_CASE("fixed point and calibration") {
    const Pendulum& p = pendulum();
    CHECK(fixed_point_residual(p.op, p.sol.u, p.sol.lambda) == p.sol.residual);
    double worst = 0.0;
    for (std::size_t s = 0; s < p.space.size(); s += 5) {
        const CalibratedChain chain = calibrated_curve(p.op, p.sol, s, 10.0);
        CHECK(chain.states.size() == 1001);
        CHECK(chain.curve.times().front() == doctest::Approx(-10.0));
        CHECK(chain.curve.times().back() == 0.0);
        worst = std::max(worst, chain.max_defect);
    }
    CHECK(worst <= p.sol.residual + 1e-12);

    // one step: the defect is |u(M) - T u(M) - lambda dt|
    const std::vector<double> tu = p.op.apply(p.sol.u);
    const CalibratedChain one = calibrated_curve(p.op, p.sol, 40, 0.01);
    CHECK(one.max_defect == doctest::Approx(std::abs(p.sol.u[40] - tu[40] - p.sol.lambda * 0.01)).epsilon(1e-6));

    // the maximum of W is an equilibrium
    const CalibratedChain top = calibrated_curve(p.op, p.sol, 0, 2.0);
    for (std::size_t s : top.states) CHECK(s == 0);

    CHECK_THROWS_AS(calibrated_curve(p.op, p.sol, 0, 0.015), Error);
    CHECK_THROWS_AS(calibrated_curve(p.op, p.sol, 999, 1.0), Error);
}

TEST_CASE("domination and Lipschitz bounds") {
    const Pendulum& p = pendulum();
    const DominationReport dom = check_domination(p.op, p.sol, cosine, 100, 42);
    CHECK(dom.curves_tested == 100);
    CHECK(dom.worst_violation <= dom.slack);
    CHECK(dom.slack == doctest::Approx(2.0 * (0.01 + 1.0 / 256.0)));
    CHECK(dom.statewise_worst <= p.sol.residual + 1e-12);
    CHECK(dom.passed);
    CHECK(domination_violation(p.space, p.sol, cosine, dom.worst_states, dom.worst_times) == dom.worst_violation);

    const LipschitzReport lip = lipschitz_check(p.space, p.sol, cosine);
    CHECK(lip.passed);
    CHECK(lip.bound == doctest::Approx(1.5 + p.sol.lambda));
    CHECK(lip.implied_domination == doctest::Approx(0.5 * lip.empirical * lip.empirical + 1.0));
}

TEST_CASE("scaled pendulum") {
    const GridStateSpace space(1, 128);
    for (double a : {0.5, 2.0}) {
        const Potential w = Potential::one_body(PeriodicFunction::cosine(a));
        const WeakKamSolution sol = solve(space, w, options());
        CHECK(std::abs(sol.lambda - a) <= 0.03 * a);
        const LipschitzReport lip = lipschitz_check(space, sol, w);
        CHECK(lip.bound == doctest::Approx(0.5 + a + sol.lambda));
        CHECK(lip.passed);
    }
}

TEST_CASE("shifting the potential shifts lambda") {
    const GridStateSpace space(1, 64);
    const WeakKamSolution a = solve(space, cosine, options());
    const WeakKamSolution b = solve(space, cosine.shifted(0.37), options());
    CHECK(std::abs(b.lambda - a.lambda - 0.37) <= 1e-9);
    for (std::size_t s = 0; s < space.size(); ++s) CHECK(b.u[s] == doctest::Approx(a.u[s]).epsilon(1e-9));
}

TEST_CASE("two particles in a one-body potential") {
    const GridStateSpace space(2, 32);
    const WeakKamSolution sol = solve(space, cosine, options());
    CHECK(std::abs(sol.lambda - 1.0) <= 0.05);
}

TEST_CASE("solutions do not depend on the thread count") {
    const GridStateSpace space(2, 20);
    const Potential w = Potential::sum({cosine, Potential::pairwise(PeriodicFunction::shifted_cosine(0.3, 0.5))});
    const WeakKamSolution a = solve(space, w, options(1));
    const WeakKamSolution b = solve(space, w, options(6));
    CHECK(a.u == b.u);
    CHECK(a.lambda == b.lambda);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("non-convergence is reported") {
    const GridStateSpace space(1, 64);
    SolveOptions o = options();
    o.max_iters = 3;
    const WeakKamSolution sol = solve(space, cosine, o);
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 3);
    CHECK(sol.history.size() == 3);
}
