// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "cli.hpp"
#include "oracles.hpp"
#include "wkam/geometry.hpp"
#include "wkam/lax_oleinik.hpp"
#include "wkam/tonelli.hpp"
#include "wkam/weak_kam.hpp"

using namespace wkam;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t s) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(s);
    for (double& x : v) x = u(rng);
    return v;
}

const Potential cosine = Potential::one_body(PeriodicFunction::cosine());

StepPlan plan(double dt) {
    StepPlan p;
    p.dt = dt;
    return p;
}

Outcome operator_laws() {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> steps(1, 6);
    std::size_t bad = 0, pairs = 0;
    double worst = 0.0;
    for (const GridStateSpace& space : {GridStateSpace(1, 64), GridStateSpace(2, 16)}) {
        const LaxOleinik op(space, cosine, plan(0.01));
        const std::size_t s = space.size();
        for (int k = 0; k < 500; ++k, ++pairs) {
            const std::vector<double> v = random_values(rng, s);
            std::vector<double> w = random_values(rng, s);
            std::vector<double> above = v;
            for (std::size_t i = 0; i < s; ++i) above[i] += std::abs(w[i]);
            const auto tv = op.apply(v), tw = op.apply(w), ta = op.apply(above);
            for (std::size_t i = 0; i < s; ++i) bad += tv[i] > ta[i];

            const std::size_t j = steps(rng);
            const double c = 5.0 * w[0];
            std::vector<double> shifted = v;
            for (double& x : shifted) x += c;
            const auto tj = op.apply_steps(v, j), tjs = op.apply_steps(shifted, j);
            for (std::size_t i = 0; i < s; ++i) {
                worst = std::max(worst, std::abs(tjs[i] - tj[i] - c));
                bad += std::abs(tjs[i] - tj[i] - c) > 1e-12;
            }

            double in = 0.0, out = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                in = std::max(in, std::abs(v[i] - w[i]));
                out = std::max(out, std::abs(tv[i] - tw[i]));
            }
            bad += out > in + 1e-12;

            const std::size_t a = steps(rng), b = steps(rng);
            bad += op.apply_steps(v, a + b) != op.apply_steps(op.apply_steps(v, a), b);
        }
    }
    return {bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " violations, worst constant shift " +
                          fmt(worst)};
}

Outcome matching_oracle() {
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (std::size_t n = 2; n <= 6; ++n)
        for (int k = 0; k < 500; ++k) {
            const auto a = oracle::uniform_points(rng, n), b = oracle::uniform_points(rng, n);
            const double got = config_dist(ParticleConfig::canonicalize(a), ParticleConfig::canonicalize(b));
            worst = std::max(worst, std::abs(got - std::sqrt(oracle::brute_force_dist_sq(a, b))));
        }
    return {worst <= 1e-12, "2500 pairs, worst |error| " + fmt(worst)};
}

Outcome path_dp() {
    std::mt19937_64 rng(3);
    std::size_t mismatches = 0, cases = 0;
    for (std::size_t m : {4u, 7u, 12u, 16u})
        for (std::size_t k = 1; k <= 4; ++k, ++cases) {
            const GridStateSpace space(1, m);
            const double dt = 0.05;
            const LaxOleinik op(space, cosine, plan(dt));
            const std::vector<double> v = random_values(rng, m);
            const auto exact = oracle::path_minimum(
                m, k, v, [&](std::size_t to, std::size_t from) { return op.kinetic_cost(to, from); },
                [&](std::size_t to) { return op.potential_term(to); });
            mismatches += op.apply_steps(v, k) != exact;
        }
    return {mismatches == 0, std::to_string(cases) + " (m, k) cases up to m=16 k=4, " + std::to_string(mismatches) +
                                 " mismatches"};
}

Outcome trivial_potential() {
    bool ok = true;
    std::string detail;
    for (const GridStateSpace& space : {GridStateSpace(1, 64), GridStateSpace(2, 16), GridStateSpace(3, 8)}) {
        const WeakKamSolution sol = solve(space, Potential::zero(), {});
        ok = ok && sol.converged && std::abs(sol.lambda) <= 1e-12;
        for (double x : sol.u) ok = ok && x == sol.u[0];
        const LaxOleinik op(space, Potential::zero(), plan(sol.dt));
        for (std::size_t s = 0; s < space.size(); s += 3) {
            const CalibratedChain chain = calibrated_curve(op, sol, s, 1.0);
            ok = ok && chain.max_defect == 0.0;
            for (std::size_t t : chain.states) ok = ok && t == s;
        }
    }
    return {ok, "n in {1,2,3}: lambda 0, u constant, chains constant with zero defect"};
}

struct Pendulum {
    GridStateSpace space{1, 256};
    WeakKamSolution sol = solve(space, cosine, {});
    LaxOleinik op{space, cosine, step_plan({})};
};

const Pendulum& pendulum() {
    static const Pendulum p;
    return p;
}

Outcome pendulum_truth() {
    const Pendulum& p = pendulum();
    double err = 0.0;
    for (std::size_t s = 0; s < p.space.size(); ++s)
        err = std::max(err, std::abs(p.sol.u[s] - oracle::pendulum_u(p.space.config(s)[0])));
    const double lam = std::abs(p.sol.lambda - 1.0);
    return {p.sol.converged && lam <= 0.03 && err <= 0.05,
            "m=256: |lambda - 1| " + fmt(lam) + ", sup |u - quadrature| " + fmt(err)};
}

Outcome separable() {
    const WeakKamSolution sol = solve(GridStateSpace(2, 48), cosine, {});
    const double gap = std::abs(sol.lambda - 1.0);
    return {sol.converged && gap <= 0.05, "n=2 m=48: lambda " + fmt(sol.lambda)};
}

Outcome tonelli() {
    std::mt19937_64 rng(7);
    double bound = -1.0, line = -1.0, dp = 0.0;
    std::size_t holder = 0;
    for (int i = 0; i < 50; ++i) {
        const auto a = ParticleConfig::canonicalize(oracle::uniform_points(rng, 1));
        const auto b = ParticleConfig::canonicalize(oracle::uniform_points(rng, 1));
        MinimizeOptions mo;
        const MinimizeResult r = minimize_action(a, b, 1.0, cosine, mo);
        bound = std::max(bound, r.report.total - tonelli_upper_bound(a, b, 1.0, cosine));
        line = std::max(line, r.report.total - action(line_curve(a, b, 1.0, mo.segments), cosine).total);
        holder += holder_check(r.curve).violations;

        mo.segments = 8;
        const double value = minimize_action(a, b, 1.0, cosine, mo).report.total;
        const double oracle = dp_minimize(a, b, 1.0, cosine, 32, 8).value;
        dp = std::max(dp, std::abs(value - oracle) / std::max(std::abs(oracle), cosine.certify_bound()));
    }
    return {bound <= 1e-9 && line <= 1e-12 && holder == 0 && dp <= 0.05,
            "50 instances: value - bound " + fmt(bound) + ", value - line " + fmt(line) + ", holder violations " +
                std::to_string(holder) + ", dp gap " + fmt(dp)};
}

Outcome weak_kam_bundle() {
    const Pendulum& p = pendulum();
    const double fixed = fixed_point_residual(p.op, p.sol.u, p.sol.lambda);
    double defect = 0.0;
    for (std::size_t s = 0; s < p.space.size(); ++s)
        defect = std::max(defect, calibrated_curve(p.op, p.sol, s, 10.0).max_defect);
    const DominationReport dom = check_domination(p.op, p.sol, cosine, 100, 11);
    const LipschitzReport lip = lipschitz_check(p.space, p.sol, cosine);
    const WeakKamSolution shifted = solve(p.space, cosine.shifted(0.37), {});
    const double shift = std::abs(shifted.lambda - p.sol.lambda - 0.37);
    const bool ok = fixed <= p.sol.residual && defect <= p.sol.residual + 1e-12 &&
                    dom.worst_violation <= dom.slack && dom.passed && lip.passed && shift <= 1e-9;
    return {ok, "fixed point " + fmt(fixed) + ", defect " + fmt(defect) + ", domination " +
                    fmt(dom.worst_violation) + "/" + fmt(dom.slack) + ", lipschitz " + fmt(lip.empirical) + "/" +
                    fmt(lip.bound + lip.slack) + ", shift " + fmt(shift)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    return weakkam::run(args, out, err);
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "weakkam_acceptance";
    const std::string max = std::to_string(std::max(4u, std::thread::hardware_concurrency()));
    std::vector<std::string> files;
    bool ran = true;
    for (const std::string& threads : {std::string("1"), max}) {
        const fs::path dir = root / ("threads_" + threads);
        fs::remove_all(dir);
        fs::create_directories(dir);
        const std::string d = dir.string();
        ran = ran && cli({"solve", "--out", d, "--threads", threads, "--set", "m=256"}) == 0;
        ran = ran && cli({"calibrate", "--out", d, "--threads", threads}) == 0;
        ran = ran && cli({"minimize", "--oracle", "--out", d, "--threads", threads}) == 0;
        ran = ran && cli({"verify", "--out", d, "--threads", threads, "--set", "verify.tonelli_instances=3", "--set",
                          "verify.horizon=2"}) == 0;
    }
    std::size_t differ = 0, compared = 0;
    for (const fs::directory_entry& e : fs::directory_iterator(root / "threads_1")) {
        ++compared;
        differ += slurp(e.path()) != slurp(root / ("threads_" + max) / e.path().filename());
    }
    return {ran && differ == 0 && compared >= 10,
            std::to_string(compared) + " output files of solve/calibrate/minimize/verify, threads 1 vs " + max + ", " +
                std::to_string(differ) + " differ"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 operator laws", operator_laws},
        {"2 matching oracle", matching_oracle},
        {"3 path DP oracle", path_dp},
        {"4 trivial potential", trivial_potential},
        {"5 pendulum ground truth", pendulum_truth},
        {"6 separable consistency", separable},
        {"7 tonelli consistency", tonelli},
        {"8 weak KAM bundle", weak_kam_bundle},
        {"9 determinism", determinism},
    };
    bool all = true;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %-26s %7.2fs  %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
        all = all && o.passed;
    }
    return all ? 0 : 1;
}
