#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "wkam/error.hpp"
#include "wkam/grid.hpp"
#include "wkam/lax_oleinik.hpp"

using namespace wkam;

namespace {

const Potential cosine = Potential::one_body(PeriodicFunction::cosine());

std::vector<double> random_values(std::mt19937_64& rng, std::size_t s) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(s);
    for (double& x : v) x = u(rng);
    return v;
}

StepPlan plan(double dt, unsigned threads = 1) {
    StepPlan p;
    p.dt = dt;
    p.threads = threads;
    return p;
}

}  // namespace

TEST_CASE("grid state enumeration") {
    const GridStateSpace line(1, 4);
    REQUIRE(line.size() == 4);
    for (std::size_t s = 0; s < 4; ++s) CHECK(line.config(s)[0] == doctest::Approx(0.25 * static_cast<double>(s)));

    const GridStateSpace pairs(2, 2);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs.config(0) == ParticleConfig::canonicalize(std::vector<double>{0.0, 0.0}));
    CHECK(pairs.config(1) == ParticleConfig::canonicalize(std::vector<double>{0.0, 0.5}));
    CHECK(pairs.config(2) == ParticleConfig::canonicalize(std::vector<double>{0.5, 0.5}));

    CHECK(GridStateSpace(2, 64).size() == 2080);
    CHECK(GridStateSpace::count_states(3, 10) == 220);
    CHECK_THROWS_AS(GridStateSpace(4, 200, 1000), Error);
    CHECK_THROWS_AS(GridStateSpace(0, 4), Error);
    CHECK_THROWS_AS(GridStateSpace(1, 1), Error);
}

TEST_CASE("grid distances agree with the matching distance") {
    const GridStateSpace space(3, 7);
    for (std::size_t a = 0; a < space.size(); a += 3)
        for (std::size_t b = 0; b < space.size(); b += 5)
            CHECK(space.dist_sq(a, b) == doctest::Approx(config_dist_sq(space.config(a), space.config(b))).epsilon(1e-12));
    for (std::size_t s = 0; s < space.size(); ++s) CHECK(space.snap(space.config(s)) == s);
}

TEST_CASE("flat value functions") {
    const GridStateSpace space(2, 8);
    const std::vector<double> zero(space.size(), 0.0);
    const LaxOleinik flat(space, Potential::zero(), plan(0.05));
    CHECK(flat.apply(zero) == zero);
    CHECK(flat.apply_steps(zero, 5) == zero);
    for (std::size_t s = 0; s < space.size(); ++s) CHECK(flat.argmin(zero, s).first == s);

    const LaxOleinik op(space, cosine, plan(0.05));
    const std::vector<double> t = op.apply(zero);
    for (std::size_t s = 0; s < space.size(); ++s) {
        CHECK(t[s] == doctest::Approx(-0.05 * cosine.eval(space.config(s))));
        CHECK(op.argmin(zero, s).first == s);
    }
}

TEST_CASE("pit example against a two-candidate formula") {
    const GridStateSpace space(1, 8);
    const double dt = 0.05;
    const LaxOleinik op(space, cosine, plan(dt));
    for (std::size_t pit = 0; pit < 8; ++pit) {
        std::vector<double> v(8, 0.0);
        v[pit] = -10.0;
        const std::vector<double> t = op.apply(v);
        for (std::size_t s = 0; s < 8; ++s) {
            const double d = oracle::grid_circle_dist(s, pit, 8);
            const double stay = s == pit ? -10.0 : 0.0;
            const double jump = -10.0 + d * d / (2.0 * dt);
            const double pot = dt * std::cos(2.0 * std::numbers::pi * static_cast<double>(s) / 8.0);
            CHECK(t[s] == doctest::Approx(std::min(stay, jump) - pot).epsilon(1e-13));
            CHECK(op.argmin(v, s).first == (jump < stay || s == pit ? pit : s));
        }
    }
}

TEST_CASE("k steps equal the exhaustive minimum over grid paths") {
    std::mt19937_64 rng(8);
    for (std::size_t m : {5u, 8u, 16u})
        for (std::size_t k = 1; k <= 4; ++k) {
            const GridStateSpace space(1, m);
            const double dt = 0.04;
            const LaxOleinik op(space, cosine, plan(dt));
            const std::vector<double> v = random_values(rng, m);
            const std::vector<double> got = op.apply_steps(v, k);

            const auto exact = oracle::path_minimum(
                m, k, v, [&](std::size_t to, std::size_t from) { return op.kinetic_cost(to, from); },
                [&](std::size_t to) { return op.potential_term(to); });
            CHECK(got == exact);

            const auto independent = oracle::path_minimum(
                m, k, v,
                [&](std::size_t to, std::size_t from) {
                    const double d = oracle::grid_circle_dist(to, from, m);
                    return d * d / (2.0 * dt);
                },
                [&](std::size_t to) {
                    return dt * std::cos(2.0 * std::numbers::pi * static_cast<double>(to) / static_cast<double>(m));
                });
            for (std::size_t s = 0; s < m; ++s) CHECK(got[s] == doctest::Approx(independent[s]).epsilon(1e-12));
        }
}

TEST_CASE("operator laws") {
    std::mt19937_64 rng(21);
    for (const GridStateSpace& space : {GridStateSpace(1, 64), GridStateSpace(2, 16)}) {
        const LaxOleinik op(space, cosine, plan(0.01));
        const std::size_t s = space.size();
        for (int k = 0; k < 100; ++k) {
            const std::vector<double> v = random_values(rng, s);
            std::vector<double> w = v;
            for (std::size_t i = 0; i < s; i += 3) w[i] += std::abs(v[(i + 1) % s]);
            const auto tv = op.apply(v), tw = op.apply(w);
            for (std::size_t i = 0; i < s; ++i) REQUIRE(tv[i] <= tw[i]);

            const double c = 7.25 * v[0];
            std::vector<double> shifted = v;
            for (double& x : shifted) x += c;
            const auto ts = op.apply(shifted);
            for (std::size_t i = 0; i < s; ++i) REQUIRE(std::abs(ts[i] - tv[i] - c) <= 1e-12);

            double in = 0.0, out = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                in = std::max(in, std::abs(v[i] - w[i]));
                out = std::max(out, std::abs(tv[i] - tw[i]));
            }
            REQUIRE(out <= in + 1e-12);

            REQUIRE(op.apply_steps(v, 1) == tv);
            REQUIRE(op.apply_steps(v, 5) == op.apply_steps(op.apply_steps(v, 2), 3));
        }
    }
}

TEST_CASE("results do not depend on threads or table policy") {
    std::mt19937_64 rng(2);
    const GridStateSpace space(2, 20);
    const std::vector<double> v = random_values(rng, space.size());
    const LaxOleinik serial(space, cosine, plan(0.01, 1));
    const std::vector<double> want = serial.apply(v);
    for (unsigned threads : {2u, 3u, 8u, 0u}) {
        for (TablePolicy table : {TablePolicy::precomputed, TablePolicy::on_the_fly}) {
            StepPlan p = plan(0.01, threads);
            p.table = table;
            const LaxOleinik op(space, cosine, p);
            CHECK(op.apply(v) == want);
            for (std::size_t s = 0; s < space.size(); s += 7) CHECK(op.argmin(v, s) == serial.argmin(v, s));
        }
    }
    StepPlan tiny = plan(0.01);
    tiny.table = TablePolicy::precomputed;
    CHECK_THROWS_AS(LaxOleinik(space, cosine, tiny, 100), Error);
}

TEST_CASE("ties go to the smallest id") {
    const GridStateSpace line(1, 16);
    std::vector<double> v(16, 100.0);
    v[3] = v[13] = 0.0;
    const LaxOleinik op(line, Potential::zero(), plan(0.01));
    CHECK(op.argmin(v, 0).first == 3);
    StepPlan flipped = plan(0.01);
    flipped.tie_break = TieBreak::largest_id;
    CHECK(LaxOleinik(line, Potential::zero(), flipped).argmin(v, 0).first == 13);
}

TEST_CASE("relabeling the state ids") {
    std::mt19937_64 rng(6);
    const GridStateSpace space(2, 10);
    std::vector<std::size_t> perm(space.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const GridStateSpace relabeled = space.relabeled(perm);
    const std::vector<double> v = random_values(rng, space.size());
    std::vector<double> rv(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) rv[k] = v[perm[k]];
    const auto tv = LaxOleinik(space, cosine, plan(0.02)).apply(v);
    const auto trv = LaxOleinik(relabeled, cosine, plan(0.02)).apply(rv);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(trv[k] == tv[perm[k]]);
}

TEST_CASE("pruning") {
    std::mt19937_64 rng(12);
    const GridStateSpace space(2, 24);
    std::vector<double> v = random_values(rng, space.size());
    for (double& x : v) x *= 0.02;
    const LaxOleinik global(space, cosine, plan(0.01));
    const double r = global.certified_radius(v);

    StepPlan ok = plan(0.01);
    ok.prune_radius = 1.001 * r;
    StepStats stats;
    const LaxOleinik pruned(space, cosine, ok);
    CHECK(pruned.apply(v, &stats) == global.apply(v));
    CHECK(stats.pruned);

    StepPlan unsafe = plan(0.01);
    unsafe.prune_radius = 0.5 * r;
    CHECK_THROWS_AS(LaxOleinik(space, cosine, unsafe).apply(v), Error);
    unsafe.fallback_to_global = true;
    StepStats fb;
    CHECK(LaxOleinik(space, cosine, unsafe).apply(v, &fb) == global.apply(v));
    CHECK(fb.fell_back);
}

TEST_CASE("operator input validation") {
    const GridStateSpace space(1, 8);
    StepPlan bad = plan(0.0);
    CHECK_THROWS_AS(LaxOleinik(space, cosine, bad), Error);
    const LaxOleinik op(space, cosine, plan(0.01));
    CHECK_THROWS_AS(op.apply(std::vector<double>(7, 0.0)), Error);
}
