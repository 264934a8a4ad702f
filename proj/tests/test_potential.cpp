#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wkam/error.hpp"
#include "wkam/potential.hpp"

using namespace wkam;

namespace {

ParticleConfig cfg(std::vector<double> x) { return ParticleConfig::canonicalize(x); }

std::vector<Potential> zoo() {
    return {Potential::zero(),
            Potential::one_body(PeriodicFunction::cosine()),
            Potential::one_body(PeriodicFunction(0.1, {{1, 0.3, -0.2}, {3, 0.0, 0.4}})),
            Potential::pairwise(PeriodicFunction::shifted_cosine(0.15, 0.7)),
            Potential::sum({Potential::one_body(PeriodicFunction::sine(2.0)),
                            Potential::pairwise(PeriodicFunction(0.0, {{2, 0.5, 0.5}}))}),
            Potential::one_body(PeriodicFunction::cosine()).shifted(0.37)};
}

}  // namespace

TEST_CASE("eval examples") {
    const Potential cosine = Potential::one_body(PeriodicFunction::cosine());
    CHECK(cosine.eval(cfg({0.0, 0.0, 0.0})) == doctest::Approx(1.0));
    CHECK(Potential::zero().eval(cfg({0.3, 0.1})) == 0.0);
    CHECK(cosine.eval(cfg({0.0, 0.5})) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(Potential::constant(0.37).eval(cfg({0.2})) == doctest::Approx(0.37));
    // (1/n^2) sum over ordered pairs, diagonal included
    const Potential pair = Potential::pairwise(PeriodicFunction::cosine());
    CHECK(pair.eval(cfg({0.0, 0.5})) == doctest::Approx(0.25 * (1 + 1 - 1 - 1)).epsilon(1e-15));
    CHECK(pair.eval(cfg({0.1, 0.1})) == doctest::Approx(1.0));
}

TEST_CASE("grad examples") {
    const std::vector<double> x{0.25};
    CHECK(Potential::zero().grad(std::span<const double>(x)) == std::vector<double>{0.0});
    const auto g = Potential::one_body(PeriodicFunction::cosine()).grad(std::span<const double>(x));
    CHECK(g[0] == doctest::Approx(-2.0 * std::numbers::pi));
}

TEST_CASE("certified bounds") {
    CHECK(Potential::one_body(PeriodicFunction::cosine()).certify_bound() == 1.0);
    CHECK(Potential::zero().certify_bound() == 0.0);
    const Potential w = Potential::one_body(PeriodicFunction(0.0, {{1, 0.3, 0.0}, {2, 0.0, 0.2}}));
    CHECK(w.certify_bound() == doctest::Approx(0.5));
    // amplitude of a single mode is sqrt(a^2 + b^2)
    CHECK(Potential::one_body(PeriodicFunction(0.0, {{1, 0.6, 0.8}})).certify_bound() == doctest::Approx(1.0));
}

TEST_CASE("bound holds on random configurations") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> ns(1, 6);
    for (const Potential& w : zoo()) {
        const double k0 = w.certify_bound();
        for (int k = 0; k < 10000; ++k)
            REQUIRE(std::abs(w.eval(cfg(oracle::uniform_points(rng, ns(rng))))) <= k0 + 1e-12);
    }
}

TEST_CASE("gradient matches central differences") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> ns(1, 5);
    std::uniform_real_distribution<double> lift(-3.0, 3.0);
    for (const Potential& w : zoo()) {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            std::vector<double> x = oracle::uniform_points(rng, ns(rng));
            for (double& v : x) v += std::round(lift(rng));
            const auto f = [&](const std::vector<double>& y) { return w.eval(ParticleConfig::canonicalize(y)); };
            const auto fd = oracle::central_difference(f, x);
            const auto g = w.grad(std::span<const double>(x));
            for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(fd[i] - g[i]));
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("invariance under symmetries") {
    std::mt19937_64 rng(2);
    for (const Potential& w : zoo()) {
        const auto x = oracle::uniform_points(rng, 4);
        auto y = x;
        std::shuffle(y.begin(), y.end(), rng);
        y[0] += 3.0;
        y[2] -= 1.0;
        CHECK(w.eval(cfg(x)) == doctest::Approx(w.eval(cfg(y))).epsilon(1e-14));
    }
}

TEST_CASE("invalid functions are rejected") {
    CHECK_THROWS_AS(PeriodicFunction(0.0, {{0, 1.0, 0.0}}), Error);
    CHECK_THROWS_AS(PeriodicFunction(std::nan(""), {}), Error);
}
