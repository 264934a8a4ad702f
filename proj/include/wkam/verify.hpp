#pragma once

// Property suite behind the `verify` subcommand.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace wkam {

struct VerifyOptions {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::size_t law_pairs = 1000;          // split over the n=1 and n=2 spaces
    std::size_t matching_pairs = 500;      // per n in 2..6
    std::size_t dp_cells = 16;
    std::size_t dp_steps = 4;
    std::size_t pendulum_cells = 256;
    std::size_t separable_cells = 48;
    double dt = 0.01;
    double tol = 1e-9;
    double horizon = 10.0;
    std::size_t domination_samples = 100;
    std::size_t tonelli_instances = 10;
    bool inject_fault = false;             // flips the tie-break inside the determinism check
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;   // measured quantity
    double limit = 0.0;   // pass threshold for `value`
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed = false;
};

VerifyReport run_verify(const VerifyOptions& opts);

/// sqrt(a) * min(F(x), F(1 - x)) with F(x) = (2/pi)(1 - cos(pi x)): the
/// weak KAM solution of the one-particle pendulum W = a cos(2 pi x), u(0) = 0.
double pendulum_solution(double x, double a = 1.0);

}  // namespace wkam
