#pragma once

// Fixed-endpoint action minimization and its grid dynamic-programming oracle.

#include <cstddef>
#include <cstdint>

#include "wkam/action.hpp"
#include "wkam/geometry.hpp"
#include "wkam/potential.hpp"

namespace wkam {

/// Constant-speed curve along the nearest-lift matching from m to n, k equal segments.
Curve line_curve(const ParticleConfig& m, const ParticleConfig& n, double duration, std::size_t segments);

/// d(m, n)^2 / (2T) + K0 T: the action of the trial line is never above this.
double tonelli_upper_bound(const ParticleConfig& m, const ParticleConfig& n, double duration, const Potential& w);

struct MinimizeOptions {
    std::size_t segments = 32;
    std::size_t restarts = 4;
    double tol = 1e-8;            // on the kinetic-metric dual norm of the gradient
    std::size_t max_iters = 20000;
    std::uint64_t seed = 0;
    std::size_t max_classes = 4096;
};

struct MinimizeResult {
    Curve curve;
    ActionReport report;
    double grad_norm = 0.0;
    std::size_t iterations = 0;
    std::size_t classes_in_budget = 0;
    std::size_t classes_optimized = 0;
    bool converged = false;
    bool enumeration_complete = true;
};

/// Best local minimizer over every endpoint class (target permutation and
/// integer lifts) whose displacement fits the a-priori kinetic budget.
MinimizeResult minimize_action(const ParticleConfig& m, const ParticleConfig& n, double duration,
                               const Potential& w, const MinimizeOptions& opts = {});

struct DpResult {
    Curve curve;
    double value = 0.0;
    std::size_t start_state = 0;
    std::size_t end_state = 0;
};

/// Exact minimum of the discrete action over all k-step paths on the
/// grid with `cells` points per circle, endpoints snapped to the grid.
DpResult dp_minimize(const ParticleConfig& m, const ParticleConfig& n, double duration, const Potential& w,
                     std::size_t cells, std::size_t steps, std::size_t max_states = 10000);

}  // namespace wkam
