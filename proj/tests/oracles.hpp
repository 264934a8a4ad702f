#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Squared matching cost over every permutation and every per-pair lift in [-2, 2].
inline double brute_force_dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pair = std::numeric_limits<double>::infinity();
            for (int lift = -2; lift <= 2; ++lift) {
                const double d = a[i] - b[perm[i]] - lift;
                pair = std::min(pair, d * d);
            }
            c += pair;
        }
        best = std::min(best, c / static_cast<double>(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double h = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double x0 = x[i];
        x[i] = x0 + h;
        const double up = f(x);
        x[i] = x0 - h;
        const double down = f(x);
        x[i] = x0;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

/// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 2000) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

/// Weak KAM solution of 0.5 u'^2 + a cos(2 pi x) = a on the circle, u(0) = 0, by
/// quadrature of u' = sqrt(2 (a - a cos 2 pi x)) from the nearer side of the maximum of W.
inline double pendulum_u(double x, double a = 1.0) {
    const auto speed = [a](double y) { return std::sqrt(std::max(0.0, 2.0 * (a - a * std::cos(2.0 * std::numbers::pi * y)))); };
    x -= std::floor(x);
    return std::min(simpson(speed, 0.0, x), simpson(speed, x, 1.0));
}

/// Exhaustive minimum over all grid paths of length k on the circle grid with m
/// points (one particle): min over s_0..s_k ending at `end` of
///   v(s_0) + sum_j [ d(s_j, s_{j-1})^2 / (2 dt) - dt W(s_j) ].
/// `cost(to, from)` and `pot(to)` supply the per-step terms.
inline std::vector<double> path_minimum(std::size_t m, std::size_t k, const std::vector<double>& v,
                                        const std::function<double(std::size_t, std::size_t)>& cost,
                                        const std::function<double(std::size_t)>& pot) {
    std::vector<double> best(m, std::numeric_limits<double>::infinity());
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t depth, std::size_t at, double acc) {
        if (depth == k) {
            best[at] = std::min(best[at], acc);
            return;
        }
        for (std::size_t to = 0; to < m; ++to) walk(depth + 1, to, acc + cost(to, at) - pot(to));
    };
    for (std::size_t s = 0; s < m; ++s) walk(0, s, v[s]);
    return best;
}

/// Circle distance between grid points i/m and j/m.
inline double grid_circle_dist(std::size_t i, std::size_t j, std::size_t m) {
    const double d = std::abs(static_cast<double>(i) - static_cast<double>(j)) / static_cast<double>(m);
    return std::min(d, 1.0 - d);
}

inline std::vector<double> uniform_points(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = u(rng);
    return x;
}

}  // namespace oracle
