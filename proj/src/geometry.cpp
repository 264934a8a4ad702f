#include "wkam/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wkam/error.hpp"

namespace wkam {

double wrap(double x) noexcept {
    double r = x - std::floor(x);
    // x slightly below an integer rounds up to exactly 1.
    return r >= 1.0 ? 0.0 : r;
}

ParticleConfig ParticleConfig::canonicalize(std::span<const double> points) {
    if (points.empty()) fail(ErrorCode::invalid_argument, "configuration is empty");
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i]))
            fail(ErrorCode::invalid_argument, "coordinate " + std::to_string(i) + " is not finite");
        out[i] = wrap(points[i]);
    }
    std::sort(out.begin(), out.end());
    return ParticleConfig(std::move(out));
}

LiftedConfig::LiftedConfig(std::vector<double> reals)
    : reals_(std::move(reals)), base_(ParticleConfig::canonicalize(reals_)) {}

std::vector<std::size_t> LiftedConfig::order() const {
    std::vector<std::size_t> idx(reals_.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return wrap(reals_[i]) < wrap(reals_[j]); });
    return idx;
}

std::vector<double> Matching::displacement(const ParticleConfig& a, const ParticleConfig& b) const {
    std::vector<double> d(assignment.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = b[assignment[i]] + static_cast<double>(lifts[i]) - a[i];
    return d;
}

double torus_dist(double x, double y) noexcept {
    const double d = std::abs(x - y);
    return std::min(d, 1.0 - d);
}

namespace {

void require_same_size(const ParticleConfig& a, const ParticleConfig& b) {
    if (a.size() != b.size())
        fail(ErrorCode::dimension_mismatch, "particle counts differ: " + std::to_string(a.size()) +
                                                " vs " + std::to_string(b.size()));
}

// Lift l in {-1,0,1} making |x - y - l| the torus distance; half-way ties keep l = 0.
std::int64_t nearest_lift(double x, double y) noexcept {
    const double d = x - y;
    if (d > 0.5) return 1;
    if (d < -0.5) return -1;
    return 0;
}

}  // namespace

Matching match(const ParticleConfig& a, const ParticleConfig& b) {
    require_same_size(a, b);
    const std::size_t n = a.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    std::size_t best_k = 0;
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = a[i];
            const double y = b[(i + k) % n];
            const double r = x - y - static_cast<double>(nearest_lift(x, y));
            s += r * r;
        }
        s *= inv_n;
        if (k == 0 || s < best) {
            best = s;
            best_k = k;
        }
    }

    Matching m;
    m.offset = best_k;
    m.cost = best;
    m.assignment.resize(n);
    m.lifts.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.assignment[i] = (i + best_k) % n;
        m.lifts[i] = nearest_lift(a[i], b[m.assignment[i]]);
    }
    return m;
}

// Evaluated in a fixed argument order so that d(a, b) == d(b, a) bit for bit.
double config_dist_sq(const ParticleConfig& a, const ParticleConfig& b) {
    const bool swap = std::lexicographical_compare(b.points().begin(), b.points().end(), a.points().begin(),
                                                   a.points().end());
    return swap ? match(b, a).cost : match(a, b).cost;
}

double config_dist(const ParticleConfig& a, const ParticleConfig& b) { return std::sqrt(config_dist_sq(a, b)); }

ParticleConfig apply_symmetry(const ParticleConfig& c,
                              std::span<const std::size_t> perm,
                              std::span<const std::int64_t> shifts) {
    const std::size_t n = c.size();
    if (perm.size() != n || shifts.size() != n)
        fail(ErrorCode::dimension_mismatch, "symmetry element does not match particle count");
    std::vector<bool> seen(n, false);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) fail(ErrorCode::invalid_argument, "perm is not a permutation");
        seen[p] = true;
    }
    // Coordinates are already reduced, so integer shifts only change the lift
    // and vanish under reduction; applying them in floating point would not.
    std::vector<double> moved(n);
    for (std::size_t i = 0; i < n; ++i) moved[i] = c[perm[i]];
    return ParticleConfig::canonicalize(moved);
}

LiftedConfig lift_towards(const LiftedConfig& prev, const ParticleConfig& next) {
    const ParticleConfig& base = prev.base();
    const Matching m = match(base, next);
    const std::vector<double> disp = m.displacement(base, next);
    const std::vector<std::size_t> ord = prev.order();
    std::vector<double> reals(prev.reals().begin(), prev.reals().end());
    for (std::size_t i = 0; i < ord.size(); ++i) reals[ord[i]] += disp[i];
    return LiftedConfig(std::move(reals));
}

}  // namespace wkam
