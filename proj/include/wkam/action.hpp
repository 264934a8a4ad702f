#pragma once

#include <span>
#include <vector>

#include "wkam/geometry.hpp"
#include "wkam/potential.hpp"

namespace wkam {

/// Piecewise-linear curve through lifted knots at strictly increasing times.
class Curve {
public:
    Curve() = default;
    /// Throws unless times are strictly increasing and every knot has the same n.
    Curve(std::vector<double> times, std::vector<LiftedConfig> knots);

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<LiftedConfig>& knots() const noexcept { return knots_; }
    std::size_t segments() const noexcept { return knots_.empty() ? 0 : knots_.size() - 1; }
    std::size_t particles() const noexcept { return knots_.empty() ? 0 : knots_.front().size(); }
    double duration() const noexcept { return times_.back() - times_.front(); }

    /// Same knots traversed backwards; t -> t0 + t1 - t.
    Curve reversed() const;

    /// Every segment moves by the nearest-lift matched displacement of its
    /// endpoint bases (compared within tol on the squared distance).
    bool lifts_consistent(double tol = 1e-12) const;

private:
    std::vector<double> times_;
    std::vector<LiftedConfig> knots_;
};

struct ActionReport {
    double kinetic = 0.0;
    double potential_integral = 0.0;
    double total = 0.0;
    std::vector<double> energy_samples;  // per segment: 0.5 |v|^2 + W(midpoint)
};

struct HolderReport {
    double k1 = 0.0;               // sqrt of the discrete integral of |velocity|^2
    double worst_slack = 0.0;      // max over knot pairs of dist - k1 sqrt(t - s)
    std::size_t pairs = 0;
    std::size_t violations = 0;
};

/// (1/n)-weighted squared norm of a - b.
double weighted_sq(std::span<const double> a, std::span<const double> b);

/// L(C, V) = 0.5 (1/n) sum v_i^2 - W(C).
double lagrangian(const ParticleConfig& c, std::span<const double> velocity, const Potential& w);

/// Exact kinetic energy of the piecewise-linear path, midpoint rule for W.
ActionReport action(const Curve& curve, const Potential& w);

/// Checks dist(sigma(s), sigma(t)) <= K1 sqrt(t - s) over all knot pairs.
HolderReport holder_check(const Curve& curve);

}  // namespace wkam
