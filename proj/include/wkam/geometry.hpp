#pragma once

// Equal-mass particle configurations on the circle R/Z.
//
// A state is the monotone rearrangement of an L^2(0,1) function sampled at n
// equal-mass particles. Periodicity (integer shifts per particle) and
// rearrangement invariance (permutations) are quotiented out by storing the
// sorted reduced coordinates; the induced metric is the quadratic optimal
// matching cost on the circle with mass 1/n per particle.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wkam {

/// Reduce x into [0,1).
double wrap(double x) noexcept;

/// Sorted torus coordinates; the canonical representative of an orbit.
class ParticleConfig {
public:
    ParticleConfig() = default;

    /// Reduces mod 1 and sorts. Throws on empty or non-finite input.
    static ParticleConfig canonicalize(std::span<const double> points);

    std::span<const double> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const noexcept { return points_[i]; }

    friend bool operator==(const ParticleConfig&, const ParticleConfig&) = default;

private:
    explicit ParticleConfig(std::vector<double> sorted) : points_(std::move(sorted)) {}
    std::vector<double> points_;
};

/// Real-line lifts of labelled particles. base() is the reduced, sorted view.
class LiftedConfig {
public:
    LiftedConfig() = default;
    explicit LiftedConfig(std::vector<double> reals);

    std::span<const double> reals() const noexcept { return reals_; }
    const ParticleConfig& base() const noexcept { return base_; }
    std::size_t size() const noexcept { return reals_.size(); }
    double operator[](std::size_t i) const noexcept { return reals_[i]; }

    /// Labels ordered by reduced coordinate (stable): base()[i] == wrap(reals()[order()[i]]).
    std::vector<std::size_t> order() const;

    friend bool operator==(const LiftedConfig& a, const LiftedConfig& b) { return a.reals_ == b.reals_; }

private:
    std::vector<double> reals_;
    ParticleConfig base_;
};

/// Optimal pairing of two configurations: a[i] is sent to b[assignment[i]] + lifts[i].
struct Matching {
    std::vector<std::size_t> assignment;
    std::vector<std::int64_t> lifts;
    std::size_t offset = 0;  // cyclic offset k: assignment[i] == (i + k) mod n
    double cost = 0.0;       // (1/n) sum_i (a_i - b_{assignment(i)} - lifts_i)^2

    /// Per-particle displacement b[assignment[i]] + lifts[i] - a[i].
    std::vector<double> displacement(const ParticleConfig& a, const ParticleConfig& b) const;
};

double torus_dist(double x, double y) noexcept;

/// Squared matching distance (the quantity minimized by match()).
double config_dist_sq(const ParticleConfig& a, const ParticleConfig& b);
double config_dist(const ParticleConfig& a, const ParticleConfig& b);

/// Nearest-lift cyclic matching; ties go to the smallest offset.
Matching match(const ParticleConfig& a, const ParticleConfig& b);

/// Acts by a permutation of the particles and integer shifts of their lifts.
/// The result lies in the same orbit as c, so it equals c.
ParticleConfig apply_symmetry(const ParticleConfig& c,
                              std::span<const std::size_t> perm,
                              std::span<const std::int64_t> shifts);

/// Lifts `next` so that each labelled particle of `prev` moves by its
/// nearest-lift matched displacement.
LiftedConfig lift_towards(const LiftedConfig& prev, const ParticleConfig& next);

}  // namespace wkam
