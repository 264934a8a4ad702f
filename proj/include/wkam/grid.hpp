#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wkam/geometry.hpp"

namespace wkam {

/// All multisets of n points of the uniform grid {0, 1/m, ..., (m-1)/m}.
///
/// States are stored as nondecreasing grid-index tuples. Ids follow
/// lexicographic order unless the space was relabeled.
class GridStateSpace {
public:
    static constexpr std::size_t default_max_states = 200000;

    GridStateSpace(std::size_t n, std::size_t m, std::size_t max_states = default_max_states);

    /// C(m + n - 1, n), or SIZE_MAX on overflow.
    static std::size_t count_states(std::size_t n, std::size_t m) noexcept;

    std::size_t particles() const noexcept { return n_; }
    std::size_t cells() const noexcept { return m_; }
    std::size_t size() const noexcept { return count_; }

    /// Grid indices of a state, nondecreasing.
    std::span<const std::uint32_t> indices(std::size_t id) const noexcept;
    ParticleConfig config(std::size_t id) const;

    /// Id of a nondecreasing index tuple; throws if out of range.
    std::size_t find(std::span<const std::uint32_t> sorted_indices) const;
    /// Id of the state nearest to c: each particle rounded to its nearest grid point.
    std::size_t snap(const ParticleConfig& c) const;
    /// The reference state: every particle at grid index 0.
    std::size_t origin() const;

    /// Squared matching distance between two states, from exact integer sums.
    double dist_sq(std::size_t a, std::size_t b) const noexcept;
    /// Midpoint configuration of the optimal matching from a to b.
    ParticleConfig midpoint(std::size_t a, std::size_t b) const;

    /// Same state set with ids permuted: state new_id is old state perm[new_id].
    GridStateSpace relabeled(std::span<const std::size_t> perm) const;

    /// Ids whose states differ from `id` by one grid step of a single particle.
    std::vector<std::size_t> neighbors(std::size_t id) const;

private:
    GridStateSpace() = default;
    std::int64_t match_int(std::size_t a, std::size_t b, std::size_t* offset) const noexcept;

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint32_t> lex_;        // count_ * n_ indices, lexicographic
    std::vector<std::size_t> id_to_lex_;
    std::vector<std::size_t> lex_to_id_;
};

}  // namespace wkam
