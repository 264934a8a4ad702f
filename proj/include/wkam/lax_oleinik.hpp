#pragma once

// One-step Hopf-Lax realization of the backward Lax-Oleinik operator on a
// grid state space:
//
//   (T v)(M) = min_{M'} [ v(M') + d(M, M')^2 / (2 dt) ] - dt W(M)
//
// The potential is sampled at the arrival state, so T is monotone and
// commutes with constants. Minimization scans candidates in id order and
// keeps the first minimizer, which makes the result independent of the
// number of worker threads.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wkam/grid.hpp"
#include "wkam/potential.hpp"

namespace wkam {

enum class TablePolicy { automatic, precomputed, on_the_fly };

// largest_id only exists so the verifier can check that it notices a broken tie-break.
enum class TieBreak { smallest_id, largest_id };

struct StepPlan {
    double dt = 0.01;
    std::optional<double> prune_radius;
    TablePolicy table = TablePolicy::automatic;
    bool fallback_to_global = false;  // on an uncertified prune radius; otherwise throw
    unsigned threads = 0;             // 0: hardware concurrency
    TieBreak tie_break = TieBreak::smallest_id;
};

struct StepStats {
    bool pruned = false;
    bool fell_back = false;
};

class LaxOleinik {
public:
    static constexpr std::size_t default_table_limit = std::size_t{1} << 24;

    LaxOleinik(const GridStateSpace& space, const Potential& w, StepPlan plan,
               std::size_t table_limit = default_table_limit);

    const GridStateSpace& space() const noexcept { return *space_; }
    const StepPlan& plan() const noexcept { return plan_; }
    bool has_table() const noexcept { return !kinetic_.empty(); }

    std::vector<double> apply(std::span<const double> v, StepStats* stats = nullptr) const;
    void apply(std::span<const double> v, std::span<double> out, StepStats* stats = nullptr) const;
    /// k-fold composition.
    std::vector<double> apply_steps(std::span<const double> v, std::size_t k) const;

    /// Minimizing predecessor of `id` and the value (T v)(id).
    std::pair<std::size_t, double> argmin(std::span<const double> v, std::size_t id) const;

    /// d(to, from)^2 / (2 dt)
    double kinetic_cost(std::size_t to, std::size_t from) const noexcept;
    /// dt W(id)
    double potential_term(std::size_t id) const noexcept { return potential_[id]; }

    /// Smallest radius that provably keeps every minimizer: sqrt(2 dt osc(v)).
    double certified_radius(std::span<const double> v) const;

private:
    bool use_pruning(std::span<const double> v, StepStats* stats) const;
    std::pair<std::size_t, double> scan(std::span<const double> v, std::size_t id, bool pruned) const;

    const GridStateSpace* space_;
    StepPlan plan_;
    std::vector<double> potential_;
    std::vector<double> kinetic_;                     // row-major S x S, when tabulated
    std::vector<std::vector<std::size_t>> ball_;      // per state, ids within prune_radius
};

}  // namespace wkam
