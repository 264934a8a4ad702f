#include "wkam/lax_oleinik.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "wkam/error.hpp"

namespace wkam {

LaxOleinik::LaxOleinik(const GridStateSpace& space, const Potential& w, StepPlan plan, std::size_t table_limit)
    : space_(&space), plan_(plan) {
    if (!(plan_.dt > 0.0) || !std::isfinite(plan_.dt)) fail(ErrorCode::invalid_argument, "dt must be positive");
    if (plan_.prune_radius && !(*plan_.prune_radius > 0.0))
        fail(ErrorCode::invalid_argument, "prune_radius must be positive");

    const std::size_t s = space.size();
    potential_.resize(s);
    for (std::size_t id = 0; id < s; ++id) potential_[id] = plan_.dt * w.eval(space.config(id));

    const bool fits = s <= table_limit / std::max<std::size_t>(s, 1);
    bool tabulate = false;
    switch (plan_.table) {
        case TablePolicy::automatic: tabulate = fits; break;
        case TablePolicy::precomputed:
            if (!fits)
                fail(ErrorCode::capacity, "distance table needs " + std::to_string(s) + "^2 entries, limit " +
                                              std::to_string(table_limit));
            tabulate = true;
            break;
        case TablePolicy::on_the_fly: break;
    }
    if (tabulate) {
        kinetic_.resize(s * s);
        const double scale = 2.0 * plan_.dt;
        detail::parallel_for(s, plan_.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t a = lo; a < hi; ++a)
                for (std::size_t b = 0; b < s; ++b) kinetic_[a * s + b] = space.dist_sq(a, b) / scale;
        });
    }

    if (plan_.prune_radius) {
        const double r2 = *plan_.prune_radius * *plan_.prune_radius;
        ball_.resize(s);
        detail::parallel_for(s, plan_.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t a = lo; a < hi; ++a)
                for (std::size_t b = 0; b < s; ++b)
                    if (space.dist_sq(a, b) <= r2) ball_[a].push_back(b);
        });
    }
}

double LaxOleinik::kinetic_cost(std::size_t to, std::size_t from) const noexcept {
    if (!kinetic_.empty()) return kinetic_[to * space_->size() + from];
    return space_->dist_sq(to, from) / (2.0 * plan_.dt);
}

double LaxOleinik::certified_radius(std::span<const double> v) const {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return std::sqrt(2.0 * plan_.dt * (*hi - *lo));
}

// Candidates outside the ball satisfy d^2/(2 dt) > osc(v), so they are
// strictly worse than staying put and can never be (tied) minimizers.
bool LaxOleinik::use_pruning(std::span<const double> v, StepStats* stats) const {
    if (!plan_.prune_radius) return false;
    if (*plan_.prune_radius > certified_radius(v)) {
        if (stats) stats->pruned = true;
        return true;
    }
    if (!plan_.fallback_to_global)
        fail(ErrorCode::unsafe_prune, "prune radius " + std::to_string(*plan_.prune_radius) +
                                          " is not above the certified radius " +
                                          std::to_string(certified_radius(v)));
    if (stats) stats->fell_back = true;
    return false;
}

std::pair<std::size_t, double> LaxOleinik::scan(std::span<const double> v, std::size_t id, bool pruned) const {
    const std::size_t s = space_->size();
    const bool largest = plan_.tie_break == TieBreak::largest_id;
    std::size_t best_id = 0;
    double best = 0.0;
    bool first = true;
    auto consider = [&](std::size_t from, double kin) {
        const double c = v[from] + kin;
        if (first || c < best || (largest && c == best)) {
            best = c;
            best_id = from;
            first = false;
        }
    };
    if (pruned) {
        for (std::size_t from : ball_[id]) consider(from, kinetic_cost(id, from));
    } else if (!kinetic_.empty()) {
        const double* row = kinetic_.data() + id * s;
        for (std::size_t from = 0; from < s; ++from) consider(from, row[from]);
    } else {
        for (std::size_t from = 0; from < s; ++from) consider(from, kinetic_cost(id, from));
    }
    return {best_id, best - potential_[id]};
}

void LaxOleinik::apply(std::span<const double> v, std::span<double> out, StepStats* stats) const {
    const std::size_t s = space_->size();
    if (v.size() != s || out.size() != s)
        fail(ErrorCode::dimension_mismatch, "value table has " + std::to_string(v.size()) + " entries for " +
                                                std::to_string(s) + " states");
    const bool pruned = use_pruning(v, stats);
    detail::parallel_for(s, plan_.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t id = lo; id < hi; ++id) out[id] = scan(v, id, pruned).second;
    });
}

std::vector<double> LaxOleinik::apply(std::span<const double> v, StepStats* stats) const {
    std::vector<double> out(v.size());
    apply(v, out, stats);
    return out;
}

std::vector<double> LaxOleinik::apply_steps(std::span<const double> v, std::size_t k) const {
    std::vector<double> cur(v.begin(), v.end());
    std::vector<double> next(cur.size());
    for (std::size_t i = 0; i < k; ++i) {
        apply(cur, next);
        cur.swap(next);
    }
    return cur;
}

std::pair<std::size_t, double> LaxOleinik::argmin(std::span<const double> v, std::size_t id) const {
    if (v.size() != space_->size()) fail(ErrorCode::dimension_mismatch, "value table has wrong length");
    if (id >= space_->size()) fail(ErrorCode::invalid_argument, "state id out of range");
    return scan(v, id, use_pruning(v, nullptr));
}

}  // namespace wkam
