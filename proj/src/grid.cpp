#include "wkam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wkam/error.hpp"

namespace wkam {

std::size_t GridStateSpace::count_states(std::size_t n, std::size_t m) noexcept {
    // C(m + n - 1, n) built incrementally; each partial product is itself a binomial.
    constexpr std::size_t max = std::numeric_limits<std::size_t>::max();
    std::size_t c = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t factor = m - 1 + i;
        if (c > max / factor) return max;
        c = c * factor / i;
    }
    return c;
}

GridStateSpace::GridStateSpace(std::size_t n, std::size_t m, std::size_t max_states) : n_(n), m_(m) {
    if (n < 1) fail(ErrorCode::invalid_argument, "n must be >= 1");
    if (m < 2) fail(ErrorCode::invalid_argument, "m must be >= 2");
    if (m > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::invalid_argument, "m too large");
    count_ = count_states(n, m);
    if (count_ > max_states) {
        const double bytes = static_cast<double>(count_) * static_cast<double>(n * sizeof(std::uint32_t) + 8);
        fail(ErrorCode::capacity, "state space of n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                                      " has " + (count_ == std::numeric_limits<std::size_t>::max()
                                                     ? std::string("overflowing")
                                                     : std::to_string(count_)) +
                                      " states (cap " + std::to_string(max_states) + "); needs at least " +
                                      std::to_string(bytes / 1048576.0) + " MiB for one value table");
    }
    lex_.reserve(count_ * n_);
    std::vector<std::uint32_t> t(n_, 0);
    for (std::size_t s = 0; s < count_; ++s) {
        lex_.insert(lex_.end(), t.begin(), t.end());
        std::size_t i = n_;
        while (i > 0 && t[i - 1] == m_ - 1) --i;
        if (i == 0) break;
        const std::uint32_t v = t[i - 1] + 1;
        std::fill(t.begin() + static_cast<std::ptrdiff_t>(i - 1), t.end(), v);
    }
    id_to_lex_.resize(count_);
    lex_to_id_.resize(count_);
    for (std::size_t s = 0; s < count_; ++s) id_to_lex_[s] = lex_to_id_[s] = s;
}

std::span<const std::uint32_t> GridStateSpace::indices(std::size_t id) const noexcept {
    return {lex_.data() + id_to_lex_[id] * n_, n_};
}

ParticleConfig GridStateSpace::config(std::size_t id) const {
    std::vector<double> x(n_);
    const auto idx = indices(id);
    for (std::size_t i = 0; i < n_; ++i) x[i] = static_cast<double>(idx[i]) / static_cast<double>(m_);
    return ParticleConfig::canonicalize(x);
}

std::size_t GridStateSpace::find(std::span<const std::uint32_t> sorted) const {
    if (sorted.size() != n_) fail(ErrorCode::dimension_mismatch, "index tuple has wrong particle count");
    std::size_t lo = 0, hi = count_;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const std::uint32_t* p = lex_.data() + mid * n_;
        if (std::lexicographical_compare(p, p + n_, sorted.begin(), sorted.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == count_ || !std::equal(sorted.begin(), sorted.end(), lex_.data() + lo * n_))
        fail(ErrorCode::invalid_argument, "index tuple is not a state of this space");
    return lex_to_id_[lo];
}

std::size_t GridStateSpace::snap(const ParticleConfig& c) const {
    if (c.size() != n_) fail(ErrorCode::dimension_mismatch, "configuration has wrong particle count");
    std::vector<std::uint32_t> idx(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto k = static_cast<std::uint64_t>(std::llround(c[i] * static_cast<double>(m_)));
        idx[i] = static_cast<std::uint32_t>(k % m_);
    }
    std::sort(idx.begin(), idx.end());
    return find(idx);
}

std::size_t GridStateSpace::origin() const { return lex_to_id_[0]; }

std::int64_t GridStateSpace::match_int(std::size_t a, std::size_t b, std::size_t* offset) const noexcept {
    const auto ia = indices(a);
    const auto ib = indices(b);
    const auto m = static_cast<std::int64_t>(m_);
    std::int64_t best = 0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < n_; ++k) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            std::int64_t d = std::abs(static_cast<std::int64_t>(ia[i]) - static_cast<std::int64_t>(ib[(i + k) % n_]));
            d = std::min(d, m - d);
            s += d * d;
        }
        if (k == 0 || s < best) {
            best = s;
            best_k = k;
        }
    }
    if (offset) *offset = best_k;
    return best;
}

double GridStateSpace::dist_sq(std::size_t a, std::size_t b) const noexcept {
    const double m = static_cast<double>(m_);
    return static_cast<double>(match_int(a, b, nullptr)) / (static_cast<double>(n_) * m * m);
}

ParticleConfig GridStateSpace::midpoint(std::size_t a, std::size_t b) const {
    std::size_t k = 0;
    match_int(a, b, &k);
    const auto ia = indices(a);
    const auto ib = indices(b);
    const auto m = static_cast<std::int64_t>(m_);
    std::vector<double> mid(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto x = static_cast<std::int64_t>(ia[i]);
        std::int64_t d = static_cast<std::int64_t>(ib[(i + k) % n_]) - x;
        // Same half-way convention as the nearest lift in match().
        if (2 * d < -m) d += m;
        else if (2 * d > m) d -= m;
        mid[i] = static_cast<double>(2 * x + d) / static_cast<double>(2 * m);
    }
    return ParticleConfig::canonicalize(mid);
}

GridStateSpace GridStateSpace::relabeled(std::span<const std::size_t> perm) const {
    if (perm.size() != count_) fail(ErrorCode::dimension_mismatch, "relabeling has wrong length");
    GridStateSpace out;
    out.n_ = n_;
    out.m_ = m_;
    out.count_ = count_;
    out.lex_ = lex_;
    out.id_to_lex_.assign(count_, count_);
    out.lex_to_id_.assign(count_, count_);
    for (std::size_t id = 0; id < count_; ++id) {
        if (perm[id] >= count_) fail(ErrorCode::invalid_argument, "relabeling is not a permutation");
        const std::size_t lex = id_to_lex_[perm[id]];
        if (out.lex_to_id_[lex] != count_) fail(ErrorCode::invalid_argument, "relabeling is not a permutation");
        out.id_to_lex_[id] = lex;
        out.lex_to_id_[lex] = id;
    }
    return out;
}

std::vector<std::size_t> GridStateSpace::neighbors(std::size_t id) const {
    std::vector<std::size_t> out;
    const auto base = indices(id);
    std::vector<std::uint32_t> t(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t step : {m_ - 1, std::size_t{1}}) {
            std::copy(base.begin(), base.end(), t.begin());
            t[i] = static_cast<std::uint32_t>((base[i] + step) % m_);
            std::sort(t.begin(), t.end());
            const std::size_t nb = find(t);
            if (nb != id) out.push_back(nb);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace wkam
