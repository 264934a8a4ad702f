#include "wkam/tonelli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "wkam/error.hpp"
#include "wkam/grid.hpp"

namespace wkam {

namespace {

void require_same_size(const ParticleConfig& a, const ParticleConfig& b) {
    if (a.size() != b.size())
        fail(ErrorCode::dimension_mismatch, "endpoint particle counts differ: " + std::to_string(a.size()) +
                                                " vs " + std::to_string(b.size()));
}

void require_positive(double duration) {
    if (!(duration > 0.0) || !std::isfinite(duration))
        fail(ErrorCode::invalid_argument, "duration must be positive and finite");
}

std::vector<double> uniform_times(double duration, std::size_t segments) {
    std::vector<double> t(segments + 1);
    for (std::size_t j = 0; j <= segments; ++j)
        t[j] = duration * static_cast<double>(j) / static_cast<double>(segments);
    t[segments] = duration;
    return t;
}

// An endpoint class: particle i (in sorted order of the start) ends at
// n[perm[i]] + lifts[i] on the real line.
struct EndClass {
    std::vector<std::size_t> perm;
    std::vector<std::int64_t> lifts;
    std::vector<double> target;
    double norm_sq = 0.0;  // (1/n) sum of squared displacements
};

class ClassEnumerator {
public:
    ClassEnumerator(const ParticleConfig& a, const ParticleConfig& b) : a_(a), b_(b), n_(a.size()) {}

    // Returns false if more than `cap` classes fit in the budget.
    bool enumerate(double budget_sq, std::size_t cap, std::vector<EndClass>* out) {
        limit_ = budget_sq * static_cast<double>(n_) * (1.0 + 1e-12);
        cap_ = cap;
        out_ = out;
        count_ = 0;
        if (out_) out_->clear();
        used_.assign(n_, false);
        perm_.assign(n_, 0);
        lifts_.assign(n_, 0);
        return dfs(0, 0.0);
    }

private:
    bool dfs(std::size_t i, double partial) {
        if (i == n_) {
            if (++count_ > cap_) return false;
            if (out_) {
                EndClass c;
                c.perm = perm_;
                c.lifts = lifts_;
                c.target.resize(n_);
                for (std::size_t k = 0; k < n_; ++k) c.target[k] = b_[perm_[k]] + static_cast<double>(lifts_[k]);
                c.norm_sq = partial / static_cast<double>(n_);
                out_->push_back(std::move(c));
            }
            return true;
        }
        const double room = std::sqrt(std::max(0.0, limit_ - partial));
        for (std::size_t j = 0; j < n_; ++j) {
            if (used_[j]) continue;
            const double base = b_[j] - a_[i];
            const auto lo = static_cast<std::int64_t>(std::ceil(-base - room));
            const auto hi = static_cast<std::int64_t>(std::floor(-base + room));
            for (std::int64_t l = lo; l <= hi; ++l) {
                const double d = base + static_cast<double>(l);
                if (partial + d * d > limit_) continue;
                used_[j] = true;
                perm_[i] = j;
                lifts_[i] = l;
                if (!dfs(i + 1, partial + d * d)) return false;
                used_[j] = false;
            }
        }
        return true;
    }

    const ParticleConfig& a_;
    const ParticleConfig& b_;
    std::size_t n_;
    double limit_ = 0.0;
    std::size_t cap_ = 0;
    std::size_t count_ = 0;
    std::vector<EndClass>* out_ = nullptr;
    std::vector<bool> used_;
    std::vector<std::size_t> perm_;
    std::vector<std::int64_t> lifts_;
};

// Knots stored flat: q[j * n + i] is particle i at knot j.
class DiscreteAction {
public:
    DiscreteAction(const Potential& w, std::vector<double> times, std::size_t n)
        : w_(w), t_(std::move(times)), n_(n), k_(t_.size() - 1), mid_(n) {}

    double value(const std::vector<double>& q) {
        double kin = 0.0;
        double pot = 0.0;
        for (std::size_t j = 0; j < k_; ++j) {
            const double dt = t_[j + 1] - t_[j];
            double sq = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                const double d = q[(j + 1) * n_ + i] - q[j * n_ + i];
                sq += d * d;
                mid_[i] = 0.5 * (q[j * n_ + i] + q[(j + 1) * n_ + i]);
            }
            sq /= static_cast<double>(n_);
            kin += sq / (2.0 * dt);
            pot += dt * w_.eval(ParticleConfig::canonicalize(mid_));
        }
        return kin - pot;
    }

    // Gradient over interior knots 1..k-1, flat as (k-1) * n.
    void gradient(const std::vector<double>& q, std::vector<double>& g) {
        g.assign((k_ - 1) * n_, 0.0);
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t j = 0; j < k_; ++j) {
            const double dt = t_[j + 1] - t_[j];
            for (std::size_t i = 0; i < n_; ++i) mid_[i] = 0.5 * (q[j * n_ + i] + q[(j + 1) * n_ + i]);
            const std::vector<double> gw = w_.grad(mid_);
            for (std::size_t i = 0; i < n_; ++i) {
                const double vel = (q[(j + 1) * n_ + i] - q[j * n_ + i]) / dt * inv_n;
                const double pull = 0.5 * dt * gw[i];
                // Segment j touches knots j (left) and j+1 (right).
                if (j >= 1) g[(j - 1) * n_ + i] += -vel - pull;
                if (j + 1 <= k_ - 1) g[j * n_ + i] += vel - pull;
            }
        }
    }

    // Solves P x = r for every particle column, P the kinetic Hessian.
    void precondition(const std::vector<double>& r, std::vector<double>& x) const {
        const std::size_t m = k_ - 1;
        const double inv_n = 1.0 / static_cast<double>(n_);
        x.assign(r.size(), 0.0);
        std::vector<double> c(m), d(m);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double left = 1.0 / (t_[j + 1] - t_[j]);
                const double right = 1.0 / (t_[j + 2] - t_[j + 1]);
                const double diag = inv_n * (left + right);
                const double sub = -inv_n * left;  // coupling to knot j-1
                const double sup = -inv_n * right;
                const double denom = j == 0 ? diag : diag - sub * c[j - 1];
                c[j] = sup / denom;
                d[j] = (r[j * n_ + i] - (j == 0 ? 0.0 : sub * d[j - 1])) / denom;
            }
            for (std::size_t j = m; j-- > 0;) x[j * n_ + i] = d[j] - (j + 1 < m ? c[j] * x[(j + 1) * n_ + i] : 0.0);
        }
    }

    std::size_t segments() const noexcept { return k_; }

private:
    const Potential& w_;
    std::vector<double> t_;
    std::size_t n_;
    std::size_t k_;
    std::vector<double> mid_;
};

struct Run {
    std::vector<double> q;
    double value = 0.0;
    double grad_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

Run descend(DiscreteAction& f, std::vector<double> q, std::size_t n, const MinimizeOptions& opts) {
    Run run;
    run.value = f.value(q);
    if (f.segments() < 2) {
        run.q = std::move(q);
        run.converged = true;
        return run;
    }
    std::vector<double> g, p, trial, g_trial, p_trial;
    const std::size_t offset = n;  // interior starts at knot 1
    auto dual_norm_sq = [&](const std::vector<double>& grad, std::vector<double>& dir) {
        f.precondition(grad, dir);
        double s = 0.0;
        for (std::size_t k = 0; k < grad.size(); ++k) s += grad[k] * dir[k];
        return std::max(0.0, s);
    };
    f.gradient(q, g);
    double gp = dual_norm_sq(g, p);
    double step = 1.0;
    for (;;) {
        run.grad_norm = std::sqrt(gp);
        if (run.grad_norm <= opts.tol) {
            run.converged = true;
            break;
        }
        if (run.iterations >= opts.max_iters) break;

        // Armijo backtracking along -P^{-1} g. Once the predicted decrease is
        // below the rounding level of the action, the value can no longer
        // rank steps; a step is then accepted iff it shrinks the gradient.
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(run.value));
        step = std::min(1.0, 2.0 * step);
        bool accepted = false;
        trial = q;
        while (step > 1e-12) {
            for (std::size_t k = 0; k < p.size(); ++k) trial[offset + k] = q[offset + k] - step * p[k];
            const double v = f.value(trial);
            const double predicted = 1e-4 * step * gp;
            bool ok = v <= run.value - predicted;
            if (!ok && predicted < noise && v <= run.value + noise) {
                f.gradient(trial, g_trial);
                ok = dual_norm_sq(g_trial, p_trial) < gp;
            }
            if (ok) {
                q.swap(trial);
                run.value = v;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++run.iterations;
        if (!accepted) break;
        f.gradient(q, g);
        gp = dual_norm_sq(g, p);
    }
    run.q = std::move(q);
    return run;
}

Curve to_curve(const std::vector<double>& q, const std::vector<double>& times, std::size_t n) {
    std::vector<LiftedConfig> knots;
    knots.reserve(times.size());
    for (std::size_t j = 0; j < times.size(); ++j)
        knots.emplace_back(std::vector<double>(q.begin() + static_cast<std::ptrdiff_t>(j * n),
                                               q.begin() + static_cast<std::ptrdiff_t>((j + 1) * n)));
    return Curve(times, std::move(knots));
}

}  // namespace

Curve line_curve(const ParticleConfig& m, const ParticleConfig& n, double duration, std::size_t segments) {
    require_same_size(m, n);
    require_positive(duration);
    if (segments < 1) fail(ErrorCode::invalid_argument, "segments must be >= 1");
    const Matching mt = match(m, n);
    const std::vector<double> disp = mt.displacement(m, n);
    const std::size_t np = m.size();
    std::vector<LiftedConfig> knots;
    knots.reserve(segments + 1);
    for (std::size_t j = 0; j <= segments; ++j) {
        std::vector<double> x(np);
        for (std::size_t i = 0; i < np; ++i) {
            x[i] = j == segments ? n[mt.assignment[i]] + static_cast<double>(mt.lifts[i])
                                 : m[i] + disp[i] * static_cast<double>(j) / static_cast<double>(segments);
        }
        knots.emplace_back(std::move(x));
    }
    return Curve(uniform_times(duration, segments), std::move(knots));
}

double tonelli_upper_bound(const ParticleConfig& m, const ParticleConfig& n, double duration, const Potential& w) {
    require_same_size(m, n);
    require_positive(duration);
    return config_dist_sq(m, n) / (2.0 * duration) + w.certify_bound() * duration;
}

MinimizeResult minimize_action(const ParticleConfig& m, const ParticleConfig& n, double duration,
                               const Potential& w, const MinimizeOptions& opts) {
    require_same_size(m, n);
    require_positive(duration);
    if (opts.segments < 1) fail(ErrorCode::invalid_argument, "segments must be >= 1");
    if (opts.restarts < 1) fail(ErrorCode::invalid_argument, "restarts must be >= 1");
    if (!(opts.tol > 0.0)) fail(ErrorCode::invalid_argument, "tol must be positive");

    const std::size_t np = m.size();
    const std::size_t k = opts.segments;
    const double k0 = w.certify_bound();
    const double upper = tonelli_upper_bound(m, n, duration, w);
    // |q(T) - q(0)|^2 <= T * int |q'|^2 <= 2T (C_inf + K0 T) <= 2T (upper + K0 T)
    const double budget = 2.0 * duration * (upper + k0 * duration);

    MinimizeResult result;
    std::vector<EndClass> classes;
    ClassEnumerator en(m, n);
    if (!en.enumerate(budget, opts.max_classes, nullptr)) {
        // Too many classes: keep the largest budget that fits the cap.
        result.enumeration_complete = false;
        double lo = config_dist_sq(m, n);
        double hi = budget;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (en.enumerate(mid, opts.max_classes, nullptr)) lo = mid;
            else hi = mid;
        }
        en.enumerate(lo, opts.max_classes, &classes);
    } else {
        en.enumerate(budget, opts.max_classes, &classes);
    }
    std::sort(classes.begin(), classes.end(), [](const EndClass& x, const EndClass& y) {
        if (x.norm_sq != y.norm_sq) return x.norm_sq < y.norm_sq;
        return x.target < y.target;
    });
    // Coincident target points give the same curve under different labels.
    classes.erase(std::unique(classes.begin(), classes.end(),
                              [](const EndClass& x, const EndClass& y) { return x.target == y.target; }),
                  classes.end());
    result.classes_in_budget = classes.size();

    const std::vector<double> times = uniform_times(duration, k);
    DiscreteAction f(w, times, np);
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    bool have = false;
    Run best;
    for (const EndClass& c : classes) {
        // Straight-line kinetic energy bounds any curve in the class from below.
        const double lower = c.norm_sq / (2.0 * duration) - k0 * duration;
        if (have && lower > best.value + opts.tol) break;
        ++result.classes_optimized;

        std::vector<double> line((k + 1) * np);
        for (std::size_t j = 0; j <= k; ++j)
            for (std::size_t i = 0; i < np; ++i)
                line[j * np + i] = j == k ? c.target[i]
                                          : m[i] + (c.target[i] - m[i]) * static_cast<double>(j) /
                                                       static_cast<double>(k);

        for (std::size_t r = 0; r < opts.restarts; ++r) {
            std::vector<double> start = line;
            if (r > 0) {
                // Smooth bump of random amplitude per particle and mode.
                const double amp = 0.1 * static_cast<double>(r);
                for (std::size_t i = 0; i < np; ++i) {
                    const double a1 = amp * normal(rng);
                    const double a2 = amp * normal(rng);
                    for (std::size_t j = 1; j < k; ++j) {
                        const double s = static_cast<double>(j) / static_cast<double>(k);
                        start[j * np + i] += a1 * std::sin(std::numbers::pi * s) +
                                             a2 * std::sin(2.0 * std::numbers::pi * s);
                    }
                }
            }
            Run run = descend(f, std::move(start), np, opts);
            const bool better = !have || run.value < best.value ||
                                (run.value == best.value && run.q < best.q);
            if (better) {
                best = std::move(run);
                have = true;
            }
        }
    }

    result.curve = to_curve(best.q, times, np);
    result.report = action(result.curve, w);
    result.grad_norm = best.grad_norm;
    result.iterations = best.iterations;
    result.converged = best.converged;
    return result;
}

DpResult dp_minimize(const ParticleConfig& m, const ParticleConfig& n, double duration, const Potential& w,
                     std::size_t cells, std::size_t steps, std::size_t max_states) {
    require_same_size(m, n);
    require_positive(duration);
    if (steps < 1) fail(ErrorCode::invalid_argument, "steps must be >= 1");
    const GridStateSpace space(m.size(), cells, max_states);
    const std::size_t s = space.size();
    const double dt = duration / static_cast<double>(steps);

    auto cost = [&](std::size_t from, std::size_t to) {
        return space.dist_sq(from, to) / (2.0 * dt) - dt * w.eval(space.midpoint(from, to));
    };
    std::vector<double> table;
    if (s <= (std::size_t{1} << 12)) {
        table.resize(s * s);
        for (std::size_t a = 0; a < s; ++a)
            for (std::size_t b = 0; b < s; ++b) table[a * s + b] = cost(a, b);
    }
    auto step_cost = [&](std::size_t from, std::size_t to) {
        return table.empty() ? cost(from, to) : table[from * s + to];
    };

    DpResult out;
    out.start_state = space.snap(m);
    out.end_state = space.snap(n);

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> value(s, inf), next(s);
    std::vector<std::size_t> parent(steps * s, 0);
    value[out.start_state] = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        for (std::size_t to = 0; to < s; ++to) {
            double best = inf;
            std::size_t arg = 0;
            for (std::size_t from = 0; from < s; ++from) {
                if (value[from] == inf) continue;
                const double c = value[from] + step_cost(from, to);
                if (c < best) {
                    best = c;
                    arg = from;
                }
            }
            next[to] = best;
            parent[j * s + to] = arg;
        }
        value.swap(next);
    }
    out.value = value[out.end_state];

    std::vector<std::size_t> path(steps + 1);
    path[steps] = out.end_state;
    for (std::size_t j = steps; j-- > 0;) path[j] = parent[j * s + path[j + 1]];

    const ParticleConfig start = space.config(path[0]);
    std::vector<LiftedConfig> knots;
    knots.emplace_back(std::vector<double>(start.points().begin(), start.points().end()));
    for (std::size_t j = 1; j <= steps; ++j) knots.push_back(lift_towards(knots.back(), space.config(path[j])));
    out.curve = Curve(uniform_times(duration, steps), std::move(knots));
    return out;
}

}  // namespace wkam
