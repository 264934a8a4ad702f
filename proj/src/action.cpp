#include "wkam/action.hpp"

#include <cmath>
#include <string>

#include "wkam/error.hpp"

namespace wkam {

Curve::Curve(std::vector<double> times, std::vector<LiftedConfig> knots)
    : times_(std::move(times)), knots_(std::move(knots)) {
    if (knots_.empty()) fail(ErrorCode::invalid_argument, "curve has no knots");
    if (times_.size() != knots_.size())
        fail(ErrorCode::dimension_mismatch, "curve has " + std::to_string(times_.size()) + " times but " +
                                                std::to_string(knots_.size()) + " knots");
    for (std::size_t j = 0; j + 1 < times_.size(); ++j)
        if (!(times_[j + 1] > times_[j]))
            fail(ErrorCode::invalid_argument, "degenerate segment " + std::to_string(j) + ": times not increasing");
    for (const LiftedConfig& q : knots_)
        if (q.size() != knots_.front().size()) fail(ErrorCode::dimension_mismatch, "knots differ in particle count");
}

Curve Curve::reversed() const {
    const double t0 = times_.front();
    const double t1 = times_.back();
    std::vector<double> t(times_.rbegin(), times_.rend());
    for (double& s : t) s = t0 + t1 - s;
    return Curve(std::move(t), std::vector<LiftedConfig>(knots_.rbegin(), knots_.rend()));
}

bool Curve::lifts_consistent(double tol) const {
    for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
        const double moved = weighted_sq(knots_[j + 1].reals(), knots_[j].reals());
        const double matched = config_dist_sq(knots_[j].base(), knots_[j + 1].base());
        if (std::abs(moved - matched) > tol) return false;
    }
    return true;
}

double weighted_sq(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

double lagrangian(const ParticleConfig& c, std::span<const double> velocity, const Potential& w) {
    if (velocity.size() != c.size())
        fail(ErrorCode::dimension_mismatch, "velocity has " + std::to_string(velocity.size()) +
                                                " entries for " + std::to_string(c.size()) + " particles");
    double s = 0.0;
    for (double v : velocity) s += v * v;
    return 0.5 * s / static_cast<double>(velocity.size()) - w.eval(c);
}

ActionReport action(const Curve& curve, const Potential& w) {
    ActionReport r;
    const auto& t = curve.times();
    const auto& q = curve.knots();
    const std::size_t n = curve.particles();
    std::vector<double> mid(n);
    r.energy_samples.reserve(curve.segments());
    for (std::size_t j = 0; j + 1 < q.size(); ++j) {
        const double dt = t[j + 1] - t[j];
        const double sq = weighted_sq(q[j + 1].reals(), q[j].reals());
        for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (q[j][i] + q[j + 1][i]);
        const double wm = w.eval(ParticleConfig::canonicalize(mid));
        r.kinetic += sq / (2.0 * dt);
        r.potential_integral += dt * wm;
        r.energy_samples.push_back(0.5 * sq / (dt * dt) + wm);
    }
    r.total = r.kinetic - r.potential_integral;
    return r;
}

HolderReport holder_check(const Curve& curve) {
    HolderReport r;
    const auto& t = curve.times();
    const auto& q = curve.knots();
    double energy = 0.0;
    for (std::size_t j = 0; j + 1 < q.size(); ++j)
        energy += weighted_sq(q[j + 1].reals(), q[j].reals()) / (t[j + 1] - t[j]);
    r.k1 = std::sqrt(energy);

    bool first = true;
    for (std::size_t a = 0; a < q.size(); ++a) {
        for (std::size_t b = a + 1; b < q.size(); ++b) {
            const double dist = config_dist(q[a].base(), q[b].base());
            const double bound = r.k1 * std::sqrt(t[b] - t[a]);
            const double slack = dist - bound;
            if (first || slack > r.worst_slack) r.worst_slack = slack;
            first = false;
            ++r.pairs;
            // Relative allowance for rounding in the sums above.
            if (dist > bound * (1.0 + 1e-12) + 1e-15) ++r.violations;
        }
    }
    return r;
}

}  // namespace wkam
