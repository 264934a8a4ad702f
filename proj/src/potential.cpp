#include "wkam/potential.hpp"

#include <cmath>
#include <numbers>

#include "wkam/error.hpp"

namespace wkam {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

PeriodicFunction::PeriodicFunction(double constant, std::vector<Harmonic> harmonics)
    : constant_(constant), harmonics_(std::move(harmonics)) {
    if (!std::isfinite(constant_)) fail(ErrorCode::invalid_argument, "constant term is not finite");
    for (const Harmonic& h : harmonics_) {
        if (h.k < 1) fail(ErrorCode::invalid_argument, "harmonic index must be >= 1");
        if (!std::isfinite(h.cos_coef) || !std::isfinite(h.sin_coef))
            fail(ErrorCode::invalid_argument, "Fourier coefficient is not finite");
    }
}

PeriodicFunction PeriodicFunction::cosine(double scale) { return {0.0, {{1, scale, 0.0}}}; }

PeriodicFunction PeriodicFunction::sine(double scale) { return {0.0, {{1, 0.0, scale}}}; }

PeriodicFunction PeriodicFunction::shifted_cosine(double phase, double scale) {
    return {0.0, {{1, scale * std::cos(two_pi * phase), scale * std::sin(two_pi * phase)}}};
}

double PeriodicFunction::operator()(double x) const noexcept {
    double v = constant_;
    for (const Harmonic& h : harmonics_) {
        const double t = two_pi * h.k * x;
        if (h.cos_coef != 0.0) v += h.cos_coef * std::cos(t);
        if (h.sin_coef != 0.0) v += h.sin_coef * std::sin(t);
    }
    return v;
}

double PeriodicFunction::derivative(double x) const noexcept {
    double v = 0.0;
    for (const Harmonic& h : harmonics_) {
        const double w = two_pi * h.k;
        const double t = w * x;
        if (h.cos_coef != 0.0) v -= w * h.cos_coef * std::sin(t);
        if (h.sin_coef != 0.0) v += w * h.sin_coef * std::cos(t);
    }
    return v;
}

double PeriodicFunction::bound() const noexcept {
    double b = std::abs(constant_);
    for (const Harmonic& h : harmonics_) b += std::hypot(h.cos_coef, h.sin_coef);
    return b;
}

PeriodicFunction PeriodicFunction::scaled(double a) const {
    std::vector<Harmonic> hs = harmonics_;
    for (Harmonic& h : hs) {
        h.cos_coef *= a;
        h.sin_coef *= a;
    }
    return {constant_ * a, std::move(hs)};
}

Potential Potential::one_body(PeriodicFunction f) {
    Potential p;
    p.kind_ = Kind::one_body;
    p.fn_ = std::move(f);
    return p;
}

Potential Potential::pairwise(PeriodicFunction w) {
    Potential p;
    p.kind_ = Kind::pairwise;
    p.fn_ = std::move(w);
    return p;
}

Potential Potential::sum(std::vector<Potential> parts) {
    Potential p;
    p.kind_ = Kind::sum;
    p.parts_ = std::move(parts);
    return p;
}

Potential Potential::constant(double value) { return one_body(PeriodicFunction(value, {})); }

Potential Potential::shifted(double kappa) const { return sum({*this, constant(kappa)}); }

double Potential::eval_points(std::span<const double> x) const {
    const double n = static_cast<double>(x.size());
    switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::one_body: {
            double s = 0.0;
            for (double xi : x) s += fn_(xi);
            return s / n;
        }
        case Kind::pairwise: {
            double s = 0.0;
            for (double xi : x)
                for (double xj : x) s += fn_(xi - xj);
            return s / (n * n);
        }
        case Kind::sum: {
            double s = 0.0;
            for (const Potential& p : parts_) s += p.eval_points(x);
            return s;
        }
    }
    return 0.0;
}

double Potential::eval(const ParticleConfig& c) const { return eval_points(c.points()); }

void Potential::accumulate_grad(std::span<const double> x, std::span<double> g) const {
    const double n = static_cast<double>(x.size());
    switch (kind_) {
        case Kind::zero:
            return;
        case Kind::one_body:
            for (std::size_t i = 0; i < x.size(); ++i) g[i] += fn_.derivative(x[i]) / n;
            return;
        case Kind::pairwise:
            for (std::size_t p = 0; p < x.size(); ++p) {
                double s = 0.0;
                for (std::size_t j = 0; j < x.size(); ++j)
                    s += fn_.derivative(x[p] - x[j]) - fn_.derivative(x[j] - x[p]);
                g[p] += s / (n * n);
            }
            return;
        case Kind::sum:
            for (const Potential& part : parts_) part.accumulate_grad(x, g);
            return;
    }
}

std::vector<double> Potential::grad(std::span<const double> reals) const {
    std::vector<double> g(reals.size(), 0.0);
    accumulate_grad(reals, g);
    return g;
}

double Potential::certify_bound() const noexcept {
    switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::one_body:
        case Kind::pairwise:
            return fn_.bound();
        case Kind::sum: {
            double b = 0.0;
            for (const Potential& p : parts_) b += p.certify_bound();
            return b;
        }
    }
    return 0.0;
}

const char* to_string(Potential::Kind k) noexcept {
    switch (k) {
        case Potential::Kind::zero: return "zero";
        case Potential::Kind::one_body: return "one_body";
        case Potential::Kind::pairwise: return "pairwise";
        case Potential::Kind::sum: return "sum";
    }
    return "?";
}

}  // namespace wkam
