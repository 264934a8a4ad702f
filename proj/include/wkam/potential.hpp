#pragma once

#include <span>
#include <string>
#include <vector>

#include "wkam/geometry.hpp"

namespace wkam {

/// One Fourier mode: cos_coef * cos(2 pi k x) + sin_coef * sin(2 pi k x).
struct Harmonic {
    int k = 1;
    double cos_coef = 0.0;
    double sin_coef = 0.0;
};

/// Smooth 1-periodic function given by a truncated Fourier series.
class PeriodicFunction {
public:
    PeriodicFunction() = default;
    PeriodicFunction(double constant, std::vector<Harmonic> harmonics);

    static PeriodicFunction cosine(double scale = 1.0);
    static PeriodicFunction sine(double scale = 1.0);
    /// scale * cos(2 pi (x - phase))
    static PeriodicFunction shifted_cosine(double phase, double scale = 1.0);

    double operator()(double x) const noexcept;
    double derivative(double x) const noexcept;
    /// Sum of per-mode amplitudes plus |constant|; an upper bound for |f|.
    double bound() const noexcept;

    double constant() const noexcept { return constant_; }
    const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
    PeriodicFunction scaled(double a) const;

private:
    double constant_ = 0.0;
    std::vector<Harmonic> harmonics_;
};

/// Rearrangement-invariant, periodic potential W on configurations.
///
/// one_body(f):  W = (1/n)   sum_i f(x_i)
/// pairwise(w):  W = (1/n^2) sum_i sum_j w(x_i - x_j)
/// sum:          W = sum of parts
class Potential {
public:
    enum class Kind { zero, one_body, pairwise, sum };

    Potential() = default;  // zero
    static Potential zero() { return {}; }
    static Potential one_body(PeriodicFunction f);
    static Potential pairwise(PeriodicFunction w);
    static Potential sum(std::vector<Potential> parts);
    static Potential constant(double value);

    Kind kind() const noexcept { return kind_; }
    const PeriodicFunction& function() const noexcept { return fn_; }
    const std::vector<Potential>& parts() const noexcept { return parts_; }

    double eval(const ParticleConfig& c) const;
    /// Partial derivatives with respect to each lifted coordinate.
    std::vector<double> grad(std::span<const double> reals) const;
    std::vector<double> grad(const LiftedConfig& c) const { return grad(c.reals()); }
    /// Certified K0 with |eval| <= K0 everywhere.
    double certify_bound() const noexcept;

    /// W + kappa.
    Potential shifted(double kappa) const;

private:
    double eval_points(std::span<const double> x) const;
    void accumulate_grad(std::span<const double> x, std::span<double> g) const;

    Kind kind_ = Kind::zero;
    PeriodicFunction fn_;
    std::vector<Potential> parts_;
};

const char* to_string(Potential::Kind k) noexcept;

}  // namespace wkam
