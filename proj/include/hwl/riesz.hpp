#pragma once

// Riesz potential energies of shells, I(t, h) = iint_{A x A} |x - y|^{-g},
// the geometric-probability mean E|U - V|^{-g}, the increment variance of
// the limit process and the scaling/bound checks.

#include <hwl/analysis.hpp>
#include <hwl/errors.hpp>
#include <hwl/geometry.hpp>
#include <hwl/montecarlo.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace hwl {

inline void check_riesz_exponent(double exponent, int n) {
    if (!(exponent >= 0.0)) throw DomainError("Riesz exponent must be nonnegative");
    if (!(exponent < static_cast<double>(n)))
        throw DomainError("Riesz exponent must be below the dimension (kernel not integrable)");
}

/// E|U - V|^{-2g} is infinite once 2g >= n; such kernels are aggregated by
/// median of block means.
inline Aggregation riesz_aggregation(double exponent, int n) {
    return 2.0 * exponent >= n ? Aggregation::median_of_means : Aggregation::mean;
}

inline double riesz_kernel(double d2, double exponent) {
    if (exponent == 1.0) return 1.0 / std::sqrt(d2);
    if (exponent == 0.0) return 1.0;
    return std::exp(-0.5 * exponent * std::log(d2));
}

inline void check_sampler(const Window& w, const SamplingOptions& opt) {
    if (opt.quasi_random && !w.supports_quasi_random())
        throw UnsupportedError("quasi-random sampling needs a rejection-free boundary sampler (" + w.name() + ")");
}

/// Mean of |U - V|^{-exponent} over independent uniform pairs of the shell,
/// drawn from the given stream.
inline Estimate mean_riesz_stream(const ShellRegion& region, double exponent, const SamplingOptions& opt,
                                  std::uint64_t stream) {
    check_riesz_exponent(exponent, region.dim());
    check_sampler(region.window(), opt);
    const int n = region.dim();
    return monte_carlo_mean(opt, stream, riesz_aggregation(exponent, n), [&](auto& draw) {
        Point u = region.sample(draw);
        Point v = region.sample(draw);
        return riesz_kernel(distance2(u, v, n), exponent);
    });
}

/// E|U - V|^{-exponent} for U, V independent and uniform in the shell.
inline Estimate mean_riesz(const ShellRegion& region, double exponent, const SamplingOptions& opt = {}) {
    return mean_riesz_stream(region, exponent, opt, streams::riesz_pairs);
}

/// I(t, h) = |shell|^2 E|U - V|^{-exponent}.
inline Estimate riesz_energy(const ShellRegion& region, double exponent, const SamplingOptions& opt = {}) {
    double v = region.volume();
    return scaled(mean_riesz(region, exponent, opt), v * v);
}

/// I(t, h) for the interval window: 2 h^{2-a} / ((1-a)(2-a)), independent of t.
inline double riesz_1d_exact(double t, double h, double alpha) {
    if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
    if (!(h > 0.0)) throw DomainError("h must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("one-dimensional Riesz energy needs alpha in (0, 1)");
    return 2.0 * std::pow(h, 2.0 - alpha) / ((1.0 - alpha) * (2.0 - alpha));
}

namespace detail {

/// Distance density of two uniform points in the unit disk, divided by r.
inline double disk_distance_density_over_r(double r) {
    if (r < 0.0 || r >= 2.0) return 0.0;
    return 4.0 / std::numbers::pi * std::acos(0.5 * r) - r / std::numbers::pi * std::sqrt(4.0 - r * r);
}

inline double disk_distance_density(double r) { return r > 0.0 ? r * disk_distance_density_over_r(r) : 0.0; }

/// Distance density of two uniform points in the unit square, divided by r.
inline double square_distance_density_over_r(double r) {
    if (r < 0.0 || r >= std::numbers::sqrt2) return 0.0;
    if (r <= 1.0) return 2.0 * (std::numbers::pi - 4.0 * r + r * r);
    return 2.0 * (4.0 * std::sqrt(r * r - 1.0) - (r * r + 2.0 - std::numbers::pi) - 4.0 * std::acos(1.0 / r));
}

inline double square_distance_density(double r) { return r > 0.0 ? r * square_distance_density_over_r(r) : 0.0; }

template <class F>
double tanh_sinh_integral(F&& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, a, b, 1e-13);
}

}  // namespace detail

/// iint_{Delta(1)^2} |x - y|^{-exponent}. Closed form for the interval and
/// segments, distance-density quadrature for the centered disk and the
/// square, Monte Carlo otherwise.
inline Estimate window_energy(const Window& w, double exponent, const SamplingOptions& opt = {}) {
    check_riesz_exponent(exponent, w.dim());
    const double vol = w.unit_volume();
    if (w.dim() == 1) {
        // every one-dimensional window here is a segment of length |Delta(1)|
        if (exponent == 0.0) return Estimate::exact(vol * vol);
        return Estimate::exact(riesz_1d_exact(0.0, vol, exponent));
    }
    if (w.shape() == Shape::ball && w.dim() == 2) {
        // the disk energy does not depend on the homothety center
        double m = detail::tanh_sinh_integral(
            [&](double r) { return std::pow(r, 1.0 - exponent) * detail::disk_distance_density_over_r(r); }, 0.0, 2.0);
        return Estimate::exact(vol * vol * m, Method::quadrature);
    }
    if (w.shape() == Shape::cube && w.dim() == 2) {
        auto f = [&](double r) { return std::pow(r, 1.0 - exponent) * detail::square_distance_density_over_r(r); };
        double m = detail::tanh_sinh_integral(f, 0.0, 1.0) + detail::tanh_sinh_integral(f, 1.0, std::numbers::sqrt2);
        // [-1, 1]^2 is the unit square scaled by 2
        return Estimate::exact(vol * vol * std::pow(2.0, -exponent) * m, Method::quadrature);
    }
    return scaled(mean_riesz_stream(shell(w, 0.0, 1.0), exponent, opt, streams::window_energy), vol * vol);
}

/// c2(n, kappa, alpha, Delta) = c1^kappa kappa! iint_{Delta^2} |x-y|^{-kappa alpha}.
inline Estimate c2(const KernelParams& p, const Window& w, const SamplingOptions& opt = {}) {
    p.validate();
    if (p.n != w.dim()) throw DomainError("kernel dimension does not match the window dimension");
    if (!(w.unit_volume() > 0.0)) throw DomainError("window has zero volume");
    return scaled(window_energy(w, p.exponent(), opt), std::pow(c1(p.n, p.alpha), p.kappa) * factorial(p.kappa));
}

struct VarianceResult {
    Estimate variance;
    /// t + h > 1: outside the process domain [0, 1], kept for scaling studies.
    bool beyond_unit_domain = false;
};

/// Var(Y(t+h) - Y(t)) = kappa! I(t, h) / c2 = I(t, h) / (c1^kappa iint_Delta).
/// Method::closed_form is available for the interval window only.
inline VarianceResult variance_increment(const KernelParams& p, const Window& w, double t, double h, Method method,
                                         const SamplingOptions& opt = {},
                                         std::optional<Estimate> energy = std::nullopt) {
    p.validate();
    if (p.n != w.dim()) throw DomainError("kernel dimension does not match the window dimension");
    const ShellRegion region(w, t, h);
    const double g = p.exponent();
    const double c1k = std::pow(c1(p.n, p.alpha), p.kappa);

    VarianceResult out;
    out.beyond_unit_domain = t + h > 1.0;
    switch (method) {
        case Method::closed_form: {
            if (w.shape() != Shape::interval) throw UnsupportedError("closed-form increment variance needs the interval window");
            double value = riesz_1d_exact(t, h, g) / (c1k * riesz_1d_exact(0.0, 1.0, g));
            out.variance = Estimate::exact(value);
            return out;
        }
        case Method::monte_carlo:
        case Method::quasi_random: {
            SamplingOptions o = opt;
            o.quasi_random = method == Method::quasi_random;
            Estimate energy_est = energy ? *energy : window_energy(w, g, o);
            out.variance = scaled(ratio(riesz_energy(region, g, o), energy_est), 1.0 / c1k);
            out.variance.method = method;
            return out;
        }
        case Method::quadrature: break;
    }
    throw UnsupportedError("increment variance: unsupported method " + std::string(to_string(method)));
}

struct ScalingFit {
    double slope = 0.0;
    double slope_error = 0.0;
    double intercept = 0.0;
    /// 2 - exponent / n.
    double expected = 0.0;
    std::vector<double> h;
    std::vector<Estimate> energy;
};

/// Least-squares slope of log I(0, h) against log h. Monte Carlo points use
/// independent substreams, so the fit reflects sampling noise.
inline ScalingFit scaling_exponent(const Window& w, double exponent, const std::vector<double>& h_grid, Method method,
                                   const SamplingOptions& opt = {}) {
    check_riesz_exponent(exponent, w.dim());
    if (h_grid.size() < 4) throw DomainError("scaling fit needs at least 4 values of h");
    double lo = h_grid.front(), hi = h_grid.front();
    for (double h : h_grid) {
        if (!(h > 0.0)) throw DomainError("h values must be positive");
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    if (hi < 10.0 * lo) throw DomainError("h grid must span at least one decade");

    ScalingFit fit;
    fit.expected = 2.0 - exponent / w.dim();
    fit.h = h_grid;
    SamplingOptions o = opt;
    o.quasi_random = method == Method::quasi_random;
    for (std::size_t k = 0; k < h_grid.size(); ++k) {
        const ShellRegion region(w, 0.0, h_grid[k]);
        if (method == Method::closed_form) {
            if (w.shape() != Shape::interval) throw UnsupportedError("closed-form energy needs the interval window");
            fit.energy.push_back(Estimate::exact(riesz_1d_exact(0.0, h_grid[k], exponent)));
        } else {
            double v = region.volume();
            fit.energy.push_back(
                scaled(mean_riesz_stream(region, exponent, o, (streams::scaling_grid << 16) | k), v * v));
        }
    }
    const std::size_t m = h_grid.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> xs(m), ys(m);
    for (std::size_t k = 0; k < m; ++k) {
        xs[k] = std::log(h_grid[k]);
        ys[k] = std::log(fit.energy[k].value);
        mx += xs[k];
        my += ys[k];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double var = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double c = (xs[k] - mx) / sxx;
        double rel = fit.energy[k].std_error / fit.energy[k].value;
        var += c * c * rel * rel;
    }
    fit.slope_error = std::sqrt(var);
    return fit;
}

struct BoundReport {
    double epsilon = 0.0;
    /// C in I(0, h) >= C h^{2 - g/n}, from a ball inscribed in Delta(1).
    double lower_constant = 0.0;
    double lower_bound = 0.0;
    Estimate energy_at_zero;
    /// |Delta(1)|^2 h^{2 - g/n + eps}.
    double upper_bound = 0.0;
    Estimate energy_at_large_t;
    bool lower_ok = false;
    bool upper_ok = false;
    /// (I(0,h) - lower) / lower and (upper - I(t_large,h)) / upper.
    double lower_margin = 0.0;
    double upper_margin = 0.0;
    /// t_large below 10: the upper bound is an asymptotic statement in t.
    bool preasymptotic = false;
};

/// Checks I(0,h) >= C h^{2-g/n} and I(t_large, h) <= |Delta(1)|^2 h^{2-g/n+eps},
/// each at three standard errors. eps defaults to g / (2n).
inline BoundReport bound_check(const Window& w, const KernelParams& p, double h, double t_large,
                               const SamplingOptions& opt = {}, std::optional<double> epsilon = std::nullopt,
                               double tolerance = 0.0) {
    p.validate();
    if (p.n != w.dim()) throw DomainError("kernel dimension does not match the window dimension");
    if (!(h > 0.0)) throw DomainError("h must be positive");
    if (!(t_large > 0.0)) throw DomainError("t_large must be positive");
    const int n = w.dim();
    const double g = p.exponent();
    BoundReport r;
    r.epsilon = epsilon.value_or(g / (2.0 * n));
    if (!(r.epsilon > 0.0 && r.epsilon < g / n)) throw DomainError("epsilon must lie in (0, kappa alpha / n)");
    r.preasymptotic = t_large < 10.0;

    // a shifted copy of B(d) meets B(d) in at least 2^{-n} of its volume
    const double d = w.inscribed_radius();
    r.lower_constant = std::pow(2.0, -n) * unit_ball_volume(n) * std::pow(d, n) * unit_sphere_area(n) *
                       std::pow(d, n - g) / (n - g);
    const double expo = 2.0 - g / n;
    r.lower_bound = r.lower_constant * std::pow(h, expo);
    r.upper_bound = w.unit_volume() * w.unit_volume() * std::pow(h, expo + r.epsilon);

    r.energy_at_zero = riesz_energy(shell(w, 0.0, h), g, opt);
    r.energy_at_large_t = riesz_energy(shell(w, t_large, h), g, opt);
    r.lower_ok = r.energy_at_zero.value - 3.0 * r.energy_at_zero.std_error >= r.lower_bound;
    r.upper_ok = r.energy_at_large_t.value + 3.0 * r.energy_at_large_t.std_error <= r.upper_bound * (1.0 + tolerance);
    r.lower_margin = (r.energy_at_zero.value - r.lower_bound) / r.lower_bound;
    r.upper_margin = (r.upper_bound - r.energy_at_large_t.value) / r.upper_bound;
    return r;
}

}  // namespace hwl
