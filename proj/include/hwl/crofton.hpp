#pragma once

// Crofton's mean value formula for M(t, h) = E|U - V|^{-g}, U, V uniform in
// the shell A(t) = Delta((t+h)^{1/n}) \ Delta(t^{1/n}).
//
// Both boundaries of A(t) sweep volume at the rate |Delta(1)| per unit t and
// |A(t)| = h |Delta(1)| stays constant, so differentiating the double
// integral (each of the two points in turn) gives
//
//     dM/dt = 2 (|Delta(1)| / |A|) (M+ - M-) = (2 / h) (M+ - M-),
//
// where M+/- = E|Y - X|^{-g} with X uniform in A and Y on the outer/inner
// boundary with density proportional to the normal velocity.

#include <hwl/errors.hpp>
#include <hwl/geometry.hpp>
#include <hwl/montecarlo.hpp>
#include <hwl/riesz.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace hwl {

/// E|Y - X|^{-exponent}, Y on the chosen boundary of the shell with
/// velocity-weighted density and X uniform in the shell.
inline Estimate boundary_conditioned_mean(const Window& w, double t, double h, Side side, double exponent,
                                          const SamplingOptions& opt = {}) {
    const ShellRegion region(w, t, h);
    if (side == Side::inner && !(t > 0.0)) throw DomainError("the shell has no inner boundary at t = 0");
    check_riesz_exponent(exponent, w.dim());
    check_sampler(w, opt);
    const int n = w.dim();
    return monte_carlo_mean(opt, streams::boundary_mean, riesz_aggregation(exponent, n), [&](auto& draw) {
        Point y = region.sample_boundary(draw, side);
        Point x = region.sample(draw);
        return riesz_kernel(distance2(y, x, n), exponent);
    });
}

struct CroftonSides {
    Estimate m_plus;
    Estimate m_minus;
    /// (2/h)(M+ - M-), estimated from paired samples.
    Estimate rhs;
};

/// M+, M- and the Crofton right-hand side (2/h)(M+ - M-). The two boundary
/// points share their unit-boundary draw and the shell point is common, so
/// the difference is estimated with paired samples.
inline CroftonSides crofton_sides(const Window& w, double t, double h, double exponent,
                                  const SamplingOptions& opt = {}) {
    if (!(t > 0.0)) throw DomainError("the Crofton right-hand side needs t > 0");
    const ShellRegion region(w, t, h);
    check_riesz_exponent(exponent, w.dim());
    check_sampler(w, opt);
    const int n = w.dim();
    const double a = region.inner_scale(), b = region.outer_scale();
    auto moments = run_blocks<3>(opt, streams::crofton_diff, [&](auto& draw) {
        Point y = w.sample_unit_boundary(draw);
        Point x = region.sample(draw);
        Point yo{}, yi{};
        for (int i = 0; i < n; ++i) {
            yo[i] = b * y[i];
            yi[i] = a * y[i];
        }
        double kp = riesz_kernel(distance2(yo, x, n), exponent);
        double km = riesz_kernel(distance2(yi, x, n), exponent);
        return std::array<double, 3>{kp, km, kp - km};
    });
    const Aggregation agg = riesz_aggregation(exponent, n);
    CroftonSides out;
    out.m_plus = moments.estimate(0, agg);
    out.m_minus = moments.estimate(1, agg);
    out.rhs = scaled(moments.estimate(2, agg), 2.0 / h);
    return out;
}

/// Right-hand side of Crofton's formula, (2/h)(M+ - M-).
inline Estimate crofton_rhs(const Window& w, double t, double h, double exponent, const SamplingOptions& opt = {}) {
    return crofton_sides(w, t, h, exponent, opt).rhs;
}

struct CroftonReport {
    double t = 0.0;
    double h = 0.0;
    double exponent = 0.0;
    Estimate m_value;
    Estimate m_plus;
    Estimate m_minus;
    /// Central difference with half the step (the finer of the two).
    Estimate fd_derivative;
    /// Central difference with the full step.
    Estimate fd_coarse;
    double step = 0.0;
    /// Richardson estimate |fd(step) - fd(step/2)| / 3 of the O(step^2) bias.
    double bias = 0.0;
    Estimate rhs;
    double residual = 0.0;
    double combined_stderr = 0.0;
    /// 3 combined stderr + bias.
    double tolerance = 0.0;
    bool passed = false;
    /// The step-halving bias estimate exceeds the statistical tolerance, i.e.
    /// the step is too large for the sample size.
    bool step_flag = false;
};

inline double default_fd_step(double t) { return std::min(0.01, t / 4.0); }

/// Compares a finite-difference derivative of M in t with Crofton's
/// right-hand side. Shell points at t +- step and t +- step/2 are built from
/// the same uniforms (common random numbers).
inline CroftonReport crofton_residual(const Window& w, double t, double h, double exponent, double fd_step,
                                      const SamplingOptions& opt = {}) {
    if (!(fd_step > 0.0 && t > fd_step)) throw DomainError("finite-difference step must satisfy 0 < step < t");
    if (!(h > 0.0)) throw DomainError("h must be positive");
    check_riesz_exponent(exponent, w.dim());
    check_sampler(w, opt);
    const int n = w.dim();

    CroftonReport r;
    r.t = t;
    r.h = h;
    r.exponent = exponent;
    r.step = fd_step;
    r.m_value = mean_riesz(shell(w, t, h), exponent, opt);
    CroftonSides sides = crofton_sides(w, t, h, exponent, opt);
    r.m_plus = sides.m_plus;
    r.m_minus = sides.m_minus;
    r.rhs = sides.rhs;

    const double d = fd_step;
    const std::array<double, 4> ts{t + d, t - d, t + 0.5 * d, t - 0.5 * d};
    auto moments = run_blocks<3>(opt, streams::finite_difference, [&](auto& draw) {
        double u1 = draw.uniform();
        Point y1 = w.sample_unit_boundary(draw);
        double u2 = draw.uniform();
        Point y2 = w.sample_unit_boundary(draw);
        std::array<double, 4> k{};
        for (int j = 0; j < 4; ++j) {
            double s1 = nth_root(ts[j] + u1 * h, n), s2 = nth_root(ts[j] + u2 * h, n);
            double dist2 = 0.0;
            for (int i = 0; i < n; ++i) {
                double diff = s1 * y1[i] - s2 * y2[i];
                dist2 += diff * diff;
            }
            k[j] = riesz_kernel(dist2, exponent);
        }
        double coarse = (k[0] - k[1]) / (2.0 * d);
        double fine = (k[2] - k[3]) / d;
        return std::array<double, 3>{coarse, fine, coarse - fine};
    });
    // the paired differences are light-tailed enough for plain averaging
    r.fd_coarse = moments.estimate(0, Aggregation::mean);
    r.fd_derivative = moments.estimate(1, Aggregation::mean);
    Estimate halving = moments.estimate(2, Aggregation::mean);
    r.bias = std::abs(halving.value) / 3.0;

    r.residual = r.fd_derivative.value - r.rhs.value;
    r.combined_stderr = std::hypot(r.fd_derivative.std_error, r.rhs.std_error);
    r.tolerance = 3.0 * r.combined_stderr + r.bias;
    r.step_flag = std::abs(halving.value) > 3.0 * halving.std_error && r.bias > 3.0 * r.combined_stderr;
    r.passed = std::abs(r.residual) <= r.tolerance;
    return r;
}

// ---------------------------------------------------------------------------
// t -> 0 limits on disks

namespace detail {

/// Distance from the homothety center to the unit circle of a disk whose
/// center sits at -c, in direction phi.
inline double disk_ray(double cx, double cy, double phi) {
    double cu = cx * std::cos(phi) + cy * std::sin(phi);
    return -cu + std::sqrt(cu * cu + 1.0 - cx * cx - cy * cy);
}

template <class F>
double periodic_integral(F&& f) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 2.0 * std::numbers::pi, 15, 1e-13);
}

}  // namespace detail

/// lim_{t->0} M-(t, h): E|X|^{-g} for X uniform in Delta(h^{1/2}), by polar
/// integration about the homothety center. Disks only.
inline double disk_m_minus_limit(const Window& w, double h, double exponent) {
    if (w.shape() != Shape::ball || w.dim() != 2) throw DomainError("limit oracles are available for disks only");
    check_riesz_exponent(exponent, 2);
    const Point& c = w.homothety_offset();
    double integral = detail::periodic_integral([&](double phi) {
        return std::pow(detail::disk_ray(c[0], c[1], phi), 2.0 - exponent) / (2.0 - exponent);
    });
    return std::pow(h, -exponent / 2.0) * integral / std::numbers::pi;
}

/// lim_{t->0} M+(t, h): the mean of |y - X|^{-g} over the disk Delta(h^{1/2})
/// from a boundary point y. By rotation about the disk's own center it does
/// not depend on y, hence not on the homothety center either.
inline double disk_m_plus_limit(const Window& w, double h, double exponent) {
    if (w.shape() != Shape::ball || w.dim() != 2) throw DomainError("limit oracles are available for disks only");
    check_riesz_exponent(exponent, 2);
    // chord from a boundary point in direction phi (inward half-plane) has
    // length -2 cos(phi)
    double integral = detail::periodic_integral([&](double phi) {
        double chord = -2.0 * std::cos(phi);
        return chord > 0.0 ? std::pow(chord, 2.0 - exponent) / (2.0 - exponent) : 0.0;
    });
    return std::pow(h, -exponent / 2.0) * integral / std::numbers::pi;
}

struct LimitPoint {
    double t = 0.0;
    Estimate m_plus;
    Estimate m_minus;
    Estimate rhs;
};

struct OriginLimitReport {
    double h = 0.0;
    double exponent = 0.0;
    std::vector<LimitPoint> points;
    /// Linear extrapolation in sqrt(t) to t = 0 over the three smallest t.
    Estimate m_plus_limit;
    Estimate m_minus_limit;
    Estimate derivative_limit;
    /// Quadrature values of the limits.
    double m_plus_oracle = 0.0;
    double m_minus_oracle = 0.0;
    /// The t -> 0 limit of M+ as displayed in the literature,
    /// h^{1/2 - g/2} / (2 pi) int_{dB} int_B |x - y|^{-g}: it integrates over
    /// the disk instead of averaging and carries an extra h^{1/2}, so it
    /// equals pi h^{1/2} m_plus_oracle.
    double m_plus_display = 0.0;
    bool derivative_negative = false;
    /// |derivative limit| / stderr.
    double sigma_margin = 0.0;
    /// Extrapolation through the two smallest points disagrees with the
    /// three-point fit beyond three standard errors.
    bool extrapolation_flag = false;
};

namespace detail {

/// Intercept at x = 0 of the least-squares line through (x_k, e_k), with
/// the standard error propagated from independent points.
inline Estimate extrapolate_to_zero(const std::vector<double>& x, const std::vector<Estimate>& e) {
    const std::size_t m = x.size();
    double mx = 0.0;
    for (double v : x) mx += v;
    mx /= m;
    double sxx = 0.0;
    for (double v : x) sxx += (v - mx) * (v - mx);
    Estimate out = e.front();
    double value = 0.0, var = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double coef = 1.0 / m - (x[k] - mx) * mx / sxx;
        value += coef * e[k].value;
        var += coef * coef * e[k].std_error * e[k].std_error;
    }
    out.value = value;
    out.std_error = std::sqrt(var);
    return out;
}

}  // namespace detail

/// Extrapolates M+, M- and (2/h)(M+ - M-) to t -> 0 on a disk. Each t uses
/// its own substream.
inline OriginLimitReport origin_limit_check(const Window& w, double h, double exponent, std::vector<double> t_grid,
                                            const SamplingOptions& opt = {}) {
    if (w.shape() != Shape::ball || w.dim() != 2) throw DomainError("origin_limit_check applies to disks");
    if (t_grid.size() < 3) throw DomainError("t grid needs at least three points");
    std::sort(t_grid.begin(), t_grid.end());
    if (!(t_grid.front() > 0.0)) throw DomainError("t grid must be positive");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (t_grid[k] == t_grid[k - 1]) throw DomainError("t grid values must be distinct");

    OriginLimitReport r;
    r.h = h;
    r.exponent = exponent;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        SamplingOptions o = opt;
        o.seed = opt.seed + 0x9E3779B97F4A7C15ull * (k + 1);
        CroftonSides s = crofton_sides(w, t_grid[k], h, exponent, o);
        r.points.push_back({t_grid[k], s.m_plus, s.m_minus, s.rhs});
    }
    std::vector<double> x;
    std::vector<Estimate> plus, minus, rhs;
    for (std::size_t k = 0; k < 3; ++k) {
        x.push_back(std::sqrt(r.points[k].t));
        plus.push_back(r.points[k].m_plus);
        minus.push_back(r.points[k].m_minus);
        rhs.push_back(r.points[k].rhs);
    }
    r.m_plus_limit = detail::extrapolate_to_zero(x, plus);
    r.m_minus_limit = detail::extrapolate_to_zero(x, minus);
    r.derivative_limit = detail::extrapolate_to_zero(x, rhs);
    r.m_plus_oracle = disk_m_plus_limit(w, h, exponent);
    r.m_minus_oracle = disk_m_minus_limit(w, h, exponent);
    r.m_plus_display = std::numbers::pi * std::sqrt(h) * r.m_plus_oracle;
    r.derivative_negative = r.derivative_limit.value < 0.0;
    r.sigma_margin = std::abs(r.derivative_limit.value) / r.derivative_limit.std_error;

    std::vector<double> x2(x.begin(), x.begin() + 2);
    std::vector<Estimate> rhs2(rhs.begin(), rhs.begin() + 2);
    Estimate two = detail::extrapolate_to_zero(x2, rhs2);
    r.extrapolation_flag = std::abs(two.value - r.derivative_limit.value) >
                           3.0 * std::hypot(two.std_error, r.derivative_limit.std_error);
    return r;
}

}  // namespace hwl
