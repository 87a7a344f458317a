#pragma once

// Spectral route to increment variances: closed-form Fourier transforms of
// window and shell indicators and the midpoint grid sum
//
//     S = sum_grid |F_A(lambda)|^2 |lambda|^{alpha-n} cell
//
// which approximates int |F_A|^2 |lambda|^{alpha-n} = c1(n, alpha) I(t, h),
// with the Fourier convention F_A(lambda) = int_A e^{i<lambda, x>} dx.
//
// The weight is singular at the origin, where the plain midpoint rule
// converges slowly (like spacing^alpha). The evaluator subtracts
// |F_A(0)|^2 exp(-lambda^T Sigma lambda) |lambda|^{alpha-n}, Sigma the
// covariance of a uniform point of A, node by node and adds its integral
// back in closed form; the subtracted function matches |F_A|^2 to second
// order at the origin, so the remainder is summed accurately. The literal
// sum is reported alongside.

#include <hwl/analysis.hpp>
#include <hwl/errors.hpp>
#include <hwl/geometry.hpp>
#include <hwl/montecarlo.hpp>
#include <hwl/parallel.hpp>
#include <hwl/riesz.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hwl {

/// Midpoint grid of m nodes per axis on [-lambda_max, lambda_max]: nodes at
/// +-(k + 1/2) spacing, never at the origin.
struct SpectralGrid {
    std::uint64_t m = 8192;
    double lambda_max = 4096.0;

    double spacing() const { return 2.0 * lambda_max / static_cast<double>(m); }
    double node(std::uint64_t k) const { return (static_cast<double>(k) + 0.5) * spacing(); }

    void validate(int dim) const {
        if (m < 2 || m % 2 != 0) throw DomainError("spectral grid needs an even number of nodes per axis");
        if (!(lambda_max > 0.0)) throw DomainError("spectral grid needs a positive lambda_max");
        if (dim == 2 && m > 16384) throw DomainError("two-dimensional spectral grids are capped at 16384 nodes per axis");
        if (dim == 1 && m > (std::uint64_t{1} << 32)) throw DomainError("one-dimensional spectral grid too large");
    }

    /// Defaults: one-dimensional grids resolve thin intervals, two-dimensional
    /// grids use unit spacing (alias-free for windows of radius below pi).
    static SpectralGrid defaults(int dim) {
        if (dim == 1) return {std::uint64_t{1} << 20, 16384.0};
        return {8192, 4096.0};
    }
};

namespace detail {

enum class SpectralShape { segment, symmetric_segments, disk, square };

inline SpectralShape spectral_shape(const Window& w) {
    if (w.dim() == 1) return w.shape() == Shape::interval ? SpectralShape::segment : SpectralShape::symmetric_segments;
    if (w.dim() == 2 && w.shape() == Shape::ball) {
        if (!w.centered()) throw DomainError("indicator transform of an off-center disk is not available in closed form");
        return SpectralShape::disk;
    }
    if (w.dim() == 2 && w.shape() == Shape::cube) return SpectralShape::square;
    throw DomainError("no closed-form indicator transform for window " + w.name());
}

/// sin(b x) / x, continuous at 0.
inline double sin_over(double b, double x) {
    double z = b * x;
    if (std::abs(z) < 1e-4) return b * (1.0 - z * z / 6.0);
    return std::sin(z) / x;
}

}  // namespace detail

/// Fourier transform of the indicator of the shell (use t = 0, h = 1 for
/// the whole window). lambda holds dim() coordinates.
inline std::complex<double> ft_indicator(const ShellRegion& region, std::span<const double> lambda) {
    const Window& w = region.window();
    const auto shape = detail::spectral_shape(w);
    if (static_cast<int>(lambda.size()) != w.dim()) throw DomainError("frequency has the wrong dimension");
    const double a = region.inner_scale(), b = region.outer_scale();
    switch (shape) {
        case detail::SpectralShape::segment: {
            // [a, b]: (e^{i b l} - e^{i a l}) / (i l)
            double l = lambda[0];
            double mid = 0.5 * (a + b);
            double amp = 2.0 * detail::sin_over(0.5 * (b - a), l);
            return std::polar(1.0, mid * l) * amp;
        }
        case detail::SpectralShape::symmetric_segments: {
            double l = lambda[0];
            return 2.0 * (detail::sin_over(b, l) - detail::sin_over(a, l));
        }
        case detail::SpectralShape::disk: {
            double rho = std::hypot(lambda[0], lambda[1]);
            auto f = [&](double r) { return std::numbers::pi * r * r * jinc(r * rho); };
            return f(b) - (a > 0.0 ? f(a) : 0.0);
        }
        case detail::SpectralShape::square: {
            auto f = [&](double r) {
                return 4.0 * detail::sin_over(r, lambda[0]) * detail::sin_over(r, lambda[1]);
            };
            return f(b) - (a > 0.0 ? f(a) : 0.0);
        }
    }
    return 0.0;
}

enum class GridSymmetry { reduced, full };

struct SpectralOptions {
    /// Relative Parseval error above which spectral_variance fails.
    double parseval_gate = 0.02;
    unsigned threads = 1;
    /// Sum over one octant (half-line in 1D) with multiplicities, or over
    /// every node.
    GridSymmetry symmetry = GridSymmetry::reduced;
};

struct SpectralSums {
    /// Singularity-subtracted estimate of int |F|^2 |lambda|^{alpha-n}.
    double sum = 0.0;
    /// Literal midpoint sum over the grid.
    double raw_sum = 0.0;
    /// (2 pi)^{-n} sum |F|^2 cell.
    double parseval_sum = 0.0;
    /// Weighted sum over nodes with lambda_max / 2 < |lambda| <= lambda_max.
    double outer_band = 0.0;
    double volume = 0.0;
    std::uint64_t nodes = 0;

    double parseval_error() const { return std::abs(parseval_sum - volume) / volume; }
};

struct SpectralResult {
    /// Calibrated increment variance from the subtracted sum.
    double variance = 0.0;
    /// Same calibration applied to the literal midpoint sum.
    double raw_variance = 0.0;
    SpectralSums sums;
    double parseval_error = 0.0;
    /// Extrapolated truncation error beyond lambda_max, relative to the sum.
    double tail_estimate = 0.0;
    /// Origin-cell defect of the literal sum, relative to the sum.
    double origin_bound = 0.0;
    /// The tail estimate exceeds 0.5% of the sum.
    bool truncation_flag = false;

    /// The variance as an Estimate whose error is the truncation estimate.
    Estimate estimate() const {
        Estimate e = Estimate::exact(variance, Method::quadrature);
        e.std_error = std::abs(variance) * tail_estimate;
        e.samples = sums.nodes;
        return e;
    }
};

/// Grid sums for one window and exponent. Node geometry and weights are
/// precomputed once; disk transforms are cached per radius, so a curve over
/// adjacent shells evaluates one Bessel array per point.
class SpectralEvaluator {
public:
    SpectralEvaluator(const Window& w, double alpha, SpectralGrid grid, SpectralOptions opt = {})
        : window_(w), alpha_(alpha), grid_(grid), opt_(opt), shape_(detail::spectral_shape(w)) {
        const int n = w.dim();
        grid.validate(n);
        if (!(alpha > 0.0 && alpha < n)) throw DomainError("alpha must lie in (0, n)");
        if (n == 2) build_plane_nodes();
    }

    const Window& window() const { return window_; }
    const SpectralGrid& grid() const { return grid_; }
    double alpha() const { return alpha_; }

    SpectralSums sums(double t, double h) {
        const ShellRegion region(window_, t, h);
        const double a = region.inner_scale(), b = region.outer_scale();
        const int n = window_.dim();
        const double vol = region.volume();
        // isotropic covariance c I of a uniform point of the shell
        double c = 0.0;
        switch (shape_) {
            case detail::SpectralShape::segment: c = (b - a) * (b - a) / 12.0; break;
            case detail::SpectralShape::symmetric_segments: c = (a * a + a * b + b * b) / 3.0; break;
            case detail::SpectralShape::disk: c = (a * a + b * b) / 4.0; break;
            case detail::SpectralShape::square: c = (a * a + b * b) / 3.0; break;
        }
        const double f0sq = vol * vol;
        const double gauss_integral =
            unit_sphere_area(n) * hwl::gamma(alpha_ / 2.0) / (2.0 * std::pow(c, alpha_ / 2.0));

        SpectralSums out;
        out.volume = vol;
        Partial total = n == 1 ? line_sums(a, b, c, f0sq) : plane_sums(a, b, c, f0sq);
        out.raw_sum = total.raw.value();
        out.sum = total.corrected.value() + f0sq * gauss_integral;
        out.parseval_sum = total.parseval.value() / std::pow(2.0 * std::numbers::pi, n);
        out.outer_band = total.outer.value();
        out.nodes = nodes_;
        return out;
    }

private:
    struct Partial {
        CompensatedSum raw, corrected, parseval, outer;
        void add(const Partial& o) {
            raw.add(o.raw);
            corrected.add(o.corrected);
            parseval.add(o.parseval);
            outer.add(o.outer);
        }
    };

    static constexpr std::uint64_t kChunk = 1u << 16;

    template <class Body>
    Partial reduce(std::uint64_t count, Body&& body) const {
        const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
        std::vector<Partial> parts(chunks);
        parallel_for(chunks, opt_.threads, [&](std::size_t k) {
            std::uint64_t end = std::min<std::uint64_t>(count, (k + 1) * kChunk);
            for (std::uint64_t i = k * kChunk; i < end; ++i) body(i, parts[k]);
        });
        Partial total;
        for (const auto& p : parts) total.add(p);
        return total;
    }

    void accumulate(Partial& p, double fsq, double rho, double weight, double measure, double c, double f0sq) const {
        double wf = weight * fsq;
        p.raw.add(wf);
        double arg = c * rho * rho;
        p.corrected.add(arg < 700.0 ? weight * (fsq - f0sq * std::exp(-arg)) : wf);
        p.parseval.add(measure * fsq);
        if (rho > 0.5 * grid_.lambda_max && rho <= grid_.lambda_max) p.outer.add(wf);
    }

    Partial line_sums(double a, double b, double c, double f0sq) {
        const std::uint64_t half = grid_.m / 2;
        const bool full = opt_.symmetry == GridSymmetry::full;
        const double d = grid_.spacing();
        const std::uint64_t count = full ? grid_.m : half;
        nodes_ = count;
        const bool segment = shape_ == detail::SpectralShape::segment;
        return reduce(count, [&](std::uint64_t k, Partial& p) {
            std::uint64_t idx = full ? (k < half ? half - 1 - k : k - half) : k;
            double l = grid_.node(idx);
            double measure = full ? d : 2.0 * d;
            double f = segment ? 2.0 * detail::sin_over(0.5 * (b - a), l)
                               : 2.0 * (detail::sin_over(b, l) - detail::sin_over(a, l));
            accumulate(p, f * f, l, measure * std::pow(l, alpha_ - 1.0), measure, c, f0sq);
        });
    }

    void build_plane_nodes() {
        const std::uint64_t half = grid_.m / 2;
        const double d = grid_.spacing();
        const double cell = d * d;
        axis_.resize(half);
        for (std::uint64_t k = 0; k < half; ++k) axis_[k] = grid_.node(k);
        const bool full = opt_.symmetry == GridSymmetry::full;
        const std::uint64_t count = full ? 4 * half * half : half * (half + 1) / 2;
        ii_.resize(count);
        jj_.resize(count);
        rho_.resize(count);
        weight_.resize(count);
        measure_.resize(count);
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < (full ? 2 * half : half); ++i) {
            std::uint32_t ai = static_cast<std::uint32_t>(full ? (i < half ? half - 1 - i : i - half) : i);
            for (std::uint64_t j = full ? 0 : i; j < (full ? 2 * half : half); ++j) {
                std::uint32_t aj = static_cast<std::uint32_t>(full ? (j < half ? half - 1 - j : j - half) : j);
                double mult = full ? 1.0 : (i == j ? 4.0 : 8.0);
                ii_[k] = ai;
                jj_[k] = aj;
                rho_[k] = std::hypot(axis_[ai], axis_[aj]);
                measure_[k] = mult * cell;
                weight_[k] = measure_[k] * std::pow(rho_[k], alpha_ - 2.0);
                ++k;
            }
        }
        nodes_ = count;
    }

    /// pi r^2 jinc(r |lambda|) at every plane node. Two radii are cached;
    /// the slot holding `keep` is never overwritten. Radii equal to
    /// rounding share a slot (the outer radius at s is the inner one at s+h).
    const std::vector<double>& disk_transform(double r, double keep) {
        auto same = [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(x, y); };
        for (auto& slot : disk_cache_)
            if (same(slot.radius, r)) return slot.values;
        DiskSlot& slot = same(disk_cache_[0].radius, keep) ? disk_cache_[1] : disk_cache_[0];
        slot.radius = r;
        slot.values.resize(rho_.size());
        const double area = std::numbers::pi * r * r;
        const std::uint64_t chunks = (rho_.size() + kChunk - 1) / kChunk;
        parallel_for(chunks, opt_.threads, [&](std::size_t c) {
            std::uint64_t end = std::min<std::uint64_t>(rho_.size(), (c + 1) * kChunk);
            for (std::uint64_t i = c * kChunk; i < end; ++i) slot.values[i] = area * jinc(r * rho_[i]);
        });
        return slot.values;
    }

    Partial plane_sums(double a, double b, double c, double f0sq) {
        if (shape_ == detail::SpectralShape::disk) {
            const std::vector<double>& outer = disk_transform(b, -1.0);
            const std::vector<double>* inner = a > 0.0 ? &disk_transform(a, b) : nullptr;
            return reduce(rho_.size(), [&](std::uint64_t k, Partial& p) {
                double f = outer[k] - (inner ? (*inner)[k] : 0.0);
                accumulate(p, f * f, rho_[k], weight_[k], measure_[k], c, f0sq);
            });
        }
        std::vector<double> sb(axis_.size()), sa(axis_.size());
        for (std::size_t k = 0; k < axis_.size(); ++k) {
            sb[k] = detail::sin_over(b, axis_[k]);
            sa[k] = a > 0.0 ? detail::sin_over(a, axis_[k]) : 0.0;
        }
        return reduce(rho_.size(), [&](std::uint64_t k, Partial& p) {
            double f = 4.0 * (sb[ii_[k]] * sb[jj_[k]] - sa[ii_[k]] * sa[jj_[k]]);
            accumulate(p, f * f, rho_[k], weight_[k], measure_[k], c, f0sq);
        });
    }

    Window window_;
    double alpha_;
    SpectralGrid grid_;
    SpectralOptions opt_;
    detail::SpectralShape shape_;
    std::uint64_t nodes_ = 0;
    std::vector<double> axis_;
    std::vector<std::uint32_t> ii_, jj_;
    std::vector<double> rho_, weight_, measure_;
    struct DiskSlot {
        double radius = -1.0;
        std::vector<double> values;
    };
    std::array<DiskSlot, 2> disk_cache_;
};

/// |(2 pi)^{-n} sum |F|^2 cell - |A|| / |A| for the shell (t, h).
inline double parseval_check(const ShellRegion& region, const SpectralGrid& grid, unsigned threads = 1) {
    SpectralOptions opt;
    opt.threads = threads;
    // the weight exponent is irrelevant for the Parseval sum
    SpectralEvaluator ev(region.window(), 0.5 * region.dim(), grid, opt);
    return ev.sums(region.t(), region.h()).parseval_error();
}

/// Converts grid sums into the calibrated variance: int |F|^2 |l|^{alpha-n}
/// = c1 I(t, h), and Var = I(t, h) / (c1 iint_Delta |x-y|^{-alpha}).
inline SpectralResult spectral_result(const SpectralSums& s, const KernelParams& p, double window_energy_value,
                                      double spacing, double parseval_gate) {
    SpectralResult r;
    r.sums = s;
    const double c = c1(p.n, p.alpha);
    const double scale = 1.0 / (c * c * window_energy_value);
    r.variance = s.sum * scale;
    r.raw_variance = s.raw_sum * scale;
    r.parseval_error = s.parseval_error();
    // tail mass decays like lambda_max^{alpha - n - 1}
    const double q = p.n + 1.0 - p.alpha;
    r.tail_estimate = s.outer_band / (std::pow(2.0, q) - 1.0) / s.sum;
    r.truncation_flag = r.tail_estimate > 0.005;
    r.origin_bound = s.volume * s.volume * unit_sphere_area(p.n) * std::pow(spacing, p.alpha) / p.alpha / s.sum;
    if (r.parseval_error > parseval_gate) {
        throw NumericalError("spectral grid fails the Parseval check: relative error " +
                             std::to_string(r.parseval_error) + " exceeds " + std::to_string(parseval_gate) +
                             "; increase m or lambda_max");
    }
    return r;
}

/// Increment variance Var(Y(t+h) - Y(t)) by the calibrated grid sum.
/// Hermite rank one only.
inline SpectralResult spectral_variance(const KernelParams& p, const Window& w, double t, double h,
                                        const SpectralGrid& grid, const SpectralOptions& opt = {}) {
    p.validate();
    if (p.kappa != 1) throw UnsupportedError("spectral sums are implemented for Hermite rank 1 only");
    if (p.n != w.dim()) throw DomainError("kernel dimension does not match the window dimension");
    SpectralEvaluator ev(w, p.alpha, grid, opt);
    SpectralSums s = ev.sums(t, h);
    return spectral_result(s, p, window_energy(w, p.alpha).value, grid.spacing(), opt.parseval_gate);
}

// ---------------------------------------------------------------------------
// Variance curves

enum class CurveMethod { spectral, monte_carlo, exact1d };

inline std::string_view to_string(CurveMethod m) {
    switch (m) {
        case CurveMethod::spectral: return "spectral";
        case CurveMethod::monte_carlo: return "mc";
        case CurveMethod::exact1d: return "exact1d";
    }
    return "unknown";
}

struct CurvePoint {
    double s = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    /// Spectral points: Parseval error of the grid; otherwise 0.
    double parseval_error = 0.0;
};

struct VarianceCurve {
    std::string window;
    CurveMethod method = CurveMethod::spectral;
    double alpha = 0.0;
    int kappa = 1;
    double h = 0.0;
    std::uint64_t seed = 0;
    std::vector<CurvePoint> points;
};

struct CurveOptions {
    SpectralGrid grid = SpectralGrid::defaults(2);
    SamplingOptions sampling;
    double parseval_gate = 0.02;
};

/// s = s_min + k step for k = 0..steps-1.
inline std::vector<double> s_grid(double s_min, double step, std::size_t steps) {
    std::vector<double> s(steps);
    for (std::size_t k = 0; k < steps; ++k) s[k] = s_min + static_cast<double>(k) * step;
    return s;
}

/// Var(Y(s+h) - Y(s)) along s. Monte Carlo points share the seed (common
/// random numbers across s).
inline VarianceCurve variance_curve(const KernelParams& p, const Window& w, double h, const std::vector<double>& s_values,
                                    CurveMethod method, const CurveOptions& opt = {}) {
    p.validate();
    if (p.n != w.dim()) throw DomainError("kernel dimension does not match the window dimension");
    if (!(h > 0.0 && h <= 1.0)) throw DomainError("h must lie in (0, 1]");
    if (s_values.empty()) throw DomainError("s grid is empty");
    for (double s : s_values)
        if (!(s >= 0.0 && s <= 1.0 - h + 1e-12)) throw DomainError("s grid must lie in [0, 1 - h]");

    VarianceCurve curve;
    curve.window = w.name();
    curve.method = method;
    curve.alpha = p.alpha;
    curve.kappa = p.kappa;
    curve.h = h;
    switch (method) {
        case CurveMethod::exact1d:
            for (double s : s_values) {
                auto v = variance_increment(p, w, s, h, Method::closed_form);
                curve.points.push_back({s, v.variance.value, 0.0, 0.0});
            }
            break;
        case CurveMethod::monte_carlo: {
            curve.seed = opt.sampling.seed;
            const Method m = opt.sampling.quasi_random ? Method::quasi_random : Method::monte_carlo;
            const Estimate energy = window_energy(w, p.exponent(), opt.sampling);
            for (double s : s_values) {
                Estimate v = variance_increment(p, w, s, h, m, opt.sampling, energy).variance;
                curve.points.push_back({s, v.value, v.std_error, 0.0});
            }
            break;
        }
        case CurveMethod::spectral: {
            if (p.kappa != 1) throw UnsupportedError("spectral sums are implemented for Hermite rank 1 only");
            SpectralOptions so;
            so.threads = opt.sampling.threads;
            so.parseval_gate = opt.parseval_gate;
            SpectralEvaluator ev(w, p.alpha, opt.grid, so);
            const double energy = window_energy(w, p.alpha).value;
            for (double s : s_values) {
                SpectralResult r =
                    spectral_result(ev.sums(s, h), p, energy, opt.grid.spacing(), opt.parseval_gate);
                Estimate e = r.estimate();
                curve.points.push_back({s, e.value, e.std_error, r.parseval_error});
            }
            break;
        }
    }
    return curve;
}

}  // namespace hwl
