#pragma once

// Observation windows, homothetic shells and their samplers.
//
// Coordinates live in the homothety frame: the homothety center is the
// origin and Delta(s) = s * Delta(1). The scale parameter t used throughout
// is volume-linear, Delta(t^{1/n}) has volume t * |Delta(1)|.
//
// Every window here is star-shaped about the homothety center, so a point of
// the shell between Delta(a) and Delta(b) can be written x = s * y with y on
// the unit boundary. With s^n uniform on [t, t + h] and y drawn with density
// proportional to the normal velocity <y, n(y)> on the unit boundary, x is
// uniform in the shell. The same y law is the Crofton boundary density.

#include <hwl/errors.hpp>
#include <hwl/montecarlo.hpp>
#include <hwl/parallel.hpp>
#include <hwl/rng.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace hwl {

inline constexpr int kMaxDim = 8;
using Point = std::array<double, kMaxDim>;

inline double dot(const Point& a, const Point& b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

inline double distance2(const Point& a, const Point& b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double nth_root(double x, int n) {
    switch (n) {
        case 1: return x;
        case 2: return std::sqrt(x);
        case 3: return std::cbrt(x);
        default: return std::pow(x, 1.0 / n);
    }
}

inline double int_pow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

/// Volume of the unit n-ball, V_n = 2 pi / n * V_{n-2}.
inline double unit_ball_volume(int n) {
    if (n <= 0) return 1.0;
    if (n == 1) return 2.0;
    return 2.0 * std::numbers::pi / n * unit_ball_volume(n - 2);
}

/// Surface area of the unit sphere in R^n.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

/// Uniform direction on the unit sphere of R^n built from uniforms only, so
/// that it also runs on a Halton source.
template <class Draw>
Point uniform_direction(Draw& draw, int n) {
    Point p{};
    if (n == 1) {
        p[0] = draw.uniform() < 0.5 ? -1.0 : 1.0;
    } else if (n == 2) {
        double phi = 2.0 * std::numbers::pi * draw.uniform();
        p[0] = std::cos(phi);
        p[1] = std::sin(phi);
    } else if (n == 3) {
        double z = 2.0 * draw.uniform() - 1.0;
        double phi = 2.0 * std::numbers::pi * draw.uniform();
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        p[0] = r * std::cos(phi);
        p[1] = r * std::sin(phi);
        p[2] = z;
    } else {
        double norm2 = 0.0;
        for (int i = 0; i < n; i += 2) {
            double rad = std::sqrt(-2.0 * std::log(draw.uniform_open_low()));
            double phi = 2.0 * std::numbers::pi * draw.uniform();
            p[i] = rad * std::cos(phi);
            if (i + 1 < n) p[i + 1] = rad * std::sin(phi);
        }
        for (int i = 0; i < n; ++i) norm2 += p[i] * p[i];
        double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < n; ++i) p[i] *= inv;
    }
    return p;
}

enum class Shape { interval, ball, cube };

/// An observation window Delta(1) together with its homothety center.
///
/// - interval: [0, 1] in dimension 1, homothety about the endpoint 0.
/// - ball: unit ball in R^n; the homothety center sits at `offset` from the
///   ball's center (|offset| < 1), so in the homothety frame Delta(1) is the
///   ball of radius 1 centered at -offset.
/// - cube: [-1, 1]^n for n in {1, 2, 3}, centered homothety.
class Window {
public:
    static Window interval() { return Window(Shape::interval, 1); }

    static Window ball(int dim, std::span<const double> homothety_offset = {}) {
        if (dim < 1 || dim > kMaxDim) throw DomainError("ball dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
        Window w(Shape::ball, dim);
        if (!homothety_offset.empty()) {
            if (static_cast<int>(homothety_offset.size()) != dim)
                throw DomainError("homothety center must have " + std::to_string(dim) + " coordinates");
            for (int i = 0; i < dim; ++i) w.offset_[i] = homothety_offset[i];
        }
        w.offset_norm_ = std::sqrt(dot(w.offset_, w.offset_, dim));
        if (!(w.offset_norm_ < 1.0)) throw DomainError("homothety center must lie in the interior of the ball");
        return w;
    }

    static Window disk(double cx = 0.0, double cy = 0.0) {
        std::array<double, 2> c{cx, cy};
        return ball(2, c);
    }

    static Window cube(int dim) {
        if (dim < 1 || dim > 3) throw DomainError("cube windows are supported for dimension 1, 2 and 3");
        return Window(Shape::cube, dim);
    }

    static Window square() { return cube(2); }

    Shape shape() const { return shape_; }
    int dim() const { return dim_; }
    const Point& homothety_offset() const { return offset_; }
    bool centered() const { return offset_norm_ == 0.0; }

    std::string name() const {
        switch (shape_) {
            case Shape::interval: return "interval";
            case Shape::ball:
                if (dim_ == 2) return centered() ? "disk" : "offset-disk";
                return centered() ? "ball" + std::to_string(dim_) : "offset-ball" + std::to_string(dim_);
            case Shape::cube:
                if (dim_ == 2) return "square";
                return "cube" + std::to_string(dim_);
        }
        return "window";
    }

    /// |Delta(1)|.
    double unit_volume() const {
        switch (shape_) {
            case Shape::interval: return 1.0;
            case Shape::ball: return unit_ball_volume(dim_);
            case Shape::cube: return int_pow(2.0, dim_);
        }
        return 0.0;
    }

    /// |Delta(t^{1/n})| = t |Delta(1)|.
    double volume(double t) const {
        if (!(t >= 0.0)) throw DomainError("scale parameter t must be nonnegative");
        return t * unit_volume();
    }

    /// Smallest s with x in Delta(s) (infinity if no such s).
    double gauge(const Point& x) const {
        switch (shape_) {
            case Shape::interval: return x[0] >= 0.0 ? x[0] : std::numeric_limits<double>::infinity();
            case Shape::cube: {
                double m = 0.0;
                for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(x[i]));
                return m;
            }
            case Shape::ball: {
                // |x + g c| = g  =>  g^2 (1 - |c|^2) - 2 g <x, c> - |x|^2 = 0
                double xc = dot(x, offset_, dim_);
                double xx = dot(x, x, dim_);
                double a = 1.0 - offset_norm_ * offset_norm_;
                return (xc + std::sqrt(xc * xc + a * xx)) / a;
            }
        }
        return 0.0;
    }

    /// x in Delta(t^{1/n}).
    bool contains(const Point& x, double t) const { return int_pow(gauge(x), dim_) <= t; }

    /// Radius of the largest ball contained in Delta(1) (anywhere).
    double inscribed_radius() const {
        switch (shape_) {
            case Shape::interval: return 0.5;
            case Shape::ball: return 1.0;
            case Shape::cube: return 1.0;
        }
        return 0.0;
    }

    /// Largest distance from the homothety center to a point of Delta(1).
    double circumradius() const {
        switch (shape_) {
            case Shape::interval: return 1.0;
            case Shape::ball: return 1.0 + offset_norm_;
            case Shape::cube: return std::sqrt(static_cast<double>(dim_));
        }
        return 0.0;
    }

    /// Bounding box of Delta(1) in the homothety frame.
    Point lower_corner() const {
        Point p{};
        for (int i = 0; i < dim_; ++i) {
            switch (shape_) {
                case Shape::interval: p[i] = 0.0; break;
                case Shape::ball: p[i] = -offset_[i] - 1.0; break;
                case Shape::cube: p[i] = -1.0; break;
            }
        }
        return p;
    }

    Point upper_corner() const {
        Point p{};
        for (int i = 0; i < dim_; ++i) {
            switch (shape_) {
                case Shape::interval: p[i] = 1.0; break;
                case Shape::ball: p[i] = -offset_[i] + 1.0; break;
                case Shape::cube: p[i] = 1.0; break;
            }
        }
        return p;
    }

    /// Whether sample_unit_boundary consumes a fixed number of uniforms (no
    /// rejection), which is what a Halton source needs.
    bool supports_quasi_random() const { return shape_ != Shape::ball || centered() || dim_ == 1; }

    /// Outward normal velocity <y, n(y)> of the homothety at y on the unit
    /// boundary. Constant 1 for centered balls and cubes.
    double normal_velocity(const Point& y) const {
        switch (shape_) {
            case Shape::interval: return y[0];
            case Shape::cube: return 1.0;
            case Shape::ball: {
                // n(y) = y + offset for the unit ball centered at -offset
                Point nrm{};
                for (int i = 0; i < dim_; ++i) nrm[i] = y[i] + offset_[i];
                return dot(y, nrm, dim_);
            }
        }
        return 0.0;
    }

    /// A point y on the boundary of Delta(1) with density proportional to
    /// the normal velocity of the homothety. Off-center balls use rejection
    /// against the uniform surface measure with envelope 1 + |offset|.
    template <class Draw>
    Point sample_unit_boundary(Draw& draw) const {
        switch (shape_) {
            case Shape::interval: {
                Point p{};
                p[0] = 1.0;
                return p;
            }
            case Shape::cube: {
                Point p{};
                double u = draw.uniform() * 2.0 * dim_;
                int face = std::min(static_cast<int>(u), 2 * dim_ - 1);
                int axis = face / 2;
                for (int i = 0; i < dim_; ++i) p[i] = i == axis ? (face % 2 ? 1.0 : -1.0) : 2.0 * draw.uniform() - 1.0;
                return p;
            }
            case Shape::ball: {
                if (centered()) return uniform_direction(draw, dim_);
                const double envelope = 1.0 + offset_norm_;
                for (;;) {
                    Point u = uniform_direction(draw, dim_);
                    double v = 1.0 - dot(offset_, u, dim_);
                    if (draw.uniform() * envelope < v) {
                        for (int i = 0; i < dim_; ++i) u[i] -= offset_[i];
                        return u;
                    }
                }
            }
        }
        return Point{};
    }

private:
    Window(Shape s, int dim) : shape_(s), dim_(dim) {}

    Shape shape_;
    int dim_;
    Point offset_{};
    double offset_norm_ = 0.0;
};

enum class Side { outer, inner };

/// The annular set Delta((t+h)^{1/n}) \ Delta(t^{1/n}).
class ShellRegion {
public:
    ShellRegion(const Window& w, double t, double h) : window_(w), t_(t), h_(h) {
        if (!(t >= 0.0)) throw DomainError("shell parameter t must be nonnegative");
        if (!(h > 0.0)) throw DomainError("shell thickness h must be positive");
        inner_ = nth_root(t, w.dim());
        outer_ = nth_root(t + h, w.dim());
    }

    const Window& window() const { return window_; }
    int dim() const { return window_.dim(); }
    double t() const { return t_; }
    double h() const { return h_; }
    /// Homothety scale of the inner and outer boundary.
    double inner_scale() const { return inner_; }
    double outer_scale() const { return outer_; }

    /// h |Delta(1)|.
    double volume() const { return h_ * window_.unit_volume(); }

    bool contains(const Point& x) const {
        double g = int_pow(window_.gauge(x), dim());
        return g > t_ && g <= t_ + h_;
    }

    /// Uniform point of the shell.
    template <class Draw>
    Point sample(Draw& draw) const {
        double s = nth_root(t_ + draw.uniform() * h_, dim());
        Point y = window_.sample_unit_boundary(draw);
        for (int i = 0; i < dim(); ++i) y[i] *= s;
        return y;
    }

    /// Point on the inner or outer boundary with velocity-weighted density.
    template <class Draw>
    Point sample_boundary(Draw& draw, Side side) const {
        double s = side == Side::outer ? outer_ : inner_;
        if (s == 0.0) throw DomainError("inner boundary of a shell with t = 0 is degenerate");
        Point y = window_.sample_unit_boundary(draw);
        for (int i = 0; i < dim(); ++i) y[i] *= s;
        return y;
    }

private:
    Window window_;
    double t_;
    double h_;
    double inner_;
    double outer_;
};

inline ShellRegion shell(const Window& w, double t, double h) { return ShellRegion(w, t, h); }

namespace detail {
template <class Fill>
std::vector<Point> chunked_points(std::uint64_t count, std::uint64_t seed, std::uint64_t stream, unsigned threads,
                                  Fill&& fill) {
    if (count == 0) throw DomainError("sample count must be positive");
    std::vector<Point> out(count);
    const std::uint64_t chunks = (count + kChunkTarget - 1) / kChunkTarget;
    parallel_for(chunks, threads, [&](std::size_t c) {
        RandomDraw draw(seed, stream, c);
        std::uint64_t end = std::min<std::uint64_t>(count, (c + 1) * kChunkTarget);
        for (std::uint64_t i = c * kChunkTarget; i < end; ++i) out[i] = fill(draw);
    });
    return out;
}
}  // namespace detail

/// i.i.d. uniform points of the shell, deterministic in (seed, count).
inline std::vector<Point> sample_uniform(const ShellRegion& region, std::uint64_t count, std::uint64_t seed,
                                         unsigned threads = 1) {
    return detail::chunked_points(count, seed, streams::shell_points, threads,
                                  [&](RandomDraw& d) { return region.sample(d); });
}

/// Points on the boundary of Delta(t^{1/n}) with density proportional to the
/// normal velocity of the homothety (uniform for centered balls).
inline std::vector<Point> boundary_sample(const Window& window, double t, std::uint64_t count, std::uint64_t seed,
                                          unsigned threads = 1) {
    if (!(t > 0.0)) throw DomainError("boundary of Delta(0) is degenerate; t must be positive");
    const double s = nth_root(t, window.dim());
    return detail::chunked_points(count, seed, streams::boundary_points, threads, [&](RandomDraw& d) {
        Point y = window.sample_unit_boundary(d);
        for (int i = 0; i < window.dim(); ++i) y[i] *= s;
        return y;
    });
}

}  // namespace hwl
