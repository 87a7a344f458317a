#pragma once

// Desk-scale simulation of long-range dependent Gaussian fields and of the
// normalized functionals
//
//     Y_r(t) = spacing^n sum_{x in Delta(r t^{1/n})} H_kappa(xi(x)) / (r^{n - kappa alpha/2} sqrt(c2)),
//
// whose increment variances converge to the analytic curves of the riesz and
// spectral modules.
//
// Fields are sampled exactly by circulant embedding: the covariance on the
// grid is embedded in a torus of side >= 2 N, whose circulant covariance is
// diagonalized by the FFT. One complex FFT of scaled complex Gaussian weights
// yields two independent realizations (real and imaginary parts).
//
// Each replicate is an independent field. A field is tiled with as many
// disjoint copies of the window as fit; tiles of one field are identically
// distributed but correlated, so every standard error below is computed from
// per-replicate averages.

#include <hwl/analysis.hpp>
#include <hwl/errors.hpp>
#include <hwl/geometry.hpp>
#include <hwl/parallel.hpp>
#include <hwl/riesz.hpp>
#include <hwl/rng.hpp>

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

namespace hwl {

struct FieldSpec {
    /// 1 (line) or 2 (square grid).
    int dim = 2;
    std::size_t grid_side = 1024;
    /// Physical distance between neighbouring nodes.
    double spacing = 1.0;
    CovarianceModel model{CovarianceFamily::cauchy, 1.0, 1.0, 2};
    std::uint64_t seed = 1;
    std::size_t replicates = 200;
    unsigned threads = 1;
    /// Largest torus side tried, as a multiple of grid_side.
    std::size_t max_embedding_factor = 8;

    void validate() const {
        if (dim != 1 && dim != 2) throw DomainError("fields are simulated on 1D or 2D grids");
        if (grid_side < 2) throw DomainError("grid_side must be at least 2");
        if (!(spacing > 0.0) || !std::isfinite(spacing)) throw DomainError("spacing must be positive");
        if (model.family != CovarianceFamily::cauchy) throw DomainError("simulation uses the Cauchy covariance family");
        if (!(model.alpha > 0.0) || !std::isfinite(model.alpha)) throw DomainError("alpha must be positive");
        if (replicates < 1) throw DomainError("at least one replicate is required");
        if (max_embedding_factor < 2) throw DomainError("embedding factor cap must be at least 2");
    }
};

/// One realization on the grid, row-major (index = i * side + j in 2D).
struct Field {
    int dim = 2;
    std::size_t side = 0;
    double spacing = 1.0;
    double alpha = 1.0;
    std::vector<double> values;

    double operator()(std::size_t i) const { return values[i]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * side + j]; }
};

namespace detail {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

inline FftwBuffer fftw_buffer(std::size_t count) {
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
    if (!p) throw std::bad_alloc();
    return FftwBuffer(p);
}

/// FFTW's planner is not reentrant.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};
using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDeleter>;

/// In-place forward transform of a torus of the given side; FFTW_ESTIMATE
/// keeps the plan, hence the floating-point results, run-to-run stable.
inline FftwPlan make_plan(int dim, std::size_t side, fftw_complex* buffer) {
    std::lock_guard lock(fftw_planner_mutex());
    int m = static_cast<int>(side);
    fftw_plan p = dim == 1 ? fftw_plan_dft_1d(m, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE)
                           : fftw_plan_dft_2d(m, m, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    if (!p) throw NumericalError("FFTW could not create a plan");
    return FftwPlan(p);
}

}  // namespace detail

/// Circulant-embedding sampler for a FieldSpec.
class FieldSimulator {
public:
    explicit FieldSimulator(const FieldSpec& spec) : spec_(spec) {
        spec_.validate();
        double worst = 0.0;
        for (std::size_t factor = 2; factor <= spec_.max_embedding_factor; factor *= 2) {
            torus_ = factor * spec_.grid_side;
            build_eigenvalues();
            if (min_ratio_ >= -kNegativeTolerance) {
                clip_and_scale();
                return;
            }
            worst = min_ratio_;
        }
        throw NumericalError("circulant embedding is not nonnegative definite up to torus side " +
                             std::to_string(torus_) + " (min eigenvalue / max = " + std::to_string(worst) + ")");
    }

    const FieldSpec& spec() const { return spec_; }
    std::size_t torus_side() const { return torus_; }
    /// Smallest embedding eigenvalue relative to the largest, before clipping.
    double min_eigenvalue_ratio() const { return min_ratio_; }

    /// Replicates 2k and 2k+1 come from the real and imaginary parts of one
    /// transform, seeded by (seed, field stream, k).
    void sample_pair(std::size_t pair, Field& first, Field& second) const {
        const std::size_t total = node_count(torus_);
        auto buffer = detail::fftw_buffer(total);
        RandomDraw draw(spec_.seed, streams::field, pair);
        for (std::size_t k = 0; k < total; ++k) {
            // Box-Muller: two independent standard normals
            double radius = std::sqrt(-2.0 * std::log(draw.uniform_open_low()));
            double angle = 2.0 * std::numbers::pi * draw.uniform();
            buffer[k][0] = scale_[k] * radius * std::cos(angle);
            buffer[k][1] = scale_[k] * radius * std::sin(angle);
        }
        fftw_execute_dft(plan_.get(), buffer.get(), buffer.get());
        for (Field* f : {&first, &second}) {
            f->dim = spec_.dim;
            f->side = spec_.grid_side;
            f->spacing = spec_.spacing;
            f->alpha = spec_.model.alpha;
            f->values.resize(node_count(spec_.grid_side));
        }
        const std::size_t n = spec_.grid_side;
        if (spec_.dim == 1) {
            for (std::size_t i = 0; i < n; ++i) {
                first.values[i] = buffer[i][0];
                second.values[i] = buffer[i][1];
            }
        } else {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    first.values[i * n + j] = buffer[i * torus_ + j][0];
                    second.values[i * n + j] = buffer[i * torus_ + j][1];
                }
        }
    }

    Field sample(std::size_t replicate) const {
        Field a, b;
        sample_pair(replicate / 2, a, b);
        return replicate % 2 == 0 ? a : b;
    }

    /// Applies fn(replicate, field) to every replicate and returns the
    /// results in replicate order. Pairs run in parallel; the output does not
    /// depend on the worker count.
    template <class Fn>
    auto map_replicates(Fn&& fn) const {
        using Result = decltype(fn(std::size_t{0}, std::declval<const Field&>()));
        const std::size_t count = spec_.replicates;
        std::vector<Result> out(count);
        parallel_for((count + 1) / 2, spec_.threads, [&](std::size_t pair) {
            Field a, b;
            sample_pair(pair, a, b);
            out[2 * pair] = fn(2 * pair, a);
            if (2 * pair + 1 < count) out[2 * pair + 1] = fn(2 * pair + 1, b);
        });
        return out;
    }

private:
    static constexpr double kNegativeTolerance = 1e-10;

    std::size_t node_count(std::size_t side) const { return spec_.dim == 1 ? side : side * side; }

    void build_eigenvalues() {
        const std::size_t total = node_count(torus_);
        auto buffer = detail::fftw_buffer(total);
        auto wrapped = [&](std::size_t k) { return static_cast<double>(std::min(k, torus_ - k)) * spec_.spacing; };
        if (spec_.dim == 1) {
            for (std::size_t i = 0; i < torus_; ++i) {
                buffer[i][0] = covariance(spec_.model, wrapped(i));
                buffer[i][1] = 0.0;
            }
        } else {
            for (std::size_t i = 0; i < torus_; ++i)
                for (std::size_t j = 0; j < torus_; ++j) {
                    buffer[i * torus_ + j][0] = covariance(spec_.model, std::hypot(wrapped(i), wrapped(j)));
                    buffer[i * torus_ + j][1] = 0.0;
                }
        }
        plan_ = detail::make_plan(spec_.dim, torus_, buffer.get());
        fftw_execute_dft(plan_.get(), buffer.get(), buffer.get());
        scale_.assign(total, 0.0);
        double lo = buffer[0][0], hi = buffer[0][0];
        for (std::size_t k = 0; k < total; ++k) {
            scale_[k] = buffer[k][0];
            lo = std::min(lo, scale_[k]);
            hi = std::max(hi, scale_[k]);
        }
        min_ratio_ = lo / hi;
    }

    void clip_and_scale() {
        const double total = static_cast<double>(node_count(torus_));
        for (double& v : scale_) v = std::sqrt(std::max(v, 0.0) / total);
    }

    FieldSpec spec_;
    std::size_t torus_ = 0;
    double min_ratio_ = 0.0;
    std::vector<double> scale_;
    detail::FftwPlan plan_;
};

inline Field simulate_field(const FieldSpec& spec, std::size_t replicate = 0) {
    return FieldSimulator(spec).sample(replicate);
}

/// Mean of xi(x) xi(x + lag e_i) over all grid pairs and both axes (the
/// field mean is known to be zero).
inline double empirical_covariance(const Field& f, std::size_t lag) {
    const std::size_t n = f.side;
    if (lag >= n) throw DomainError("lag exceeds the grid");
    double sum = 0.0;
    std::size_t count = 0;
    if (f.dim == 1) {
        for (std::size_t i = 0; i + lag < n; ++i) sum += f(i) * f(i + lag);
        count = n - lag;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j + lag < n; ++j) sum += f(i, j) * f(i, j + lag) + f(j, i) * f(j + lag, i);
        count = 2 * n * (n - lag);
    }
    return sum / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Window functionals

struct FunctionalSample {
    double r = 0.0;
    std::vector<double> t_grid;
    /// values[tile][k] = Y_r(t_grid[k]) on one field.
    std::vector<std::vector<double>> values;
};

/// Grid layout of Delta(r) for one field geometry: the nodes of one tile
/// sorted by the level tau(x) = gauge(x / r)^n at which they enter
/// Delta(r t^{1/n}), and the tile offsets that fit in the grid.
class WindowLayout {
public:
    WindowLayout(const Window& w, const KernelParams& p, double r, int grid_dim, std::size_t grid_side,
                 double spacing)
        : window_(w), params_(p), r_(r), side_(grid_side) {
        p.validate();
        if (p.n != w.dim()) throw DomainError("kernel dimension does not match the window dimension");
        if (w.dim() != grid_dim) throw DomainError("window dimension does not match the grid dimension");
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("window scale r must be positive");
        const int n = w.dim();
        const Point lo = w.lower_corner(), hi = w.upper_corner();
        // nodes sit at cell centers: tile node a has coordinate
        // (first + a + 1/2) spacing, so the homothety center is a cell corner
        // and shells of equal length hold equal node counts on a line
        std::array<long, 2> first{};
        for (int i = 0; i < n; ++i) {
            first[i] = static_cast<long>(std::floor(r * lo[i] / spacing - 0.5));
            long last = static_cast<long>(std::ceil(r * hi[i] / spacing - 0.5));
            extent_[i] = static_cast<std::size_t>(last - first[i] + 1);
            if (extent_[i] > grid_side)
                throw DomainError("window of scale r does not fit inside the simulated grid");
        }
        for (int i = n; i < 2; ++i) extent_[i] = 1;
        for (std::size_t a = 0; a < extent_[0]; ++a)
            for (std::size_t b = 0; b < extent_[1]; ++b) {
                Point x{};
                x[0] = (static_cast<double>(first[0] + static_cast<long>(a)) + 0.5) * spacing / r;
                if (n == 2) x[1] = (static_cast<double>(first[1] + static_cast<long>(b)) + 0.5) * spacing / r;
                double tau = int_pow(w.gauge(x), n);
                if (tau <= 1.0) nodes_.push_back({tau, a, b});
            }
        std::stable_sort(nodes_.begin(), nodes_.end(), [](const Node& u, const Node& v) { return u.tau < v.tau; });
        for (std::size_t a = 0; a + extent_[0] <= grid_side; a += extent_[0])
            for (std::size_t b = 0; b + extent_[1] <= (n == 2 ? grid_side : 1); b += extent_[1]) tiles_.push_back({a, b});
        double c2_value = c2(p, w).value;
        normalization_ = std::pow(spacing, n) / (std::pow(r, n - p.exponent() / 2.0) * std::sqrt(c2_value));
    }

    std::size_t tiles() const { return tiles_.size(); }
    std::size_t nodes() const { return nodes_.size(); }
    double r() const { return r_; }
    /// Factor turning a node sum of H_kappa into Y_r.
    double normalization() const { return normalization_; }

    /// Y_r(t) for every tile of the field, t_grid ascending.
    std::vector<std::vector<double>> evaluate(const Field& f, const std::vector<double>& t_grid) const {
        if (f.side != side_ || f.dim != window_.dim()) throw DomainError("field does not match the window layout");
        std::vector<std::vector<double>> out(tiles_.size(), std::vector<double>(t_grid.size(), 0.0));
        for (std::size_t k = 0; k < tiles_.size(); ++k) {
            const auto [a0, b0] = tiles_[k];
            CompensatedSum sum;
            std::size_t next = 0;
            for (std::size_t q = 0; q < t_grid.size(); ++q) {
                while (next < nodes_.size() && nodes_[next].tau <= t_grid[q]) {
                    const Node& node = nodes_[next++];
                    double xi = f.dim == 1 ? f(a0 + node.a) : f(a0 + node.a, b0 + node.b);
                    sum.add(hermite_poly(params_.kappa, xi));
                }
                out[k][q] = sum.value() * normalization_;
            }
        }
        return out;
    }

private:
    struct Node {
        double tau;
        std::size_t a, b;
    };

    Window window_;
    KernelParams params_;
    double r_;
    std::size_t side_;
    std::array<std::size_t, 2> extent_{};
    std::vector<Node> nodes_;
    std::vector<std::pair<std::size_t, std::size_t>> tiles_;
    double normalization_ = 0.0;
};

inline void check_t_grid(const std::vector<double>& t_grid) {
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (!(t_grid[k] >= 0.0 && t_grid[k] <= 1.0)) throw DomainError("t values must lie in [0, 1]");
        if (k > 0 && !(t_grid[k] > t_grid[k - 1])) throw DomainError("t values must be strictly increasing");
    }
}

/// Y_r(t) on every tile of one field.
inline FunctionalSample empirical_functional(const Field& f, const Window& w, const KernelParams& p, double r,
                                             const std::vector<double>& t_grid) {
    check_t_grid(t_grid);
    WindowLayout layout(w, p, r, f.dim, f.side, f.spacing);
    return {r, t_grid, layout.evaluate(f, t_grid)};
}

// ---------------------------------------------------------------------------
// Replicate studies

struct LagCovariance {
    std::size_t lag = 0;
    double distance = 0.0;
    double model = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    double z() const { return (mean - model) / std_error; }
};

struct EmpiricalCurvePoint {
    double s = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
};

struct EmpiricalVarianceCurve {
    std::string window;
    double alpha = 0.0;
    int kappa = 1;
    double r = 0.0;
    double h = 0.0;
    std::uint64_t seed = 0;
    std::size_t replicates = 0;
    std::size_t tiles = 0;
    std::size_t torus_side = 0;
    /// Var(Y_r(s + h) - Y_r(s)) with replicate-based standard errors.
    std::vector<EmpiricalCurvePoint> points;
    /// Var Y_r(1).
    EmpiricalCurvePoint at_one;
    /// Least-squares slope of the curve in s, its standard error, the
    /// z-score and the two-sided p-value.
    double slope = 0.0;
    double slope_std_error = 0.0;
    double slope_z = 0.0;
    double slope_p_value = 1.0;
    /// Mean of H_kappa over window nodes (zero in expectation).
    EmpiricalCurvePoint hermite_mean;
    std::vector<LagCovariance> covariances;
};

namespace detail {

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& x) {
    const double m = static_cast<double>(x.size());
    CompensatedSum s;
    for (double v : x) s.add(v);
    double mean = s.value() / m;
    CompensatedSum ss;
    for (double v : x) ss.add((v - mean) * (v - mean));
    double var = x.size() > 1 ? ss.value() / (m - 1.0) : 0.0;
    return {mean, std::sqrt(var / m)};
}

}  // namespace detail

/// Per-s sample variance of Y_r(s + h) - Y_r(s) over replicates and tiles,
/// plus Var Y_r(1) and, optionally, empirical covariances at the given lags.
/// All statistics share the same fields.
inline EmpiricalVarianceCurve empirical_variance_curve(const FieldSpec& spec, const Window& w, const KernelParams& p,
                                                       double r, double h, const std::vector<double>& s_grid,
                                                       const std::vector<std::size_t>& lags = {}) {
    spec.validate();
    if (!(h > 0.0 && h <= 1.0)) throw DomainError("h must lie in (0, 1]");
    if (s_grid.empty()) throw DomainError("s grid is empty");
    for (double s : s_grid)
        if (!(s >= 0.0 && s + h <= 1.0 + 1e-12)) throw DomainError("s must satisfy 0 <= s <= 1 - h");
    for (std::size_t lag : lags)
        if (lag >= spec.grid_side) throw DomainError("lag exceeds the grid");
    if (spec.model.alpha != p.alpha) throw DomainError("field alpha does not match the kernel alpha");

    WindowLayout layout(w, p, r, spec.dim, spec.grid_side, spec.spacing);
    if (layout.tiles() == 0) throw DomainError("window of scale r does not fit inside the simulated grid");

    // every level needed: s, s + h and 1
    std::vector<double> levels;
    for (double s : s_grid) {
        levels.push_back(s);
        levels.push_back(std::min(s + h, 1.0));
    }
    levels.push_back(1.0);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    auto index_of = [&](double t) {
        return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), t) - levels.begin());
    };

    struct ReplicateStats {
        std::vector<double> increments;  // per s, tile mean of squared increments
        double at_one = 0.0;
        double hermite_mean = 0.0;
        std::vector<double> lag_covariances;
    };

    FieldSimulator sim(spec);
    const double tiles = static_cast<double>(layout.tiles());
    auto per_replicate = sim.map_replicates([&](std::size_t, const Field& f) {
        ReplicateStats st;
        auto values = layout.evaluate(f, levels);
        st.increments.assign(s_grid.size(), 0.0);
        const std::size_t one = index_of(1.0);
        for (const auto& tile : values) {
            for (std::size_t k = 0; k < s_grid.size(); ++k) {
                double d = tile[index_of(std::min(s_grid[k] + h, 1.0))] - tile[index_of(s_grid[k])];
                st.increments[k] += d * d / tiles;
            }
            st.at_one += tile[one] * tile[one] / tiles;
            // back from Y_r(1) to the node average of H_kappa
            st.hermite_mean += tile[one] / (layout.normalization() * static_cast<double>(layout.nodes())) / tiles;
        }
        for (std::size_t lag : lags) st.lag_covariances.push_back(empirical_covariance(f, lag));
        return st;
    });

    EmpiricalVarianceCurve out;
    out.window = w.name();
    out.alpha = p.alpha;
    out.kappa = p.kappa;
    out.r = r;
    out.h = h;
    out.seed = spec.seed;
    out.replicates = spec.replicates;
    out.tiles = layout.tiles();
    out.torus_side = sim.torus_side();

    const std::size_t reps = per_replicate.size();
    std::vector<double> column(reps);
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        for (std::size_t q = 0; q < reps; ++q) column[q] = per_replicate[q].increments[k];
        auto [m, se] = detail::mean_and_stderr(column);
        out.points.push_back({s_grid[k], m, se});
    }
    for (std::size_t q = 0; q < reps; ++q) column[q] = per_replicate[q].at_one;
    {
        auto [m, se] = detail::mean_and_stderr(column);
        out.at_one = {1.0, m, se};
    }
    for (std::size_t q = 0; q < reps; ++q) column[q] = per_replicate[q].hermite_mean;
    {
        auto [m, se] = detail::mean_and_stderr(column);
        out.hermite_mean = {1.0, m, se};
    }

    // the least-squares slope is linear in the curve values, so the slope of
    // the mean curve is the mean of per-replicate slopes
    if (s_grid.size() >= 2) {
        double ms = 0.0;
        for (double s : s_grid) ms += s / s_grid.size();
        double sxx = 0.0;
        for (double s : s_grid) sxx += (s - ms) * (s - ms);
        for (std::size_t q = 0; q < reps; ++q) {
            double sxy = 0.0;
            for (std::size_t k = 0; k < s_grid.size(); ++k) sxy += (s_grid[k] - ms) * per_replicate[q].increments[k];
            column[q] = sxy / sxx;
        }
        auto [m, se] = detail::mean_and_stderr(column);
        out.slope = m;
        out.slope_std_error = se;
        out.slope_z = se > 0.0 ? m / se : 0.0;
        out.slope_p_value = std::erfc(std::abs(out.slope_z) / std::numbers::sqrt2);
    }

    for (std::size_t l = 0; l < lags.size(); ++l) {
        for (std::size_t q = 0; q < reps; ++q) column[q] = per_replicate[q].lag_covariances[l];
        auto [m, se] = detail::mean_and_stderr(column);
        double dist = static_cast<double>(lags[l]) * spec.spacing;
        out.covariances.push_back({lags[l], dist, covariance(spec.model, dist), m, se});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binary dump: 32-byte header ("LRDF", u32 version, u64 grid_side,
// f64 spacing, f64 alpha), then row-major little-endian f64 values.

inline constexpr std::uint32_t kFieldDumpVersion = 1;

namespace detail {

template <class T>
void put_le(std::ostream& os, T value) {
    static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

}  // namespace detail

inline void write_field_dump(const std::string& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    os.write("LRDF", 4);
    detail::put_le<std::uint32_t>(os, kFieldDumpVersion);
    detail::put_le<std::uint64_t>(os, f.side);
    detail::put_le<double>(os, f.spacing);
    detail::put_le<double>(os, f.alpha);
    for (double v : f.values) detail::put_le<double>(os, v);
    if (!os) throw DomainError("failed writing " + path);
}

/// Reads a dump; the grid dimension follows from the payload size.
inline Field read_field_dump(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LRDF", 4) != 0) throw DomainError(path + " is not a field dump");
    if (detail::get_le<std::uint32_t>(is) != kFieldDumpVersion) throw DomainError("unsupported field dump version");
    Field f;
    f.side = detail::get_le<std::uint64_t>(is);
    f.spacing = detail::get_le<double>(is);
    f.alpha = detail::get_le<double>(is);
    std::vector<double> values;
    for (double v; is.read(reinterpret_cast<char*>(&v), sizeof v);) values.push_back(v);
    if (values.size() == f.side) {
        f.dim = 1;
    } else if (values.size() == f.side * f.side) {
        f.dim = 2;
    } else {
        throw DomainError("field dump payload does not match its header");
    }
    f.values = std::move(values);
    return f;
}

}  // namespace hwl
