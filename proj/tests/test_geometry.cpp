#include <hwl/geometry.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace hwl;

namespace {

std::vector<Window> catalog() {
    return {Window::interval(), Window::disk(), Window::disk(0.3, 0.0), Window::ball(3),
            Window::ball(1),    Window::cube(1), Window::square(),       Window::cube(3)};
}

struct Stats {
    double mean = 0.0;
    double se = 0.0;
};

template <class F>
Stats stats_of(const std::vector<Point>& pts, F&& f) {
    double s = 0.0, s2 = 0.0;
    for (const auto& p : pts) {
        double v = f(p);
        s += v;
        s2 += v * v;
    }
    double n = static_cast<double>(pts.size());
    double m = s / n;
    return {m, std::sqrt((s2 / n - m * m) / n)};
}

}  // namespace

TEST(Window, VolumeScalesLinearlyInT) {
    EXPECT_NEAR(Window::disk().volume(1.0), std::numbers::pi, 1e-15);
    EXPECT_NEAR(Window::square().volume(0.25), 1.0, 1e-15);
    EXPECT_NEAR(Window::interval().volume(0.3), 0.3, 1e-15);
    EXPECT_NEAR(Window::ball(3).unit_volume(), 4.0 * std::numbers::pi / 3.0, 1e-14);
    EXPECT_NEAR(Window::cube(3).unit_volume(), 8.0, 1e-15);
    EXPECT_THROW(Window::disk().volume(-0.1), DomainError);
}

TEST(Window, RejectsInvalidShapes) {
    EXPECT_THROW(Window::disk(1.0, 0.0), DomainError);
    EXPECT_THROW(Window::cube(4), DomainError);
    EXPECT_THROW(Window::ball(0), DomainError);
}

TEST(Window, NamesAreDistinct) {
    EXPECT_EQ(Window::interval().name(), "interval");
    EXPECT_EQ(Window::disk().name(), "disk");
    EXPECT_EQ(Window::square().name(), "square");
    EXPECT_NE(Window::disk(0.3, 0.0).name(), "disk");
}

TEST(Window, GaugeOfOffsetBallHitsBoundary) {
    // homothety center at (0.3, 0) from the disk center: boundary points in
    // the homothety frame are u - c for unit u
    Window w = Window::disk(0.3, 0.0);
    for (double phi = 0.0; phi < 6.28; phi += 0.37) {
        Point y{};
        y[0] = std::cos(phi) - 0.3;
        y[1] = std::sin(phi);
        EXPECT_NEAR(w.gauge(y), 1.0, 1e-13) << phi;
    }
}

TEST(Shell, VolumeIsExactlyHTimesUnitVolume) {
    for (const auto& w : catalog())
        for (double t : {0.0, 0.1, 0.37, 0.9, 3.0})
            for (double h : {1e-3, 0.02, 0.5, 1.0}) {
                ShellRegion r = shell(w, t, h);
                EXPECT_NEAR(r.volume(), h * w.volume(1.0), 1e-12 * h * w.volume(1.0)) << w.name();
            }
}

TEST(Shell, Examples) {
    ShellRegion full = shell(Window::disk(), 0.0, 1.0);
    EXPECT_NEAR(full.volume(), std::numbers::pi, 1e-15);
    EXPECT_DOUBLE_EQ(full.inner_scale(), 0.0);

    ShellRegion annulus = shell(Window::disk(), 0.5, 0.5);
    EXPECT_NEAR(annulus.volume(), std::numbers::pi / 2.0, 1e-15);
    EXPECT_NEAR(annulus.inner_scale(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(annulus.outer_scale(), 1.0, 1e-15);

    ShellRegion seg = shell(Window::interval(), 0.2, 0.1);
    EXPECT_NEAR(seg.inner_scale(), 0.2, 1e-15);
    EXPECT_NEAR(seg.outer_scale(), 0.3, 1e-15);
}

TEST(Shell, RejectsInvalidParameters) {
    EXPECT_THROW(shell(Window::disk(), 0.1, 0.0), DomainError);
    EXPECT_THROW(shell(Window::disk(), 0.1, -1.0), DomainError);
    EXPECT_THROW(shell(Window::disk(), -0.1, 0.5), DomainError);
}

TEST(Shell, ContainmentMatchesRadialInequalities) {
    RandomDraw draw(3, 0, 0);
    ShellRegion disk = shell(Window::disk(), 0.3, 0.4);
    ShellRegion square = shell(Window::square(), 0.3, 0.4);
    for (int i = 0; i < 20000; ++i) {
        Point x{};
        x[0] = 2.4 * draw.uniform() - 1.2;
        x[1] = 2.4 * draw.uniform() - 1.2;
        double r2 = x[0] * x[0] + x[1] * x[1];
        EXPECT_EQ(disk.contains(x), r2 > 0.3 && r2 <= 0.7);
        // |Delta(s)| = 4 s^2 with s the sup-norm, t-volume linear: t = s^2
        double s = std::max(std::abs(x[0]), std::abs(x[1]));
        EXPECT_EQ(square.contains(x), s * s > 0.3 && s * s <= 0.7);
    }
}

TEST(Sampling, PointsLieInTheShell) {
    for (const auto& w : catalog()) {
        ShellRegion r = shell(w, 0.2, 0.3);
        auto pts = sample_uniform(r, 5000, 11);
        for (const auto& p : pts) {
            double g = int_pow(w.gauge(p), w.dim());
            EXPECT_GE(g, 0.2 - 1e-12) << w.name();
            EXPECT_LE(g, 0.5 + 1e-12) << w.name();
        }
    }
}

TEST(Sampling, CenteredDiskMeanIsOrigin) {
    auto pts = sample_uniform(shell(Window::disk(), 0.1, 0.3), 100000, 5);
    for (int k = 0; k < 2; ++k) {
        Stats s = stats_of(pts, [k](const Point& p) { return p[k]; });
        EXPECT_LT(std::abs(s.mean), 3.0 * s.se);
    }
}

TEST(Sampling, IntervalShellMean) {
    auto pts = sample_uniform(shell(Window::interval(), 0.2, 0.1), 100000, 5);
    Stats s = stats_of(pts, [](const Point& p) { return p[0]; });
    EXPECT_LT(std::abs(s.mean - 0.25), 3.0 * s.se);
}

TEST(Sampling, AnnulusInnerFraction) {
    auto pts = sample_uniform(shell(Window::disk(), 0.5, 0.5), 100000, 5);
    Stats s = stats_of(pts, [](const Point& p) { return p[0] * p[0] + p[1] * p[1] < 0.75 ? 1.0 : 0.0; });
    EXPECT_LT(std::abs(s.mean - 0.5), 3.0 * s.se);
}

TEST(Sampling, SubBoxHitRates) {
    // quarter plane of a centered disk shell
    auto disk = sample_uniform(shell(Window::disk(), 0.3, 0.5), 100000, 8);
    Stats q = stats_of(disk, [](const Point& p) { return p[0] > 0 && p[1] > 0 ? 1.0 : 0.0; });
    EXPECT_LT(std::abs(q.mean - 0.25), 4.0 * q.se);

    // strip x > 0.6 of the square shell with sup-norm in [0.5, sqrt(0.75)]
    auto sq = sample_uniform(shell(Window::square(), 0.25, 0.5), 100000, 8);
    const double outer = std::sqrt(0.75);
    const double expected = (outer - 0.6) * 2.0 * outer / 2.0;
    Stats s = stats_of(sq, [](const Point& p) { return p[0] > 0.6 ? 1.0 : 0.0; });
    EXPECT_LT(std::abs(s.mean - expected), 4.0 * s.se);

    // upper octant of the cube shell: by symmetry 1/8
    auto cube = sample_uniform(shell(Window::cube(3), 0.1, 0.4), 100000, 8);
    Stats c = stats_of(cube, [](const Point& p) { return p[0] > 0 && p[1] > 0 && p[2] > 0 ? 1.0 : 0.0; });
    EXPECT_LT(std::abs(c.mean - 0.125), 4.0 * c.se);
}

TEST(Sampling, DeterministicAcrossThreadCounts) {
    ShellRegion r = shell(Window::disk(0.3, 0.0), 0.1, 0.4);
    auto a = sample_uniform(r, 200000, 42, 1);
    auto b = sample_uniform(r, 200000, 42, 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i][0], b[i][0]);
        EXPECT_EQ(a[i][1], b[i][1]);
    }
    auto c = sample_uniform(r, 200000, 43, 1);
    EXPECT_NE(a[0][0], c[0][0]);
}

TEST(Boundary, CenteredDiskIsOnTheCircle) {
    auto pts = boundary_sample(Window::disk(), 1.0, 10000, 1);
    for (const auto& p : pts) EXPECT_LT(std::abs(std::hypot(p[0], p[1]) - 1.0), 1e-12);
}

TEST(Boundary, CenteredDiskAngleIsUniform) {
    auto pts = boundary_sample(Window::disk(), 1.0, 10000, 1);
    std::vector<double> u;
    for (const auto& p : pts) {
        double a = std::atan2(p[1], p[0]);
        u.push_back((a < 0 ? a + 2.0 * std::numbers::pi : a) / (2.0 * std::numbers::pi));
    }
    std::sort(u.begin(), u.end());
    double d = 0.0, n = static_cast<double>(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        d = std::max({d, (i + 1) / n - u[i], u[i] - i / n});
    EXPECT_LT(d, 1.628 / std::sqrt(n));  // 1% Kolmogorov-Smirnov critical value
}

TEST(Boundary, CenteredBallMomentsVanish) {
    auto pts = boundary_sample(Window::ball(3), 0.5, 100000, 2);
    for (int k = 0; k < 3; ++k) {
        Stats s = stats_of(pts, [k](const Point& p) { return p[k]; });
        EXPECT_LT(std::abs(s.mean), 4.0 * s.se);
        Stats q = stats_of(pts, [k](const Point& p) { return p[k] * p[(k + 1) % 3]; });
        EXPECT_LT(std::abs(q.mean), 4.0 * q.se);
    }
}

TEST(Boundary, OffCenterDensityFollowsNormalVelocity) {
    // homothety center 0.3 to the right of the disk center; with u the unit
    // outward normal the velocity is 1 - 0.3 cos(theta)
    Window w = Window::disk(0.3, 0.0);
    auto pts = boundary_sample(w, 1.0, 100000, 9);
    const double half = 0.3;
    double near = 0.0, far = 0.0;
    for (const auto& p : pts) {
        double theta = std::atan2(p[1], p[0] + 0.3);
        if (std::abs(theta) < half) near += 1.0;
        if (std::abs(theta) > std::numbers::pi - half) far += 1.0;
    }
    const double avg_cos = std::sin(half) / half;
    const double expected = (1.0 - 0.3 * avg_cos) / (1.0 + 0.3 * avg_cos);
    EXPECT_NEAR(near / far, expected, 0.05 * expected);
}

TEST(Boundary, CubeFacesCarryEqualMass) {
    auto pts = boundary_sample(Window::square(), 0.25, 40000, 4);
    int right = 0;
    for (const auto& p : pts) {
        EXPECT_NEAR(std::max(std::abs(p[0]), std::abs(p[1])), 0.5, 1e-15);
        if (p[0] == 0.5) ++right;
    }
    double se = std::sqrt(0.25 * 0.75 / pts.size());
    EXPECT_LT(std::abs(right / 40000.0 - 0.25), 4.0 * se);
}

TEST(Boundary, DegenerateScaleThrows) {
    EXPECT_THROW(boundary_sample(Window::disk(), 0.0, 10, 1), DomainError);
    RandomDraw d(1, 0, 0);
    EXPECT_THROW(shell(Window::disk(), 0.0, 0.5).sample_boundary(d, Side::inner), DomainError);
    EXPECT_THROW(sample_uniform(shell(Window::disk(), 0.0, 0.5), 0, 1), DomainError);
}
