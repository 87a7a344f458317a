#include <hwl/riesz.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hwl;

namespace {

SamplingOptions with_samples(std::uint64_t n, std::uint64_t seed = 1) {
    SamplingOptions o;
    o.samples = n;
    o.seed = seed;
    return o;
}

void expect_within(const Estimate& e, double expected, double sigmas = 3.0) {
    EXPECT_LE(std::abs(e.value - expected), sigmas * e.std_error)
        << "value " << e.value << " expected " << expected << " stderr " << e.std_error;
    EXPECT_GT(e.std_error, 0.0);
}

}  // namespace

TEST(MeanRiesz, UnitDiskInverseDistance) {
    Estimate e = mean_riesz(shell(Window::disk(), 0.0, 1.0), 1.0, with_samples(4'000'000));
    expect_within(e, 16.0 / (3.0 * std::numbers::pi));
    EXPECT_EQ(e.method, Method::monte_carlo);
    EXPECT_EQ(e.samples, 4'000'000u);
}

TEST(MeanRiesz, UnitInterval) {
    Estimate e = mean_riesz(shell(Window::interval(), 0.0, 1.0), 0.5, with_samples(2'000'000));
    expect_within(e, 8.0 / 3.0);
}

TEST(MeanRiesz, VanishingExponentGivesOne) {
    Estimate e = mean_riesz(shell(Window::square(), 0.2, 0.3), 1e-9, with_samples(10'000));
    EXPECT_NEAR(e.value, 1.0, 1e-8);
    EXPECT_DOUBLE_EQ(mean_riesz(shell(Window::disk(), 0.2, 0.3), 0.0, with_samples(1000)).value, 1.0);
}

TEST(MeanRiesz, NonIntegrableKernelThrows) {
    EXPECT_THROW(mean_riesz(shell(Window::disk(), 0.0, 1.0), 2.0), DomainError);
    EXPECT_THROW(mean_riesz(shell(Window::interval(), 0.0, 1.0), 1.0), DomainError);
    EXPECT_THROW(mean_riesz(shell(Window::disk(), 0.0, 1.0), -0.5), DomainError);
}

TEST(MeanRiesz, TooFewSamplesThrows) {
    EXPECT_THROW(mean_riesz(shell(Window::disk(), 0.0, 1.0), 1.0, with_samples(10)), DomainError);
}

TEST(MeanRiesz, DeterministicAcrossThreads) {
    ShellRegion r = shell(Window::square(), 0.1, 0.2);
    SamplingOptions a = with_samples(300'000, 9);
    SamplingOptions b = a;
    b.threads = 3;
    Estimate x = mean_riesz(r, 1.0, a);
    Estimate y = mean_riesz(r, 1.0, b);
    EXPECT_EQ(x.value, y.value);
    EXPECT_EQ(x.std_error, y.std_error);
    SamplingOptions c = with_samples(300'000, 10);
    EXPECT_NE(mean_riesz(r, 1.0, c).value, x.value);
}

TEST(MeanRiesz, SwappingThePairLeavesTheEstimateUnchanged) {
    ShellRegion r = shell(Window::disk(), 0.3, 0.2);
    SamplingOptions o = with_samples(100'000, 4);
    Estimate forward = mean_riesz(r, 0.7, o);
    Estimate swapped = monte_carlo_mean(o, streams::riesz_pairs, Aggregation::mean, [&](auto& draw) {
        Point u = r.sample(draw);
        Point v = r.sample(draw);
        return riesz_kernel(distance2(v, u, 2), 0.7);
    });
    EXPECT_EQ(forward.value, swapped.value);
}

TEST(MeanRiesz, HeavyTailUsesBlockMedian) {
    EXPECT_EQ(riesz_aggregation(1.0, 2), Aggregation::median_of_means);
    EXPECT_EQ(riesz_aggregation(0.9, 2), Aggregation::mean);
    EXPECT_EQ(riesz_aggregation(0.5, 1), Aggregation::median_of_means);
}

TEST(MeanRiesz, QuasiRandomAgreesWithClosedForm) {
    SamplingOptions o = with_samples(1'000'000);
    o.quasi_random = true;
    Estimate e = mean_riesz(shell(Window::interval(), 0.0, 1.0), 0.4, o);
    EXPECT_EQ(e.method, Method::quasi_random);
    EXPECT_NEAR(e.value, 2.0 / (0.6 * 1.6), 4.0 * e.std_error + 1e-3);
}

TEST(MeanRiesz, QuasiRandomRejectsRejectionSamplers) {
    SamplingOptions o = with_samples(1000);
    o.quasi_random = true;
    EXPECT_THROW(mean_riesz(shell(Window::disk(0.3, 0.0), 0.0, 1.0), 1.0, o), UnsupportedError);
}

TEST(RieszEnergy, Examples) {
    expect_within(riesz_energy(shell(Window::interval(), 0.0, 1.0), 0.5, with_samples(2'000'000)), 8.0 / 3.0);
    expect_within(riesz_energy(shell(Window::interval(), 0.4, 0.2), 0.5, with_samples(2'000'000)),
                  2.0 * std::pow(0.2, 1.5) / 0.75);
    expect_within(riesz_energy(shell(Window::disk(), 0.0, 1.0), 1.0, with_samples(4'000'000)),
                  16.0 * std::numbers::pi / 3.0);
}

TEST(RieszEnergy, TranslationInvarianceOnTheInterval) {
    SamplingOptions o = with_samples(1'000'000);
    Estimate a = riesz_energy(shell(Window::interval(), 0.0, 0.1), 0.5, o);
    Estimate b = riesz_energy(shell(Window::interval(), 0.7, 0.1), 0.5, o);
    EXPECT_LT(std::abs(a.value - b.value), 3.0 * std::hypot(a.std_error, b.std_error) + 1e-12);
}

TEST(RieszEnergy, ExactSelfSimilarityOfTheRescaledEstimator) {
    for (const Window& w : {Window::disk(), Window::square(), Window::cube(3), Window::interval()}) {
        SamplingOptions o = with_samples(20'000, 5);
        o.quasi_random = true;
        const double g = w.dim() == 1 ? 0.5 : 1.0;
        double h = 0.03;
        double lhs = riesz_energy(shell(w, 0.0, h), g, o).value;
        double rhs = std::pow(h, 2.0 - g / w.dim()) * riesz_energy(shell(w, 0.0, 1.0), g, o).value;
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-12) << w.name();
    }
}

TEST(Riesz1dExact, Examples) {
    EXPECT_NEAR(riesz_1d_exact(0.0, 1.0, 0.5), 8.0 / 3.0, 1e-15);
    EXPECT_NEAR(riesz_1d_exact(0.7, 1e-3, 0.5), 2.0 * std::pow(1e-3, 1.5) / 0.75, 1e-18);
    EXPECT_EQ(riesz_1d_exact(0.3, 0.2, 0.6), riesz_1d_exact(0.0, 0.2, 0.6));
    EXPECT_THROW(riesz_1d_exact(0.0, 1.0, 1.0), DomainError);
    EXPECT_THROW(riesz_1d_exact(0.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(riesz_1d_exact(0.0, 0.0, 0.5), DomainError);
}

TEST(Riesz1dExact, MatchesQuadrature) {
    // iint_{[0,h]^2} |x-y|^{-a} = 2 int_0^h (h - r) r^{-a} dr
    const double h = 0.37, a = 0.3;
    double q = detail::tanh_sinh_integral([&](double r) { return 2.0 * (h - r) * std::pow(r, -a); }, 0.0, h);
    EXPECT_NEAR(riesz_1d_exact(0.0, h, a) / q, 1.0, 1e-12);
}

TEST(WindowEnergy, DiskQuadratureMatchesClosedForm) {
    Estimate e = window_energy(Window::disk(), 1.0);
    EXPECT_EQ(e.method, Method::quadrature);
    EXPECT_NEAR(e.value / (16.0 * std::numbers::pi / 3.0), 1.0, 1e-10);
    // homothety center does not change the window itself
    EXPECT_NEAR(window_energy(Window::disk(0.3, 0.0), 1.0).value, e.value, 1e-12 * e.value);
}

TEST(WindowEnergy, SquareDistanceDensityIntegratesToOne) {
    double mass = detail::tanh_sinh_integral(detail::square_distance_density, 0.0, 1.0) +
                  detail::tanh_sinh_integral(detail::square_distance_density, 1.0, std::numbers::sqrt2);
    EXPECT_NEAR(mass, 1.0, 1e-12);
    double mean = detail::tanh_sinh_integral([](double r) { return r * detail::square_distance_density(r); }, 0.0, 1.0) +
                  detail::tanh_sinh_integral([](double r) { return r * detail::square_distance_density(r); }, 1.0,
                                             std::numbers::sqrt2);
    EXPECT_NEAR(mean, 0.5214054331647207, 1e-12);
}

TEST(WindowEnergy, SquareQuadratureMatchesMonteCarlo) {
    Estimate q = window_energy(Window::square(), 0.8);
    Estimate mc = scaled(mean_riesz(shell(Window::square(), 0.0, 1.0), 0.8, with_samples(2'000'000)), 16.0);
    expect_within(mc, q.value);
}

TEST(WindowEnergy, IntervalIsClosedForm) {
    Estimate e = window_energy(Window::interval(), 0.5);
    EXPECT_EQ(e.method, Method::closed_form);
    EXPECT_DOUBLE_EQ(e.value, 8.0 / 3.0);
    // [-1, 1] has length 2
    EXPECT_NEAR(window_energy(Window::cube(1), 0.5).value, std::pow(2.0, 1.5) * 8.0 / 3.0, 1e-14);
}

TEST(C2, Examples) {
    EXPECT_NEAR(c2(KernelParams::make(1, 1, 0.5), Window::interval()).value, 6.684342, 1e-6);
    EXPECT_NEAR(c2(KernelParams::make(2, 1, 1.0), Window::disk()).value, 105.27578, 1e-5);
    EXPECT_THROW(c2(KernelParams::make(2, 1, 1.0), Window::interval()), DomainError);
}

TEST(C2, MonteCarloWindowCarriesError) {
    Estimate e = c2(KernelParams::make(3, 1, 1.5), Window::cube(3), with_samples(200'000));
    EXPECT_EQ(e.method, Method::monte_carlo);
    EXPECT_GT(e.std_error, 0.0);
    EXPECT_LT(e.std_error, 0.05 * e.value);
}

TEST(VarianceIncrement, OneDimensionalClosedFormIsConstantInT) {
    KernelParams p = KernelParams::make(1, 1, 0.5);
    double a = variance_increment(p, Window::interval(), 0.3, 0.1, Method::closed_form).variance.value;
    double b = variance_increment(p, Window::interval(), 0.0, 0.1, Method::closed_form).variance.value;
    double c = variance_increment(p, Window::interval(), 0.8, 0.1, Method::closed_form).variance.value;
    EXPECT_NEAR(a / b, 1.0, 1e-12);
    EXPECT_NEAR(c / b, 1.0, 1e-12);
    EXPECT_NEAR(b, std::pow(0.1, 1.5) / c1(1, 0.5), 1e-15);
}

TEST(VarianceIncrement, DiskFullWindow) {
    KernelParams p = KernelParams::make(2, 1, 1.0);
    auto r = variance_increment(p, Window::disk(), 0.0, 1.0, Method::monte_carlo, with_samples(4'000'000));
    expect_within(r.variance, 1.0 / (2.0 * std::numbers::pi));
    EXPECT_FALSE(r.beyond_unit_domain);
}

TEST(VarianceIncrement, DiskDecreasesAwayFromTheOrigin) {
    KernelParams p = KernelParams::make(2, 1, 1.0);
    SamplingOptions o = with_samples(10'000'000);
    Estimate v0 = variance_increment(p, Window::disk(), 0.0, 0.02, Method::monte_carlo, o).variance;
    Estimate v5 = variance_increment(p, Window::disk(), 0.5, 0.02, Method::monte_carlo, o).variance;
    EXPECT_GT(v0.value - v5.value, 3.0 * std::hypot(v0.std_error, v5.std_error));
}

TEST(VarianceIncrement, FlagsIncrementsBeyondTheUnitDomain) {
    KernelParams p = KernelParams::make(1, 1, 0.5);
    auto r = variance_increment(p, Window::interval(), 0.95, 0.1, Method::closed_form);
    EXPECT_TRUE(r.beyond_unit_domain);
    EXPECT_GT(r.variance.value, 0.0);
}

TEST(VarianceIncrement, ClosedFormNeedsTheInterval) {
    EXPECT_THROW(variance_increment(KernelParams::make(2, 1, 1.0), Window::disk(), 0.0, 0.1, Method::closed_form),
                 UnsupportedError);
    EXPECT_THROW(variance_increment(KernelParams::make(2, 1, 1.0), Window::interval(), 0.0, 0.1, Method::closed_form),
                 DomainError);
}

TEST(VarianceIncrement, HigherRankUsesKappaAlpha) {
    // kappa = 2, alpha = 0.3 on the interval: I uses exponent 0.6 and c1^2
    KernelParams p = KernelParams::make(1, 2, 0.3);
    double v = variance_increment(p, Window::interval(), 0.2, 0.1, Method::closed_form).variance.value;
    EXPECT_NEAR(v, std::pow(0.1, 1.4) / std::pow(c1(1, 0.3), 2), 1e-15);
}

TEST(ScalingExponent, IntervalClosedForm) {
    ScalingFit f = scaling_exponent(Window::interval(), 0.5, {0.01, 0.03, 0.1, 0.3, 1.0}, Method::closed_form);
    EXPECT_NEAR(f.slope, 1.5, 1e-6);
    EXPECT_DOUBLE_EQ(f.expected, 1.5);
}

TEST(ScalingExponent, DiskMonteCarlo) {
    ScalingFit f = scaling_exponent(Window::disk(), 1.0, {0.01, 0.03, 0.1, 0.3, 1.0}, Method::monte_carlo,
                                    with_samples(1'000'000));
    EXPECT_NEAR(f.slope, 1.5, 0.02);
    EXPECT_GT(f.slope_error, 0.0);
}

TEST(ScalingExponent, DegenerateGridThrows) {
    EXPECT_THROW(scaling_exponent(Window::interval(), 0.5, {0.1, 0.2, 0.3}, Method::closed_form), DomainError);
    EXPECT_THROW(scaling_exponent(Window::interval(), 0.5, {0.1, 0.2, 0.3, 0.5}, Method::closed_form), DomainError);
    EXPECT_THROW(scaling_exponent(Window::interval(), 0.5, {0.0, 0.2, 0.3, 1.0}, Method::closed_form), DomainError);
}

TEST(BoundCheck, DiskSmallIncrement) {
    BoundReport r = bound_check(Window::disk(), KernelParams::make(2, 1, 1.0), 0.1, 100.0, with_samples(1'000'000));
    EXPECT_TRUE(r.lower_ok);
    EXPECT_TRUE(r.upper_ok);
    EXPECT_GT(r.lower_margin, 0.0);
    EXPECT_GT(r.upper_margin, 0.0);
    EXPECT_FALSE(r.preasymptotic);
    EXPECT_DOUBLE_EQ(r.epsilon, 0.25);
}

TEST(BoundCheck, PreasymptoticFlag) {
    BoundReport r = bound_check(Window::disk(), KernelParams::make(2, 1, 1.0), 0.9, 0.5, with_samples(100'000));
    EXPECT_TRUE(r.preasymptotic);
}

TEST(BoundCheck, IntervalLowerBoundHolds) {
    BoundReport r = bound_check(Window::interval(), KernelParams::make(1, 1, 0.5), 0.1, 100.0, with_samples(200'000));
    EXPECT_TRUE(r.lower_ok);
    // I is constant in t on the interval, so the t -> infinity bound with an
    // extra h^eps cannot hold for small h
    EXPECT_FALSE(r.upper_ok);
}
