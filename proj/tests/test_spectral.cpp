#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "nwspec/spectral.hpp"
#include "oracles.hpp"

using namespace nwspec;

namespace {

StandardizedSeries make_standardized(std::vector<double> v) {
    return standardize(std::span<const double>(v));
}

std::vector<double> alternating(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
    return v;
}

AutocovarianceSet ideal_white_noise(std::size_t n) {
    AutocovarianceSet a;
    a.n = n;
    a.c0 = double(n);
    a.lags.assign(n - 1, 0.0);
    return a;
}

}  // namespace

TEST(FrequencyGrid, UniformEndpointsAndSpacing) {
    const auto g = FrequencyGrid::uniform(256);
    ASSERT_EQ(g.size(), 257u);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_EQ(g[256], kPi);
    EXPECT_NEAR(g[128], kPi / 2, 1e-15);
    EXPECT_THROW(FrequencyGrid::uniform(0), ConfigError);
    EXPECT_THROW(FrequencyGrid::from_points({0.0, 2.0, 1.0, kPi}), ConfigError);
    EXPECT_THROW(FrequencyGrid::from_points({0.1, kPi}), ConfigError);
}

TEST(Autocovariances, AlternatingFourPoints) {
    const auto a = autocovariances(make_standardized({1, -1, 1, -1}));
    EXPECT_DOUBLE_EQ(a.c0, 4.0);
    ASSERT_EQ(a.max_lag(), 3u);
    EXPECT_DOUBLE_EQ(a(1), -3.0);
    EXPECT_DOUBLE_EQ(a(2), 2.0);
    EXPECT_DOUBLE_EQ(a(3), -1.0);
    EXPECT_DOUBLE_EQ(a.autocovariance(1), -0.75);
}

TEST(Autocovariances, TwoPoints) {
    const auto a = autocovariances(make_standardized({1, -1}));
    EXPECT_DOUBLE_EQ(a.c0, 2.0);
    EXPECT_DOUBLE_EQ(a(1), -1.0);
}

TEST(Autocovariances, MaxLagOutOfRange) {
    const auto z = make_standardized({1, 2, 3, 5});
    EXPECT_THROW(autocovariances(z, 0), ConfigError);
    EXPECT_THROW(autocovariances(z, 4), ConfigError);
    const auto a = autocovariances(z, 2);
    EXPECT_EQ(a.max_lag(), 2u);
    EXPECT_EQ(a(3), 0.0);
}

TEST(Autocovariances, MatchBruteForceAndCauchySchwarz) {
    for (std::size_t n : {2u, 3u, 17u, 64u, 200u, 512u}) {
        const auto x = oracle::standardized(oracle::gaussian(n, unsigned(n)));
        const auto a = autocovariances(std::span<const double>(x));
        EXPECT_NEAR(a.c0, double(n), 1e-8 * double(n));
        for (std::size_t tau = 1; tau < n; ++tau) {
            EXPECT_NEAR(a(tau), oracle::brute_lag_product(x, tau), 1e-9 * double(n)) << n << " " << tau;
            EXPECT_LE(std::abs(a(tau)), a.c0);
        }
    }
}

TEST(Autocovariances, WhiteNoiseSmallLagsAreSmall) {
    constexpr int kSeeds = 1000;
    int ok = 0;
    for (int s = 0; s < kSeeds; ++s) {
        const auto a = autocovariances(make_standardized(oracle::gaussian(1000, 7000 + s)), 10);
        bool all = true;
        for (std::size_t tau = 1; tau <= 10; ++tau) all = all && std::abs(a(tau)) / 1000.0 < 0.2;
        ok += all;
    }
    EXPECT_GE(ok, 990);
}

TEST(Spectrum, IdealWhiteNoiseIsFlat) {
    const auto f = spectrum(ideal_white_noise(50), FrequencyGrid::uniform(64));
    for (double v : f.values) EXPECT_NEAR(v, 1.0 / (2.0 * kPi), 1e-15);
    EXPECT_NEAR(f.values[3], 0.15915, 1e-5);
}

TEST(Spectrum, AlternationPeaksAtPi) {
    const auto f = spectrum(autocovariances(make_standardized(alternating(64))), FrequencyGrid::uniform(256));
    const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    EXPECT_EQ(hi - f.values.begin(), 256);
    // Zero at w = 0 (and at every other Fourier frequency): a global minimum.
    EXPECT_NEAR(f.values[0], *lo, 1e-12);
    EXPECT_NEAR(f.values[0], 0.0, 1e-12);
}

TEST(Spectrum, Ar1AverageNearClosedForm) {
    // Closed-form AR(1) density at w = 0.1 with unit process variance.
    const double rho = 0.5;
    const double w = 0.1;
    const double truth = (1.0 / (2.0 * kPi)) * (1.0 - rho * rho) / (1.0 - 2.0 * rho * std::cos(w) + rho * rho);
    const auto grid = FrequencyGrid::from_points({0.0, w, kPi});
    double mean = 0.0;
    constexpr int kSeeds = 200;
    for (int s = 0; s < kSeeds; ++s) {
        auto e = oracle::gaussian(4096 + 100, 500 + s);
        std::vector<double> x(e.size());
        for (std::size_t t = 0; t < e.size(); ++t) x[t] = e[t] + (t ? rho * x[t - 1] : 0.0);
        x.erase(x.begin(), x.begin() + 100);
        mean += spectrum(autocovariances(make_standardized(x)), grid).values[1] / kSeeds;
    }
    EXPECT_NEAR(mean / truth, 1.0, 0.25);
}

TEST(Spectrum, MatchesDirectPeriodogramAtAnyFrequency) {
    const auto x = oracle::standardized(oracle::gaussian(100, 3));
    const auto grid = FrequencyGrid::uniform(97);
    const auto f = spectrum(autocovariances(std::span<const double>(x)), grid);
    for (std::size_t j = 0; j < grid.size(); ++j) EXPECT_NEAR(f.values[j], oracle::periodogram(x, grid[j]), 1e-10);
}

TEST(Spectrum, TrapezoidIntegralIsOneHalf) {
    for (unsigned seed : {1u, 2u, 3u}) {
        const auto x = oracle::standardized(oracle::gaussian(300, seed));
        const auto grid = FrequencyGrid::uniform(512);
        const auto f = spectrum(autocovariances(std::span<const double>(x)), grid);
        double integral = 0.0;
        for (std::size_t j = 1; j < grid.size(); ++j) integral += 0.5 * (f.values[j] + f.values[j - 1]) * (grid[j] - grid[j - 1]);
        EXPECT_NEAR(integral, 0.5, 1e-4);
    }
}

TEST(Spectrum, BartlettWindowIsNonNegative) {
    for (unsigned seed = 0; seed < 20; ++seed) {
        const std::size_t n = 64 + 31 * seed;
        const auto a = autocovariances(make_standardized(oracle::gaussian(n, 90 + seed)));
        for (std::size_t width : {std::size_t{8}, n / 2, n}) {
            const auto f = spectrum(a, FrequencyGrid::uniform(300), Window::bartlett(width));
            for (double v : f.values) EXPECT_GE(v, -1e-12);
        }
    }
    EXPECT_THROW(Window::bartlett(0), ConfigError);
}

TEST(IntegralSpectrum, EndpointIdentities) {
    for (unsigned seed = 0; seed < 30; ++seed) {
        const auto a = autocovariances(make_standardized(oracle::gaussian(16 + 13 * seed, seed)));
        const auto F = integral_spectrum(a, FrequencyGrid::uniform(256));
        EXPECT_EQ(F.values.front(), 0.0);
        EXPECT_NEAR(F.values.back(), 0.5, 1e-8);
    }
}

TEST(IntegralSpectrum, WhiteNoiseNullLine) {
    const auto grid = FrequencyGrid::uniform(128);
    const auto F = integral_spectrum(ideal_white_noise(40), grid);
    for (std::size_t j = 0; j < grid.size(); ++j) EXPECT_NEAR(F.values[j], grid[j] / (2.0 * kPi), 1e-15);
}

TEST(IntegralSpectrum, HandEvaluatedAlternatingSeries) {
    // 1/4 + (1/4pi)(-3 sin(pi/2) + 2 sin(pi)/2 - sin(3pi/2)/3) = 1/4 - 2/(3pi)
    const double expected = 0.25 - 2.0 / (3.0 * kPi);
    const auto grid = FrequencyGrid::uniform(2);
    const auto F = integral_spectrum(autocovariances(make_standardized({1, -1, 1, -1})), grid);
    EXPECT_NEAR(F.values[1], expected, 1e-14);
    EXPECT_NEAR(F.values[1], 0.0377934, 1e-7);

    // Independent check: Simpson quadrature of the data periodogram on [0, pi/2].
    const std::vector<double> x{1, -1, 1, -1};
    const std::size_t panels = 2000;
    std::vector<double> f(panels + 1);
    const double h = (kPi / 2) / double(panels);
    for (std::size_t i = 0; i <= panels; ++i) f[i] = oracle::periodogram(x, h * double(i));
    EXPECT_NEAR(oracle::cumulative_simpson(f, h).back(), expected, 1e-10);
}

TEST(IntegralSpectrum, EqualsQuadratureOfSpectrum) {
    const auto fine = FrequencyGrid::uniform(4096);
    const auto coarse = FrequencyGrid::uniform(256);
    const double h = kPi / 4096;
    for (unsigned seed = 0; seed < 50; ++seed) {
        const auto a = autocovariances(make_standardized(oracle::gaussian(128, 300 + seed)));
        const auto f = spectrum(a, fine);
        const auto cum = oracle::cumulative_simpson(f.values, h);  // at even fine nodes
        const auto F = integral_spectrum(a, coarse);
        double worst = 0.0;
        for (std::size_t j = 0; j < coarse.size(); ++j) worst = std::max(worst, std::abs(F.values[j] - cum[8 * j]));
        EXPECT_LT(worst, 1e-6) << "seed " << seed;
    }
}

TEST(PeriodogramOracle, ImpulseMatchesIdealConstant) {
    std::vector<double> x(32, 0.0);
    x[0] = 1.0;
    const auto p = fft_periodogram_oracle(x);
    const auto f = spectrum(autocovariances(std::span<const double>(x)), p.grid);
    for (std::size_t j = 0; j < p.grid.size(); ++j) {
        EXPECT_NEAR(p.values[j], 1.0 / (2.0 * kPi * 32), 1e-10);
        EXPECT_NEAR(f.values[j], p.values[j], 1e-10);
    }
}

TEST(PeriodogramOracle, AgreesWithSpectrumAtFourierFrequencies) {
    for (unsigned seed = 0; seed < 20; ++seed) {
        const auto z = make_standardized(oracle::gaussian(128, 40 + seed));
        const auto p = fft_periodogram_oracle(z);
        ASSERT_EQ(p.grid.size(), 65u);
        const auto f = spectrum(autocovariances(z), p.grid);
        double worst = 0.0;
        for (std::size_t j = 0; j < p.grid.size(); ++j) worst = std::max(worst, std::abs(p.values[j] - f.values[j]));
        EXPECT_LT(worst, 1e-8);
    }
}

TEST(PeriodogramOracle, OddLengthAppendsPi) {
    const auto p = fft_periodogram_oracle(oracle::gaussian(17, 1));
    EXPECT_EQ(p.grid.size(), 10u);
    EXPECT_EQ(p.grid[9], kPi);
    EXPECT_THROW(fft_periodogram_oracle(oracle::gaussian(15, 1)), TooShortError);
}

TEST(PeriodogramOracle, SingleToneConcentratesAtItsBin) {
    std::vector<double> x(128);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::cos(2.0 * kPi * 8.0 * double(t) / 128.0);
    const auto p = fft_periodogram_oracle(make_standardized(x));
    double total = 0.0;
    for (double v : p.values) total += v;
    EXPECT_EQ(std::max_element(p.values.begin(), p.values.end()) - p.values.begin(), 8);
    EXPECT_GT(p.values[8] / total, 0.999);
}
