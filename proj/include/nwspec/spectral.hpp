#pragma once

// Sample autocovariances, the sample spectrum f(w) and its exact
// antiderivative F(w) on a frequency grid over [0, pi].

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nwspec/error.hpp"
#include "nwspec/ingest.hpp"

namespace nwspec {

inline constexpr double kPi = std::numbers::pi;
inline constexpr std::size_t kDefaultGridSubdivisions = 256;

/// Strictly increasing frequencies with first point 0 and last point pi.
class FrequencyGrid {
public:
    /// Uniform grid with `subdivisions` intervals of width pi / subdivisions.
    static FrequencyGrid uniform(std::size_t subdivisions = kDefaultGridSubdivisions) {
        if (subdivisions < 1) throw ConfigError("frequency grid needs at least 1 subdivision");
        FrequencyGrid g;
        g.points_.resize(subdivisions + 1);
        for (std::size_t j = 0; j <= subdivisions; ++j) {
            g.points_[j] = kPi * static_cast<double>(j) / static_cast<double>(subdivisions);
        }
        g.points_.back() = kPi;
        g.uniform_ = true;
        return g;
    }

    static FrequencyGrid from_points(std::vector<double> points) {
        if (points.size() < 2) throw ConfigError("frequency grid needs at least 2 points");
        if (points.front() != 0.0) throw ConfigError("frequency grid must start at 0");
        if (std::abs(points.back() - kPi) > 1e-12) throw ConfigError("frequency grid must end at pi");
        points.back() = kPi;
        for (std::size_t j = 1; j < points.size(); ++j) {
            if (!(points[j] > points[j - 1])) throw ConfigError("frequency grid must be strictly increasing");
        }
        FrequencyGrid g;
        g.points_ = std::move(points);
        g.uniform_ = false;
        return g;
    }

    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::size_t subdivisions() const noexcept { return points_.size() - 1; }
    [[nodiscard]] bool is_uniform() const noexcept { return uniform_; }
    [[nodiscard]] double operator[](std::size_t j) const { return points_[j]; }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

private:
    FrequencyGrid() = default;

    std::vector<double> points_;
    bool uniform_ = false;
};

/// Unnormalized lag products C_tau = sum_t x_t x_{t+tau} for tau = 1..max_lag, plus C_0.
struct AutocovarianceSet {
    std::vector<double> lags;  // lags[tau - 1] = C_tau
    double c0 = 0.0;
    std::size_t n = 0;

    [[nodiscard]] std::size_t max_lag() const noexcept { return lags.size(); }

    /// C_tau with C_0 at tau = 0 and zero beyond max_lag.
    [[nodiscard]] double operator()(std::size_t tau) const noexcept {
        if (tau == 0) return c0;
        return tau <= lags.size() ? lags[tau - 1] : 0.0;
    }

    /// R(tau) = C_tau / N.
    [[nodiscard]] double autocovariance(std::size_t tau) const noexcept {
        return (*this)(tau) / static_cast<double>(n);
    }
};

enum class WindowKind { raw, bartlett };

/// Lag window applied to C_tau in `spectrum`.
struct Window {
    WindowKind kind = WindowKind::raw;
    std::size_t width = 0;

    static Window raw() { return {}; }
    static Window bartlett(std::size_t width) {
        if (width < 1) throw ConfigError("Bartlett window width must be at least 1");
        return {WindowKind::bartlett, width};
    }

    [[nodiscard]] double weight(std::size_t tau) const noexcept {
        if (kind == WindowKind::raw) return 1.0;
        if (tau >= width) return 0.0;
        return 1.0 - static_cast<double>(tau) / static_cast<double>(width);
    }

    friend bool operator==(const Window&, const Window&) = default;
};

struct SpectrumEstimate {
    FrequencyGrid grid;
    std::vector<double> values;
    Window window;
};

struct IntegralSpectrum {
    FrequencyGrid grid;
    std::vector<double> values;
    std::size_t n = 0;
};

inline AutocovarianceSet autocovariances(std::span<const double> x, std::optional<std::size_t> max_lag = {}) {
    const std::size_t n = x.size();
    if (n < 2) throw TooShortError("autocovariances need at least 2 observations");
    const std::size_t lag_cap = max_lag.value_or(n - 1);
    if (lag_cap < 1 || lag_cap > n - 1) {
        throw ConfigError("max_lag must lie in [1, " + std::to_string(n - 1) + "], got " + std::to_string(lag_cap));
    }
    AutocovarianceSet acov;
    acov.n = n;
    acov.lags.assign(lag_cap, 0.0);
    for (std::size_t t = 0; t < n; ++t) acov.c0 += x[t] * x[t];
    for (std::size_t tau = 1; tau <= lag_cap; ++tau) {
        double sum = 0.0;
        for (std::size_t t = 0; t + tau < n; ++t) sum += x[t] * x[t + tau];
        acov.lags[tau - 1] = sum;
    }
    return acov;
}

inline AutocovarianceSet autocovariances(const StandardizedSeries& series, std::optional<std::size_t> max_lag = {}) {
    return autocovariances(std::span<const double>(series.values), max_lag);
}

/// f(w) = C_0/(2 pi N) + (1/(pi N)) sum_tau w_tau C_tau cos(tau w).
inline SpectrumEstimate spectrum(const AutocovarianceSet& acov, const FrequencyGrid& grid,
                                 const Window& window = Window::raw()) {
    const double n = static_cast<double>(acov.n);
    SpectrumEstimate est{grid, std::vector<double>(grid.size()), window};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = grid[j];
        double sum = 0.0;
        for (std::size_t tau = 1; tau <= acov.max_lag(); ++tau) {
            const double weight = window.weight(tau);
            if (weight == 0.0) break;
            sum += weight * acov.lags[tau - 1] * std::cos(static_cast<double>(tau) * w);
        }
        est.values[j] = acov.c0 / (2.0 * kPi * n) + sum / (kPi * n);
    }
    return est;
}

/// F(w) = C_0 w/(2 pi N) + (1/(pi N)) sum_tau C_tau sin(tau w)/tau, the exact
/// antiderivative of the raw spectrum with F(0) = 0.
inline IntegralSpectrum integral_spectrum(const AutocovarianceSet& acov, const FrequencyGrid& grid) {
    const double n = static_cast<double>(acov.n);
    IntegralSpectrum out{grid, std::vector<double>(grid.size()), acov.n};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = grid[j];
        double sum = 0.0;
        for (std::size_t tau = 1; tau <= acov.max_lag(); ++tau) {
            const double t = static_cast<double>(tau);
            sum += acov.lags[tau - 1] * std::sin(t * w) / t;
        }
        out.values[j] = acov.c0 * w / (2.0 * kPi * n) + sum / (kPi * n);
    }
    out.values.front() = 0.0;
    return out;
}

/// Periodogram |DFT|^2 / (2 pi N) at the Fourier frequencies 2 pi k / N in
/// [0, pi] (plus pi itself when N is odd), by direct transform. Test oracle
/// for `spectrum`; independent of the autocovariance path.
inline SpectrumEstimate fft_periodogram_oracle(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 16) throw TooShortError("periodogram oracle needs at least 16 observations");
    std::vector<double> freqs;
    for (std::size_t k = 0; 2 * k <= n; ++k) freqs.push_back(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    if (n % 2 == 1) freqs.push_back(kPi);
    auto grid = FrequencyGrid::from_points(freqs);

    std::vector<double> values(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            acc += x[t] * std::polar(1.0, -grid[j] * static_cast<double>(t));
        }
        values[j] = std::norm(acc) / (2.0 * kPi * static_cast<double>(n));
    }
    return {std::move(grid), std::move(values), Window::raw()};
}

inline SpectrumEstimate fft_periodogram_oracle(const StandardizedSeries& series) {
    return fft_periodogram_oracle(std::span<const double>(series.values));
}

}  // namespace nwspec
