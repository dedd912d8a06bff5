#pragma once

// Near-white-noise departure statistic xi(w) = sqrt(N) (F(w) - w / 2pi), its
// limiting variance, confidence bands and Monte Carlo calibration.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "nwspec/error.hpp"
#include "nwspec/ingest.hpp"
#include "nwspec/spectral.hpp"
#include "nwspec/synth.hpp"

namespace nwspec {

/// Variance constant of the limiting process: Var xi(w) = c w (pi - w) / 4pi^2
/// with c = 3 (paper3) or c = 2 (studentized2), or empirical (montecarlo).
enum class BandMode { paper3, studentized2, montecarlo };

/// Pointwise bands bound each xi(w) separately; simultaneous bands bound
/// max_w |xi(w)| and are a constant +-c.
enum class BandCoverage { pointwise, simultaneous };

enum class MatchedMode { paper3, studentized2, neither };

/// Result of `mc_calibrate` for standardized Gaussian white noise (N = 512,
/// 10000 reps: Var xi(pi/2) = 0.1250 against 0.1875 for paper3). Sample
/// standardization fixes C_0 = N, leaving only the sine-sum term.
inline constexpr BandMode kCalibratedDefaultMode = BandMode::studentized2;

inline std::string_view to_string(BandMode m) {
    switch (m) {
        case BandMode::paper3: return "paper3";
        case BandMode::studentized2: return "studentized2";
        case BandMode::montecarlo: return "montecarlo";
    }
    return "paper3";
}

inline std::string_view to_string(BandCoverage c) {
    return c == BandCoverage::pointwise ? "pointwise" : "simultaneous";
}

inline std::string_view to_string(MatchedMode m) {
    switch (m) {
        case MatchedMode::paper3: return "paper3";
        case MatchedMode::studentized2: return "studentized2";
        case MatchedMode::neither: return "neither";
    }
    return "neither";
}

inline BandMode parse_band_mode(std::string_view s) {
    if (s == "paper3") return BandMode::paper3;
    if (s == "studentized2") return BandMode::studentized2;
    if (s == "montecarlo") return BandMode::montecarlo;
    throw ConfigError("unknown band mode '" + std::string(s) + "'");
}

inline BandCoverage parse_band_coverage(std::string_view s) {
    if (s == "pointwise") return BandCoverage::pointwise;
    if (s == "simultaneous") return BandCoverage::simultaneous;
    throw ConfigError("unknown band coverage '" + std::string(s) + "'");
}

inline MatchedMode parse_matched_mode(std::string_view s) {
    if (s == "paper3") return MatchedMode::paper3;
    if (s == "studentized2") return MatchedMode::studentized2;
    if (s == "neither") return MatchedMode::neither;
    throw ConfigError("unknown matched mode '" + std::string(s) + "'");
}

struct XiCurve {
    FrequencyGrid grid;
    std::vector<double> xi;
    std::size_t n = 0;
};

struct ConfidenceBand {
    FrequencyGrid grid;
    std::vector<double> upper;
    std::vector<double> lower;
    double alpha = 0.05;
    BandMode mode = kCalibratedDefaultMode;
    BandCoverage coverage = BandCoverage::pointwise;
    /// Normal quantile (analytic pointwise), sup critical value
    /// (simultaneous), or 0 for empirical pointwise quantiles.
    double critical = 0.0;
};

struct CalibrationReport {
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    double alpha = 0.05;
    std::vector<double> omega;
    std::vector<double> variance;
    std::vector<double> q_low;
    std::vector<double> q_high;
    double sup_critical = 0.0;
    MatchedMode matched_mode = MatchedMode::neither;
    /// Peak-normalized sup-norm error of each analytic variance curve.
    double paper3_error = 0.0;
    double studentized2_error = 0.0;
    std::string rng_algorithm{kRngAlgorithm};

    [[nodiscard]] FrequencyGrid grid() const { return FrequencyGrid::from_points(omega); }
};

inline XiCurve xi_statistic(const IntegralSpectrum& F) {
    const double root_n = std::sqrt(static_cast<double>(F.n));
    XiCurve curve{F.grid, std::vector<double>(F.grid.size()), F.n};
    for (std::size_t j = 0; j < F.grid.size(); ++j) {
        curve.xi[j] = root_n * (F.values[j] - F.grid[j] / (2.0 * kPi));
    }
    return curve;
}

/// Standardize, F, xi in one call.
inline XiCurve xi_statistic(std::span<const double> values, const FrequencyGrid& grid) {
    const auto z = standardize(values);
    return xi_statistic(integral_spectrum(autocovariances(z), grid));
}

namespace detail {

inline double variance_constant(BandMode mode) {
    switch (mode) {
        case BandMode::paper3: return 3.0;
        case BandMode::studentized2: return 2.0;
        case BandMode::montecarlo: break;
    }
    throw ConfigError("montecarlo mode has no analytic variance; use a calibration report");
}

inline void check_frequency(double w) {
    if (!(w >= 0.0 && w <= kPi)) {
        throw DomainError("frequency " + format_double(w) + " outside [0, pi]");
    }
}

}  // namespace detail

inline double xi_variance(double omega, BandMode mode) {
    detail::check_frequency(omega);
    return detail::variance_constant(mode) * omega * (kPi - omega) / (4.0 * kPi * kPi);
}

/// E{xi(nu) xi(w)} = c min(nu, w) (pi - max(nu, w)) / 4pi^2.
inline double xi_covariance(double nu, double omega, BandMode mode) {
    detail::check_frequency(nu);
    detail::check_frequency(omega);
    if (nu > omega) std::swap(nu, omega);
    return detail::variance_constant(mode) * nu * (kPi - omega) / (4.0 * kPi * kPi);
}

inline double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

/// Limiting distribution of sup_t |B(t)| for a Brownian bridge B:
/// K(x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
inline double kolmogorov_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x < 0.3) {
        // Dual (Jacobi theta) form converges fast for small x.
        const double c = std::sqrt(2.0 * kPi) / x;
        double sum = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double a = static_cast<double>(2 * k - 1);
            sum += std::exp(-a * a * kPi * kPi / (8.0 * x * x));
        }
        return c * sum;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return 1.0 - 2.0 * sum;
}

inline double kolmogorov_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("probability must lie in (0,1)");
    double lo = 0.0;
    double hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Asymptotic critical value of max |xi|: xi = sqrt(c/4) B(w/pi).
inline double asymptotic_sup_critical(double alpha, BandMode mode) {
    return std::sqrt(detail::variance_constant(mode) / 4.0) * kolmogorov_quantile(1.0 - alpha);
}

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
}

/// Montecarlo mode reads its quantiles from `calibration`, which must share
/// the grid and alpha. Analytic simultaneous bands use the asymptotic
/// Kolmogorov critical value.
inline ConfidenceBand confidence_band(const FrequencyGrid& grid, double alpha, BandMode mode,
                                      BandCoverage coverage = BandCoverage::pointwise,
                                      const CalibrationReport* calibration = nullptr) {
    check_alpha(alpha);
    ConfidenceBand band{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size()), alpha, mode,
                        coverage, 0.0};

    if (mode == BandMode::montecarlo) {
        if (calibration == nullptr) throw ConfigError("montecarlo band mode requires a calibration report");
        if (calibration->omega.size() != grid.size() ||
            !std::equal(grid.points().begin(), grid.points().end(), calibration->omega.begin(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12; })) {
            throw ConfigError("calibration grid does not match the analysis grid");
        }
        if (std::abs(calibration->alpha - alpha) > 1e-12) {
            throw ConfigError("calibration was computed for alpha=" + format_double(calibration->alpha) +
                              ", requested alpha=" + format_double(alpha));
        }
        if (coverage == BandCoverage::simultaneous) {
            band.critical = calibration->sup_critical;
            std::fill(band.upper.begin(), band.upper.end(), band.critical);
            std::fill(band.lower.begin(), band.lower.end(), -band.critical);
        } else {
            band.upper = calibration->q_high;
            band.lower = calibration->q_low;
        }
        return band;
    }

    if (coverage == BandCoverage::simultaneous) {
        band.critical = asymptotic_sup_critical(alpha, mode);
        std::fill(band.upper.begin(), band.upper.end(), band.critical);
    } else {
        band.critical = normal_quantile(1.0 - alpha / 2.0);
        for (std::size_t j = 0; j < grid.size(); ++j) band.upper[j] = band.critical * std::sqrt(xi_variance(grid[j], mode));
    }
    for (std::size_t j = 0; j < grid.size(); ++j) band.lower[j] = -band.upper[j];
    return band;
}

/// Grid maximum of |xi|, approximating the continuous supremum.
inline double sup_statistic(const XiCurve& curve) {
    if (curve.xi.empty()) throw ConfigError("xi curve is empty");
    double best = 0.0;
    for (double v : curve.xi) best = std::max(best, std::abs(v));
    return best;
}

namespace detail {

// Type-7 (linear interpolation) sample quantile of sorted data.
inline double sorted_quantile(const std::vector<double>& sorted, double p) {
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// sin(tau w_j) / tau for a fixed series length and grid, so that many
// replications share one trigonometric table.
class XiKernel {
public:
    XiKernel(std::size_t n, const FrequencyGrid& grid) : n_(n), grid_(grid), table_((n - 1) * grid.size()) {
        for (std::size_t tau = 1; tau < n; ++tau) {
            const double t = static_cast<double>(tau);
            for (std::size_t j = 0; j < grid.size(); ++j) table_[(tau - 1) * grid.size() + j] = std::sin(t * grid[j]) / t;
        }
    }

    // Same formula as integral_spectrum followed by xi_statistic.
    void apply(const AutocovarianceSet& acov, std::span<double> xi) const {
        const std::size_t m = grid_.size();
        std::vector<double> sums(m, 0.0);
        for (std::size_t tau = 1; tau <= acov.max_lag(); ++tau) {
            const double c = acov.lags[tau - 1];
            const double* row = &table_[(tau - 1) * m];
            for (std::size_t j = 0; j < m; ++j) sums[j] += c * row[j];
        }
        const double nd = static_cast<double>(n_);
        const double root_n = std::sqrt(nd);
        for (std::size_t j = 0; j < m; ++j) {
            const double F = j == 0 ? 0.0 : acov.c0 * grid_[j] / (2.0 * kPi * nd) + sums[j] / (kPi * nd);
            xi[j] = root_n * (F - grid_[j] / (2.0 * kPi));
        }
    }

private:
    std::size_t n_;
    FrequencyGrid grid_;
    std::vector<double> table_;
};

inline double peak_normalized_error(std::span<const double> empirical, std::span<const double> analytic) {
    double peak = 0.0;
    double err = 0.0;
    for (std::size_t j = 0; j < analytic.size(); ++j) {
        peak = std::max(peak, analytic[j]);
        err = std::max(err, std::abs(empirical[j] - analytic[j]));
    }
    return peak > 0.0 ? err / peak : err;
}

}  // namespace detail

/// Simulates `reps` standard Gaussian white-noise series of length n through
/// standardize -> F -> xi. Replication r draws from stream r of `seed`, and
/// every reduction runs in replication order, so the report does not depend
/// on `threads` (0 = hardware concurrency).
inline CalibrationReport mc_calibrate(std::size_t n, const FrequencyGrid& grid, double alpha, std::size_t reps,
                                      std::uint64_t seed, unsigned threads = 0) {
    check_alpha(alpha);
    if (reps < 1000) throw ConfigError("calibration needs reps >= 1000, got " + std::to_string(reps));
    if (n < 32) throw ConfigError("calibration needs N >= 32, got " + std::to_string(n));

    const std::size_t m = grid.size();
    const detail::XiKernel kernel(n, grid);
    std::vector<double> xi(reps * m);

    auto run = [&](std::size_t r) {
        std::vector<double> x(n);
        NormalStream(RngSpec{seed, r}).fill(x);
        kernel.apply(autocovariances(standardize(x)), std::span<double>(&xi[r * m], m));
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
    if (threads <= 1) {
        for (std::size_t r = 0; r < reps; ++r) run(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < reps; r = next++) run(r);
            });
        }
    }

    CalibrationReport report;
    report.n = n;
    report.reps = reps;
    report.seed = seed;
    report.alpha = alpha;
    report.omega.assign(grid.points().begin(), grid.points().end());
    report.variance.resize(m);
    report.q_low.resize(m);
    report.q_high.resize(m);

    std::vector<double> column(reps);
    for (std::size_t j = 0; j < m; ++j) {
        double mean = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            column[r] = xi[r * m + j];
            mean += column[r];
        }
        mean /= static_cast<double>(reps);
        double ss = 0.0;
        for (double v : column) ss += (v - mean) * (v - mean);
        report.variance[j] = ss / static_cast<double>(reps - 1);
        std::sort(column.begin(), column.end());
        report.q_low[j] = detail::sorted_quantile(column, alpha / 2.0);
        report.q_high[j] = detail::sorted_quantile(column, 1.0 - alpha / 2.0);
    }

    std::vector<double> sups(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        double best = 0.0;
        for (std::size_t j = 0; j < m; ++j) best = std::max(best, std::abs(xi[r * m + j]));
        sups[r] = best;
    }
    std::sort(sups.begin(), sups.end());
    report.sup_critical = detail::sorted_quantile(sups, 1.0 - alpha);

    std::vector<double> v3(m);
    std::vector<double> v2(m);
    for (std::size_t j = 0; j < m; ++j) {
        v3[j] = xi_variance(grid[j], BandMode::paper3);
        v2[j] = xi_variance(grid[j], BandMode::studentized2);
    }
    report.paper3_error = detail::peak_normalized_error(report.variance, v3);
    report.studentized2_error = detail::peak_normalized_error(report.variance, v2);
    constexpr double kMatchTolerance = 0.15;
    if (std::min(report.paper3_error, report.studentized2_error) > kMatchTolerance) {
        report.matched_mode = MatchedMode::neither;
    } else {
        report.matched_mode =
            report.paper3_error < report.studentized2_error ? MatchedMode::paper3 : MatchedMode::studentized2;
    }
    return report;
}

/// Throws ConfigError unless `calibration` was produced for this N and grid.
inline void check_calibration_matches(const CalibrationReport& calibration, std::size_t n, const FrequencyGrid& grid) {
    if (calibration.n != n) {
        throw ConfigError("calibration was computed for N=" + std::to_string(calibration.n) + ", series has N=" +
                          std::to_string(n));
    }
    if (calibration.omega.size() != grid.size()) {
        throw ConfigError("calibration grid has " + std::to_string(calibration.omega.size()) +
                          " points, analysis grid has " + std::to_string(grid.size()));
    }
}

}  // namespace nwspec
