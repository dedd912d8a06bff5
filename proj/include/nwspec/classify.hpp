#pragma once

// Business-cycle pattern verdicts from the sign and significance of xi(w).

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "nwspec/error.hpp"
#include "nwspec/nwn.hpp"
#include "nwspec/spectral.hpp"

namespace nwspec {

/// Fractions over interior grid points (0 < w < pi).
struct SignProfile {
    double frac_positive = 0.0;
    double frac_negative = 0.0;
    double frac_zero = 0.0;
    double frac_sig_positive = 0.0;
    double frac_sig_negative = 0.0;
    /// max |xi| / upper over interior points with a nonzero band.
    double max_breach_ratio = 0.0;
    std::size_t interior_points = 0;
};

struct ClassifierConfig {
    double sign_dominance = 0.95;
    double min_sig = 0.10;
    double strong_sig = 0.50;
    double zero_tol = 1e-9;

    void validate() const {
        if (!(min_sig > 0.0 && min_sig <= strong_sig && strong_sig <= 1.0)) {
            throw ConfigError("classifier thresholds must satisfy 0 < min_sig <= strong_sig <= 1");
        }
        if (!(sign_dominance > 0.5 && sign_dominance <= 1.0)) {
            throw ConfigError("sign_dominance must lie in (0.5, 1]");
        }
        if (!(zero_tol >= 0.0) || !std::isfinite(zero_tol)) throw ConfigError("zero_tol must be non-negative");
    }
};

enum class PatternLabel { WhiteNoiseCompatible, Compounding, MeanReverting, MixedComplexity };
enum class Strength { none, weak, strong };

inline std::string_view to_string(PatternLabel label) {
    switch (label) {
        case PatternLabel::WhiteNoiseCompatible: return "WhiteNoiseCompatible";
        case PatternLabel::Compounding: return "Compounding";
        case PatternLabel::MeanReverting: return "MeanReverting";
        case PatternLabel::MixedComplexity: return "MixedComplexity";
    }
    return "MixedComplexity";
}

inline std::string_view to_string(Strength s) {
    switch (s) {
        case Strength::none: return "none";
        case Strength::weak: return "weak";
        case Strength::strong: return "strong";
    }
    return "none";
}

inline PatternLabel parse_pattern_label(std::string_view s) {
    for (auto l : {PatternLabel::WhiteNoiseCompatible, PatternLabel::Compounding, PatternLabel::MeanReverting,
                   PatternLabel::MixedComplexity}) {
        if (to_string(l) == s) return l;
    }
    throw ConfigError("unknown pattern label '" + std::string(s) + "'");
}

inline Strength parse_strength(std::string_view s) {
    for (auto v : {Strength::none, Strength::weak, Strength::strong}) {
        if (to_string(v) == s) return v;
    }
    throw ConfigError("unknown strength '" + std::string(s) + "'");
}

struct PatternVerdict {
    PatternLabel label = PatternLabel::WhiteNoiseCompatible;
    Strength strength = Strength::none;
    SignProfile profile;
    ClassifierConfig config;
};

namespace detail {

inline void check_same_grid(const FrequencyGrid& a, const FrequencyGrid& b) {
    if (a.size() != b.size() || !std::equal(a.points().begin(), a.points().end(), b.points().begin(),
                                            [](double x, double y) { return std::abs(x - y) <= 1e-12; })) {
        throw ConfigError("xi curve and band/spectrum are on different frequency grids");
    }
}

}  // namespace detail

inline SignProfile significance_profile(const XiCurve& xi, const ConfidenceBand& band, double zero_tol) {
    detail::check_same_grid(xi.grid, band.grid);
    const std::size_t m = xi.grid.size();
    if (m < 3) throw ConfigError("classification needs at least one interior grid point");

    SignProfile p;
    p.interior_points = m - 2;
    std::size_t pos = 0, neg = 0, sig_pos = 0, sig_neg = 0;
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double v = xi.xi[j];
        if (v > zero_tol) {
            ++pos;
            if (v > band.upper[j]) ++sig_pos;
        } else if (v < -zero_tol) {
            ++neg;
            if (v < band.lower[j]) ++sig_neg;
        }
        if (band.upper[j] > 0.0) p.max_breach_ratio = std::max(p.max_breach_ratio, std::abs(v) / band.upper[j]);
    }
    const double k = static_cast<double>(p.interior_points);
    p.frac_positive = static_cast<double>(pos) / k;
    p.frac_negative = static_cast<double>(neg) / k;
    p.frac_zero = static_cast<double>(p.interior_points - pos - neg) / k;
    p.frac_sig_positive = static_cast<double>(sig_pos) / k;
    p.frac_sig_negative = static_cast<double>(sig_neg) / k;
    return p;
}

/// Rules, first match wins:
///   1. no band breach at all                              -> WhiteNoiseCompatible
///   2. xi >= 0 on sign_dominance of the band, upper breaches
///      on at least min_sig, no lower breach                -> Compounding
///   3. mirror of 2                                         -> MeanReverting
///   4. otherwise                                           -> MixedComplexity
/// Strength is strong when the dominant side's breach fraction reaches strong_sig.
inline PatternVerdict classify(const XiCurve& xi, const ConfidenceBand& band, const ClassifierConfig& config = {}) {
    config.validate();
    PatternVerdict verdict;
    verdict.config = config;
    verdict.profile = significance_profile(xi, band, config.zero_tol);
    const auto& p = verdict.profile;

    const auto grade = [&](double sig) { return sig >= config.strong_sig ? Strength::strong : Strength::weak; };

    if (p.frac_sig_positive == 0.0 && p.frac_sig_negative == 0.0) {
        verdict.label = PatternLabel::WhiteNoiseCompatible;
        verdict.strength = Strength::none;
    } else if (p.frac_positive + p.frac_zero >= config.sign_dominance && p.frac_sig_positive >= config.min_sig &&
               p.frac_sig_negative == 0.0) {
        verdict.label = PatternLabel::Compounding;
        verdict.strength = grade(p.frac_sig_positive);
    } else if (p.frac_negative + p.frac_zero >= config.sign_dominance && p.frac_sig_negative >= config.min_sig &&
               p.frac_sig_positive == 0.0) {
        verdict.label = PatternLabel::MeanReverting;
        verdict.strength = grade(p.frac_sig_negative);
    } else {
        verdict.label = PatternLabel::MixedComplexity;
        verdict.strength = grade(std::max(p.frac_sig_positive, p.frac_sig_negative));
    }
    return verdict;
}

/// Max over interior points of |central difference of xi - sqrt(N) (f - 1/2pi)|.
/// The difference quotient of the exact antiderivative weights lag tau by
/// sinc(tau h), so the residual is O(h^2 N^{5/2}) for white-noise-like input.
inline double xi_derivative_check(const XiCurve& xi, const SpectrumEstimate& spectrum) {
    detail::check_same_grid(xi.grid, spectrum.grid);
    if (xi.grid.subdivisions() < 128) throw ConfigError("derivative check needs a grid with at least 128 subdivisions");
    const double root_n = std::sqrt(static_cast<double>(xi.n));
    double residual = 0.0;
    for (std::size_t j = 1; j + 1 < xi.grid.size(); ++j) {
        const double slope = (xi.xi[j + 1] - xi.xi[j - 1]) / (xi.grid[j + 1] - xi.grid[j - 1]);
        const double expected = root_n * (spectrum.values[j] - 1.0 / (2.0 * kPi));
        residual = std::max(residual, std::abs(slope - expected));
    }
    return residual;
}

}  // namespace nwspec
