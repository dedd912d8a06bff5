#pragma once

// Seeded synthetic processes and closed-form ARMA spectral oracles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nwspec/error.hpp"
#include "nwspec/ingest.hpp"
#include "nwspec/spectral.hpp"

namespace nwspec {

/// Identifier serialized with every seeded artifact. Both the engine and the
/// seed_seq expansion are fully specified by the C++ standard; the normal
/// transform is implemented here because std::normal_distribution is not.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+seed_seq+marsaglia_polar";

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Deterministic standard-normal draws for one (seed, stream) pair.
class NormalStream {
public:
    explicit NormalStream(const RngSpec& spec, std::uint32_t salt = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                          static_cast<std::uint32_t>(spec.stream), static_cast<std::uint32_t>(spec.stream >> 32),
                          salt};
        engine_.seed(seq);
    }

    double operator()() {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        return u * m;
    }

    void fill(std::span<double> out) {
        for (double& x : out) x = (*this)();
    }

private:
    // 53 random mantissa bits, uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// ARMA(p, q): x_t = sum phi_i x_{t-i} + e_t + sum theta_j e_{t-j}, e_t ~ N(0, sd^2).
class ArmaSpec {
public:
    static ArmaSpec make(std::vector<double> ar, std::vector<double> ma = {}, double innovation_sd = 1.0) {
        for (double c : ar) {
            if (!std::isfinite(c)) throw DomainError("AR coefficients must be finite");
        }
        for (double c : ma) {
            if (!std::isfinite(c)) throw DomainError("MA coefficients must be finite");
        }
        if (!(innovation_sd > 0.0) || !std::isfinite(innovation_sd)) {
            throw DomainError("innovation standard deviation must be positive");
        }
        if (!is_stationary(ar)) {
            throw DomainError("AR polynomial is not stationary: all roots of 1 - phi_1 z - ... - phi_p z^p "
                              "must lie strictly outside the unit circle");
        }
        ArmaSpec spec;
        spec.ar_ = std::move(ar);
        spec.ma_ = std::move(ma);
        spec.sd_ = innovation_sd;
        return spec;
    }

    static ArmaSpec white_noise() { return make({}, {}, 1.0); }

    [[nodiscard]] const std::vector<double>& ar() const noexcept { return ar_; }
    [[nodiscard]] const std::vector<double>& ma() const noexcept { return ma_; }
    [[nodiscard]] double innovation_sd() const noexcept { return sd_; }

    /// Step-down (reverse Levinson) test: every implied partial
    /// autocorrelation must have modulus below one.
    static bool is_stationary(std::vector<double> phi) {
        while (!phi.empty() && phi.back() == 0.0) phi.pop_back();
        for (std::size_t k = phi.size(); k >= 1; --k) {
            const double kappa = phi[k - 1];
            if (!(std::abs(kappa) < 1.0)) return false;
            std::vector<double> next(k - 1);
            const double denom = 1.0 - kappa * kappa;
            for (std::size_t i = 1; i < k; ++i) next[i - 1] = (phi[i - 1] + kappa * phi[k - i - 1]) / denom;
            phi = std::move(next);
        }
        return true;
    }

private:
    ArmaSpec() = default;

    std::vector<double> ar_;
    std::vector<double> ma_;
    double sd_ = 1.0;
};

inline TimeSeries gen_white_noise(std::size_t n, const RngSpec& rng) {
    if (n < 1) throw ConfigError("white noise length must be at least 1");
    TimeSeries s;
    s.name = "value";
    s.values.resize(n);
    NormalStream draws(rng);
    draws.fill(s.values);
    return s;
}

/// Cumulative sum of n - 1 standard normal innovations, starting at 0. The
/// innovations are the first n - 1 draws of `gen_white_noise` on the same spec.
inline TimeSeries gen_random_walk(std::size_t n, const RngSpec& rng) {
    if (n < 2) throw ConfigError("random walk length must be at least 2");
    TimeSeries s;
    s.name = "value";
    s.values.assign(n, 0.0);
    NormalStream draws(rng);
    for (std::size_t t = 1; t < n; ++t) s.values[t] = s.values[t - 1] + draws();
    return s;
}

inline std::size_t default_burn_in(const ArmaSpec& spec) {
    return std::max<std::size_t>(50, 10 * (spec.ar().size() + spec.ma().size() + 1));
}

/// Recursive ARMA simulation. Pre-sample (burn-in) innovations come from a
/// companion stream so the output period consumes exactly the first n draws
/// of `rng`; ARMA(0,0) with unit sd therefore equals gen_white_noise.
inline TimeSeries gen_arma(std::size_t n, const ArmaSpec& spec, const RngSpec& rng,
                           std::optional<std::size_t> burn_in = {}) {
    if (n < 1) throw ConfigError("ARMA length must be at least 1");
    const auto& phi = spec.ar();
    const auto& theta = spec.ma();
    const std::size_t burn = burn_in.value_or(default_burn_in(spec));

    // Newest-last histories of x and e.
    std::vector<double> xs(phi.size(), 0.0);
    std::vector<double> es(theta.size(), 0.0);
    auto step = [&](double e) {
        double x = e;
        for (std::size_t i = 0; i < phi.size(); ++i) x += phi[i] * xs[xs.size() - 1 - i];
        for (std::size_t j = 0; j < theta.size(); ++j) x += theta[j] * es[es.size() - 1 - j];
        if (!xs.empty()) {
            std::rotate(xs.begin(), xs.begin() + 1, xs.end());
            xs.back() = x;
        }
        if (!es.empty()) {
            std::rotate(es.begin(), es.begin() + 1, es.end());
            es.back() = e;
        }
        return x;
    };

    constexpr std::uint32_t kBurnSalt = 0x6275726e;  // "burn"
    NormalStream burn_draws(rng, kBurnSalt);
    for (std::size_t t = 0; t < burn; ++t) step(spec.innovation_sd() * burn_draws());

    TimeSeries s;
    s.name = "value";
    s.values.resize(n);
    NormalStream draws(rng);
    for (auto& v : s.values) v = step(spec.innovation_sd() * draws());
    return s;
}

namespace detail {

// Unnormalized |theta(e^{-iw})|^2 / |phi(e^{-iw})|^2.
inline double arma_gain(const ArmaSpec& spec, double w) {
    std::complex<double> num{1.0, 0.0};
    std::complex<double> den{1.0, 0.0};
    for (std::size_t j = 0; j < spec.ma().size(); ++j) {
        num += spec.ma()[j] * std::polar(1.0, -w * static_cast<double>(j + 1));
    }
    for (std::size_t i = 0; i < spec.ar().size(); ++i) {
        den -= spec.ar()[i] * std::polar(1.0, -w * static_cast<double>(i + 1));
    }
    return std::norm(num) / std::norm(den);
}

// Variance of the unit-innovation process, sum of squared psi weights.
inline double arma_unit_variance(const ArmaSpec& spec) {
    const auto& phi = spec.ar();
    const auto& theta = spec.ma();
    std::vector<double> psi{1.0};
    double total = 1.0;
    constexpr std::size_t kMaxTerms = 2'000'000;
    std::size_t quiet = 0;
    for (std::size_t j = 1; j < kMaxTerms; ++j) {
        double v = j <= theta.size() ? theta[j - 1] : 0.0;
        for (std::size_t i = 1; i <= phi.size() && i <= j; ++i) v += phi[i - 1] * psi[j - i];
        psi.push_back(v);
        total += v * v;
        // Stop once a full AR-order window of terms is negligible.
        quiet = (v * v < 1e-20 * total) ? quiet + 1 : 0;
        if (j > theta.size() && quiet > std::max<std::size_t>(phi.size(), 1) + 1) break;
    }
    return total;
}

}  // namespace detail

/// Closed-form ARMA spectral density normalized to unit process variance,
/// so its integral over [0, pi] is 1/2 like a standardized sample spectrum.
inline SpectrumEstimate theoretical_spectrum(const ArmaSpec& spec, const FrequencyGrid& grid) {
    const double scale = 1.0 / (2.0 * kPi * detail::arma_unit_variance(spec));
    SpectrumEstimate est{grid, std::vector<double>(grid.size()), Window::raw()};
    for (std::size_t j = 0; j < grid.size(); ++j) est.values[j] = scale * detail::arma_gain(spec, grid[j]);
    return est;
}

/// Population departure curve int_0^w f - w/(2 pi) (no sqrt(N) factor), by
/// composite Simpson quadrature with at least 4096 panels over [0, pi].
inline std::vector<double> theoretical_xi_shape(const ArmaSpec& spec, const FrequencyGrid& grid) {
    const double scale = 1.0 / (2.0 * kPi * detail::arma_unit_variance(spec));
    const auto density = [&](double w) { return scale * detail::arma_gain(spec, w); };

    std::size_t panels = (4096 + grid.subdivisions() - 1) / grid.subdivisions();
    panels += panels % 2;

    std::vector<double> shape(grid.size(), 0.0);
    double cumulative = 0.0;
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const double a = grid[j - 1];
        const double h = (grid[j] - a) / static_cast<double>(panels);
        double sum = density(a) + density(grid[j]);
        for (std::size_t k = 1; k < panels; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * density(a + h * static_cast<double>(k));
        cumulative += sum * h / 3.0;
        shape[j] = cumulative - grid[j] / (2.0 * kPi);
    }
    return shape;
}

}  // namespace nwspec
