#pragma once

// Test-only reference computations, deliberately independent of the
// library's code paths.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// O(N^2) double loop over all index pairs at distance tau.
inline double brute_lag_product(const std::vector<double>& x, std::size_t tau) {
    double sum = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s) {
        for (std::size_t t = 0; t < x.size(); ++t) {
            if (t == s + tau) sum += x[s] * x[t];
        }
    }
    return sum;
}

// Periodogram evaluated at an arbitrary frequency straight from the data.
inline double periodogram(const std::vector<double>& x, double w) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < x.size(); ++t) acc += x[t] * std::exp(std::complex<double>(0.0, -w * double(t)));
    return std::norm(acc) / (2.0 * pi * double(x.size()));
}

// Cumulative Simpson integral of samples on a uniform grid of 2K+1 points;
// returns the integral up to each even-indexed node.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    std::vector<double> out{0.0};
    double acc = 0.0;
    for (std::size_t i = 0; i + 2 < f.size(); i += 2) {
        acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
        out.push_back(acc);
    }
    return out;
}

// Standardized (mean 0, divisor-N variance 1) copy.
inline std::vector<double> standardized(std::vector<double> x) {
    double m = 0.0;
    for (double v : x) m += v;
    m /= double(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / double(x.size()));
    for (double& v : x) v = (v - m) / sd;
    return x;
}

// Independent Gaussian source for oracle-side data (not the library RNG).
inline std::vector<double> gaussian(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    std::vector<double> x(n);
    for (double& v : x) v = dist(gen);
    return x;
}

}  // namespace oracle
