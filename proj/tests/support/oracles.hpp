#pragma once

// Independent reference computations used to check the codec. Nothing here
// calls into the implementation paths it is compared against.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace latentcodec::testing {

/// Minimum within-cluster SSE over every assignment of values to k labels (k^n cases).
inline double exhaustive_kmeans_sse(std::span<const double> values, int k) {
    const std::size_t n = values.size();
    std::vector<int> label(n, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<double> sum(k, 0.0), count(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[label[i]] += values[i];
            count[label[i]] += 1.0;
        }
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mean = sum[label[i]] / count[label[i]];
            sse += (values[i] - mean) * (values[i] - mean);
        }
        best = std::min(best, sse);
        std::size_t pos = 0;
        while (pos < n && ++label[pos] == k) label[pos++] = 0;
        if (pos == n) break;
    }
    return best;
}

/// Nearest centroid by scanning all of them; ties keep the lower index.
inline std::size_t linear_scan_nearest(std::span<const float> centroids, float v) {
    std::size_t best = 0;
    double best_d = std::abs(static_cast<double>(v) - static_cast<double>(centroids[0]));
    for (std::size_t i = 1; i < centroids.size(); ++i) {
        const double d = std::abs(static_cast<double>(v) - static_cast<double>(centroids[i]));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

/// Laplace(0, b) draws by inverse CDF.
inline std::vector<float> laplace_samples(std::size_t n, double b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<float> out(n);
    for (auto& v : out) {
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53 - 0.5;
        v = static_cast<float>(-b * std::copysign(1.0, u) * std::log(1.0 - 2.0 * std::abs(u)));
    }
    return out;
}

}  // namespace latentcodec::testing
