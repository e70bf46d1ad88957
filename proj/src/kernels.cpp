#include "rgtest/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "rgtest/rng.hpp"

namespace rgtest::kernels {

namespace {

inline double row_distance(std::span<const double> x, std::span<const double> y, Metric metric) noexcept {
    double acc = 0.0;
    if (metric == Metric::l1) {
        for (std::size_t k = 0; k < x.size(); ++k) acc += std::abs(x[k] - y[k]);
        return acc;
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

struct ChannelScale {
    double inv_sd_diff;
    double inv_sd_w;
};

std::vector<ChannelScale> scales_for(std::span<const WeightChannel> channels) {
    std::vector<ChannelScale> out;
    out.reserve(channels.size());
    for (const auto& ch : channels) {
        out.push_back({1.0 / std::sqrt(ch.moments.var_diff), 1.0 / std::sqrt(ch.moments.var_w)});
    }
    return out;
}

// Shuffles `work` (reset from `labels`) for permutation b and writes its
// standardized scores. `sums` is scratch of size 2 * channels.
inline void draw_one(std::size_t b, std::uint64_t seed, std::span<const Edge> edges,
                     std::span<const WeightChannel> channels, std::span<const ChannelScale> scales,
                     std::span<const std::uint8_t> labels, std::vector<std::uint8_t>& work,
                     std::vector<double>& sums, NullDraws& out) {
    work.assign(labels.begin(), labels.end());
    CounterEngine engine(seed, b);
    for (std::size_t i = work.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(work[i], work[pick(engine)]);
    }

    std::fill(sums.begin(), sums.end(), 0.0);
    const std::size_t nc = channels.size();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto gi = work[edges[e].i];
        if (gi != work[edges[e].j]) continue;
        for (std::size_t c = 0; c < nc; ++c) sums[2 * c + gi] += channels[c].weights[e];
    }
    for (std::size_t c = 0; c < nc; ++c) {
        out.at(b, c) = standardize(sums[2 * c], sums[2 * c + 1], channels[c].moments, scales[c].inv_sd_diff,
                                   scales[c].inv_sd_w);
    }
}

}  // namespace

bool operator==(const NullDraws& x, const NullDraws& y) noexcept {
    if (x.permutations_ != y.permutations_ || x.channels_ != y.channels_) return false;
    for (std::size_t idx = 0; idx < x.values_.size(); ++idx) {
        if (x.values_[idx].z_diff != y.values_[idx].z_diff || x.values_[idx].z_w != y.values_[idx].z_w) return false;
    }
    return true;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RGTEST_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    return omp_get_max_threads();
}

DistanceMatrix distance_matrix_serial(const DataMatrix& data, Metric metric) {
    const std::size_t n = data.rows();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = row_distance(data.row(i), data.row(j), metric);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    return DistanceMatrix::trusted(n, std::move(d));
}

DistanceMatrix distance_matrix_parallel(const DataMatrix& data, Metric metric, int threads) {
    const std::size_t n = data.rows();
    std::vector<double> d(n * n, 0.0);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve_threads(threads))
    for (std::ptrdiff_t si = 0; si < rows; ++si) {
        const auto i = static_cast<std::size_t>(si);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = row_distance(data.row(i), data.row(j), metric);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    return DistanceMatrix::trusted(n, std::move(d));
}

NullDraws permutation_null_serial(std::span<const Edge> edges, std::span<const WeightChannel> channels,
                                  std::span<const std::uint8_t> labels, std::size_t permutations,
                                  std::uint64_t seed) {
    NullDraws out(permutations, channels.size());
    const auto scales = scales_for(channels);
    std::vector<std::uint8_t> work;
    std::vector<double> sums(2 * channels.size());
    for (std::size_t b = 0; b < permutations; ++b) {
        draw_one(b, seed, edges, channels, scales, labels, work, sums, out);
    }
    return out;
}

NullDraws permutation_null_parallel(std::span<const Edge> edges, std::span<const WeightChannel> channels,
                                    std::span<const std::uint8_t> labels, std::size_t permutations,
                                    std::uint64_t seed, int threads) {
    NullDraws out(permutations, channels.size());
    const auto scales = scales_for(channels);
    const auto count = static_cast<std::ptrdiff_t>(permutations);
#pragma omp parallel num_threads(resolve_threads(threads))
    {
        std::vector<std::uint8_t> work;
        std::vector<double> sums(2 * channels.size());
#pragma omp for schedule(static)
        for (std::ptrdiff_t b = 0; b < count; ++b) {
            draw_one(static_cast<std::size_t>(b), seed, edges, channels, scales, labels, work, sums, out);
        }
    }
    return out;
}

}  // namespace rgtest::kernels
