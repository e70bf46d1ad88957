#pragma once

// Data-parallel kernels. Every OpenMP kernel has a serial twin that is the
// reference for tests and the benchmark; both must produce identical output.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rgtest/edge_stats.hpp"
#include "rgtest/graph_core.hpp"

namespace rgtest::kernels {

DistanceMatrix distance_matrix_serial(const DataMatrix& data, Metric metric);
DistanceMatrix distance_matrix_parallel(const DataMatrix& data, Metric metric, int threads = 0);

/// One weighting of the graph's edges together with its null moments.
struct WeightChannel {
    std::vector<double> weights;
    MomentSet moments;
};

/// (Z_diff, Z_w) per permutation and channel, row-major by permutation.
class NullDraws {
public:
    NullDraws(std::size_t permutations, std::size_t channels)
        : permutations_(permutations), channels_(channels), values_(permutations * channels) {}

    [[nodiscard]] std::size_t permutations() const noexcept { return permutations_; }
    [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
    [[nodiscard]] const ZScores& at(std::size_t b, std::size_t c) const noexcept {
        return values_[b * channels_ + c];
    }
    ZScores& at(std::size_t b, std::size_t c) noexcept { return values_[b * channels_ + c]; }

    friend bool operator==(const NullDraws& x, const NullDraws& y) noexcept;

private:
    std::size_t permutations_;
    std::size_t channels_;
    std::vector<ZScores> values_;
};

/// Permutation b shuffles `labels` with Fisher-Yates driven by
/// CounterEngine(seed, b), so draws are independent of the schedule.
NullDraws permutation_null_serial(std::span<const Edge> edges, std::span<const WeightChannel> channels,
                                  std::span<const std::uint8_t> labels, std::size_t permutations,
                                  std::uint64_t seed);
NullDraws permutation_null_parallel(std::span<const Edge> edges, std::span<const WeightChannel> channels,
                                    std::span<const std::uint8_t> labels, std::size_t permutations,
                                    std::uint64_t seed, int threads = 0);

/// Resolves a thread request: explicit value if > 0, else RGTEST_THREADS if
/// set, else the OpenMP default.
int resolve_threads(int requested);

}  // namespace rgtest::kernels
