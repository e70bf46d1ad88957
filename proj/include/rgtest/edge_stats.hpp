#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rgtest/weighting.hpp"

namespace rgtest {

/// Sample membership: 0 for sample X, 1 for sample Y. Both samples need at
/// least two observations.
class LabelVector {
public:
    LabelVector() = default;
    explicit LabelVector(std::vector<std::uint8_t> labels);

    /// First n1 nodes in X, the remaining n2 in Y.
    static LabelVector split(std::size_t n1, std::size_t n2);

    [[nodiscard]] std::span<const std::uint8_t> values() const noexcept { return labels_; }
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t n1() const noexcept { return n1_; }
    [[nodiscard]] std::size_t n2() const noexcept { return n2_; }

private:
    std::vector<std::uint8_t> labels_;
    std::size_t n1_ = 0;
    std::size_t n2_ = 0;
};

struct WeightSums {
    double s1 = 0.0;            ///< sum of w^2
    double s2 = 0.0;            ///< sum_i s_i^2 - s1
    double s3 = 0.0;            ///< (sum of w)^2
    double total_weight = 0.0;  ///< sum of w
    std::vector<double> node_sums;
};

WeightSums weight_sums(const WeightedGraph& graph);

struct ObservedCounts {
    double r1w = 0.0;
    double r2w = 0.0;
    std::size_t r0 = 0;
    std::size_t r1 = 0;
    std::size_t r2 = 0;
    double r_diff = 0.0;  ///< r1w - r2w
    double r_w = 0.0;     ///< q r1w + p r2w
    double p = 0.0;       ///< (n1 - 1) / (N - 2)
    double q = 0.0;
};

ObservedCounts observed_counts(const WeightedGraph& graph, const LabelVector& labels);

/// Permutation-null moments of the weighted within-sample counts.
struct MomentSet {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double mu1w = 0.0;
    double mu2w = 0.0;
    double sigma11 = 0.0;
    double sigma22 = 0.0;
    double sigma12 = 0.0;
    double e_diff = 0.0;
    double var_diff = 0.0;
    double e_w = 0.0;
    double var_w = 0.0;
    double p = 0.0;
    double q = 0.0;
    double total_weight = 0.0;
};

/// Closed-form moments from the weight aggregates, no conditioning checks.
/// Needs n1, n2 >= 2 (so N >= 4); throws degenerate-size otherwise.
MomentSet moments_from_sums(const WeightSums& sums, std::size_t n1, std::size_t n2);

inline constexpr double kVarianceRelTol = 1e-12;

/// As moments_from_sums, then throws ill-conditioned-graph when var_diff or
/// var_w is at most kVarianceRelTol * (sum of w)^2.
MomentSet null_moments(const WeightedGraph& graph, std::size_t n1, std::size_t n2);

struct ZScores {
    double z_diff = 0.0;
    double z_w = 0.0;
};

/// Standardize a pair of weighted counts. Hot path of the permutation kernels.
inline ZScores standardize(double r1w, double r2w, const MomentSet& m, double inv_sd_diff,
                           double inv_sd_w) noexcept {
    return {((r1w - r2w) - m.e_diff) * inv_sd_diff, ((m.q * r1w + m.p * r2w) - m.e_w) * inv_sd_w};
}

ZScores z_scores(const ObservedCounts& counts, const MomentSet& moments);

struct StatValues {
    double z_diff = 0.0;
    double z_w = 0.0;
    double s_r = 0.0;  ///< quadratic form; equals z_diff^2 + z_w^2
    double m_r = 0.0;  ///< max(z_w, |z_diff|)
};

/// Computes S_R both as the quadratic form in the inverse covariance and as
/// z_diff^2 + z_w^2; throws internal if they disagree beyond 1e-8 relative.
StatValues statistics(const ZScores& z, const MomentSet& moments, const ObservedCounts& counts);

}  // namespace rgtest
