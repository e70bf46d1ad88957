#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rgtest/graph_core.hpp"

namespace rgtest {

/// Degree-based edge weights. `unit` is the constant 1 (plain edge-counts).
enum class WeightKind { w1, w2, w3, unit, custom };

WeightKind parse_weight_kind(std::string_view name);
std::string_view to_string(WeightKind kind) noexcept;

/// W1 = 1/max(a,b), W2 = 1/sqrt(ab), W3 = 2/(a+b). Degrees must be >= 1.
double builtin_weight(WeightKind kind, std::int64_t d_i, std::int64_t d_j);

using WeightEvaluator = std::function<double(std::size_t d_i, std::size_t d_j)>;

/// A weight function of the two endpoint degrees. Custom evaluators must be
/// symmetric, non-increasing in each argument and strictly positive; those
/// properties are checked on the degree pairs a graph actually realizes.
struct WeightFunctionSpec {
    WeightKind kind = WeightKind::w1;
    WeightEvaluator evaluator;
    std::string name;

    static WeightFunctionSpec builtin(WeightKind kind);
    static WeightFunctionSpec custom(std::string name, WeightEvaluator evaluator);
};

class WeightedGraph {
public:
    WeightedGraph() = default;
    /// Throws invalid-weight unless there is one finite, positive weight per edge.
    WeightedGraph(SimilarityGraph graph, std::vector<double> weights);

    [[nodiscard]] const SimilarityGraph& graph() const noexcept { return graph_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] std::span<const std::size_t> degrees() const noexcept { return degrees_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return graph_.node_count(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return graph_.edge_count(); }

private:
    SimilarityGraph graph_;
    std::vector<double> weights_;
    std::vector<std::size_t> degrees_;
};

WeightedGraph assign_weights(const SimilarityGraph& graph, const WeightFunctionSpec& spec);
WeightedGraph assign_weights(const SimilarityGraph& graph, WeightKind kind);

struct WellDefinedReport {
    /// Per-node incident weight sums are not all equal (Z_diff has variance).
    bool condition_a = false;
    /// (N-3)S1 - S2 + 2 S3/(N-1) > 0 (Z_w has variance).
    bool condition_b = false;
    double node_sum_min = 0.0;
    double node_sum_max = 0.0;
    double condition_b_value = 0.0;
    double condition_b_tolerance = 0.0;

    [[nodiscard]] bool well_defined() const noexcept { return condition_a && condition_b; }
};

inline constexpr double kWellDefinedRelTol = 1e-12;

WellDefinedReport well_definedness(const WeightedGraph& graph, std::size_t n1, std::size_t n2);

/// min_e(w_e) * |G|; values well below 1 mean the weights decay faster than 1/|G|.
double lower_bound_ratio(const WeightedGraph& graph);

}  // namespace rgtest
