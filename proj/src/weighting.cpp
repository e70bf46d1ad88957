#include "rgtest/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "rgtest/edge_stats.hpp"
#include "rgtest/error.hpp"

namespace rgtest {

WeightKind parse_weight_kind(std::string_view name) {
    if (name == "w1") return WeightKind::w1;
    if (name == "w2") return WeightKind::w2;
    if (name == "w3") return WeightKind::w3;
    if (name == "none" || name == "unit") return WeightKind::unit;
    throw Error(ErrorKind::config, "unknown weight '" + std::string(name) + "' (expected w1, w2, w3 or none)");
}

std::string_view to_string(WeightKind kind) noexcept {
    switch (kind) {
        case WeightKind::w1: return "w1";
        case WeightKind::w2: return "w2";
        case WeightKind::w3: return "w3";
        case WeightKind::unit: return "none";
        case WeightKind::custom: return "custom";
    }
    return "custom";
}

double builtin_weight(WeightKind kind, std::int64_t d_i, std::int64_t d_j) {
    if (d_i < 1 || d_j < 1) {
        throw Error(ErrorKind::invalid_degree,
                    "weights need degrees >= 1, got (" + std::to_string(d_i) + ", " + std::to_string(d_j) + ")");
    }
    const auto a = static_cast<double>(d_i);
    const auto b = static_cast<double>(d_j);
    switch (kind) {
        case WeightKind::w1: return 1.0 / std::max(a, b);
        case WeightKind::w2: return 1.0 / std::sqrt(a * b);
        case WeightKind::w3: return 2.0 / (a + b);
        case WeightKind::unit: return 1.0;
        case WeightKind::custom: break;
    }
    throw Error(ErrorKind::config, "custom weights have no built-in formula");
}

WeightFunctionSpec WeightFunctionSpec::builtin(WeightKind kind) {
    if (kind == WeightKind::custom) throw Error(ErrorKind::config, "custom weights need an evaluator");
    WeightFunctionSpec spec;
    spec.kind = kind;
    spec.name = std::string(to_string(kind));
    spec.evaluator = [kind](std::size_t a, std::size_t b) {
        return builtin_weight(kind, static_cast<std::int64_t>(a), static_cast<std::int64_t>(b));
    };
    return spec;
}

WeightFunctionSpec WeightFunctionSpec::custom(std::string name, WeightEvaluator evaluator) {
    WeightFunctionSpec spec;
    spec.kind = WeightKind::custom;
    spec.name = std::move(name);
    spec.evaluator = std::move(evaluator);
    return spec;
}

WeightedGraph::WeightedGraph(SimilarityGraph graph, std::vector<double> weights)
    : graph_(std::move(graph)), weights_(std::move(weights)), degrees_(graph_.degrees()) {
    if (weights_.size() != graph_.edge_count()) {
        throw Error(ErrorKind::invalid_weight, "expected " + std::to_string(graph_.edge_count()) +
                                                   " weights, got " + std::to_string(weights_.size()));
    }
    for (std::size_t e = 0; e < weights_.size(); ++e) {
        if (!std::isfinite(weights_[e]) || weights_[e] <= 0.0) {
            const auto& edge = graph_.edges()[e];
            throw Error(ErrorKind::invalid_weight, "weight on edge (" + std::to_string(edge.i) + ", " +
                                                       std::to_string(edge.j) + ") must be finite and positive");
        }
    }
}

namespace {

// Symmetry and monotone decrease, checked only where the graph evaluates the function.
void check_custom_on_realized(const WeightFunctionSpec& spec, std::span<const Edge> edges,
                              std::span<const std::size_t> degrees) {
    const auto& w = spec.evaluator;
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y)); };

    std::set<std::size_t> realized_degrees;
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& e : edges) {
        const std::size_t a = degrees[e.i];
        const std::size_t b = degrees[e.j];
        realized_degrees.insert(a);
        realized_degrees.insert(b);
        pairs.insert({std::min(a, b), std::max(a, b)});
    }
    for (const auto& [a, b] : pairs) {
        if (!close(w(a, b), w(b, a))) {
            throw Error(ErrorKind::invalid_weight, "weight function '" + spec.name + "' is not symmetric at (" +
                                                       std::to_string(a) + ", " + std::to_string(b) + ")");
        }
        for (std::size_t fixed : {a, b}) {
            const std::size_t moving = fixed == a ? b : a;
            auto next = realized_degrees.upper_bound(moving);
            if (next == realized_degrees.end()) continue;
            const double here = w(moving, fixed);
            const double there = w(*next, fixed);
            if (there > here && !close(here, there)) {
                throw Error(ErrorKind::invalid_weight,
                            "weight function '" + spec.name + "' increases from degree " + std::to_string(moving) +
                                " to " + std::to_string(*next) + " at partner degree " + std::to_string(fixed));
            }
        }
    }
}

}  // namespace

WeightedGraph assign_weights(const SimilarityGraph& graph, const WeightFunctionSpec& spec) {
    if (!spec.evaluator) throw Error(ErrorKind::config, "weight function '" + spec.name + "' has no evaluator");
    const auto degrees = graph.degrees();
    if (spec.kind == WeightKind::custom) check_custom_on_realized(spec, graph.edges(), degrees);

    std::vector<double> weights;
    weights.reserve(graph.edge_count());
    for (const auto& e : graph.edges()) weights.push_back(spec.evaluator(degrees[e.i], degrees[e.j]));
    return WeightedGraph(graph, std::move(weights));
}

WeightedGraph assign_weights(const SimilarityGraph& graph, WeightKind kind) {
    return assign_weights(graph, WeightFunctionSpec::builtin(kind));
}

WellDefinedReport well_definedness(const WeightedGraph& graph, std::size_t n1, std::size_t n2) {
    const std::size_t n = graph.node_count();
    if (n1 + n2 != n) {
        throw Error(ErrorKind::invalid_input, "n1 + n2 = " + std::to_string(n1 + n2) +
                                                  " does not match node count " + std::to_string(n));
    }
    const WeightSums sums = weight_sums(graph);
    WellDefinedReport report;
    if (!sums.node_sums.empty()) {
        const auto [lo, hi] = std::minmax_element(sums.node_sums.begin(), sums.node_sums.end());
        report.node_sum_min = *lo;
        report.node_sum_max = *hi;
    }
    const double scale = std::max(std::abs(report.node_sum_min), std::abs(report.node_sum_max));
    report.condition_a = (report.node_sum_max - report.node_sum_min) > kWellDefinedRelTol * scale;

    const auto nd = static_cast<double>(n);
    report.condition_b_value = (nd - 3.0) * sums.s1 - sums.s2 + 2.0 * sums.s3 / (nd - 1.0);
    report.condition_b_tolerance = kWellDefinedRelTol * sums.s1;
    report.condition_b = report.condition_b_value > report.condition_b_tolerance;
    return report;
}

double lower_bound_ratio(const WeightedGraph& graph) {
    const auto w = graph.weights();
    if (w.empty()) return 0.0;
    return *std::min_element(w.begin(), w.end()) * static_cast<double>(w.size());
}

}  // namespace rgtest
