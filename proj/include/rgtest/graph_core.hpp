#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace rgtest {

/// Pooled observations, row-major, one observation per row.
class DataMatrix {
public:
    DataMatrix() = default;
    /// Throws invalid-input on shape mismatch, N < 2, d < 1 or non-finite entries.
    DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t k) const noexcept {
        return values_[i * cols_ + k];
    }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

enum class Metric { l1, l2 };

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric) noexcept;

/// Symmetric, nonnegative, zero-diagonal N x N matrix.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    /// Validates every invariant; throws invalid-input on violation.
    DistanceMatrix(std::size_t n, std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return values_[i * n_ + j];
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    /// Skips validation; for kernels that are symmetric by construction.
    static DistanceMatrix trusted(std::size_t n, std::vector<double> values) noexcept {
        DistanceMatrix out;
        out.n_ = n;
        out.values_ = std::move(values);
        return out;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph. Edges are stored with i < j, in insertion order.
class SimilarityGraph {
public:
    SimilarityGraph() = default;
    /// Swapped pairs are normalized to i < j. Self-loops, duplicates and
    /// out-of-range indices throw invalid-input.
    SimilarityGraph(std::size_t node_count, std::vector<Edge> edges);

    [[nodiscard]] std::size_t node_count() const noexcept { return node_count_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
    [[nodiscard]] std::vector<std::size_t> degrees() const;

private:
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
};

enum class GraphKind { kmst, knn };

struct GraphSpec {
    GraphKind kind = GraphKind::kmst;
    std::size_t k = 5;
    Metric metric = Metric::l2;
};

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind) noexcept;

struct HubReport {
    std::vector<std::size_t> degrees;
    std::size_t d_max = 0;
    std::size_t p95_degree = 0;
    std::int64_t sum_sq_degrees = 0;
    /// Unordered edge pairs sharing a node: sum_sq_degrees / 2 - |G|.
    std::int64_t shared_pairs = 0;
};

/// One-hop (A_e) and two-hop (B_e) edge neighborhoods in CSR layout. Each
/// member list holds edge indices into the graph's edge list, sorted.
class EdgeNeighborhoods {
public:
    EdgeNeighborhoods(std::vector<std::size_t> a_offsets, std::vector<std::size_t> a_members,
                      std::vector<std::size_t> b_offsets, std::vector<std::size_t> b_members);

    [[nodiscard]] std::size_t edge_count() const noexcept { return a_offsets_.size() - 1; }
    [[nodiscard]] std::span<const std::size_t> a(std::size_t e) const noexcept {
        return {a_members_.data() + a_offsets_[e], a_offsets_[e + 1] - a_offsets_[e]};
    }
    [[nodiscard]] std::span<const std::size_t> b(std::size_t e) const noexcept {
        return {b_members_.data() + b_offsets_[e], b_offsets_[e + 1] - b_offsets_[e]};
    }
    [[nodiscard]] std::size_t a_size(std::size_t e) const noexcept { return a(e).size(); }

private:
    std::vector<std::size_t> a_offsets_;
    std::vector<std::size_t> a_members_;
    std::vector<std::size_t> b_offsets_;
    std::vector<std::size_t> b_members_;
};

/// L1 or L2 interpoint distances (OpenMP over rows; `threads` = 0 uses the
/// runtime default).
DistanceMatrix distance_matrix(const DataMatrix& data, Metric metric, int threads = 0);

/// Union of k spanning trees, each an MST of the complete graph minus the
/// earlier trees. Kruskal over (distance, i, j). When the unused edges no
/// longer span, the tree is completed with already-used edges, so the union
/// has fewer than k(N-1) edges. Otherwise the edges of tree t occupy
/// positions [t(N-1), (t+1)(N-1)) of the result.
SimilarityGraph kmst(const DistanceMatrix& dist, std::size_t k);

/// Undirected union of the directed k-NN relations; ties go to the smaller index.
SimilarityGraph knn_graph(const DistanceMatrix& dist, std::size_t k);

SimilarityGraph build_graph(const DistanceMatrix& dist, const GraphSpec& spec);

HubReport hub_report(const SimilarityGraph& graph);

EdgeNeighborhoods edge_neighborhoods(const SimilarityGraph& graph);

}  // namespace rgtest
