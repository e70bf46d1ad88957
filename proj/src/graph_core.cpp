#include "rgtest/graph_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rgtest/error.hpp"
#include "rgtest/kernels.hpp"

namespace rgtest {

namespace {

[[noreturn]] void invalid(const std::string& message) {
    throw Error(ErrorKind::invalid_input, message);
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

}  // namespace

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows_ < 2) invalid("data matrix needs at least 2 rows, got " + std::to_string(rows_));
    if (cols_ < 1) invalid("data matrix needs at least 1 column");
    if (values_.size() != rows_ * cols_) invalid("data matrix shape does not match value count");
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        if (!std::isfinite(values_[idx])) {
            invalid("non-finite entry at row " + std::to_string(idx / cols_) + ", column " +
                    std::to_string(idx % cols_));
        }
    }
}

Metric parse_metric(std::string_view name) {
    if (name == "l1" || name == "L1") return Metric::l1;
    if (name == "l2" || name == "L2") return Metric::l2;
    throw Error(ErrorKind::config, "unknown metric '" + std::string(name) + "' (expected l1 or l2)");
}

std::string_view to_string(Metric metric) noexcept {
    return metric == Metric::l1 ? "l1" : "l2";
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
    if (values_.size() != n_ * n_) invalid("distance matrix is not square");
    for (std::size_t i = 0; i < n_; ++i) {
        if ((*this)(i, i) != 0.0) invalid("distance matrix diagonal must be zero (row " + std::to_string(i) + ")");
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = (*this)(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                invalid("distance (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") must be finite and nonnegative");
            }
            if (v != (*this)(j, i)) {
                invalid("distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
            }
        }
    }
}

SimilarityGraph::SimilarityGraph(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        if (e.i == e.j) invalid("self-loop at node " + std::to_string(e.i));
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.j >= node_count_) {
            invalid("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                    ") references a node outside [0, " + std::to_string(node_count_) + ")");
        }
    }
    std::vector<Edge> sorted = edges_;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
        invalid("duplicate edge (" + std::to_string(dup->i) + ", " + std::to_string(dup->j) + ")");
    }
}

std::vector<std::size_t> SimilarityGraph::degrees() const {
    std::vector<std::size_t> deg(node_count_, 0);
    for (const auto& e : edges_) {
        ++deg[e.i];
        ++deg[e.j];
    }
    return deg;
}

GraphKind parse_graph_kind(std::string_view name) {
    if (name == "kmst") return GraphKind::kmst;
    if (name == "knn") return GraphKind::knn;
    throw Error(ErrorKind::config, "unknown graph kind '" + std::string(name) + "'");
}

std::string_view to_string(GraphKind kind) noexcept {
    return kind == GraphKind::kmst ? "kmst" : "knn";
}

EdgeNeighborhoods::EdgeNeighborhoods(std::vector<std::size_t> a_offsets,
                                     std::vector<std::size_t> a_members,
                                     std::vector<std::size_t> b_offsets,
                                     std::vector<std::size_t> b_members)
    : a_offsets_(std::move(a_offsets)),
      a_members_(std::move(a_members)),
      b_offsets_(std::move(b_offsets)),
      b_members_(std::move(b_members)) {}

DistanceMatrix distance_matrix(const DataMatrix& data, Metric metric, int threads) {
    return kernels::distance_matrix_parallel(data, metric, threads);
}

SimilarityGraph kmst(const DistanceMatrix& dist, std::size_t k) {
    const std::size_t n = dist.size();
    if (k == 0) throw Error(ErrorKind::invalid_k, "k must be positive");
    if (n < 2) throw Error(ErrorKind::invalid_input, "k-MST needs at least 2 nodes");
    if (k * (n - 1) > n * (n - 1) / 2) {
        throw Error(ErrorKind::infeasible_k,
                    "k = " + std::to_string(k) + " needs " + std::to_string(k * (n - 1)) +
                        " edges but the complete graph on " + std::to_string(n) + " nodes has only " +
                        std::to_string(n * (n - 1) / 2));
    }

    std::vector<Edge> candidates;
    candidates.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) candidates.push_back({i, j});
    }
    std::sort(candidates.begin(), candidates.end(), [&](const Edge& a, const Edge& b) {
        const double da = dist(a.i, a.j);
        const double db = dist(b.i, b.j);
        if (da != db) return da < db;
        return a < b;
    });

    std::vector<char> used(candidates.size(), 0);
    std::vector<Edge> edges;
    edges.reserve(k * (n - 1));
    for (std::size_t tree = 0; tree < k; ++tree) {
        DisjointSets sets(n);
        std::size_t added = 0;
        for (std::size_t c = 0; c < candidates.size() && added + 1 < n; ++c) {
            if (used[c]) continue;
            if (sets.unite(candidates[c].i, candidates[c].j)) {
                used[c] = 1;
                edges.push_back(candidates[c]);
                ++added;
            }
        }
        // Unused edges cannot span (a hub took all its edges in an earlier
        // tree): finish the tree with the cheapest already-used edges. Those
        // are not repeated in the union.
        for (std::size_t c = 0; c < candidates.size() && added + 1 < n; ++c) {
            if (used[c] && sets.unite(candidates[c].i, candidates[c].j)) ++added;
        }
    }
    return SimilarityGraph(n, std::move(edges));
}

SimilarityGraph knn_graph(const DistanceMatrix& dist, std::size_t k) {
    const std::size_t n = dist.size();
    if (k == 0 || k >= n) {
        throw Error(ErrorKind::invalid_k,
                    "k-NN needs 1 <= k <= N-1, got k = " + std::to_string(k) + " with N = " + std::to_string(n));
    }
    std::vector<Edge> edges;
    edges.reserve(n * k);
    std::vector<std::size_t> order(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t pos = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) order[pos++] = j;
        }
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              const double da = dist(i, a);
                              const double db = dist(i, b);
                              if (da != db) return da < db;
                              return a < b;
                          });
        for (std::size_t r = 0; r < k; ++r) edges.push_back({std::min(i, order[r]), std::max(i, order[r])});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return SimilarityGraph(n, std::move(edges));
}

SimilarityGraph build_graph(const DistanceMatrix& dist, const GraphSpec& spec) {
    return spec.kind == GraphKind::kmst ? kmst(dist, spec.k) : knn_graph(dist, spec.k);
}

HubReport hub_report(const SimilarityGraph& graph) {
    HubReport report;
    report.degrees = graph.degrees();
    if (report.degrees.empty()) return report;
    report.d_max = *std::max_element(report.degrees.begin(), report.degrees.end());
    for (auto d : report.degrees) report.sum_sq_degrees += static_cast<std::int64_t>(d * d);
    report.shared_pairs = report.sum_sq_degrees / 2 - static_cast<std::int64_t>(graph.edge_count());

    // nearest-rank percentile
    std::vector<std::size_t> sorted = report.degrees;
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sorted.size())));
    report.p95_degree = sorted[std::max<std::size_t>(rank, 1) - 1];
    return report;
}

EdgeNeighborhoods edge_neighborhoods(const SimilarityGraph& graph) {
    const auto edges = graph.edges();
    const std::size_t m = edges.size();
    const std::size_t n = graph.node_count();

    // incidence lists
    std::vector<std::size_t> inc_offsets(n + 1, 0);
    for (const auto& e : edges) {
        ++inc_offsets[e.i + 1];
        ++inc_offsets[e.j + 1];
    }
    std::partial_sum(inc_offsets.begin(), inc_offsets.end(), inc_offsets.begin());
    std::vector<std::size_t> incident(inc_offsets.back());
    {
        std::vector<std::size_t> fill(inc_offsets.begin(), inc_offsets.end() - 1);
        for (std::size_t e = 0; e < m; ++e) {
            incident[fill[edges[e].i]++] = e;
            incident[fill[edges[e].j]++] = e;
        }
    }
    auto incident_to = [&](std::size_t node) {
        return std::span<const std::size_t>(incident.data() + inc_offsets[node],
                                            inc_offsets[node + 1] - inc_offsets[node]);
    };

    std::vector<std::size_t> a_offsets{0};
    std::vector<std::size_t> b_offsets{0};
    std::vector<std::size_t> a_members;
    std::vector<std::size_t> b_members;
    a_offsets.reserve(m + 1);
    b_offsets.reserve(m + 1);

    // Stamps avoid clearing marker arrays per edge.
    std::vector<std::size_t> edge_stamp(m, 0);
    std::vector<std::size_t> node_stamp(n, 0);
    std::vector<std::size_t> frontier;
    std::size_t stamp = 0;

    for (std::size_t e = 0; e < m; ++e) {
        ++stamp;
        const std::size_t a_begin = a_members.size();
        for (std::size_t endpoint : {edges[e].i, edges[e].j}) {
            for (std::size_t f : incident_to(endpoint)) {
                if (edge_stamp[f] != stamp) {
                    edge_stamp[f] = stamp;
                    a_members.push_back(f);
                }
            }
        }
        std::sort(a_members.begin() + static_cast<std::ptrdiff_t>(a_begin), a_members.end());
        a_offsets.push_back(a_members.size());

        // B_e: every edge incident to a node touched by A_e.
        ++stamp;
        frontier.clear();
        for (std::size_t idx = a_begin; idx < a_members.size(); ++idx) {
            const Edge& f = edges[a_members[idx]];
            for (std::size_t node : {f.i, f.j}) {
                if (node_stamp[node] != stamp) {
                    node_stamp[node] = stamp;
                    frontier.push_back(node);
                }
            }
        }
        const std::size_t b_begin = b_members.size();
        for (std::size_t node : frontier) {
            for (std::size_t f : incident_to(node)) {
                if (edge_stamp[f] != stamp) {
                    edge_stamp[f] = stamp;
                    b_members.push_back(f);
                }
            }
        }
        std::sort(b_members.begin() + static_cast<std::ptrdiff_t>(b_begin), b_members.end());
        b_offsets.push_back(b_members.size());
    }
    return EdgeNeighborhoods(std::move(a_offsets), std::move(a_members), std::move(b_offsets),
                             std::move(b_members));
}

}  // namespace rgtest
