#include "rgtest/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rgtest/graph_core.hpp"
#include "rgtest/io.hpp"
#include "rgtest/kernels.hpp"
#include "rgtest/rng.hpp"

namespace rgtest {

std::vector<MomentComparison> compare_moments(const MomentSet& m, const ExactNull& x) {
    const double p = m.p;
    const double q = m.q;
    const double mean_scale = std::abs(m.total_weight);
    const double var_scale = mean_scale * mean_scale;

    std::vector<MomentComparison> out;
    auto add = [&](const char* name, double closed, double enumerated, double scale) {
        MomentComparison c;
        c.quantity = name;
        c.closed_form = closed;
        c.enumerated = enumerated;
        const double diff = std::abs(closed - enumerated);
        const double mag = std::max(std::abs(closed), std::abs(enumerated));
        // Floor keeps exact zeros finite; ok exactly when rel_error <= kOracleRelTol.
        const double denom = mag + 1e-12 * scale / kOracleRelTol;
        c.rel_error = denom > 0.0 ? diff / denom : 0.0;
        c.ok = c.rel_error <= kOracleRelTol;
        out.push_back(c);
    };
    add("mu1w", m.mu1w, x.mean_r1w, mean_scale);
    add("mu2w", m.mu2w, x.mean_r2w, mean_scale);
    add("Sigma11", m.sigma11, x.var_r1w, var_scale);
    add("Sigma22", m.sigma22, x.var_r2w, var_scale);
    add("Sigma12", m.sigma12, x.cov_r12, var_scale);
    add("e_diff", m.e_diff, x.mean_r1w - x.mean_r2w, mean_scale);
    add("var_diff", m.var_diff, x.var_r1w + x.var_r2w - 2.0 * x.cov_r12, var_scale);
    add("e_w", m.e_w, q * x.mean_r1w + p * x.mean_r2w, mean_scale);
    add("var_w", m.var_w, q * q * x.var_r1w + p * p * x.var_r2w + 2.0 * p * q * x.cov_r12, var_scale);
    return out;
}

bool OracleCase::ok() const {
    return std::all_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.ok; });
}

double OracleCase::max_rel_error() const {
    double worst = 0.0;
    for (const auto& c : comparisons) worst = std::max(worst, c.rel_error);
    return worst;
}

std::size_t OracleCheckResult::failures() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.ok(); }));
}

namespace {

SimilarityGraph random_tree(std::size_t n, CounterEngine& engine) {
    std::vector<Edge> edges;
    for (std::size_t t = 1; t < n; ++t) {
        std::uniform_int_distribution<std::size_t> parent(0, t - 1);
        edges.push_back({parent(engine), t});
    }
    return SimilarityGraph(n, std::move(edges));
}

SimilarityGraph random_knn(std::size_t n, std::size_t k, CounterEngine& engine) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> points(2 * n);
    for (auto& v : points) v = unit(engine);
    return knn_graph(kernels::distance_matrix_serial(DataMatrix(n, 2, std::move(points)), Metric::l2), k);
}

OracleCase run_case(std::string description, const WeightedGraph& graph, std::size_t n1, bool mutate) {
    OracleCase c;
    c.description = std::move(description);
    std::ostringstream dump;
    io::write_weighted_edge_list(dump, graph);
    c.graph_dump = dump.str();

    WeightSums sums = weight_sums(graph);
    if (mutate) sums.s2 += sums.s1;
    const MomentSet closed = moments_from_sums(sums, n1, graph.node_count() - n1);
    c.comparisons = compare_moments(closed, exact_null(graph, n1));
    return c;
}

}  // namespace

OracleCheckResult oracle_check(const OracleCheckOptions& options) {
    OracleCheckResult result;

    const WeightKind builtins[] = {WeightKind::unit, WeightKind::w1, WeightKind::w2, WeightKind::w3};
    for (std::size_t g = 0; g < options.graphs; ++g) {
        CounterEngine engine(options.seed, g);
        std::uniform_int_distribution<std::size_t> size_dist(6, 12);
        const std::size_t n = size_dist(engine);
        std::uniform_int_distribution<std::size_t> n1_dist(2, n - 2);
        const std::size_t n1 = n1_dist(engine);
        const bool tree = g % 2 == 0;
        const SimilarityGraph graph = tree ? random_tree(n, engine) : random_knn(n, 2, engine);
        const std::string prefix = "graph " + std::to_string(g) + ": " + (tree ? "tree" : "2-NN") +
                                   " N=" + std::to_string(n) + " n1=" + std::to_string(n1) + " weight=";

        for (const auto kind : builtins) {
            result.cases.push_back(run_case(prefix + std::string(to_string(kind)), assign_weights(graph, kind), n1,
                                            options.inject_s2_double_count));
        }
        std::uniform_real_distribution<double> positive(0.2, 3.0);
        std::vector<double> weights(graph.edge_count());
        for (auto& w : weights) w = positive(engine);
        result.cases.push_back(run_case(prefix + "random", WeightedGraph(graph, std::move(weights)), n1,
                                        options.inject_s2_double_count));
    }

    const SimilarityGraph path(4, {{0, 1}, {1, 2}, {2, 3}});
    result.cases.push_back(run_case("fixture: path N=4 n1=2 weight=none", assign_weights(path, WeightKind::unit), 2,
                                    options.inject_s2_double_count));
    return result;
}

}  // namespace rgtest
