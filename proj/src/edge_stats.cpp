#include "rgtest/edge_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rgtest/error.hpp"

namespace rgtest {

LabelVector::LabelVector(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] > 1) {
            throw Error(ErrorKind::invalid_input,
                        "label at position " + std::to_string(i) + " must be 0 or 1, got " + std::to_string(labels_[i]));
        }
        (labels_[i] == 0 ? n1_ : n2_) += 1;
    }
    if (n1_ < 2) throw Error(ErrorKind::invalid_input, "n1 < 2 (sample X has " + std::to_string(n1_) + " observations)");
    if (n2_ < 2) throw Error(ErrorKind::invalid_input, "n2 < 2 (sample Y has " + std::to_string(n2_) + " observations)");
}

LabelVector LabelVector::split(std::size_t n1, std::size_t n2) {
    std::vector<std::uint8_t> labels(n1 + n2, 1);
    std::fill_n(labels.begin(), n1, std::uint8_t{0});
    return LabelVector(std::move(labels));
}

WeightSums weight_sums(const WeightedGraph& graph) {
    WeightSums sums;
    sums.node_sums.assign(graph.node_count(), 0.0);
    const auto edges = graph.graph().edges();
    const auto w = graph.weights();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        sums.s1 += w[e] * w[e];
        sums.total_weight += w[e];
        sums.node_sums[edges[e].i] += w[e];
        sums.node_sums[edges[e].j] += w[e];
    }
    double sum_sq_nodes = 0.0;
    for (double s : sums.node_sums) sum_sq_nodes += s * s;
    sums.s2 = sum_sq_nodes - sums.s1;
    sums.s3 = sums.total_weight * sums.total_weight;
    return sums;
}

ObservedCounts observed_counts(const WeightedGraph& graph, const LabelVector& labels) {
    if (labels.size() != graph.node_count()) {
        throw Error(ErrorKind::invalid_input, "label count " + std::to_string(labels.size()) +
                                                  " does not match node count " + std::to_string(graph.node_count()));
    }
    ObservedCounts c;
    const auto g = labels.values();
    const auto edges = graph.graph().edges();
    const auto w = graph.weights();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto gi = g[edges[e].i];
        const auto gj = g[edges[e].j];
        if (gi != gj) {
            ++c.r0;
        } else if (gi == 0) {
            ++c.r1;
            c.r1w += w[e];
        } else {
            ++c.r2;
            c.r2w += w[e];
        }
    }
    const auto n = static_cast<double>(labels.size());
    c.p = (static_cast<double>(labels.n1()) - 1.0) / (n - 2.0);
    c.q = 1.0 - c.p;
    c.r_diff = c.r1w - c.r2w;
    c.r_w = c.q * c.r1w + c.p * c.r2w;
    return c;
}

MomentSet moments_from_sums(const WeightSums& sums, std::size_t n1, std::size_t n2) {
    if (n1 + n2 <= 3) {
        throw Error(ErrorKind::degenerate_size, "N = " + std::to_string(n1 + n2) + " is too small (need N >= 4)");
    }
    if (n1 < 2 || n2 < 2) {
        throw Error(ErrorKind::degenerate_size, "need n1, n2 >= 2 (got " + std::to_string(n1) + ", " +
                                                    std::to_string(n2) + ")");
    }
    const auto a = static_cast<double>(n1);
    const auto b = static_cast<double>(n2);
    const double n = a + b;
    const double s1 = sums.s1;
    const double s2 = sums.s2;
    const double s3 = sums.s3;
    const double tw = sums.total_weight;

    MomentSet m;
    m.n1 = n1;
    m.n2 = n2;
    m.total_weight = tw;
    m.p = (a - 1.0) / (n - 2.0);
    m.q = 1.0 - m.p;

    m.mu1w = tw * a * (a - 1.0) / (n * (n - 1.0));
    m.mu2w = tw * b * (b - 1.0) / (n * (n - 1.0));

    const double f = a * b * (a - 1.0) * (b - 1.0) / (n * (n - 1.0) * (n - 2.0) * (n - 3.0));
    const double shared = -s2 + 2.0 * (2.0 * n - 3.0) / (n * (n - 1.0)) * s3;
    m.sigma11 = (shared + (n - 3.0) / (b - 1.0) * (s1 + s2) - 4.0 * (n - 3.0) / (n * (b - 1.0)) * s3) * f;
    m.sigma22 = (shared + (n - 3.0) / (a - 1.0) * (s1 + s2) - 4.0 * (n - 3.0) / (n * (a - 1.0)) * s3) * f;
    m.sigma12 = shared * f;

    m.e_diff = tw * (a - b) / n;
    m.var_diff = ((s1 + s2) - 4.0 * s3 / n) * a * b / (n * (n - 1.0));
    m.e_w = tw * (a - 1.0) * (b - 1.0) / ((n - 1.0) * (n - 2.0));
    m.var_w = ((n - 3.0) / (n - 2.0) * s1 - s2 / (n - 2.0) + 2.0 * s3 / ((n - 1.0) * (n - 2.0))) *
              (a * b / (n * (n - 1.0))) * ((a - 1.0) * (b - 1.0) / ((n - 2.0) * (n - 3.0)));
    return m;
}

MomentSet null_moments(const WeightedGraph& graph, std::size_t n1, std::size_t n2) {
    if (n1 + n2 != graph.node_count()) {
        throw Error(ErrorKind::invalid_input, "n1 + n2 = " + std::to_string(n1 + n2) +
                                                  " does not match node count " + std::to_string(graph.node_count()));
    }
    const MomentSet m = moments_from_sums(weight_sums(graph), n1, n2);
    const double floor = kVarianceRelTol * m.total_weight * m.total_weight;
    if (!(m.var_diff > floor)) {
        throw Error(ErrorKind::ill_conditioned,
                    "Var(R1w - R2w) vanishes: node weight sums are all equal (condition (a) fails); Z_diff is undefined");
    }
    if (!(m.var_w > floor)) {
        throw Error(ErrorKind::ill_conditioned,
                    "Var(q R1w + p R2w) vanishes: (N-3)S1 - S2 + 2 S3/(N-1) <= 0 (condition (b) fails); Z_w is undefined");
    }
    return m;
}

ZScores z_scores(const ObservedCounts& counts, const MomentSet& moments) {
    const double floor = kVarianceRelTol * moments.total_weight * moments.total_weight;
    if (!(moments.var_diff > floor) || !(moments.var_w > floor)) {
        throw Error(ErrorKind::ill_conditioned, "zero null variance; standardized scores are undefined");
    }
    return standardize(counts.r1w, counts.r2w, moments, 1.0 / std::sqrt(moments.var_diff),
                       1.0 / std::sqrt(moments.var_w));
}

StatValues statistics(const ZScores& z, const MomentSet& moments, const ObservedCounts& counts) {
    if (!std::isfinite(z.z_diff) || !std::isfinite(z.z_w)) {
        throw Error(ErrorKind::ill_conditioned, "standardized scores are not finite");
    }
    const double s11 = moments.sigma11;
    const double s22 = moments.sigma22;
    const double s12 = moments.sigma12;
    const double det = s11 * s22 - s12 * s12;
    if (!(det > 1e-12 * std::abs(s11 * s22)) || !(s11 > 0.0) || !(s22 > 0.0)) {
        throw Error(ErrorKind::ill_conditioned, "null covariance of (R1w, R2w) is singular");
    }
    const double d1 = counts.r1w - moments.mu1w;
    const double d2 = counts.r2w - moments.mu2w;
    const double quadratic = (s22 * d1 * d1 - 2.0 * s12 * d1 * d2 + s11 * d2 * d2) / det;

    StatValues out;
    out.z_diff = z.z_diff;
    out.z_w = z.z_w;
    out.s_r = quadratic;
    out.m_r = std::max(z.z_w, std::abs(z.z_diff));

    const double decomposed = z.z_diff * z.z_diff + z.z_w * z.z_w;
    if (std::abs(quadratic - decomposed) > 1e-8 * std::max(1.0, std::abs(quadratic))) {
        throw Error(ErrorKind::internal, "S_R quadratic form " + std::to_string(quadratic) +
                                             " disagrees with Z_diff^2 + Z_w^2 = " + std::to_string(decomposed));
    }
    return out;
}

}  // namespace rgtest
