#include "rgtest/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rgtest/distributions.hpp"
#include "rgtest/error.hpp"
#include "rgtest/graph_core.hpp"
#include "rgtest/kernels.hpp"

namespace rgtest {

std::string_view to_string(StatisticKind kind) noexcept {
    switch (kind) {
        case StatisticKind::s_r: return "S_R";
        case StatisticKind::m_r: return "M_R";
        case StatisticKind::s: return "S";
        case StatisticKind::m: return "M";
        case StatisticKind::z_diff: return "Z_diff";
        case StatisticKind::z_w: return "Z_w";
    }
    return "?";
}

std::string_view to_token(StatisticKind kind) noexcept {
    switch (kind) {
        case StatisticKind::s_r: return "sr";
        case StatisticKind::m_r: return "mr";
        case StatisticKind::s: return "s";
        case StatisticKind::m: return "m";
        case StatisticKind::z_diff: return "zdiff";
        case StatisticKind::z_w: return "zw";
    }
    return "?";
}

StatisticKind parse_statistic(std::string_view name) {
    if (name == "sr") return StatisticKind::s_r;
    if (name == "mr") return StatisticKind::m_r;
    if (name == "s") return StatisticKind::s;
    if (name == "m") return StatisticKind::m;
    if (name == "zdiff") return StatisticKind::z_diff;
    if (name == "zw") return StatisticKind::z_w;
    throw Error(ErrorKind::config, "unknown statistic '" + std::string(name) + "' (expected sr, mr, s, m, zdiff, zw)");
}

bool uses_unit_weights(StatisticKind kind) noexcept {
    return kind == StatisticKind::s || kind == StatisticKind::m;
}

double statistic_value(StatisticKind kind, const ZScores& z) noexcept {
    switch (kind) {
        case StatisticKind::s_r:
        case StatisticKind::s: return z.z_diff * z.z_diff + z.z_w * z.z_w;
        case StatisticKind::m_r:
        case StatisticKind::m: return std::max(z.z_w, std::abs(z.z_diff));
        case StatisticKind::z_diff: return z.z_diff;
        case StatisticKind::z_w: return z.z_w;
    }
    return 0.0;
}

namespace {

inline bool at_least(double value, double observed) noexcept {
    return value >= observed - kTieRelTol * std::max(1.0, std::abs(observed));
}

std::vector<double> unit_weights(std::size_t edges) { return std::vector<double>(edges, 1.0); }

}  // namespace

WeightedGraph unit_weighted(const WeightedGraph& graph) {
    return WeightedGraph(graph.graph(), unit_weights(graph.edge_count()));
}

double add_one_pvalue(std::span<const double> null_values, double observed) {
    std::size_t count = 0;
    for (double v : null_values) count += at_least(v, observed) ? 1 : 0;
    return (1.0 + static_cast<double>(count)) / (1.0 + static_cast<double>(null_values.size()));
}

StatValues observed_statistics(const WeightedGraph& graph, const LabelVector& labels) {
    const MomentSet moments = null_moments(graph, labels.n1(), labels.n2());
    const ObservedCounts counts = observed_counts(graph, labels);
    return statistics(z_scores(counts, moments), moments, counts);
}

std::vector<PValueReport> permutation_pvalues(const WeightedGraph& graph, const LabelVector& labels,
                                              std::span<const StatisticKind> kinds,
                                              const PermutationOptions& options) {
    if (options.permutations < 1) throw Error(ErrorKind::config, "need at least one permutation");
    if (labels.size() != graph.node_count()) {
        throw Error(ErrorKind::invalid_input, "label count " + std::to_string(labels.size()) +
                                                  " does not match node count " + std::to_string(graph.node_count()));
    }

    // channel 0: the graph's weights, channel 1: unit weights (only if needed)
    const bool need_weighted = std::any_of(kinds.begin(), kinds.end(), [](auto k) { return !uses_unit_weights(k); });
    const bool need_unit = std::any_of(kinds.begin(), kinds.end(), [](auto k) { return uses_unit_weights(k); });

    std::vector<kernels::WeightChannel> channels;
    std::vector<StatValues> observed;
    std::size_t weighted_channel = 0;
    std::size_t unit_channel = 0;
    auto add_channel = [&](const WeightedGraph& g) {
        kernels::WeightChannel ch;
        ch.weights.assign(g.weights().begin(), g.weights().end());
        ch.moments = null_moments(g, labels.n1(), labels.n2());
        const ObservedCounts counts = observed_counts(g, labels);
        observed.push_back(statistics(z_scores(counts, ch.moments), ch.moments, counts));
        channels.push_back(std::move(ch));
        return channels.size() - 1;
    };
    if (need_weighted) weighted_channel = add_channel(graph);
    if (need_unit) unit_channel = add_channel(unit_weighted(graph));

    const auto draws = kernels::permutation_null_parallel(graph.graph().edges(), channels, labels.values(),
                                                          options.permutations, options.seed, options.threads);

    std::vector<PValueReport> reports;
    reports.reserve(kinds.size());
    for (const auto kind : kinds) {
        const std::size_t c = uses_unit_weights(kind) ? unit_channel : weighted_channel;
        const StatValues& obs = observed[c];
        const ZScores obs_z{obs.z_diff, obs.z_w};
        const double reference = statistic_value(kind, obs_z);

        std::size_t count = 0;
        for (std::size_t b = 0; b < draws.permutations(); ++b) {
            count += at_least(statistic_value(kind, draws.at(b, c)), reference) ? 1 : 0;
        }

        PValueReport r;
        r.kind = kind;
        r.value = (kind == StatisticKind::s_r || kind == StatisticKind::s) ? obs.s_r : reference;
        r.n_perm = options.permutations;
        r.seed = options.seed;
        r.exceedances = count;
        r.p_perm = (1.0 + static_cast<double>(count)) / (1.0 + static_cast<double>(options.permutations));
        r.p_asym = asym_pvalue(kind, r.value);
        r.n1 = labels.n1();
        r.n2 = labels.n2();
        reports.push_back(r);
    }
    return reports;
}

PValueReport permutation_pvalue(const WeightedGraph& graph, const LabelVector& labels, StatisticKind kind,
                                const PermutationOptions& options) {
    const StatisticKind kinds[] = {kind};
    return permutation_pvalues(graph, labels, kinds, options).front();
}

std::vector<double> ExactNull::distribution(StatisticKind kind) const {
    std::vector<double> out;
    out.reserve(scores.size());
    for (const auto& z : scores) out.push_back(statistic_value(kind, z));
    return out;
}

ExactNull exact_null(const WeightedGraph& graph, std::size_t n1) {
    const std::size_t n = graph.node_count();
    if (n1 > n) throw Error(ErrorKind::invalid_input, "n1 exceeds node count");

    double combos = 1.0;
    for (std::size_t t = 1; t <= n1; ++t) {
        combos = combos * static_cast<double>(n - n1 + t) / static_cast<double>(t);
    }
    if (std::round(combos) > static_cast<double>(kExactBudget)) {
        throw Error(ErrorKind::budget_exceeded, "C(" + std::to_string(n) + ", " + std::to_string(n1) +
                                                    ") labelings exceed the enumeration budget of " +
                                                    std::to_string(kExactBudget));
    }

    const auto edges = graph.graph().edges();
    const auto w = graph.weights();
    std::vector<std::uint8_t> labels(n, 1);
    std::fill_n(labels.begin(), n1, std::uint8_t{0});

    std::vector<double> r1;
    std::vector<double> r2;
    do {
        double a = 0.0;
        double b = 0.0;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto gi = labels[edges[e].i];
            if (gi != labels[edges[e].j]) continue;
            (gi == 0 ? a : b) += w[e];
        }
        r1.push_back(a);
        r2.push_back(b);
    } while (std::next_permutation(labels.begin(), labels.end()));

    ExactNull out;
    out.labelings = r1.size();
    out.n1 = n1;
    out.n2 = n - n1;
    const auto count = static_cast<double>(out.labelings);
    for (std::size_t t = 0; t < r1.size(); ++t) {
        out.mean_r1w += r1[t];
        out.mean_r2w += r2[t];
    }
    out.mean_r1w /= count;
    out.mean_r2w /= count;
    for (std::size_t t = 0; t < r1.size(); ++t) {
        const double d1 = r1[t] - out.mean_r1w;
        const double d2 = r2[t] - out.mean_r2w;
        out.var_r1w += d1 * d1;
        out.var_r2w += d2 * d2;
        out.cov_r12 += d1 * d2;
    }
    out.var_r1w /= count;
    out.var_r2w /= count;
    out.cov_r12 /= count;

    if (n1 >= 2 && out.n2 >= 2) {
        const MomentSet m = moments_from_sums(weight_sums(graph), n1, out.n2);
        const double floor = kVarianceRelTol * m.total_weight * m.total_weight;
        if (m.var_diff > floor && m.var_w > floor) {
            out.degenerate = false;
            const double inv_diff = 1.0 / std::sqrt(m.var_diff);
            const double inv_w = 1.0 / std::sqrt(m.var_w);
            out.scores.reserve(r1.size());
            for (std::size_t t = 0; t < r1.size(); ++t) out.scores.push_back(standardize(r1[t], r2[t], m, inv_diff, inv_w));
        }
    }
    return out;
}

double exact_pvalue(const ExactNull& null, StatisticKind kind, double observed) {
    if (null.degenerate) throw Error(ErrorKind::ill_conditioned, "exact null is degenerate; no statistic distribution");
    std::size_t count = 0;
    for (const auto& z : null.scores) count += at_least(statistic_value(kind, z), observed) ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(null.scores.size());
}

double asym_pvalue_sr(double s) {
    if (!(s >= 0.0)) throw Error(ErrorKind::invalid_input, "S_R must be nonnegative, got " + std::to_string(s));
    return chi2_2df_sf(s);
}

double asym_pvalue_mr(double m) {
    if (!(m > 0.0)) return 1.0;
    // 1 - Phi(m)(2 Phi(m) - 1) expanded in the upper tail u to avoid cancellation
    const double u = normal_sf(m);
    return 3.0 * u - 2.0 * u * u;
}

double asym_pvalue(StatisticKind kind, double value) {
    switch (kind) {
        case StatisticKind::s_r:
        case StatisticKind::s: return asym_pvalue_sr(std::max(0.0, value));
        case StatisticKind::m_r:
        case StatisticKind::m: return asym_pvalue_mr(value);
        case StatisticKind::z_diff:
        case StatisticKind::z_w: return normal_sf(value);
    }
    return 1.0;
}

ConditionReport condition_report(const WeightedGraph& graph, std::size_t n1) {
    const std::size_t n = graph.node_count();
    if (n1 > n) throw Error(ErrorKind::invalid_input, "n1 exceeds node count");
    const WeightSums sums = weight_sums(graph);
    const EdgeNeighborhoods hoods = edge_neighborhoods(graph.graph());
    const auto w = graph.weights();
    const auto nd = static_cast<double>(n);

    ConditionReport r;
    r.n1_fraction = static_cast<double>(n1) / nd;
    r.n_edges = graph.edge_count();
    r.edges_per_node = static_cast<double>(r.n_edges) / nd;
    r.edges_per_n125 = static_cast<double>(r.n_edges) / std::pow(nd, 1.25);
    r.denser_than_n125 = r.edges_per_n125 > 1.0;

    const double s12 = sums.s1 + sums.s2;
    r.ratio_ii = s12 > 0.0 ? std::clamp((s12 - 4.0 * sums.s3 / nd) / s12, 0.0, 1.0) : 0.0;

    double sum_iii = 0.0;
    double sum_iv = 0.0;
    for (std::size_t e = 0; e < w.size(); ++e) {
        const double a_term = w[e] * static_cast<double>(hoods.a_size(e));
        sum_iii += a_term * a_term;
        double weight_a = 0.0;
        for (std::size_t f : hoods.a(e)) weight_a += w[f];
        double weight_b = 0.0;
        for (std::size_t f : hoods.b(e)) weight_b += w[f];
        sum_iv += w[e] * weight_a * weight_b;
    }
    if (sums.s1 > 0.0) {
        r.ratio_iii = sum_iii / (sums.s1 * std::sqrt(nd));
        r.ratio_iv = sum_iv / std::pow(sums.s1, 1.5);
    }
    return r;
}

double upper_quantile(std::vector<double> values, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::invalid_input, "alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (values.empty()) throw Error(ErrorKind::invalid_input, "quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double target = (1.0 - alpha) * static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

double mr_critical_value(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::invalid_input, "alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    return bisect_decreasing([](double m) { return asym_pvalue_mr(m); }, alpha, 0.0, 40.0, 1e-10);
}

std::vector<CriticalGap> critical_gap(const WeightedGraph& graph, std::size_t n1, double alpha,
                                      const PermutationOptions& options) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::invalid_input, "alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (options.permutations < 1) throw Error(ErrorKind::config, "need at least one permutation");
    if (n1 > graph.node_count()) throw Error(ErrorKind::invalid_input, "n1 exceeds node count");
    const LabelVector labels = LabelVector::split(n1, graph.node_count() - n1);

    kernels::WeightChannel ch;
    ch.weights.assign(graph.weights().begin(), graph.weights().end());
    ch.moments = null_moments(graph, labels.n1(), labels.n2());
    const kernels::WeightChannel channels[] = {std::move(ch)};
    const auto draws = kernels::permutation_null_parallel(graph.graph().edges(), channels, labels.values(),
                                                          options.permutations, options.seed, options.threads);

    std::vector<CriticalGap> gaps;
    for (const auto kind : {StatisticKind::z_diff, StatisticKind::z_w, StatisticKind::s_r, StatisticKind::m_r}) {
        std::vector<double> values(draws.permutations());
        for (std::size_t b = 0; b < values.size(); ++b) values[b] = statistic_value(kind, draws.at(b, 0));
        CriticalGap g;
        g.kind = kind;
        g.permutation = upper_quantile(std::move(values), alpha);
        switch (kind) {
            case StatisticKind::s_r: g.asymptotic = chi2_2df_upper_quantile(alpha); break;
            case StatisticKind::m_r: g.asymptotic = mr_critical_value(alpha); break;
            default: g.asymptotic = normal_upper_quantile(alpha); break;
        }
        g.gap = g.asymptotic - g.permutation;
        gaps.push_back(g);
    }
    return gaps;
}

}  // namespace rgtest
