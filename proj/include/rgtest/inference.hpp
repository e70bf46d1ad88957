#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rgtest/edge_stats.hpp"
#include "rgtest/weighting.hpp"

namespace rgtest {

/// S_R, M_R use the graph's weights; S, M are the same statistics with w = 1.
enum class StatisticKind { s_r, m_r, s, m, z_diff, z_w };

std::string_view to_string(StatisticKind kind) noexcept;
/// Short CLI/config token: sr, mr, s, m, zdiff, zw.
std::string_view to_token(StatisticKind kind) noexcept;
/// Accepts sr, mr, s, m, zdiff, zw.
StatisticKind parse_statistic(std::string_view name);
bool uses_unit_weights(StatisticKind kind) noexcept;
double statistic_value(StatisticKind kind, const ZScores& z) noexcept;

struct PValueReport {
    StatisticKind kind = StatisticKind::s_r;
    double value = 0.0;
    std::optional<double> p_perm;
    std::optional<double> p_asym;
    std::size_t n_perm = 0;
    std::uint64_t seed = 0;
    std::size_t exceedances = 0;  ///< #{T_b >= T_obs}
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

struct PermutationOptions {
    std::size_t permutations = 10000;
    std::uint64_t seed = 42;
    int threads = 0;
};

/// Null values within this relative distance below the observed one count as ties.
inline constexpr double kTieRelTol = 1e-9;

/// (1 + #{null >= observed}) / (1 + B).
double add_one_pvalue(std::span<const double> null_values, double observed);

/// Permutation p-values for several statistics from one shared set of
/// relabelings. Throws ill-conditioned-graph before sampling when any needed
/// weighting has a vanishing null variance.
std::vector<PValueReport> permutation_pvalues(const WeightedGraph& graph, const LabelVector& labels,
                                              std::span<const StatisticKind> kinds,
                                              const PermutationOptions& options);

PValueReport permutation_pvalue(const WeightedGraph& graph, const LabelVector& labels, StatisticKind kind,
                                const PermutationOptions& options);

/// Exhaustive enumeration of every labeling with n1 zeros. Test oracle for the
/// closed-form moments; guarded by a C(N, n1) <= 1e5 budget.
struct ExactNull {
    std::size_t labelings = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double mean_r1w = 0.0;
    double mean_r2w = 0.0;
    double var_r1w = 0.0;
    double var_r2w = 0.0;
    double cov_r12 = 0.0;
    /// No standardized statistics (N < 4, a sample below 2, or zero variance).
    bool degenerate = true;
    std::vector<ZScores> scores;  ///< per labeling, empty when degenerate

    [[nodiscard]] std::vector<double> distribution(StatisticKind kind) const;
};

inline constexpr std::size_t kExactBudget = 100000;

ExactNull exact_null(const WeightedGraph& graph, std::size_t n1);
/// #{labelings with T >= observed} / C(N, n1).
double exact_pvalue(const ExactNull& null, StatisticKind kind, double observed);

/// chi-squared(2) tail: exp(-s/2).
double asym_pvalue_sr(double s);
/// 1 - Phi(m)(2 Phi(m) - 1) for m >= 0, else 1.
double asym_pvalue_mr(double m);
/// Asymptotic p for any kind; Z scores use the upper normal tail.
double asym_pvalue(StatisticKind kind, double value);

struct ConditionReport {
    double n1_fraction = 0.0;
    std::size_t n_edges = 0;
    double edges_per_node = 0.0;     ///< |G| / N
    double edges_per_n125 = 0.0;     ///< |G| / N^1.25
    bool denser_than_n125 = false;
    double ratio_ii = 0.0;   ///< (S1 + S2 - 4 S3 / N) / (S1 + S2)
    double ratio_iii = 0.0;  ///< sum_e (w_e |A_e|)^2 / (S1 sqrt(N))
    double ratio_iv = 0.0;   ///< sum_e w_e W(A_e) W(B_e) / S1^1.5
};

ConditionReport condition_report(const WeightedGraph& graph, std::size_t n1);

struct CriticalGap {
    StatisticKind kind = StatisticKind::s_r;
    double asymptotic = 0.0;
    double permutation = 0.0;
    double gap = 0.0;  ///< asymptotic - permutation
};

/// Empirical (1 - alpha) nearest-rank quantile.
double upper_quantile(std::vector<double> values, double alpha);
/// Critical value of M_R under the asymptotic null, by bisection.
double mr_critical_value(double alpha);

/// Gaps for Z_diff, Z_w, S_R and M_R, in that order.
std::vector<CriticalGap> critical_gap(const WeightedGraph& graph, std::size_t n1, double alpha,
                                      const PermutationOptions& options);

/// Observed statistics for one weighting of the graph.
StatValues observed_statistics(const WeightedGraph& graph, const LabelVector& labels);

/// Same graph with every weight set to 1.
WeightedGraph unit_weighted(const WeightedGraph& graph);

}  // namespace rgtest
