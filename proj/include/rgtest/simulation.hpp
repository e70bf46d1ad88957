#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rgtest/graph_core.hpp"
#include "rgtest/inference.hpp"
#include "rgtest/weighting.hpp"

namespace rgtest {

enum class Family { gaussian, lognormal, mvt };

Family parse_family(std::string_view name);
std::string_view to_string(Family family) noexcept;

/// `count` consecutive coordinates sharing one standard deviation.
struct ScaleBlock {
    std::size_t count = 0;
    double sd = 1.0;
};

struct DistributionSpec {
    Family family = Family::gaussian;
    std::size_t dim = 1;
    /// L2 norm of the location offset, spread equally over coordinates.
    double mean_shift = 0.0;
    /// Multiplies every coordinate's standard deviation.
    double scale = 1.0;
    /// Optional block-diagonal standard deviations; counts must sum to dim.
    std::vector<ScaleBlock> blocks;
    double df = 5.0;             ///< mvt only, must exceed 2
    double noncentrality = 0.0;  ///< mvt only: L2 norm of the non-centrality vector

    /// Every violated constraint, empty when valid.
    [[nodiscard]] std::vector<std::string> problems() const;
    [[nodiscard]] std::vector<double> coordinate_sd() const;
};

/// n i.i.d. draws. gaussian: offset + sd*z; lognormal: exp of that;
/// mvt: sd*(z + delta)/sqrt(chi2_df/df) + offset with one chi2 per row.
DataMatrix generate_sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

/// Row 0 becomes m + gamma (x0 - m), m the mean of the other rows.
DataMatrix inject_influential(const DataMatrix& sample, double gamma);

struct SimConfig {
    std::string scenario = "scenario";
    DistributionSpec x;
    DistributionSpec y;
    std::size_t n1 = 100;
    std::size_t n2 = 100;
    GraphSpec graph;
    std::vector<WeightKind> weights{WeightKind::w1};
    std::vector<StatisticKind> statistics{StatisticKind::s, StatisticKind::s_r, StatisticKind::m,
                                          StatisticKind::m_r};
    std::size_t permutations = 1000;
    double alpha = 0.05;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    /// Applied to sample Y when set.
    std::optional<double> inject_gamma;
    int threads = 0;

    [[nodiscard]] std::vector<std::string> problems() const;
};

struct PowerRow {
    std::string scenario;
    StatisticKind statistic = StatisticKind::s;
    WeightKind weight = WeightKind::unit;
    std::size_t rejections = 0;
    std::size_t trials = 0;
    std::size_t errors = 0;  ///< trials whose graph was ill-conditioned
    double median_dmax = 0.0;
};

struct PowerTable {
    std::vector<PowerRow> rows;
    std::vector<std::size_t> dmax_per_trial;
};

/// Row label for S/M (weight "none") or S_R/M_R under each configured weight.
std::string row_label(const PowerRow& row);

PowerTable power_study(const SimConfig& config);

/// Columns: scenario, statistic, weight, rejections, trials, median_dmax.
std::string power_table_csv(const PowerTable& table);

double median(std::vector<double> values);

}  // namespace rgtest
