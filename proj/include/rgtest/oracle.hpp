#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rgtest/edge_stats.hpp"
#include "rgtest/inference.hpp"

namespace rgtest {

/// Relative agreement required between closed-form and enumerated moments.
inline constexpr double kOracleRelTol = 1e-10;

struct MomentComparison {
    std::string quantity;
    double closed_form = 0.0;
    double enumerated = 0.0;
    double rel_error = 0.0;
    bool ok = true;
};

/// Compares every closed-form moment with its enumerated counterpart.
/// rel_error = |diff| / (|value| + floor / kOracleRelTol), where the floor is
/// 1e-12 * sum(w) for means and 1e-12 * (sum w)^2 for second moments, so
/// exact zeros stay finite; ok is rel_error <= kOracleRelTol.
std::vector<MomentComparison> compare_moments(const MomentSet& closed, const ExactNull& exact);

struct OracleCheckOptions {
    std::size_t graphs = 50;
    std::uint64_t seed = 1;
    /// Mutation hook: adds S1 to S2 (ordered-pair double count) before the
    /// closed-form moments are evaluated. The check must then fail.
    bool inject_s2_double_count = false;
};

struct OracleCase {
    std::string description;
    std::string graph_dump;  ///< weighted edge list, for failure reports
    std::vector<MomentComparison> comparisons;
    [[nodiscard]] bool ok() const;
    [[nodiscard]] double max_rel_error() const;
};

struct OracleCheckResult {
    std::vector<OracleCase> cases;
    [[nodiscard]] std::size_t failures() const;
};

/// Random trees and 2-NN graphs with N in [6, 12] under unit, W1, W2, W3 and
/// random positive weights, plus the N = 4 path fixture.
OracleCheckResult oracle_check(const OracleCheckOptions& options);

}  // namespace rgtest
