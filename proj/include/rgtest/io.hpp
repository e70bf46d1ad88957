#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rgtest/graph_core.hpp"
#include "rgtest/weighting.hpp"

namespace rgtest::io {

// Parse errors are invalid-input errors whose message starts with
// "<source>:<line>:".

/// One observation per row, comma-separated finite decimals.
DataMatrix parse_data_csv(std::istream& in, const std::string& source, bool header);
DataMatrix read_data_csv(const std::string& path, bool header);

/// One 0/1 label per row.
std::vector<std::uint8_t> parse_labels(std::istream& in, const std::string& source, bool header);
std::vector<std::uint8_t> read_labels(const std::string& path, bool header);

/// N rows of N comma-separated distances.
DistanceMatrix parse_distance_csv(std::istream& in, const std::string& source, bool header);
DistanceMatrix read_distance_csv(const std::string& path, bool header);

struct EdgeList {
    SimilarityGraph graph;
    /// Present when every line carries a third "w" column.
    std::optional<std::vector<double>> weights;
};

/// "i j" or "i j w" per line, whitespace separated, 0-based, i < j. Blank
/// lines and lines starting with '#' are skipped. Without `node_count` the
/// graph spans [0, max index].
EdgeList parse_edge_list(std::istream& in, const std::string& source, std::optional<std::size_t> node_count);
EdgeList read_edge_list(const std::string& path, std::optional<std::size_t> node_count);

void write_edge_list(std::ostream& out, const SimilarityGraph& graph);
/// Weights written with 17 significant digits so they round-trip exactly.
void write_weighted_edge_list(std::ostream& out, const WeightedGraph& graph);

}  // namespace rgtest::io
