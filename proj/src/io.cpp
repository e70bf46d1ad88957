#include "rgtest/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rgtest/error.hpp"

namespace rgtest::io {

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& message) {
    throw Error(ErrorKind::invalid_input, source + ":" + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, const std::string& source, std::size_t line) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
        fail(source, line, "cannot parse '" + std::string(token) + "' as a number");
    }
    if (!std::isfinite(value)) fail(source, line, "non-finite value '" + std::string(token) + "'");
    return value;
}

std::size_t parse_index(std::string_view token, const std::string& source, std::size_t line) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
        fail(source, line, "cannot parse '" + std::string(token) + "' as a node index");
    }
    return value;
}

// Rows of comma-separated numbers; all rows must have the same width.
std::vector<std::vector<double>> parse_numeric_rows(std::istream& in, const std::string& source, bool header,
                                                    std::size_t& width) {
    std::vector<std::vector<double>> rows;
    std::string text;
    std::size_t line = 0;
    width = 0;
    while (std::getline(in, text)) {
        ++line;
        if (header && line == 1) continue;
        const auto body = trim(text);
        if (body.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = body.find(',', start);
            const auto token = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            row.push_back(parse_double(token, source, line));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            fail(source, line, "expected " + std::to_string(width) + " columns, found " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::invalid_input, "cannot open '" + path + "'");
    return in;
}

}  // namespace

DataMatrix parse_data_csv(std::istream& in, const std::string& source, bool header) {
    std::size_t width = 0;
    auto rows = parse_numeric_rows(in, source, header, width);
    if (rows.size() < 2) fail(source, rows.size(), "need at least 2 observations, found " + std::to_string(rows.size()));
    std::vector<double> values;
    values.reserve(rows.size() * width);
    for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
    return DataMatrix(rows.size(), width, std::move(values));
}

DataMatrix read_data_csv(const std::string& path, bool header) {
    auto in = open(path);
    return parse_data_csv(in, path, header);
}

std::vector<std::uint8_t> parse_labels(std::istream& in, const std::string& source, bool header) {
    std::vector<std::uint8_t> labels;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (header && line == 1) continue;
        const auto body = trim(text);
        if (body.empty()) continue;
        if (body == "0") {
            labels.push_back(0);
        } else if (body == "1") {
            labels.push_back(1);
        } else {
            fail(source, line, "label must be 0 or 1, found '" + std::string(body) + "'");
        }
    }
    return labels;
}

std::vector<std::uint8_t> read_labels(const std::string& path, bool header) {
    auto in = open(path);
    return parse_labels(in, path, header);
}

DistanceMatrix parse_distance_csv(std::istream& in, const std::string& source, bool header) {
    std::size_t width = 0;
    auto rows = parse_numeric_rows(in, source, header, width);
    if (rows.size() != width) {
        throw Error(ErrorKind::invalid_input, source + ": distance matrix has " + std::to_string(rows.size()) +
                                                  " rows and " + std::to_string(width) + " columns");
    }
    std::vector<double> values;
    values.reserve(width * width);
    for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
    try {
        return DistanceMatrix(width, std::move(values));
    } catch (const Error& e) {
        throw Error(ErrorKind::invalid_input, source + ": " + e.what());
    }
}

DistanceMatrix read_distance_csv(const std::string& path, bool header) {
    auto in = open(path);
    return parse_distance_csv(in, path, header);
}

EdgeList parse_edge_list(std::istream& in, const std::string& source, std::optional<std::size_t> node_count) {
    std::vector<Edge> edges;
    std::vector<double> weights;
    std::optional<bool> weighted;
    std::size_t max_index = 0;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        const auto body = trim(text);
        if (body.empty() || body.front() == '#') continue;
        std::istringstream fields{std::string(body)};
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(tok);
        if (tokens.size() != 2 && tokens.size() != 3) {
            fail(source, line, "expected 'i j' or 'i j w', found " + std::to_string(tokens.size()) + " fields");
        }
        const bool has_weight = tokens.size() == 3;
        if (weighted && *weighted != has_weight) fail(source, line, "mixed weighted and unweighted edge lines");
        weighted = has_weight;

        const std::size_t i = parse_index(tokens[0], source, line);
        const std::size_t j = parse_index(tokens[1], source, line);
        if (i >= j) fail(source, line, "edge must satisfy i < j, found " + tokens[0] + " " + tokens[1]);
        if (node_count && j >= *node_count) {
            fail(source, line, "node " + std::to_string(j) + " outside [0, " + std::to_string(*node_count) + ")");
        }
        max_index = std::max(max_index, j);
        edges.push_back({i, j});
        if (has_weight) {
            const double w = parse_double(tokens[2], source, line);
            if (!(w > 0.0)) fail(source, line, "edge weight must be positive");
            weights.push_back(w);
        }
    }
    if (edges.empty()) throw Error(ErrorKind::invalid_input, source + ": edge list is empty");

    EdgeList out;
    try {
        out.graph = SimilarityGraph(node_count.value_or(max_index + 1), std::move(edges));
    } catch (const Error& e) {
        throw Error(ErrorKind::invalid_input, source + ": " + e.what());
    }
    if (weighted.value_or(false)) out.weights = std::move(weights);
    return out;
}

EdgeList read_edge_list(const std::string& path, std::optional<std::size_t> node_count) {
    auto in = open(path);
    return parse_edge_list(in, path, node_count);
}

void write_edge_list(std::ostream& out, const SimilarityGraph& graph) {
    for (const auto& e : graph.edges()) out << e.i << ' ' << e.j << '\n';
}

void write_weighted_edge_list(std::ostream& out, const WeightedGraph& graph) {
    const auto edges = graph.graph().edges();
    const auto w = graph.weights();
    char buf[64];
    for (std::size_t e = 0; e < edges.size(); ++e) {
        std::snprintf(buf, sizeof buf, "%.17g", w[e]);
        out << edges[e].i << ' ' << edges[e].j << ' ' << buf << '\n';
    }
}

}  // namespace rgtest::io
