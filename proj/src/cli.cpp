#include "rgtest/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgtest/error.hpp"
#include "rgtest/graph_core.hpp"
#include "rgtest/inference.hpp"
#include "rgtest/io.hpp"
#include "rgtest/oracle.hpp"
#include "rgtest/sim_config.hpp"
#include "rgtest/simulation.hpp"

namespace rgtest::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kLowerBoundWarn = 0.5;

// JSON numbers carry 12 significant digits.
Json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

Json num(std::optional<double> v) { return v ? num(*v) : Json(nullptr); }

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config:
        case ErrorKind::invalid_k:
        case ErrorKind::invalid_df:
        case ErrorKind::budget_exceeded: return exit_usage;
        case ErrorKind::ill_conditioned: return exit_ill_conditioned;
        case ErrorKind::internal: return exit_internal;
        default: return exit_data;
    }
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputOptions {
    std::string data;
    std::string dist;
    std::string edges;
    std::string labels;
    std::string metric = "l2";
    std::string graph = "kmst";
    std::size_t k = 5;
    bool k_given = false;
    std::string weight = "w1";
    bool weight_given = false;
    bool header = false;
    int threads = 0;
    std::string out;
};

struct TestOptions {
    std::string stat = "sr,mr";
    std::size_t nperm = 10000;
    double alpha = 0.05;
    std::uint64_t seed = 42;
};

// --threads, else RGTEST_THREADS, else 0 (all cores).
int requested_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("RGTEST_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

void validate(const InputOptions& in, bool labels_required) {
    const int sources = !in.data.empty() + !in.dist.empty() + !in.edges.empty();
    if (sources != 1) throw UsageError("exactly one of --data, --dist, --edges is required");
    if (labels_required && in.labels.empty()) throw UsageError("--labels is required");
    if (in.graph == "edgelist") {
        if (in.edges.empty()) throw UsageError("--graph edgelist needs --edges");
        if (in.k_given) throw UsageError("--k does not apply to --graph edgelist");
    } else {
        if (!in.edges.empty()) throw UsageError("--edges needs --graph edgelist");
        if (in.k < 1) throw UsageError("--k must be at least 1");
    }
}

struct LoadedGraph {
    WeightedGraph weighted;
    std::string weight_name;
    std::optional<std::vector<std::uint8_t>> labels;
    std::vector<std::string> warnings;
};

LoadedGraph load(const InputOptions& in, int threads) {
    LoadedGraph out;
    if (!in.labels.empty()) out.labels = io::read_labels(in.labels, in.header);

    auto check_size = [&](std::size_t n, const std::string& source) {
        if (out.labels && out.labels->size() != n) {
            throw Error(ErrorKind::invalid_input, in.labels + ": " + std::to_string(out.labels->size()) +
                                                      " labels for " + std::to_string(n) + " observations in " +
                                                      source);
        }
    };

    const WeightKind kind = parse_weight_kind(in.weight);
    if (in.graph == "edgelist") {
        std::optional<std::size_t> n;
        if (out.labels) n = out.labels->size();
        auto list = io::read_edge_list(in.edges, n);
        check_size(list.graph.node_count(), in.edges);
        if (list.weights) {
            out.weighted = WeightedGraph(list.graph, std::move(*list.weights));
            out.weight_name = "file";
            if (in.weight_given) out.warnings.emplace_back("edge list carries weights; --weight ignored");
        } else {
            out.weighted = assign_weights(list.graph, kind);
            out.weight_name = std::string(to_string(kind));
        }
        return out;
    }

    GraphSpec spec;
    spec.kind = parse_graph_kind(in.graph);
    spec.k = in.k;
    spec.metric = parse_metric(in.metric);
    DistanceMatrix dist;
    if (!in.data.empty()) {
        const DataMatrix data = io::read_data_csv(in.data, in.header);
        check_size(data.rows(), in.data);
        dist = distance_matrix(data, spec.metric, threads);
    } else {
        dist = io::read_distance_csv(in.dist, in.header);
        check_size(dist.size(), in.dist);
    }
    out.weighted = assign_weights(build_graph(dist, spec), kind);
    out.weight_name = std::string(to_string(kind));
    return out;
}

Json input_json(const InputOptions& in, int threads) {
    auto path = [](const std::string& p) { return p.empty() ? Json(nullptr) : Json(p); };
    Json j;
    j["data"] = path(in.data);
    j["dist"] = path(in.dist);
    j["edges"] = path(in.edges);
    j["labels"] = path(in.labels);
    j["header"] = in.header;
    j["graph"] = in.graph;
    j["k"] = in.graph == "edgelist" ? Json(nullptr) : Json(in.k);
    j["metric"] = in.graph == "edgelist" ? Json(nullptr) : Json(in.metric);
    j["weight"] = in.weight;
    j["threads"] = threads;
    return j;
}

Json graph_json(const InputOptions& in, const SimilarityGraph& graph, const HubReport& hub) {
    Json j;
    j["type"] = in.graph;
    j["k"] = in.graph == "edgelist" ? Json(nullptr) : Json(in.k);
    j["n_edges"] = graph.edge_count();
    j["d_max"] = hub.d_max;
    return j;
}

Json hub_json(const HubReport& hub) {
    Json j;
    j["d_max"] = hub.d_max;
    j["p95_degree"] = hub.p95_degree;
    j["sum_sq_degrees"] = hub.sum_sq_degrees;
    j["C"] = hub.shared_pairs;
    return j;
}

Json ratios_json(const ConditionReport& c) {
    Json j;
    j["ratio_ii"] = num(c.ratio_ii);
    j["ratio_iii"] = num(c.ratio_iii);
    j["ratio_iv"] = num(c.ratio_iv);
    return j;
}

Json well_defined_json(const WellDefinedReport& w) {
    Json j;
    j["well_defined"] = w.well_defined();
    j["condition_a"] = w.condition_a;
    j["condition_b"] = w.condition_b;
    j["node_sum_min"] = num(w.node_sum_min);
    j["node_sum_max"] = num(w.node_sum_max);
    j["condition_b_value"] = num(w.condition_b_value);
    return j;
}

std::string failed_conditions(const WellDefinedReport& w) {
    std::string s;
    if (!w.condition_a) s += "condition (a) fails: every node has the same incident weight sum, Z_diff has no variance";
    if (!w.condition_b) {
        if (!s.empty()) s += "; ";
        s += "condition (b) fails: (N-3)S1 - S2 + 2S3/(N-1) <= 0, Z_w has no variance";
    }
    return s;
}

std::vector<std::string> weight_warnings(const WeightedGraph& graph) {
    std::vector<std::string> out;
    const double lbr = lower_bound_ratio(graph);
    if (lbr < kLowerBoundWarn) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "lower_bound_ratio %.3g < %.2g: smallest weight is far below 1/|G|, asymptotic p-values may "
                      "be unreliable",
                      lbr, kLowerBoundWarn);
        out.emplace_back(buf);
    }
    return out;
}

std::vector<StatisticKind> parse_stats(const std::string& list) {
    std::vector<StatisticKind> out;
    std::stringstream ss(list);
    for (std::string tok; std::getline(ss, tok, ',');) {
        if (tok.empty()) continue;
        StatisticKind kind;
        try {
            kind = parse_statistic(tok);
        } catch (const Error&) {
            throw UsageError("--stat: unknown statistic '" + tok + "' (expected sr, mr, s, m)");
        }
        if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
    }
    if (out.empty()) throw UsageError("--stat: no statistics given");
    return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw UsageError("cannot write '" + path + "'");
    file << text;
}

int cmd_test(const InputOptions& in, const TestOptions& t, std::ostream& out, std::ostream& err) {
    validate(in, true);
    const auto kinds = parse_stats(t.stat);
    if (!(t.alpha > 0.0 && t.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    const int threads = requested_threads(in.threads);

    LoadedGraph g = load(in, threads);
    const LabelVector labels(std::move(*g.labels));
    const WeightedGraph& weighted = g.weighted;
    const SimilarityGraph& graph = weighted.graph();

    bool need_weighted = false;
    bool need_unit = false;
    for (auto k : kinds) (uses_unit_weights(k) ? need_unit : need_weighted) = true;

    std::optional<WeightedGraph> unit;
    if (need_unit) unit = unit_weighted(weighted);
    auto check = [&](const WeightedGraph& wg, const std::string& name) {
        const auto report = well_definedness(wg, labels.n1(), labels.n2());
        if (!report.well_defined()) {
            err << "rgtest: ill-conditioned graph (weight " << name << "): " << failed_conditions(report) << '\n';
            return false;
        }
        return true;
    };
    if (need_weighted && !check(weighted, g.weight_name)) return exit_ill_conditioned;
    if (need_unit && !check(*unit, "none")) return exit_ill_conditioned;

    PermutationOptions popts;
    popts.permutations = t.nperm;
    popts.seed = t.seed;
    popts.threads = threads;
    const auto reports = permutation_pvalues(weighted, labels, kinds, popts);

    const HubReport hub = hub_report(graph);
    const ConditionReport cond_w = condition_report(weighted, labels.n1());
    std::optional<ConditionReport> cond_u;
    if (unit) cond_u = condition_report(*unit, labels.n1());

    Json doc;
    doc["command"] = "test";
    Json config = input_json(in, threads);
    Json stats = Json::array();
    for (auto k : kinds) stats.push_back(std::string(to_token(k)));
    config["statistics"] = stats;
    config["nperm"] = t.nperm;
    config["alpha"] = num(t.alpha);
    config["seed"] = t.seed;
    doc["config"] = config;

    Json results = Json::array();
    for (const auto& r : reports) {
        const bool u = uses_unit_weights(r.kind);
        Json j;
        j["statistic"] = std::string(to_string(r.kind));
        j["value"] = num(r.value);
        j["p_perm"] = num(r.p_perm);
        j["p_asym"] = num(r.p_asym);
        j["n_perm"] = r.n_perm;
        j["seed"] = r.seed;
        j["n1"] = r.n1;
        j["n2"] = r.n2;
        j["graph"] = graph_json(in, graph, hub);
        j["weight"] = u ? "none" : g.weight_name;
        j["conditions"] = ratios_json(u ? *cond_u : cond_w);
        results.push_back(j);
    }
    doc["results"] = results;
    doc["hub"] = hub_json(hub);
    doc["lower_bound_ratio"] = num(lower_bound_ratio(weighted));

    auto warnings = g.warnings;
    for (auto& w : weight_warnings(weighted)) warnings.push_back(std::move(w));
    doc["warnings"] = warnings;

    emit(doc.dump(2) + "\n", in.out, out);
    return exit_ok;
}

int cmd_diagnose(const InputOptions& in, std::ostream& out) {
    validate(in, false);
    const int threads = requested_threads(in.threads);
    LoadedGraph g = load(in, threads);
    const WeightedGraph& weighted = g.weighted;
    const SimilarityGraph& graph = weighted.graph();
    const std::size_t n = graph.node_count();

    std::optional<std::size_t> n1;
    if (g.labels) n1 = LabelVector(std::move(*g.labels)).n1();
    // Condition ratios and well-definedness do not depend on the split.
    const std::size_t split = n1.value_or(n / 2);

    const HubReport hub = hub_report(graph);
    const ConditionReport cond = condition_report(weighted, split);
    const WellDefinedReport wd = well_definedness(weighted, split, n - split);

    Json doc;
    doc["command"] = "diagnose";
    doc["config"] = input_json(in, threads);
    Json gj;
    gj["type"] = in.graph;
    gj["k"] = in.graph == "edgelist" ? Json(nullptr) : Json(in.k);
    gj["n_nodes"] = n;
    gj["n_edges"] = graph.edge_count();
    doc["graph"] = gj;
    doc["weight"] = g.weight_name;
    doc["n1"] = n1 ? Json(*n1) : Json(nullptr);
    doc["n2"] = n1 ? Json(n - *n1) : Json(nullptr);
    doc["hub"] = hub_json(hub);

    Json cj;
    cj["n1_fraction"] = n1 ? num(cond.n1_fraction) : Json(nullptr);
    cj["edges_per_node"] = num(cond.edges_per_node);
    cj["edges_per_n125"] = num(cond.edges_per_n125);
    cj["denser_than_n125"] = cond.denser_than_n125;
    cj["ratio_ii"] = num(cond.ratio_ii);
    cj["ratio_iii"] = num(cond.ratio_iii);
    cj["ratio_iv"] = num(cond.ratio_iv);
    doc["conditions"] = cj;
    doc["well_defined"] = well_defined_json(wd);
    doc["lower_bound_ratio"] = num(lower_bound_ratio(weighted));

    auto warnings = g.warnings;
    if (!wd.well_defined()) warnings.push_back("ill-conditioned graph: " + failed_conditions(wd));
    for (auto& w : weight_warnings(weighted)) warnings.push_back(std::move(w));
    doc["warnings"] = warnings;

    emit(doc.dump(2) + "\n", in.out, out);
    return exit_ok;
}

int cmd_simulate(const std::string& path, int threads_flag, const std::string& out_path, std::ostream& out) {
    SimConfig cfg = load_sim_config(path);
    const int threads = requested_threads(threads_flag);
    if (threads > 0) cfg.threads = threads;
    const PowerTable table = power_study(cfg);
    emit("# config: " + to_json(cfg).dump() + "\n" + power_table_csv(table), out_path, out);
    return exit_ok;
}

int cmd_oracle_check(const OracleCheckOptions& opts, std::ostream& out) {
    const OracleCheckResult result = oracle_check(opts);
    double worst = 0.0;
    for (const auto& c : result.cases) {
        worst = std::max(worst, c.max_rel_error());
        if (c.ok()) continue;
        out << "FAIL " << c.description << '\n';
        for (const auto& m : c.comparisons) {
            if (m.ok) continue;
            char buf[200];
            std::snprintf(buf, sizeof buf, "  %s mismatch: closed form %.17g, enumerated %.17g, rel error %.3g\n",
                          m.quantity.c_str(), m.closed_form, m.enumerated, m.rel_error);
            out << buf;
        }
        out << "  graph (i j w):\n";
        std::istringstream dump(c.graph_dump);
        for (std::string line; std::getline(dump, line);) out << "    " << line << '\n';
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "oracle-check: %zu cases, %zu failures, max rel error %.3g (tolerance %.0e)\n",
                  result.cases.size(), result.failures(), worst, kOracleRelTol);
    out << buf;
    return result.failures() == 0 ? exit_ok : exit_oracle;
}

void add_input_options(CLI::App& sub, InputOptions& in) {
    sub.add_option("--data", in.data, "observations CSV, one row per observation");
    sub.add_option("--dist", in.dist, "precomputed N x N distance matrix CSV");
    sub.add_option("--edges", in.edges, "edge list: 'i j' or 'i j w' per line");
    sub.add_option("--labels", in.labels, "labels CSV, one 0/1 per row");
    sub.add_option("--metric", in.metric, "distance metric")->check(CLI::IsMember({"l1", "l2"}));
    sub.add_option("--graph", in.graph, "similarity graph")->check(CLI::IsMember({"kmst", "knn", "edgelist"}));
    sub.add_option_function<std::size_t>(
        "--k", [&in](const std::size_t& k) { in.k = k, in.k_given = true; }, "k for kmst/knn (default 5)");
    sub.add_option_function<std::string>(
        "--weight", [&in](const std::string& w) { in.weight = w, in.weight_given = true; },
        "edge weight (default w1)")
        ->check(CLI::IsMember({"w1", "w2", "w3", "none"}));
    sub.add_flag("--header", in.header, "input CSVs start with a header row");
    sub.add_option("--threads", in.threads, "worker threads (default: RGTEST_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
    sub.add_option("--out", in.out, "write output here instead of stdout");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust graph-based two-sample tests", "rgtest"};
    app.require_subcommand(1);

    InputOptions test_in;
    TestOptions test_opts;
    auto* test = app.add_subcommand("test", "run the two-sample test");
    add_input_options(*test, test_in);
    test->add_option("--stat", test_opts.stat, "comma list of sr, mr, s, m (default sr,mr)");
    test->add_option("--nperm", test_opts.nperm, "permutations (default 10000)");
    test->add_option("--alpha", test_opts.alpha, "significance level (default 0.05)");
    test->add_option("--seed", test_opts.seed, "permutation seed (default 42)");

    InputOptions diag_in;
    auto* diagnose = app.add_subcommand("diagnose", "hub, condition and well-definedness diagnostics");
    add_input_options(*diagnose, diag_in);

    std::string sim_path;
    std::string sim_out;
    int sim_threads = 0;
    auto* simulate = app.add_subcommand("simulate", "run a power study from a JSON config");
    simulate->add_option("config", sim_path, "simulation config JSON")->required();
    simulate->add_option("--threads", sim_threads, "worker threads")->check(CLI::NonNegativeNumber);
    simulate->add_option("--out", sim_out, "write CSV here instead of stdout");

    OracleCheckOptions oracle_opts;
    std::string fault;
    auto* oracle = app.add_subcommand("oracle-check", "compare closed-form null moments with enumeration");
    oracle->add_option("--graphs", oracle_opts.graphs, "random graphs (default 50)");
    oracle->add_option("--seed", oracle_opts.seed, "generator seed (default 1)");
    oracle->add_option("--inject-fault", fault, "deliberate bug, for testing the check")
        ->check(CLI::IsMember({"s2-double-count"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*test) return cmd_test(test_in, test_opts, out, err);
        if (*diagnose) return cmd_diagnose(diag_in, out);
        if (*simulate) return cmd_simulate(sim_path, sim_threads, sim_out, out);
        oracle_opts.inject_s2_double_count = fault == "s2-double-count";
        return cmd_oracle_check(oracle_opts, out);
    } catch (const UsageError& e) {
        err << "rgtest: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "rgtest: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "rgtest: " << e.what() << '\n';
        return exit_internal;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"rgtest"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rgtest::cli
