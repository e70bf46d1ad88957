#include "rgtest/sim_config.hpp"

#include <fstream>
#include <set>

#include "rgtest/error.hpp"

namespace rgtest {

namespace {

using nlohmann::json;

// Collects schema problems instead of stopping at the first one.
class Reader {
public:
    explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

    void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
        if (!obj.is_object()) {
            problems_.push_back(where + ": expected an object");
            return;
        }
        std::set<std::string> known(allowed.begin(), allowed.end());
        for (const auto& [key, value] : obj.items()) {
            if (!known.count(key)) problems_.push_back(where + ": unknown key '" + key + "'");
        }
    }

    template <typename T>
    void read(const json& obj, const char* key, const std::string& where, T& out) {
        if (!obj.is_object() || !obj.contains(key)) return;
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            problems_.push_back(where + "." + key + ": wrong type");
        }
    }

    template <typename F>
    void guarded(const std::string& where, F&& f) {
        try {
            f();
        } catch (const Error& e) {
            problems_.push_back(where + ": " + e.what());
        } catch (const json::exception&) {
            problems_.push_back(where + ": wrong type");
        }
    }

private:
    std::vector<std::string>& problems_;
};

DistributionSpec read_distribution(const json& obj, const std::string& where, Reader& in) {
    DistributionSpec spec;
    in.check_keys(obj, where, {"family", "dim", "mean_shift", "scale", "blocks", "df", "noncentrality"});
    if (!obj.is_object()) return spec;
    in.guarded(where + ".family", [&] {
        if (obj.contains("family")) spec.family = parse_family(obj.at("family").get<std::string>());
    });
    in.read(obj, "dim", where, spec.dim);
    in.read(obj, "mean_shift", where, spec.mean_shift);
    in.read(obj, "scale", where, spec.scale);
    in.read(obj, "df", where, spec.df);
    in.read(obj, "noncentrality", where, spec.noncentrality);
    in.guarded(where + ".blocks", [&] {
        if (!obj.contains("blocks")) return;
        for (const auto& b : obj.at("blocks")) {
            spec.blocks.push_back({b.at("count").get<std::size_t>(), b.at("sd").get<double>()});
        }
    });
    return spec;
}

}  // namespace

SimConfig parse_sim_config(const json& doc) {
    std::vector<std::string> problems;
    Reader in(problems);
    SimConfig cfg;
    in.check_keys(doc, "config", {"scenario", "x", "y", "n1", "n2", "graph", "weights", "statistics", "nperm", "alpha",
                                  "trials", "seed", "inject_gamma", "threads"});
    if (doc.is_object()) {
        in.read(doc, "scenario", "config", cfg.scenario);
        if (doc.contains("x")) {
            cfg.x = read_distribution(doc.at("x"), "x", in);
        } else {
            problems.emplace_back("config: missing 'x'");
        }
        if (doc.contains("y")) {
            cfg.y = read_distribution(doc.at("y"), "y", in);
        } else {
            problems.emplace_back("config: missing 'y'");
        }
        in.read(doc, "n1", "config", cfg.n1);
        in.read(doc, "n2", "config", cfg.n2);
        in.read(doc, "nperm", "config", cfg.permutations);
        in.read(doc, "alpha", "config", cfg.alpha);
        in.read(doc, "trials", "config", cfg.trials);
        in.read(doc, "seed", "config", cfg.seed);
        in.read(doc, "threads", "config", cfg.threads);
        if (doc.contains("inject_gamma") && !doc.at("inject_gamma").is_null()) {
            double gamma = 0.0;
            in.read(doc, "inject_gamma", "config", gamma);
            cfg.inject_gamma = gamma;
        }
        if (doc.contains("graph")) {
            const auto& g = doc.at("graph");
            in.check_keys(g, "graph", {"kind", "k", "metric"});
            in.guarded("graph.kind", [&] {
                if (g.contains("kind")) cfg.graph.kind = parse_graph_kind(g.at("kind").get<std::string>());
            });
            in.guarded("graph.metric", [&] {
                if (g.contains("metric")) cfg.graph.metric = parse_metric(g.at("metric").get<std::string>());
            });
            in.read(g, "k", "graph", cfg.graph.k);
        }
        in.guarded("weights", [&] {
            if (!doc.contains("weights")) return;
            cfg.weights.clear();
            for (const auto& w : doc.at("weights")) cfg.weights.push_back(parse_weight_kind(w.get<std::string>()));
        });
        in.guarded("statistics", [&] {
            if (!doc.contains("statistics")) return;
            cfg.statistics.clear();
            for (const auto& s : doc.at("statistics")) cfg.statistics.push_back(parse_statistic(s.get<std::string>()));
        });
    }
    for (auto& p : cfg.problems()) problems.push_back(std::move(p));

    if (!problems.empty()) {
        std::string message = "invalid simulation config:";
        for (const auto& p : problems) message += "\n  - " + p;
        throw Error(ErrorKind::config, message);
    }
    return cfg;
}

SimConfig load_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open simulation config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::config, path + ": " + e.what());
    }
    return parse_sim_config(doc);
}

json to_json(const DistributionSpec& spec) {
    json out{{"family", std::string(to_string(spec.family))},
             {"dim", spec.dim},
             {"mean_shift", spec.mean_shift},
             {"scale", spec.scale}};
    if (!spec.blocks.empty()) {
        json blocks = json::array();
        for (const auto& b : spec.blocks) blocks.push_back({{"count", b.count}, {"sd", b.sd}});
        out["blocks"] = blocks;
    }
    if (spec.family == Family::mvt) {
        out["df"] = spec.df;
        out["noncentrality"] = spec.noncentrality;
    }
    return out;
}

json to_json(const SimConfig& cfg) {
    json weights = json::array();
    for (auto w : cfg.weights) weights.push_back(std::string(to_string(w)));
    json stats = json::array();
    for (auto s : cfg.statistics) stats.push_back(std::string(to_token(s)));
    return json{{"scenario", cfg.scenario},
                {"x", to_json(cfg.x)},
                {"y", to_json(cfg.y)},
                {"n1", cfg.n1},
                {"n2", cfg.n2},
                {"graph",
                 {{"kind", std::string(to_string(cfg.graph.kind))},
                  {"k", cfg.graph.k},
                  {"metric", std::string(to_string(cfg.graph.metric))}}},
                {"weights", weights},
                {"statistics", stats},
                {"nperm", cfg.permutations},
                {"alpha", cfg.alpha},
                {"trials", cfg.trials},
                {"seed", cfg.seed},
                {"inject_gamma", cfg.inject_gamma ? json(*cfg.inject_gamma) : json(nullptr)}};
}

}  // namespace rgtest
