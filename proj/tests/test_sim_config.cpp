#include "doctest.h"
#include "rgtest/error.hpp"
#include "rgtest/sim_config.hpp"
#include "support.hpp"

using namespace rgtest;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
        "scenario": "t",
        "x": {"family": "gaussian", "dim": 4},
        "y": {"family": "gaussian", "dim": 4, "mean_shift": 0.5, "scale": 1.1},
        "n1": 10, "n2": 12,
        "graph": {"kind": "knn", "k": 3, "metric": "l1"},
        "weights": ["w1", "w3"],
        "statistics": ["s", "sr", "m", "mr"],
        "nperm": 99, "alpha": 0.1, "trials": 7, "seed": 3,
        "inject_gamma": 0.2
    })");
}

std::string config_error(const json& doc) {
    try {
        parse_sim_config(doc);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
        return e.what();
    }
    FAIL("expected a config error");
    return {};
}

}  // namespace

TEST_SUITE("sim_config") {

TEST_CASE("parses every field") {
    const auto c = parse_sim_config(minimal());
    CHECK(c.scenario == "t");
    CHECK(c.y.mean_shift == 0.5);
    CHECK(c.n2 == 12);
    CHECK(c.graph.kind == GraphKind::knn);
    CHECK(c.graph.metric == Metric::l1);
    CHECK(c.weights == std::vector<WeightKind>{WeightKind::w1, WeightKind::w3});
    CHECK(c.statistics.size() == 4);
    CHECK(c.permutations == 99);
    CHECK(c.trials == 7);
    CHECK(c.inject_gamma == 0.2);
}

TEST_CASE("round trips through to_json") {
    const auto c = parse_sim_config(minimal());
    const auto d = parse_sim_config(to_json(c));
    CHECK(to_json(c) == to_json(d));
}

TEST_CASE("trials = 0 is a config error") {
    auto doc = minimal();
    doc["trials"] = 0;
    CHECK(config_error(doc).find("trials must be >= 1") != std::string::npos);
}

TEST_CASE("lists every problem at once") {
    auto doc = minimal();
    doc["trials"] = 0;
    doc["bogus"] = 1;
    doc["alpha"] = "high";
    doc["x"]["family"] = "cauchy";
    doc["weights"] = {"w9"};
    const auto msg = config_error(doc);
    CHECK(msg.find("trials") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("alpha") != std::string::npos);
    CHECK(msg.find("cauchy") != std::string::npos);
    CHECK(msg.find("w9") != std::string::npos);
}

TEST_CASE("missing samples") {
    CHECK(config_error(json::object()).find("missing 'x'") != std::string::npos);
}

TEST_CASE("mvt df validation") {
    auto doc = minimal();
    doc["y"]["family"] = "mvt";
    doc["y"]["df"] = 2;
    CHECK(config_error(doc).find("df") != std::string::npos);
}

TEST_CASE("missing file") {
    CHECK(kind_of([] { load_sim_config("/nonexistent/config.json"); }) == ErrorKind::config);
}

}  // TEST_SUITE
