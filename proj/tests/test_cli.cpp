#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rgtest/cli.hpp"
#include "rgtest/rng.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = rgtest::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("rgtest_cli_" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& body) const {
        const auto p = path_ / name;
        std::ofstream(p) << body;
        return p.string();
    }

private:
    fs::path path_;
};

std::string two_cluster_csv(std::size_t per_side, std::uint64_t seed) {
    rgtest::CounterEngine eng(seed);
    std::normal_distribution<double> z;
    std::ostringstream s;
    for (std::size_t i = 0; i < 2 * per_side; ++i) {
        const double shift = i < per_side ? 0.0 : 3.0;
        s << shift + z(eng) << ',' << z(eng) << ',' << z(eng) << '\n';
    }
    return s.str();
}

std::string labels_csv(std::size_t n1, std::size_t n2) {
    std::string s;
    for (std::size_t i = 0; i < n1; ++i) s += "0\n";
    for (std::size_t i = 0; i < n2; ++i) s += "1\n";
    return s;
}

std::vector<std::string> keys(const json& obj) {
    std::vector<std::string> k;
    for (const auto& [key, value] : obj.items()) k.push_back(key);
    return k;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("test subcommand JSON schema") {
    TempDir dir;
    const auto data = dir.file("x.csv", two_cluster_csv(15, 1));
    const auto labels = dir.file("g.csv", labels_csv(15, 15));
    const auto r = run({"test", "--data", data, "--labels", labels, "--nperm", "199", "--stat", "sr,mr,s,m", "--k", "3"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(keys(doc) == std::vector<std::string>{"command", "config", "results", "hub", "lower_bound_ratio", "warnings"});
    REQUIRE(doc["results"].size() == 4);
    const auto& sr = doc["results"][0];
    CHECK(keys(sr) == std::vector<std::string>{"statistic", "value", "p_perm", "p_asym", "n_perm", "seed", "n1", "n2",
                                               "graph", "weight", "conditions"});
    CHECK(sr["statistic"] == "S_R");
    CHECK(sr["weight"] == "w1");
    CHECK(sr["n_perm"] == 199);
    CHECK(sr["graph"]["n_edges"] == 3 * 29);
    CHECK(sr["p_perm"].get<double>() == doctest::Approx(1.0 / 200.0));
    CHECK(doc["results"][2]["weight"] == "none");
    CHECK(keys(doc["hub"]) == std::vector<std::string>{"d_max", "p95_degree", "sum_sq_degrees", "C"});
}

TEST_CASE("repeated runs are byte identical") {
    TempDir dir;
    const auto data = dir.file("x.csv", two_cluster_csv(10, 2));
    const auto labels = dir.file("g.csv", labels_csv(10, 10));
    const std::vector<std::string> args{"test", "--data", data, "--labels", labels, "--nperm", "300", "--k", "2"};
    const auto a = run(args);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    const auto b = run(threaded);
    REQUIRE(a.code == 0);
    CHECK(a.out == run(args).out);
    // The config echo records the thread count; results must not depend on it.
    CHECK(json::parse(a.out)["results"] == json::parse(b.out)["results"]);
}

TEST_CASE("output file") {
    TempDir dir;
    const auto data = dir.file("x.csv", two_cluster_csv(5, 3));
    const auto labels = dir.file("g.csv", labels_csv(5, 5));
    const auto out = dir.file("out.json", "");
    const auto r = run({"test", "--data", data, "--labels", labels, "--nperm", "50", "--k", "1", "--out", out});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    CHECK(json::parse(in)["command"] == "test");
}

TEST_CASE("one-sided labels are a data error") {
    TempDir dir;
    const auto data = dir.file("x.csv", two_cluster_csv(5, 4));
    const auto labels = dir.file("g.csv", labels_csv(10, 0));
    const auto r = run({"test", "--data", data, "--labels", labels, "--k", "1"});
    CHECK(r.code == 3);
    CHECK(r.err.find("n2 < 2") != std::string::npos);
}

TEST_CASE("ill-conditioned graphs exit 4 without NaN") {
    TempDir dir;
    const auto cycle = dir.file("c.txt", "0 1\n1 2\n2 3\n0 3\n");
    const auto star = dir.file("s.txt", "0 1\n0 2\n0 3\n");
    const auto labels = dir.file("g.csv", labels_csv(2, 2));
    for (const auto& edges : {cycle, star}) {
        const auto r = run({"test", "--edges", edges, "--graph", "edgelist", "--labels", labels});
        CHECK(r.code == 4);
        CHECK(r.out.find("nan") == std::string::npos);
        CHECK(r.err.find("ill-conditioned") != std::string::npos);
    }
    const auto a = run({"test", "--edges", cycle, "--graph", "edgelist", "--labels", labels});
    CHECK(a.err.find("condition (a)") != std::string::npos);
    const auto b = run({"test", "--edges", star, "--graph", "edgelist", "--labels", labels});
    CHECK(b.err.find("condition (b)") != std::string::npos);
}

TEST_CASE("diagnose reports the star hub") {
    TempDir dir;
    const auto star = dir.file("s.txt", "0 1\n0 2\n0 3\n");
    const auto labels = dir.file("g.csv", labels_csv(2, 2));
    const auto r = run({"diagnose", "--edges", star, "--graph", "edgelist", "--labels", labels});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["hub"]["d_max"] == 3);
    CHECK(doc["hub"]["C"] == 3);
    CHECK(doc["well_defined"]["condition_b"] == false);
    CHECK(doc["well_defined"]["well_defined"] == false);
    CHECK_FALSE(doc["warnings"].empty());
}

TEST_CASE("diagnose without labels") {
    TempDir dir;
    const auto data = dir.file("x.csv", two_cluster_csv(6, 5));
    const auto r = run({"diagnose", "--data", data, "--k", "2", "--weight", "w3"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["n1"].is_null());
    CHECK(doc["hub"]["d_max"].get<int>() >= 2);
    CHECK(doc["conditions"]["n1_fraction"].is_null());
    CHECK(doc["weight"] == "w3");
}

TEST_CASE("edge list with weights") {
    TempDir dir;
    const auto edges = dir.file("e.txt", "0 1 1\n1 2 2\n2 3 1\n3 4 0.5\n4 5 1\n");
    const auto labels = dir.file("g.csv", "0\n1\n0\n1\n0\n1\n");
    const auto r = run({"test", "--edges", edges, "--graph", "edgelist", "--labels", labels, "--nperm", "99"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["results"][0]["weight"] == "file");
}

TEST_CASE("usage errors exit 2") {
    TempDir dir;
    const auto data = dir.file("x.csv", two_cluster_csv(5, 6));
    const auto labels = dir.file("g.csv", labels_csv(5, 5));
    CHECK(run({}).code == 2);
    CHECK(run({"test", "--labels", labels}).code == 2);
    CHECK(run({"test", "--data", data}).code == 2);
    CHECK(run({"test", "--data", data, "--dist", data, "--labels", labels}).code == 2);
    CHECK(run({"test", "--data", data, "--labels", labels, "--weight", "w7"}).code == 2);
    CHECK(run({"test", "--data", data, "--labels", labels, "--stat", "zz"}).code == 2);
    CHECK(run({"test", "--data", data, "--labels", labels, "--graph", "edgelist"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("missing input files are data errors") {
    TempDir dir;
    const auto labels = dir.file("g.csv", labels_csv(5, 5));
    CHECK(run({"test", "--data", "/nonexistent.csv", "--labels", labels}).code == 3);
}

TEST_CASE("oracle-check exit codes") {
    const auto ok = run({"oracle-check", "--graphs", "6"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("0 failures") != std::string::npos);
    const auto bad = run({"oracle-check", "--graphs", "6", "--inject-fault", "s2-double-count"});
    CHECK(bad.code == 5);
    CHECK(bad.out.find("FAIL") != std::string::npos);
    CHECK(bad.out.find("Sigma11") != std::string::npos);
}

TEST_CASE("simulate writes CSV with a config comment") {
    TempDir dir;
    const auto cfg = dir.file("c.json", R"({
        "scenario": "tiny", "x": {"dim": 3}, "y": {"dim": 3, "mean_shift": 2.0},
        "n1": 8, "n2": 8, "graph": {"kind": "kmst", "k": 2}, "nperm": 49, "trials": 2,
        "statistics": ["sr"]
    })");
    const auto r = run({"simulate", cfg});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# config: {", 0) == 0);
    CHECK(r.out.find("\nscenario,statistic,weight,rejections,trials,median_dmax\n") != std::string::npos);
    CHECK(r.out.find("tiny,S_R,w1,") != std::string::npos);

    const auto zero = dir.file("z.json", R"({"x": {"dim": 3}, "y": {"dim": 3}, "trials": 0})");
    const auto z = run({"simulate", zero});
    CHECK(z.code == 2);
    CHECK(z.err.find("trials") != std::string::npos);
}

}  // TEST_SUITE
