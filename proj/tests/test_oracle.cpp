#include "doctest.h"
#include "rgtest/oracle.hpp"

using namespace rgtest;

TEST_SUITE("oracle") {

TEST_CASE("default oracle check passes") {
    const auto r = oracle_check({});
    CHECK(r.cases.size() == 50 * 5 + 1);
    CHECK(r.failures() == 0);
    for (const auto& c : r.cases) {
        CAPTURE(c.description);
        CHECK(c.comparisons.size() == 9);
        CHECK(c.max_rel_error() <= kOracleRelTol);
    }
}

TEST_CASE("injected S2 double count is caught as a Sigma11 mismatch") {
    OracleCheckOptions opts;
    opts.inject_s2_double_count = true;
    const auto r = oracle_check(opts);
    CHECK(r.failures() > 0);
    bool sigma11 = false;
    for (const auto& c : r.cases)
        for (const auto& m : c.comparisons) sigma11 |= m.quantity == "Sigma11" && !m.ok;
    CHECK(sigma11);
    CHECK_FALSE(r.cases.front().ok());
    CHECK(r.cases.front().graph_dump.find(' ') != std::string::npos);
}

TEST_CASE("path fixture reproduces the worked values") {
    const auto r = oracle_check({});
    const auto& fixture = r.cases.back();
    CHECK(fixture.description.find("path N=4") != std::string::npos);
    auto value = [&](const std::string& q) {
        for (const auto& m : fixture.comparisons)
            if (m.quantity == q) return m.closed_form;
        FAIL("missing quantity");
        return 0.0;
    };
    CHECK(value("mu1w") == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(value("Sigma11") == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(value("Sigma12") == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(value("var_diff") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(value("var_w") == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(fixture.ok());
}

TEST_CASE("different seeds draw different graphs") {
    OracleCheckOptions a;
    a.graphs = 3;
    OracleCheckOptions b = a;
    b.seed = 2;
    CHECK(oracle_check(a).cases[0].graph_dump != oracle_check(b).cases[0].graph_dump);
}

}  // TEST_SUITE
