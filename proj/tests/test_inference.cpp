#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rgtest/distributions.hpp"
#include "rgtest/inference.hpp"
#include "support.hpp"

using namespace rgtest;

namespace {

const SimilarityGraph kPath4(4, {{0, 1}, {1, 2}, {2, 3}});

WeightedGraph random_weighted(std::size_t n, double density, std::uint64_t seed) {
    const auto g = oracle::random_graph(n, density, seed);
    return WeightedGraph(g, oracle::random_weights(g.edge_count(), seed));
}

LabelVector balanced_shuffled(std::size_t n1, std::size_t n2, std::uint64_t seed) {
    std::vector<std::uint8_t> l(n1 + n2, 1);
    std::fill_n(l.begin(), n1, std::uint8_t{0});
    std::shuffle(l.begin(), l.end(), CounterEngine(seed, 9));
    return LabelVector(std::move(l));
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("statistic kind names and tokens") {
    for (auto k : {StatisticKind::s_r, StatisticKind::m_r, StatisticKind::s, StatisticKind::m, StatisticKind::z_diff,
                   StatisticKind::z_w}) {
        CHECK(parse_statistic(to_token(k)) == k);
    }
    CHECK(to_string(StatisticKind::s_r) == "S_R");
    CHECK(uses_unit_weights(StatisticKind::s));
    CHECK_FALSE(uses_unit_weights(StatisticKind::m_r));
    CHECK(kind_of([] { parse_statistic("q"); }) == ErrorKind::config);
}

TEST_CASE("add-one p-value convention") {
    const std::vector<double> flat(50, 2.0);
    CHECK(add_one_pvalue(flat, 2.0) == 1.0);
    const std::vector<double> low(99, 1.0);
    CHECK(add_one_pvalue(low, 5.0) == doctest::Approx(0.01));
    // A null value a hair below the observed one counts as a tie.
    CHECK(add_one_pvalue(std::vector<double>{3.0 * (1 - 1e-13)}, 3.0) == 1.0);
}

TEST_CASE("exact null on the four-node path") {
    const auto g = assign_weights(kPath4, WeightKind::unit);
    const auto ex = exact_null(g, 2);
    CHECK(ex.labelings == 6);
    CHECK(ex.mean_r1w == doctest::Approx(0.5));
    CHECK(ex.var_r1w == doctest::Approx(0.25));
    CHECK(ex.cov_r12 == doctest::Approx(1.0 / 12.0));
    CHECK_FALSE(ex.degenerate);

    auto sr = ex.distribution(StatisticKind::s_r);
    std::sort(sr.begin(), sr.end());
    REQUIRE(sr.size() == 6);
    for (int t = 0; t < 4; ++t) CHECK(sr[t] == doctest::Approx(1.5).epsilon(1e-12));
    for (int t = 4; t < 6; ++t) CHECK(sr[t] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(exact_pvalue(ex, StatisticKind::s_r, 3.0) == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("exact null small cases") {
    const auto p3 = exact_null(assign_weights(SimilarityGraph(3, {{0, 1}, {1, 2}}), WeightKind::unit), 1);
    CHECK(p3.labelings == 3);
    CHECK(p3.mean_r2w == doctest::Approx(2.0 / 3.0));
    CHECK(p3.degenerate);

    const auto all = exact_null(assign_weights(kPath4, WeightKind::unit), 4);
    CHECK(all.labelings == 1);
    CHECK(all.var_r1w == 0.0);
    CHECK(all.degenerate);
}

TEST_CASE("exact null budget") {
    const auto g = assign_weights(oracle::random_graph(20, 0.1, 1), WeightKind::unit);
    CHECK(kind_of([&] { exact_null(g, 10); }) == ErrorKind::budget_exceeded);
    CHECK_NOTHROW(exact_null(assign_weights(oracle::random_graph(14, 0.2, 1), WeightKind::unit), 7));
}

TEST_CASE("exact null matches independent enumeration and has orthogonal scores") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 6 + seed % 5;
        const auto wg = random_weighted(n, 0.3, 300 + seed);
        const std::size_t n1 = 2 + seed % (n - 3);
        const auto ex = exact_null(wg, n1);
        const auto bf = oracle::enumerate(n, oracle::edges_of(wg.graph()),
                                          std::vector<double>(wg.weights().begin(), wg.weights().end()), n1);
        CHECK(ex.labelings == bf.labelings);
        CHECK(oracle::rel_close(ex.mean_r1w, static_cast<double>(bf.m1), 1e-12));
        CHECK(oracle::rel_close(ex.var_r1w, static_cast<double>(bf.v1), 1e-10));
        CHECK(oracle::rel_close(ex.cov_r12, static_cast<double>(bf.c12), 1e-10, 1e-12));
        REQUIRE_FALSE(ex.degenerate);

        double mz = 0, mw = 0;
        for (const auto& z : ex.scores) mz += z.z_diff, mw += z.z_w;
        mz /= static_cast<double>(ex.scores.size());
        mw /= static_cast<double>(ex.scores.size());
        double cov = 0;
        for (const auto& z : ex.scores) cov += (z.z_diff - mz) * (z.z_w - mw);
        cov /= static_cast<double>(ex.scores.size());
        CHECK(std::abs(cov) <= 1e-10);
    }
}

TEST_CASE("asymptotic p-values") {
    CHECK(asym_pvalue_sr(0.0) == 1.0);
    CHECK(asym_pvalue_sr(4.3331) == doctest::Approx(0.114572209970820).epsilon(1e-12));
    CHECK(asym_pvalue_sr(17.6591) == doctest::Approx(1.46344079505099e-4).epsilon(1e-12));
    CHECK(kind_of([] { asym_pvalue_sr(-1.0); }) == ErrorKind::invalid_input);
    CHECK(asym_pvalue_mr(0.0) == 1.0);
    CHECK(asym_pvalue_mr(-2.0) == 1.0);
    CHECK(asym_pvalue_mr(3.3433) == doctest::Approx(0.00124148250106216).epsilon(1e-10));
    CHECK(asym_pvalue_mr(1.7645) == doctest::Approx(0.113457159860192).epsilon(1e-10));
    CHECK(asym_pvalue(StatisticKind::z_w, 1.6448536269514727) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("asymptotic p-values are monotone") {
    double prev_s = 2.0;
    double prev_m = 2.0;
    for (double x = 0.0; x < 40.0; x += 0.05) {
        const double s = asym_pvalue_sr(x);
        const double m = asym_pvalue_mr(x);
        CHECK(s < prev_s);
        CHECK(m <= prev_m);
        prev_s = s;
        prev_m = m;
    }
    CHECK(asym_pvalue_mr(1e-9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("condition report examples") {
    const auto path = condition_report(assign_weights(kPath4, WeightKind::unit), 2);
    CHECK(path.ratio_iii == doctest::Approx(17.0 / 6.0).epsilon(1e-14));
    CHECK(path.ratio_iv == doctest::Approx(21.0 / std::pow(3.0, 1.5)).epsilon(1e-14));
    CHECK(path.n1_fraction == 0.5);
    CHECK(path.n_edges == 3);

    const auto one = condition_report(assign_weights(SimilarityGraph(2, {{0, 1}}), WeightKind::unit), 1);
    CHECK(one.ratio_iii == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(one.ratio_iv == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("condition ratios are bounded and scale-free") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto wg = random_weighted(12 + seed, 0.2, seed);
        const auto r = condition_report(wg, 6);
        CHECK(r.ratio_ii >= 0.0);
        CHECK(r.ratio_ii <= 1.0);
        CHECK(std::isfinite(r.ratio_iii));
        CHECK(std::isfinite(r.ratio_iv));
        std::vector<double> scaled(wg.weights().begin(), wg.weights().end());
        for (auto& w : scaled) w *= 0.03;
        const auto s = condition_report(WeightedGraph(wg.graph(), scaled), 6);
        CHECK(oracle::rel_close(s.ratio_ii, r.ratio_ii, 1e-10, 1e-14));
        CHECK(oracle::rel_close(s.ratio_iii, r.ratio_iii, 1e-10));
        CHECK(oracle::rel_close(s.ratio_iv, r.ratio_iv, 1e-10));
    }
}

TEST_CASE("permutation p-value on the four-node path approaches the exact value") {
    const auto g = assign_weights(kPath4, WeightKind::unit);
    PermutationOptions opts;
    opts.permutations = 20000;
    opts.seed = 3;
    const auto r = permutation_pvalue(g, LabelVector({0, 1, 1, 0}), StatisticKind::s_r, opts);
    CHECK(r.value == doctest::Approx(3.0));
    CHECK(r.p_perm.value() == doctest::Approx(1.0 / 3.0).epsilon(0.03));
    CHECK(*r.p_perm == doctest::Approx((1.0 + static_cast<double>(r.exceedances)) / 20001.0).epsilon(1e-15));
    CHECK(r.p_asym.value() == doctest::Approx(std::exp(-1.5)));
    CHECK(r.n1 == 2);
    CHECK(r.n_perm == 20000);
}

TEST_CASE("an extreme observation gets p = 1/(1+B)") {
    // Two well-separated clusters: every relabeling mixes them.
    const std::size_t n = 30;
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < 15; ++i)
            for (std::size_t j = i + 1; j < 15; ++j)
                if ((i + j) % 3 != 0) edges.push_back({c * 15 + i, c * 15 + j});
    edges.push_back({0, 15});
    const auto g = assign_weights(SimilarityGraph(n, edges), WeightKind::w1);
    PermutationOptions opts;
    opts.permutations = 500;
    const auto r = permutation_pvalue(g, LabelVector::split(15, 15), StatisticKind::s_r, opts);
    CHECK(r.exceedances == 0);
    CHECK(*r.p_perm == doctest::Approx(1.0 / 501.0));
}

TEST_CASE("permutation p-values refuse ill-conditioned graphs") {
    const SimilarityGraph cycle(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const StatisticKind kinds[] = {StatisticKind::s_r};
    CHECK(kind_of([&] {
              permutation_pvalues(assign_weights(cycle, WeightKind::w1), LabelVector::split(2, 2), kinds, {});
          }) == ErrorKind::ill_conditioned);
}

TEST_CASE("permutation reports are identical for any thread count") {
    const auto wg = random_weighted(60, 0.08, 42);
    const auto labels = balanced_shuffled(30, 30, 1);
    const StatisticKind kinds[] = {StatisticKind::s_r, StatisticKind::m_r, StatisticKind::s, StatisticKind::m,
                                   StatisticKind::z_diff, StatisticKind::z_w};
    PermutationOptions a;
    a.permutations = 400;
    a.seed = 11;
    a.threads = 1;
    PermutationOptions b = a;
    b.threads = 4;
    const auto ra = permutation_pvalues(wg, labels, kinds, a);
    const auto rb = permutation_pvalues(wg, labels, kinds, b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].value == rb[i].value);
        CHECK(ra[i].exceedances == rb[i].exceedances);
        CHECK(*ra[i].p_perm == *rb[i].p_perm);
    }
    // Shared relabelings: the single-statistic call reproduces the batch.
    const auto single = permutation_pvalue(wg, labels, StatisticKind::m, a);
    CHECK(single.exceedances == ra[3].exceedances);
}

TEST_CASE("permutation p-values are super-uniform under the null") {
    const std::size_t trials = 500;
    std::size_t hits[3] = {0, 0, 0};
    const double alphas[3] = {0.01, 0.05, 0.10};
    for (std::size_t t = 0; t < trials; ++t) {
        CounterEngine eng(77, t);
        std::normal_distribution<double> z;
        std::vector<double> v(40 * 3);
        for (auto& x : v) x = z(eng);
        const auto d = distance_matrix(DataMatrix(40, 3, v), Metric::l2);
        const auto g = assign_weights(kmst(d, 3), WeightKind::w1);
        PermutationOptions opts;
        opts.permutations = 199;
        opts.seed = derive_seed(99, t);
        opts.threads = 1;
        const auto r = permutation_pvalue(g, LabelVector::split(20, 20), StatisticKind::s_r, opts);
        for (int a = 0; a < 3; ++a) hits[a] += *r.p_perm <= alphas[a];
    }
    for (int a = 0; a < 3; ++a) {
        const double rate = static_cast<double>(hits[a]) / trials;
        const double se = std::sqrt(alphas[a] * (1 - alphas[a]) / trials);
        CAPTURE(alphas[a]);
        CAPTURE(rate);
        CHECK(std::abs(rate - alphas[a]) <= 3 * se);
    }
}

TEST_CASE("critical values") {
    CHECK(chi2_2df_upper_quantile(0.05) == doctest::Approx(5.991464547107979).epsilon(1e-14));
    CHECK(normal_upper_quantile(0.05) == doctest::Approx(1.6448536269514727).epsilon(1e-12));
    for (double alpha : {0.01, 0.05, 0.1}) {
        CHECK(asym_pvalue_mr(mr_critical_value(alpha)) == doctest::Approx(alpha).epsilon(1e-9));
    }
    CHECK(kind_of([] { upper_quantile({1, 2, 3}, 0.0); }) == ErrorKind::invalid_input);
    CHECK(kind_of([] { upper_quantile({1, 2, 3}, 1.0); }) == ErrorKind::invalid_input);
    // nearest rank: ceil(0.9 * 10) = 9th smallest
    CHECK(upper_quantile({10, 9, 8, 7, 6, 5, 4, 3, 2, 1}, 0.1) == 9.0);
}

TEST_CASE("critical gap on the four-node path") {
    PermutationOptions opts;
    opts.permutations = 3000;
    const auto gaps = critical_gap(assign_weights(kPath4, WeightKind::unit), 2, 0.05, opts);
    REQUIRE(gaps.size() == 4);
    CHECK(gaps[0].kind == StatisticKind::z_diff);
    CHECK(gaps[1].kind == StatisticKind::z_w);
    CHECK(gaps[2].kind == StatisticKind::s_r);
    CHECK(gaps[3].kind == StatisticKind::m_r);
    CHECK(gaps[2].asymptotic == doctest::Approx(5.991464547107979));
    CHECK(gaps[2].permutation == doctest::Approx(3.0));
    CHECK(gaps[2].gap == doctest::Approx(5.991464547107979 - 3.0));
    CHECK(gaps[0].asymptotic == doctest::Approx(1.6448536269514727));
    CHECK(kind_of([] { critical_gap(assign_weights(kPath4, WeightKind::unit), 2, 1.5, {}); }) ==
          ErrorKind::invalid_input);
}

TEST_CASE("unit weighted copy") {
    const auto wg = random_weighted(10, 0.3, 5);
    const auto u = unit_weighted(wg);
    CHECK(u.edge_count() == wg.edge_count());
    for (double w : u.weights()) CHECK(w == 1.0);
}

}  // TEST_SUITE
