#include "rgtest/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <sstream>

#include "rgtest/error.hpp"
#include "rgtest/kernels.hpp"
#include "rgtest/rng.hpp"

namespace rgtest {

Family parse_family(std::string_view name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "lognormal") return Family::lognormal;
    if (name == "mvt") return Family::mvt;
    throw Error(ErrorKind::config, "unknown family '" + std::string(name) + "' (expected gaussian, lognormal, mvt)");
}

std::string_view to_string(Family family) noexcept {
    switch (family) {
        case Family::gaussian: return "gaussian";
        case Family::lognormal: return "lognormal";
        case Family::mvt: return "mvt";
    }
    return "?";
}

std::vector<std::string> DistributionSpec::problems() const {
    std::vector<std::string> out;
    if (dim < 1) out.emplace_back("dim must be >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale)) out.emplace_back("scale must be positive");
    if (!std::isfinite(mean_shift) || mean_shift < 0.0) out.emplace_back("mean_shift must be finite and >= 0");
    if (!blocks.empty()) {
        std::size_t total = 0;
        for (const auto& b : blocks) {
            total += b.count;
            if (!(b.sd > 0.0) || !std::isfinite(b.sd)) out.emplace_back("block sd must be positive");
        }
        if (total != dim) {
            out.push_back("block counts sum to " + std::to_string(total) + " but dim is " + std::to_string(dim));
        }
    }
    if (family == Family::mvt) {
        if (!(df > 2.0) || !std::isfinite(df)) out.push_back("df must exceed 2 for mvt, got " + std::to_string(df));
        if (!std::isfinite(noncentrality) || noncentrality < 0.0) out.emplace_back("noncentrality must be >= 0");
    }
    return out;
}

std::vector<double> DistributionSpec::coordinate_sd() const {
    std::vector<double> sd;
    sd.reserve(dim);
    if (blocks.empty()) {
        sd.assign(dim, scale);
    } else {
        for (const auto& b : blocks) sd.insert(sd.end(), b.count, b.sd * scale);
    }
    return sd;
}

DataMatrix generate_sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
    if (spec.family == Family::mvt && !(spec.df > 2.0)) {
        throw Error(ErrorKind::invalid_df, "mvt needs df > 2, got " + std::to_string(spec.df));
    }
    if (const auto issues = spec.problems(); !issues.empty()) throw Error(ErrorKind::config, issues.front());

    const std::size_t d = spec.dim;
    const auto sd = spec.coordinate_sd();
    const double offset = spec.mean_shift / std::sqrt(static_cast<double>(d));
    const double delta = spec.noncentrality / std::sqrt(static_cast<double>(d));

    CounterEngine engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::chi_squared_distribution<double> chi2(spec.family == Family::mvt ? spec.df : 1.0);

    std::vector<double> values(n * d);
    for (std::size_t r = 0; r < n; ++r) {
        double* row = values.data() + r * d;
        switch (spec.family) {
            case Family::gaussian:
                for (std::size_t k = 0; k < d; ++k) row[k] = offset + sd[k] * normal(engine);
                break;
            case Family::lognormal:
                for (std::size_t k = 0; k < d; ++k) row[k] = std::exp(offset + sd[k] * normal(engine));
                break;
            case Family::mvt: {
                for (std::size_t k = 0; k < d; ++k) row[k] = normal(engine) + delta;
                const double mixing = 1.0 / std::sqrt(chi2(engine) / spec.df);
                for (std::size_t k = 0; k < d; ++k) row[k] = offset + sd[k] * row[k] * mixing;
                break;
            }
        }
    }
    return DataMatrix(n, d, std::move(values));
}

DataMatrix inject_influential(const DataMatrix& sample, double gamma) {
    const std::size_t n = sample.rows();
    const std::size_t d = sample.cols();
    if (n < 2) throw Error(ErrorKind::invalid_input, "injection needs at least two observations");
    std::vector<double> centre(d, 0.0);
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t k = 0; k < d; ++k) centre[k] += sample(r, k);
    }
    for (auto& c : centre) c /= static_cast<double>(n - 1);

    std::vector<double> values(sample.values().begin(), sample.values().end());
    for (std::size_t k = 0; k < d; ++k) values[k] = centre[k] + gamma * (sample(0, k) - centre[k]);
    return DataMatrix(n, d, std::move(values));
}

std::vector<std::string> SimConfig::problems() const {
    std::vector<std::string> out;
    for (const auto& p : x.problems()) out.push_back("x: " + p);
    for (const auto& p : y.problems()) out.push_back("y: " + p);
    if (x.dim != y.dim) out.emplace_back("x and y must share dim");
    if (n1 < 2) out.emplace_back("n1 must be >= 2");
    if (n2 < 2) out.emplace_back("n2 must be >= 2");
    if (graph.k < 1) out.emplace_back("graph.k must be >= 1");
    if (trials < 1) out.emplace_back("trials must be >= 1");
    if (permutations < 1) out.emplace_back("nperm must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) out.emplace_back("alpha must lie in (0, 1)");
    if (statistics.empty()) out.emplace_back("statistics must not be empty");
    const bool weighted = std::any_of(statistics.begin(), statistics.end(), [](auto k) { return !uses_unit_weights(k); });
    if (weighted && weights.empty()) out.emplace_back("weights must not be empty for sr/mr");
    if (inject_gamma && !(*inject_gamma >= 0.0 && *inject_gamma < 1.0)) out.emplace_back("inject_gamma must lie in [0, 1)");
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::string row_label(const PowerRow& row) {
    std::string label(to_string(row.statistic));
    if (!uses_unit_weights(row.statistic)) label += "(" + std::string(to_string(row.weight)) + ")";
    return label;
}

PowerTable power_study(const SimConfig& config) {
    if (const auto issues = config.problems(); !issues.empty()) {
        std::string message = "invalid simulation config:";
        for (const auto& p : issues) message += "\n  - " + p;
        throw Error(ErrorKind::config, message);
    }

    // row layout: unit-weight statistics once, weighted ones per weight
    PowerTable table;
    std::vector<StatisticKind> unit_kinds;
    std::vector<StatisticKind> weighted_kinds;
    for (const auto kind : config.statistics) {
        if (uses_unit_weights(kind)) {
            unit_kinds.push_back(kind);
            table.rows.push_back({config.scenario, kind, WeightKind::unit, 0, config.trials, 0, 0.0});
        } else {
            weighted_kinds.push_back(kind);
            for (const auto w : config.weights) table.rows.push_back({config.scenario, kind, w, 0, config.trials, 0, 0.0});
        }
    }
    auto row_index = [&](StatisticKind kind, WeightKind weight) {
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (table.rows[r].statistic == kind && (uses_unit_weights(kind) || table.rows[r].weight == weight)) return r;
        }
        return table.rows.size();
    };

    // outcome[t][r]: 1 reject, 0 accept, -1 ill-conditioned
    std::vector<std::vector<int>> outcome(config.trials, std::vector<int>(table.rows.size(), 0));
    table.dmax_per_trial.assign(config.trials, 0);
    std::exception_ptr failure;

    const auto trials = static_cast<std::ptrdiff_t>(config.trials);
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::resolve_threads(config.threads))
    for (std::ptrdiff_t st = 0; st < trials; ++st) {
        const auto t = static_cast<std::size_t>(st);
        try {
            const std::uint64_t trial_seed = derive_seed(config.seed, t);
            const DataMatrix xs = generate_sample(config.x, config.n1, derive_seed(trial_seed, 1));
            DataMatrix ys = generate_sample(config.y, config.n2, derive_seed(trial_seed, 2));
            if (config.inject_gamma) ys = inject_influential(ys, *config.inject_gamma);

            std::vector<double> pooled(xs.values().begin(), xs.values().end());
            pooled.insert(pooled.end(), ys.values().begin(), ys.values().end());
            const DataMatrix data(config.n1 + config.n2, config.x.dim, std::move(pooled));
            const DistanceMatrix dist = kernels::distance_matrix_serial(data, config.graph.metric);
            const SimilarityGraph graph = build_graph(dist, config.graph);
            const auto degrees = graph.degrees();
            table.dmax_per_trial[t] = *std::max_element(degrees.begin(), degrees.end());

            const LabelVector labels = LabelVector::split(config.n1, config.n2);
            const PermutationOptions options{config.permutations, derive_seed(trial_seed, 3), 1};

            auto run = [&](const WeightedGraph& gw, const std::vector<StatisticKind>& kinds, WeightKind weight) {
                if (kinds.empty()) return;
                try {
                    for (const auto& r : permutation_pvalues(gw, labels, kinds, options)) {
                        outcome[t][row_index(r.kind, weight)] = *r.p_perm < config.alpha ? 1 : 0;
                    }
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::ill_conditioned) throw;
                    for (const auto kind : kinds) outcome[t][row_index(kind, weight)] = -1;
                }
            };
            run(assign_weights(graph, WeightKind::unit), unit_kinds, WeightKind::unit);
            for (const auto w : config.weights) run(assign_weights(graph, w), weighted_kinds, w);
        } catch (...) {
#pragma omp critical(rgtest_power_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> dmax(table.dmax_per_trial.begin(), table.dmax_per_trial.end());
    const double med = median(std::move(dmax));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        auto& row = table.rows[r];
        row.median_dmax = med;
        for (std::size_t t = 0; t < config.trials; ++t) {
            if (outcome[t][r] == 1) ++row.rejections;
            if (outcome[t][r] == -1) ++row.errors;
        }
    }
    return table;
}

std::string power_table_csv(const PowerTable& table) {
    std::ostringstream out;
    out << "scenario,statistic,weight,rejections,trials,median_dmax\n";
    char buf[64];
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%.6g", row.median_dmax);
        out << row.scenario << ',' << to_string(row.statistic) << ','
            << (uses_unit_weights(row.statistic) ? std::string_view("none") : to_string(row.weight)) << ','
            << row.rejections << ',' << row.trials << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace rgtest
