// Acceptance suite: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; otherwise only the listed criterion numbers. Exit status is 0
// iff every criterion that ran passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nnlsm/binomial_oracle.hpp"
#include "nnlsm/experiment.hpp"
#include "nnlsm/experiment_config.hpp"
#include "nnlsm/market_models.hpp"
#include "support/engine_properties.hpp"
#include "support/net_oracles.hpp"

namespace {

using namespace nnlsm;
namespace fs = std::filesystem;

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string format(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

ExperimentConfig shipped(const std::string& name) { return load_config(fs::path(NNLSM_CONFIG_DIR) / (name + ".json")); }

TreeSpec geometric_tree(int dim, double vol, double rho, double strike, int steps) {
    const auto red = reduce_geometric_to_1d(BlackScholesSpec::uniform(dim, 100, vol, 0.0, 0.0488, rho));
    TreeSpec t;
    t.steps = steps;
    t.spot = red.spot;
    t.volatility = red.volatility;
    t.dividend = red.dividend;
    t.rate = 0.0488;
    t.strike = strike;
    t.maturity = 1.0;
    for (int k = 0; k <= 12; ++k) t.exercise_dates.push_back(k / 12.0);
    return t;
}

Outcome band(const ExperimentConfig& config, double lower, double upper) {
    const RunStats stats = run_experiment(config);
    const bool ok = stats.mean >= lower && stats.mean <= upper;
    return {ok, format("%s mean %.4f in [%.2f, %.2f] (std %.4f, R=%d, M=%zu)", config.name.c_str(), stats.mean, lower,
                      upper, stats.std_dev, config.repetitions, config.paths)};
}

Outcome gradient_oracle() {
    std::mt19937_64 gen(20240101);
    std::uniform_int_distribution<int> depth(2, 4), width(1, 16), input(1, 5);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto shape = NetworkShape::mlp(input(gen), depth(gen), width(gen));
        const auto params = nnlsm::testing::random_params(shape, gen);
        const Eigen::MatrixXd x = nnlsm::testing::random_normal(shape.input_dim(), 16, gen);
        const Eigen::VectorXd y = nnlsm::testing::random_normal(16, 1, gen);
        worst = std::max(worst, nnlsm::testing::gradient_relative_error(params, x, y, 0.3));
    }
    return {worst <= 1e-5, format("50 random nets, max relative error %.3e (<= 1e-5)", worst)};
}

Outcome crr_convergence() {
    double worst = 0.0;
    for (auto t : {geometric_tree(2, 0.2, 0.0, 100, 10000), geometric_tree(10, 0.3, 0.1, 115, 10000)}) {
        t.exercise_dates.clear();
        const double closed = bs_european_put(t.spot, t.strike, t.volatility, t.dividend, t.rate, t.maturity);
        worst = std::max(worst, std::abs(crr_bermudan_price(t) - closed));
    }
    return {worst <= 1e-3, format("European tree vs closed form at 1e4 steps, max |diff| %.2e (<= 1e-3)", worst)};
}

Outcome geometric_benchmarks() {
    const double two = crr_bermudan_price(geometric_tree(2, 0.2, 0.0, 100, 96000));
    const double ten = crr_bermudan_price(geometric_tree(10, 0.3, 0.1, 115, 96000));
    const bool ok = std::abs(two - 4.167) <= 5e-3 && std::abs(ten - 15.1858) <= 5e-3;
    return {ok, format("96000 steps: 2-d %.6f (4.167), 10-d %.6f (15.1858), tolerance 5e-3", two, ten)};
}

Outcome basket() {
    auto neural = shipped("basket_put");
    const Outcome nn = band(neural, 4.00, 4.20);
    auto poly = neural;
    poly.regressor.kind = RegressorConfig::Kind::polynomial;
    poly.regressor.degree = 3;
    poly.name = "basket_put_poly3";
    const Outcome ls = band(poly, 4.03, 4.19);
    return {nn.passed && ls.passed, nn.detail + "; " + ls.detail};
}

Outcome geometric_2d() {
    const auto config = shipped("geometric_2d");
    const RunStats stats = run_experiment(config);
    const double rel = std::abs(stats.mean - 4.167) / 4.167;
    return {rel <= 0.015, format("mean %.4f vs 4.167, relative gap %.4f (<= 0.015), std %.4f", stats.mean, rel, stats.std_dev)};
}

Outcome property_suite() {
    namespace props = nnlsm::testing;
    std::vector<std::string> failures;
    std::mt19937_64 gen(99);

    const PathSet paths = props::put_paths(200, 10, 1);
    std::vector<std::vector<RegressorPtr>> stacks;
    for (int i = 0; i < 1000; ++i) stacks.push_back(props::random_stack(10, gen));
    const std::size_t bound_bad = props::cascade_bound_violations(stacks, paths);
    if (bound_bad != 0) failures.push_back(format("cascade bound violated %zu times", bound_bad));

    const PathSet flip_paths = props::put_paths(1000, 10, 2);
    std::size_t flip_bad = 0, nontrivial = 0;
    for (int i = 0; i < 50; ++i) {
        const auto a = props::random_stack(10, gen);
        const auto check = props::flip_lemma_check(a, props::perturbed_stack(a, 2.0, gen), flip_paths);
        flip_bad += check.violations + check.zero_rhs_breaks;
        nontrivial += check.nontrivial;
    }
    if (flip_bad != 0 || nontrivial == 0) failures.push_back(format("flip lemma: %zu violations", flip_bad));

    // Pooled over the 20 seeds: a per-seed 3 SE check alarms about 5% of the time on an
    // unbiased estimator, so the per-seed outliers are only reported.
    double sum = 0.0, variance = 0.0, closed = 0.0;
    int outliers = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto check = props::single_date_put(100000, seed);
        sum += check.estimate;
        variance += check.standard_error * check.standard_error;
        closed = check.closed_form;
        if (!check.within(3.0)) ++outliers;
    }
    const double pooled_z = (sum / 20.0 - closed) / (std::sqrt(variance) / 20.0);
    if (std::abs(pooled_z) > 3.0) failures.push_back(format("N=1 pooled price %.2f SE from closed form", pooled_z));
    const std::string european = format("N=1 European pooled z %.2f over 20 seeds, %d single-seed 3 SE outliers", pooled_z, outliers);

    bool look_ahead = false;
    for (int i = 0; i < 20; ++i) {
        const auto stack = props::random_stack(10, gen);
        for (int start = 1; start <= 10; ++start) look_ahead = look_ahead || props::cascade_reads_past(stack, paths, start, gen);
    }
    if (look_ahead) failures.push_back("cascade reads dates before its start");

    auto config = shipped("put_1d");
    config.paths = 5000;
    config.repetitions = 1;
    const double first = run_experiment(config).mean;
    const double second = run_experiment(config).mean;
    if (first != second) failures.push_back("same seed gave different prices");

    std::string detail = format("cascade bound (%zu stacks), flip lemma (%zu nontrivial gaps), ", stacks.size(), nontrivial) +
                         european + ", anti-look-ahead, determinism";
    for (const auto& f : failures) detail += "; " + f;
    return {failures.empty(), detail};
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0: no runtime budget
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    const std::vector<Criterion> criteria{
        {1, "gradient oracle", 10.0, gradient_oracle},
        {2, "CRR convergence", 1.0, crr_convergence},
        {3, "geometric benchmarks", 10.0, geometric_benchmarks},
        {4, "1-d put", 0.0, [] { return band(shipped("put_1d"), 11.85, 12.05); }},
        {5, "basket put", 0.0, basket},
        {6, "geometric 2-d", 0.0, geometric_2d},
        {7, "Heston put", 0.0, [] { return band(shipped("heston_put"), 1.64, 1.76); }},
        {8, "max-call", 0.0, [] { return band(shipped("max_call"), 25.4, 26.3); }},
        {9, "property suite", 60.0, property_suite},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && seconds > c.budget_seconds) {
            outcome.passed = false;
            outcome.detail += format("; over the %.0f s budget", c.budget_seconds);
        }
        std::printf("criterion %d [%s] %s: %s (%.1f s)\n", c.id, outcome.passed ? "PASS" : "FAIL", c.name,
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!outcome.passed) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
