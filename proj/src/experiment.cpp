#include "nnlsm/experiment.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "nnlsm/parallel.hpp"
#include "nnlsm/payoff.hpp"
#include "nnlsm/rng.hpp"

namespace nnlsm {

namespace {

enum SeedStream : std::uint64_t { kPaths = 1, kTraining = 2, kOutOfSample = 3 };

std::unique_ptr<RegressorFactory> make_factory(const ExperimentConfig& config, std::uint64_t seed) {
    const auto& r = config.regressor;
    if (r.kind == RegressorConfig::Kind::polynomial)
        return std::make_unique<PolynomialRegressorFactory>(r.degree, r.ridge);
    TrainConfig train = r.train;
    train.seed = derive_seed(seed, kTraining);
    return std::make_unique<NeuralRegressorFactory>(
        NetworkShape::mlp(static_cast<int>(config.state_dim()), r.depth, r.width), train, r.first_fit_epochs);
}

}  // namespace

RunStats RunStats::from_prices(std::vector<double> prices) {
    RunStats s;
    s.prices = std::move(prices);
    const double r = static_cast<double>(s.prices.size());
    if (s.prices.empty()) return s;
    double sum = 0.0;
    for (double p : s.prices) sum += p;
    s.mean = sum / r;
    double sq = 0.0;
    for (double p : s.prices) sq += (p - s.mean) * (p - s.mean);
    s.std_dev = s.prices.size() > 1 ? std::sqrt(sq / (r - 1.0)) : 0.0;
    s.half_width_std = s.std_dev;
    s.half_width_196_std = 1.96 * s.std_dev;
    s.half_width_mean_ci = 1.96 * s.std_dev / std::sqrt(r);
    return s;
}

PathSet simulate_paths(const ExperimentConfig& config, std::uint64_t seed, int threads) {
    PathSet paths = config.model == ModelKind::heston
                        ? simulate_heston(config.heston, config.grid, config.paths, seed, threads)
                        : simulate_black_scholes(config.black_scholes, config.grid, config.paths, seed, threads);
    evaluate_payoffs(paths, config.payoff, config.grid, config.rate());
    return paths;
}

std::uint64_t repetition_seed(const ExperimentConfig& config, int repetition) {
    return config.same_seed_each_repetition ? config.seed
                                            : derive_seed(config.seed, static_cast<std::uint64_t>(repetition));
}

RepetitionResult run_repetition(const ExperimentConfig& config, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    RepetitionResult out;
    out.seed = seed;

    const PathSet paths = simulate_paths(config, derive_seed(seed, kPaths));
    auto factory = make_factory(config, seed);
    BackwardResult backward = backward_induction(paths, *factory);

    if (config.out_of_sample) {
        const PathSet fresh = simulate_paths(config, derive_seed(seed, kOutOfSample));
        out.estimate = price_with_policy(backward.regressors, fresh);
    } else {
        out.estimate = price_at_zero(backward, paths.payoff(0, 0));
    }
    out.dates = std::move(backward.diagnostics);
    out.exercise_fraction = backward.exercise_fraction();
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

RunStats run_experiment(const ExperimentConfig& config, int threads) {
    config.validate();
    const auto count = static_cast<std::size_t>(config.repetitions);
    std::vector<RepetitionResult> results(count);
    parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                results[i] = run_repetition(config, repetition_seed(config, static_cast<int>(i)));
            } catch (const std::exception& e) {
                throw std::runtime_error("repetition " + std::to_string(i) + ": " + e.what());
            }
        }
    });

    std::vector<double> prices;
    prices.reserve(count);
    for (const auto& r : results) prices.push_back(r.estimate.price);
    RunStats stats = RunStats::from_prices(std::move(prices));
    stats.repetitions = std::move(results);
    return stats;
}

nlohmann::json diagnostics_json(const ExperimentConfig& config, const RunStats& stats) {
    nlohmann::json doc;
    doc["config"] = to_json(config);
    doc["mean"] = stats.mean;
    doc["std_dev"] = stats.std_dev;
    doc["half_width"] = {{"std", stats.half_width_std},
                         {"1.96_std", stats.half_width_196_std},
                         {"1.96_std_over_sqrt_r", stats.half_width_mean_ci}};
    doc["prices"] = stats.prices;
    doc["repetitions"] = nlohmann::json::array();
    for (const auto& rep : stats.repetitions) {
        nlohmann::json r;
        r["seed"] = rep.seed;
        r["price"] = rep.estimate.price;
        r["continuation_mean"] = rep.estimate.continuation_mean;
        r["immediate_value"] = rep.estimate.immediate_value;
        r["standard_error"] = rep.estimate.standard_error;
        r["seconds"] = rep.seconds;
        r["exercise_fraction"] = rep.exercise_fraction;
        r["in_the_money"] = nlohmann::json::array();
        r["training_mse"] = nlohmann::json::array();
        for (const auto& d : rep.dates) {
            r["in_the_money"].push_back(d.in_the_money);
            r["training_mse"].push_back(d.fitted ? nlohmann::json(d.training_mse) : nlohmann::json(nullptr));
        }
        doc["repetitions"].push_back(std::move(r));
    }
    return doc;
}

}  // namespace nnlsm
