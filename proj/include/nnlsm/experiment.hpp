#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "nnlsm/experiment_config.hpp"
#include "nnlsm/lsmc_engine.hpp"
#include "nnlsm/path_set.hpp"

namespace nnlsm {

struct RepetitionResult {
    std::uint64_t seed = 0;
    PriceEstimate estimate;
    std::vector<DateDiagnostics> dates;
    std::vector<double> exercise_fraction;
    double seconds = 0.0;
};

/// Aggregate of R repetition prices. Three candidate half-widths are kept because
/// published "+-" columns are ambiguous between them.
struct RunStats {
    std::vector<double> prices;
    double mean = 0.0;
    double std_dev = 0.0;
    double half_width_std = 0.0;       // std
    double half_width_196_std = 0.0;   // 1.96 std
    double half_width_mean_ci = 0.0;   // 1.96 std / sqrt(R)
    std::vector<RepetitionResult> repetitions;

    /// Recomputes the aggregates from `prices`.
    static RunStats from_prices(std::vector<double> prices);
};

/// Simulated states plus discounted payoffs for one seed.
PathSet simulate_paths(const ExperimentConfig& config, std::uint64_t seed, int threads = 1);

std::uint64_t repetition_seed(const ExperimentConfig& config, int repetition);

/// simulate -> backward induction -> price for one repetition seed.
RepetitionResult run_repetition(const ExperimentConfig& config, std::uint64_t seed);

/// R repetitions on fresh paths, spread over `threads` workers. The result does not
/// depend on the worker count.
RunStats run_experiment(const ExperimentConfig& config, int threads = 1);

nlohmann::json diagnostics_json(const ExperimentConfig& config, const RunStats& stats);

}  // namespace nnlsm
