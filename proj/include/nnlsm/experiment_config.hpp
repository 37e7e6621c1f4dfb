#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nnlsm/grid.hpp"
#include "nnlsm/market_models.hpp"
#include "nnlsm/neural_net.hpp"
#include "nnlsm/payoff.hpp"

namespace nnlsm {

/// Invalid or unreadable experiment description (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchemaVersion = 1;

enum class ModelKind { black_scholes, heston };

struct RegressorConfig {
    enum class Kind { neural, polynomial };
    Kind kind = Kind::neural;

    int depth = 2;
    int width = 32;
    TrainConfig train{};
    std::optional<int> first_fit_epochs;

    int degree = 3;
    double ridge = 1e-10;

    /// "L=2, d_l=32" or "poly q=3".
    [[nodiscard]] std::string row_label() const;
    /// "epochs=10" or "ls".
    [[nodiscard]] std::string column_label() const;
};

struct ExperimentConfig {
    std::string name;
    ModelKind model = ModelKind::black_scholes;
    BlackScholesSpec black_scholes;
    HestonSpec heston;
    PayoffSpec payoff;
    ExerciseGrid grid;
    std::size_t paths = 100000;
    RegressorConfig regressor;
    int repetitions = 1;
    std::uint64_t seed = 1;
    /// Every repetition reuses the base seed (determinism probe).
    bool same_seed_each_repetition = false;
    /// Price the fitted policy on a fresh, independent path set.
    bool out_of_sample = false;

    [[nodiscard]] double rate() const noexcept;
    [[nodiscard]] std::size_t state_dim() const noexcept;
    void validate() const;
};

/// Throws ConfigError with the offending field on any schema violation.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);
nlohmann::json read_json_file(const std::filesystem::path& file);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace nnlsm
