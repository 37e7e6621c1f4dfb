// Command-line entry point: price one experiment, reproduce a manifest, query the
// tree / closed-form oracles, or dump simulated paths.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nnlsm/binomial_oracle.hpp"
#include "nnlsm/experiment.hpp"
#include "nnlsm/experiment_config.hpp"
#include "nnlsm/path_io.hpp"
#include "nnlsm/report.hpp"
#include "nnlsm/suite.hpp"

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::filesystem::path out_dir;
    std::string format = "md";
    std::string half_width = "1.96std";
};

nnlsm::ExperimentConfig load_with_overrides(const std::string& file, const GlobalOptions& g,
                                            std::optional<int> repetitions, std::optional<long long> paths) {
    auto doc = nnlsm::read_json_file(file);
    if (g.seed) doc["seed"] = *g.seed;
    if (repetitions) doc["repetitions"] = *repetitions;
    if (paths) doc["paths"] = *paths;
    return nnlsm::parse_config(doc);
}

int run_price(const std::string& config_file, const GlobalOptions& g, std::optional<int> repetitions,
              std::optional<long long> paths) {
    const auto config = load_with_overrides(config_file, g, repetitions, paths);
    const auto stats = nnlsm::run_experiment(config, g.threads);
    const auto diagnostics = nnlsm::diagnostics_json(config, stats);
    if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        std::ofstream(g.out_dir / (config.name + ".json")) << diagnostics.dump(2) << '\n';
    }
    const nnlsm::TableCell cell = nnlsm::make_cell(config.regressor.row_label(), config.regressor.column_label(),
                                                   stats, nnlsm::half_width_from_string(g.half_width));
    if (g.format == "json") {
        std::cout << diagnostics.dump(2) << '\n';
    } else if (g.format == "csv") {
        std::cout << nnlsm::emit_csv({&cell, 1});
    } else {
        std::cout << nnlsm::emit_markdown({&cell, 1});
    }
    return nnlsm::kExitPass;
}

int run_reproduce(const std::string& manifest, const GlobalOptions& g) {
    nnlsm::SuiteOptions options;
    options.out_dir = g.out_dir.empty() ? std::filesystem::path("artifacts") : g.out_dir;
    options.threads = g.threads;
    options.seed = g.seed;
    options.half_width = nnlsm::half_width_from_string(g.half_width);
    const auto outcome = nnlsm::run_suite(manifest, options);
    if (outcome.exit_code == nnlsm::kExitConfigError) {
        std::cerr << "error: " << outcome.error << '\n';
        return outcome.exit_code;
    }
    for (const auto& e : outcome.entries) {
        std::cout << (e.passed ? "PASS " : "FAIL ") << e.name << ": mean " << e.mean << " band [" << e.lower << ", "
                  << e.upper << "]\n";
    }
    std::cout << "artifacts written to " << options.out_dir << '\n';
    return outcome.exit_code;
}

struct OracleArgs {
    std::string config;
    int steps = 96000;
    double spot = 100, volatility = 0.2, dividend = 0, rate = 0, strike = 100, maturity = 1;
    int dates = 1;
};

int run_oracle(const OracleArgs& a, const GlobalOptions& g) {
    nnlsm::TreeSpec tree;
    tree.steps = a.steps;
    std::vector<double> dates;
    if (!a.config.empty()) {
        const auto config = load_with_overrides(a.config, g, std::nullopt, std::nullopt);
        if (config.model != nnlsm::ModelKind::black_scholes)
            throw nnlsm::ConfigError("oracle: only Black-Scholes configs have a 1-d tree equivalent");
        if (config.payoff.kind == nnlsm::PayoffKind::geometric_put) {
            const auto reduced = nnlsm::reduce_geometric_to_1d(config.black_scholes);
            tree.spot = reduced.spot;
            tree.volatility = reduced.volatility;
            tree.dividend = reduced.dividend;
        } else if (config.payoff.kind == nnlsm::PayoffKind::put_1d) {
            tree.spot = config.black_scholes.spot[0];
            tree.volatility = config.black_scholes.volatility[0];
            tree.dividend = config.black_scholes.dividend[0];
        } else {
            throw nnlsm::ConfigError("oracle: payoff has no 1-d tree equivalent");
        }
        tree.rate = config.black_scholes.rate;
        tree.strike = config.payoff.strike;
        tree.maturity = config.grid.maturity;
        tree.exercise_dates = config.grid.dates;
    } else {
        tree.spot = a.spot;
        tree.volatility = a.volatility;
        tree.dividend = a.dividend;
        tree.rate = a.rate;
        tree.strike = a.strike;
        tree.maturity = a.maturity;
        tree.exercise_dates = nnlsm::ExerciseGrid::uniform(a.maturity, a.dates).dates;
    }

    const double bermudan = nnlsm::crr_bermudan_price(tree);
    const double european =
        nnlsm::bs_european_put(tree.spot, tree.strike, tree.volatility, tree.dividend, tree.rate, tree.maturity);
    if (g.format == "json") {
        nlohmann::json out{{"spot", tree.spot},         {"volatility", tree.volatility}, {"dividend", tree.dividend},
                           {"rate", tree.rate},         {"strike", tree.strike},         {"maturity", tree.maturity},
                           {"steps", tree.steps},       {"crr_bermudan_put", bermudan},  {"bs_european_put", european}};
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout.precision(10);
        std::cout << "1-d model: S0=" << tree.spot << " sigma=" << tree.volatility << " delta=" << tree.dividend
                  << " r=" << tree.rate << " K=" << tree.strike << " T=" << tree.maturity << '\n'
                  << "CRR Bermudan put (" << tree.steps << " steps): " << bermudan << '\n'
                  << "Black-Scholes European put: " << european << '\n';
    }
    return nnlsm::kExitPass;
}

int run_dump(const std::string& config_file, const std::string& out, const GlobalOptions& g,
             std::optional<long long> paths) {
    const auto config = load_with_overrides(config_file, g, std::nullopt, paths);
    const auto set = nnlsm::simulate_paths(config, nnlsm::repetition_seed(config, 0), g.threads);
    nnlsm::write_path_dump(out, set);
    std::cout << "wrote " << set.paths() << " paths x " << set.dates() << " dates x " << set.dim() << " to " << out
              << '\n';
    return nnlsm::kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bermudan option pricing by least-squares Monte Carlo with neural or polynomial regression"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Override the base seed");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "Directory for diagnostics and tables");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"md", "csv", "json"}));
    app.add_option("--half-width", g.half_width, "Half-width shown in tables")
        ->check(CLI::IsMember({"std", "1.96std", "ci"}));

    std::string config_file;
    std::optional<int> repetitions;
    std::optional<long long> paths;
    auto* price = app.add_subcommand("price", "Run one experiment config");
    price->add_option("config", config_file, "Experiment JSON")->required();
    price->add_option("--repetitions", repetitions, "Override repetitions");
    price->add_option("--paths", paths, "Override path count");

    std::string manifest;
    auto* reproduce = app.add_subcommand("reproduce", "Run a manifest of configs with tolerance bands");
    reproduce->add_option("manifest", manifest, "Manifest JSON")->required();

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "CRR Bermudan and closed-form European put prices");
    oracle->add_option("--config", oracle_args.config, "Experiment JSON (put_1d or geometric_put)");
    oracle->add_option("--steps", oracle_args.steps, "Tree steps");
    oracle->add_option("--spot", oracle_args.spot);
    oracle->add_option("--volatility", oracle_args.volatility);
    oracle->add_option("--dividend", oracle_args.dividend);
    oracle->add_option("--rate", oracle_args.rate);
    oracle->add_option("--strike", oracle_args.strike);
    oracle->add_option("--maturity", oracle_args.maturity);
    oracle->add_option("--dates", oracle_args.dates, "Equally spaced exercise dates");

    std::string dump_out;
    auto* dump = app.add_subcommand("dump-paths", "Write simulated paths and payoffs to a binary file");
    dump->add_option("config", config_file, "Experiment JSON")->required();
    dump->add_option("--out", dump_out, "Output file")->required();
    dump->add_option("--paths", paths, "Override path count");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) g.seed = seed;

    try {
        if (price->parsed()) return run_price(config_file, g, repetitions, paths);
        if (reproduce->parsed()) return run_reproduce(manifest, g);
        if (oracle->parsed()) return run_oracle(oracle_args, g);
        if (dump->parsed()) return run_dump(config_file, dump_out, g, paths);
    } catch (const nnlsm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return nnlsm::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return nnlsm::kExitConfigError;
    }
    return nnlsm::kExitPass;
}
