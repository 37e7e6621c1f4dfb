#include "nnlsm/suite.hpp"

#include <fstream>
#include <iostream>

#include "nnlsm/experiment.hpp"
#include "nnlsm/experiment_config.hpp"

namespace nnlsm {

namespace {

struct ManifestEntry {
    std::string name;
    ExperimentConfig config;
    double lower;
    double upper;
};

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest, const SuiteOptions& options) {
    const auto doc = read_json_file(manifest);
    std::vector<ManifestEntry> entries;
    try {
        if (doc.at("schema_version").get<int>() != kConfigSchemaVersion)
            throw ConfigError("manifest: unsupported schema_version");
        for (const auto& e : doc.at("entries")) {
            auto config_doc = read_json_file(manifest.parent_path() / e.at("config").get<std::string>());
            if (e.contains("overrides")) config_doc.merge_patch(e.at("overrides"));
            if (options.seed) config_doc["seed"] = *options.seed;
            ManifestEntry entry{e.value("name", config_doc.value("name", std::string("entry"))),
                                parse_config(config_doc), e.at("min").get<double>(), e.at("max").get<double>()};
            if (!(entry.lower <= entry.upper)) throw ConfigError("manifest: entry '" + entry.name + "' has min > max");
            entries.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    if (entries.empty()) throw ConfigError("manifest: no entries");
    return entries;
}

}  // namespace

SuiteOutcome run_suite(const std::filesystem::path& manifest, const SuiteOptions& options) {
    SuiteOutcome outcome;
    std::vector<ManifestEntry> entries;
    try {
        entries = load_manifest(manifest, options);
    } catch (const ConfigError& e) {
        outcome.exit_code = kExitConfigError;
        outcome.error = e.what();
        return outcome;
    }

    std::filesystem::create_directories(options.out_dir);
    std::vector<TableCell> cells;
    for (const auto& entry : entries) {
        const RunStats stats = run_experiment(entry.config, options.threads);
        const bool ok = stats.mean >= entry.lower && stats.mean <= entry.upper;
        outcome.entries.push_back({entry.name, stats.mean, entry.lower, entry.upper, ok});
        if (!ok) outcome.exit_code = kExitToleranceFailure;

        std::ofstream(options.out_dir / (entry.name + ".json")) << diagnostics_json(entry.config, stats).dump(2) << '\n';
        cells.push_back(make_cell(entry.name, entry.config.regressor.column_label(), stats, options.half_width));
    }
    std::ofstream(options.out_dir / "summary.md") << emit_markdown(cells);
    std::ofstream(options.out_dir / "summary.csv") << emit_csv(cells);
    return outcome;
}

}  // namespace nnlsm
