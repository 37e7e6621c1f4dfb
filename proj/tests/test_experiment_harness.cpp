#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "nnlsm/experiment.hpp"
#include "nnlsm/experiment_config.hpp"
#include "nnlsm/report.hpp"
#include "nnlsm/suite.hpp"

namespace {

using namespace nnlsm;
using nlohmann::json;
namespace fs = std::filesystem;

json small_put(const std::string& regressor = "polynomial") {
    json doc = {{"schema_version", 1},
                {"name", "small_put"},
                {"model", {{"type", "black_scholes"}, {"spot", 100}, {"volatility", 0.25}, {"rate", 0.1}}},
                {"payoff", {{"kind", "put_1d"}, {"strike", 110}}},
                {"grid", {{"maturity", 1}, {"dates", 10}}},
                {"paths", 2000},
                {"repetitions", 3},
                {"seed", 5}};
    if (regressor == "polynomial")
        doc["regressor"] = {{"type", "polynomial"}, {"degree", 3}};
    else
        doc["regressor"] = {{"type", "neural"}, {"depth", 2}, {"width", 8}, {"epochs", 2}};
    return doc;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nnlsm_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_json(const fs::path& file, const json& doc) { std::ofstream(file) << doc.dump(2); }

TEST(Config, ShippedConfigsParse) {
    for (const char* name : {"put_1d", "basket_put", "max_call", "geometric_2d", "geometric_10d", "heston_put"}) {
        const auto c = load_config(fs::path(NNLSM_CONFIG_DIR) / (std::string(name) + ".json"));
        EXPECT_EQ(c.name, name);
        EXPECT_EQ(c.paths, 100000u);
        EXPECT_EQ(c.repetitions, 10);
        EXPECT_EQ(c.regressor.depth, 2);
        EXPECT_EQ(c.regressor.width, 32);
        EXPECT_EQ(c.regressor.train.epochs, 10);
    }
    const auto heston = load_config(fs::path(NNLSM_CONFIG_DIR) / "heston_put.json");
    EXPECT_EQ(heston.grid.substeps_per_interval, 3);
    EXPECT_EQ(heston.state_dim(), 2u);
    const auto basket = load_config(fs::path(NNLSM_CONFIG_DIR) / "basket_put.json");
    EXPECT_EQ(basket.payoff.weights, std::vector<double>(5, 0.2));
    EXPECT_EQ(basket.grid.dates_count(), 20);
}

TEST(Config, ToJsonRoundTrips) {
    for (const char* name : {"put_1d", "basket_put", "heston_put"}) {
        const auto c = load_config(fs::path(NNLSM_CONFIG_DIR) / (std::string(name) + ".json"));
        const auto again = parse_config(to_json(c));
        EXPECT_EQ(to_json(again), to_json(c));
        EXPECT_EQ(again.grid.dates, c.grid.dates);
        EXPECT_EQ(again.grid.substeps_per_interval, c.grid.substeps_per_interval);
    }
}

TEST(Config, ShippedManifestEntriesParse) {
    const fs::path manifest = fs::path(NNLSM_CONFIG_DIR) / "benchmarks.json";
    const auto doc = read_json_file(manifest);
    ASSERT_EQ(doc.at("entries").size(), 6u);
    for (const auto& e : doc.at("entries")) {
        auto config_doc = read_json_file(manifest.parent_path() / e.at("config").get<std::string>());
        if (e.contains("overrides")) config_doc.merge_patch(e.at("overrides"));
        const auto c = parse_config(config_doc);
        EXPECT_LT(e.at("min").get<double>(), e.at("max").get<double>());
        if (e.at("name") == "basket_put_poly3") {
            EXPECT_EQ(c.regressor.kind, RegressorConfig::Kind::polynomial);
            EXPECT_EQ(c.regressor.degree, 3);
        }
    }
}

TEST(Config, ErrorsAreConfigErrors) {
    auto doc = small_put();
    doc["schema_version"] = 2;
    EXPECT_THROW(parse_config(doc), ConfigError);
    doc = small_put();
    doc.erase("payoff");
    EXPECT_THROW(parse_config(doc), ConfigError);
    doc = small_put();
    doc["payoff"]["kind"] = "asian";
    EXPECT_THROW(parse_config(doc), ConfigError);
    doc = small_put();
    doc["repetitions"] = 0;
    EXPECT_THROW(parse_config(doc), ConfigError);
    doc = small_put();
    doc["paths"] = 0;
    EXPECT_THROW(parse_config(doc), ConfigError);
    doc = small_put();
    doc["model"]["volatility"] = "high";
    EXPECT_THROW(parse_config(doc), ConfigError);
    doc = small_put("neural");
    doc["regressor"]["epochs"] = 0;
    EXPECT_THROW(parse_config(doc), ConfigError);
    doc = small_put();
    doc["model"]["dimension"] = 3;
    doc["model"]["correlation"] = -0.9;
    EXPECT_THROW(parse_config(doc), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(RunStats, Aggregates) {
    const auto s = RunStats::from_prices({1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_NEAR(s.std_dev, std::sqrt(5.0 / 3.0), 1e-15);
    EXPECT_DOUBLE_EQ(s.half_width_std, s.std_dev);
    EXPECT_DOUBLE_EQ(s.half_width_196_std, 1.96 * s.std_dev);
    EXPECT_DOUBLE_EQ(s.half_width_mean_ci, 1.96 * s.std_dev / 2.0);
    const auto permuted = RunStats::from_prices({3.0, 1.0, 4.0, 2.0});
    EXPECT_DOUBLE_EQ(permuted.mean, s.mean);
    EXPECT_NEAR(permuted.std_dev, s.std_dev, 1e-15);
}

TEST(Experiment, ForcedSameSeedGivesZeroSpread) {
    auto doc = small_put("neural");
    doc["repetitions"] = 2;
    doc["same_seed_each_repetition"] = true;
    const auto stats = run_experiment(parse_config(doc));
    ASSERT_EQ(stats.prices.size(), 2u);
    EXPECT_EQ(stats.prices[0], stats.prices[1]);
    EXPECT_EQ(stats.std_dev, 0.0);
}

TEST(Experiment, RepetitionsUseFreshPaths) {
    const auto stats = run_experiment(parse_config(small_put()));
    ASSERT_EQ(stats.prices.size(), 3u);
    EXPECT_NE(stats.prices[0], stats.prices[1]);
    EXPECT_GT(stats.std_dev, 0.0);
    for (const auto& rep : stats.repetitions) {
        EXPECT_EQ(rep.exercise_fraction.size(), 11u);
        EXPECT_EQ(rep.dates.size(), 11u);
    }
}

TEST(Experiment, DeterministicAndThreadInvariant) {
    for (const char* kind : {"polynomial", "neural"}) {
        const auto config = parse_config(small_put(kind));
        const auto a = run_experiment(config, 1);
        const auto b = run_experiment(config, 1);
        const auto c = run_experiment(config, 3);
        EXPECT_EQ(a.prices, b.prices) << kind;
        EXPECT_EQ(a.prices, c.prices) << kind;
    }
}

TEST(Experiment, OutOfSamplePricingRuns) {
    auto doc = small_put();
    doc["out_of_sample"] = true;
    doc["paths"] = 20000;
    doc["repetitions"] = 1;
    const auto oos = run_experiment(parse_config(doc));
    doc["out_of_sample"] = false;
    const auto ins = run_experiment(parse_config(doc));
    EXPECT_NE(oos.mean, ins.mean);
    EXPECT_NEAR(oos.mean, ins.mean, 0.3);
}

TEST(Experiment, DiagnosticsRecord) {
    const auto config = parse_config(small_put());
    const auto stats = run_experiment(config);
    const auto d = diagnostics_json(config, stats);
    EXPECT_EQ(d.at("repetitions").size(), 3u);
    EXPECT_DOUBLE_EQ(d.at("mean").get<double>(), stats.mean);
    const auto& rep = d.at("repetitions").at(0);
    for (const char* key : {"price", "continuation_mean", "standard_error", "in_the_money", "training_mse",
                            "exercise_fraction"})
        EXPECT_TRUE(rep.contains(key)) << key;
}

TEST(Report, CellFormat) {
    EXPECT_EQ(format_cell(11.98, 0.057), "11.98 (± 0.057)");
    EXPECT_EQ(format_cell(4.1049, 0.0291), "4.10 (± 0.029)");
    const auto stats = RunStats::from_prices({1.0, 3.0});
    EXPECT_DOUBLE_EQ(make_cell("r", "c", stats).half_width, 1.96 * stats.std_dev);
    EXPECT_DOUBLE_EQ(make_cell("r", "c", stats, HalfWidth::mean_ci).half_width, stats.half_width_mean_ci);
    EXPECT_EQ(half_width_from_string("std"), HalfWidth::std_dev);
    EXPECT_THROW(half_width_from_string("2std"), std::invalid_argument);
}

TEST(Report, MarkdownGrid) {
    const std::vector<TableCell> cells{{"L=2, d_l=32", "epochs=1", 11.9, 0.1},
                                       {"L=2, d_l=32", "epochs=10", 11.98, 0.057},
                                       {"L=4, d_l=8", "epochs=10", 12.0, 0.2}};
    const std::string md = emit_markdown(cells);
    EXPECT_NE(md.find("| L=2, d_l=32 | 11.90 (± 0.100) | 11.98 (± 0.057) |"), std::string::npos) << md;
    EXPECT_NE(md.find("epochs=1"), std::string::npos);
    EXPECT_NE(md.find("L=4, d_l=8"), std::string::npos);
}

TEST(Report, CsvRoundTrip) {
    const std::vector<TableCell> cells{{"L=2, d_l=32", "epochs=10", 11.983456789012345, 0.0571234},
                                       {"say \"hi\"", "ls", 4.1, 1e-17},
                                       {"poly q=3", "ls", -0.0, 123456.789}};
    const auto parsed = parse_csv(emit_csv(cells));
    EXPECT_EQ(parsed, cells);
}

TEST(Report, RejectsEmptyInput) {
    EXPECT_THROW(emit_markdown({}), std::invalid_argument);
    const std::vector<TableCell> unlabeled{{"", "epochs=10", 1.0, 0.1}};
    EXPECT_THROW(emit_markdown(unlabeled), std::invalid_argument);
    EXPECT_THROW(emit_csv(unlabeled), std::invalid_argument);
    EXPECT_THROW(parse_csv("wrong,header\n"), std::invalid_argument);
}

struct SuiteFixture {
    fs::path dir;
    fs::path manifest;

    SuiteFixture(const std::string& name, double lower, double upper) : dir(scratch_dir(name)), manifest(dir / "manifest.json") {
        auto config = small_put();
        config["repetitions"] = 2;
        write_json(dir / "small_put.json", config);
        write_json(manifest, {{"schema_version", 1},
                              {"entries", json::array({{{"name", "small"}, {"config", "small_put.json"},
                                                        {"min", lower}, {"max", upper}}})}});
    }
    SuiteOptions options() const {
        SuiteOptions o;
        o.out_dir = dir / "out";
        return o;
    }
};

TEST(Suite, PassingBandExitsZero) {
    SuiteFixture f("suite_pass", 5.0, 20.0);
    const auto outcome = run_suite(f.manifest, f.options());
    EXPECT_EQ(outcome.exit_code, kExitPass);
    ASSERT_EQ(outcome.entries.size(), 1u);
    EXPECT_TRUE(outcome.entries[0].passed);
    EXPECT_TRUE(fs::exists(f.dir / "out" / "small.json"));
    EXPECT_TRUE(fs::exists(f.dir / "out" / "summary.md"));
    EXPECT_TRUE(fs::exists(f.dir / "out" / "summary.csv"));
}

TEST(Suite, ImpossibleBandFailsWithName) {
    SuiteFixture f("suite_fail", 1e6, 2e6);
    const auto outcome = run_suite(f.manifest, f.options());
    EXPECT_EQ(outcome.exit_code, kExitToleranceFailure);
    ASSERT_EQ(outcome.entries.size(), 1u);
    EXPECT_EQ(outcome.entries[0].name, "small");
    EXPECT_FALSE(outcome.entries[0].passed);
}

TEST(Suite, OverridesAreApplied) {
    SuiteFixture f("suite_override", 1e6, 2e6);
    write_json(f.manifest, {{"schema_version", 1},
                            {"entries", json::array({{{"name", "scaled"}, {"config", "small_put.json"},
                                                      {"min", 1e6}, {"max", 2e6},
                                                      {"overrides", {{"payoff", {{"strike", 2e6}}}}}}})}});
    const auto outcome = run_suite(f.manifest, f.options());
    EXPECT_EQ(outcome.exit_code, kExitPass);
}

TEST(Suite, ConfigProblemsExitTwo) {
    SuiteFixture f("suite_config", 0.0, 1.0);
    auto opts = f.options();
    EXPECT_EQ(run_suite(f.dir / "missing.json", opts).exit_code, kExitConfigError);

    std::ofstream(f.dir / "broken.json") << "{ not json";
    EXPECT_EQ(run_suite(f.dir / "broken.json", opts).exit_code, kExitConfigError);

    write_json(f.manifest, {{"schema_version", 1},
                            {"entries", json::array({{{"name", "x"}, {"config", "nope.json"}, {"min", 0}, {"max", 1}}})}});
    const auto missing_config = run_suite(f.manifest, opts);
    EXPECT_EQ(missing_config.exit_code, kExitConfigError);
    EXPECT_NE(missing_config.error.find("nope.json"), std::string::npos);

    write_json(f.manifest, {{"schema_version", 1}, {"entries", json::array()}});
    EXPECT_EQ(run_suite(f.manifest, opts).exit_code, kExitConfigError);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(NNLSM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
    SuiteFixture pass("cli_pass", 5.0, 20.0);
    EXPECT_EQ(run_cli("price " + (pass.dir / "small_put.json").string() + " --format csv"), 0);
    EXPECT_EQ(run_cli("--out-dir " + (pass.dir / "out").string() + " reproduce " + pass.manifest.string()), 0);
    SuiteFixture fail("cli_fail", 1e6, 2e6);
    EXPECT_EQ(run_cli("reproduce " + fail.manifest.string() + " --out-dir " + (fail.dir / "out").string()), 1);
    EXPECT_EQ(run_cli("price /nonexistent.json"), 2);
    std::ofstream(pass.dir / "broken.json") << "{";
    EXPECT_EQ(run_cli("price " + (pass.dir / "broken.json").string()), 2);
    EXPECT_EQ(run_cli("oracle --spot 100 --volatility 0.25 --rate 0.1 --strike 110 --dates 10 --steps 1000"), 0);
    EXPECT_EQ(run_cli("oracle --config " + std::string(NNLSM_CONFIG_DIR) + "/heston_put.json"), 2);
}

TEST(Cli, DumpPathsWritesReadableFile) {
    const fs::path dir = scratch_dir("cli_dump");
    write_json(dir / "small.json", small_put());
    const fs::path out = dir / "paths.bin";
    ASSERT_EQ(run_cli("dump-paths " + (dir / "small.json").string() + " --out " + out.string() + " --paths 50"), 0);
    EXPECT_EQ(fs::file_size(out), 8u * (3 + 50 * 11 + 50 * 11));
}

}  // namespace
