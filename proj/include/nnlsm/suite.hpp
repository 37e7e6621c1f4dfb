#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nnlsm/report.hpp"

namespace nnlsm {

/// Exit codes shared by the CLI and the suite runner.
enum ExitCode : int { kExitPass = 0, kExitToleranceFailure = 1, kExitConfigError = 2 };

struct SuiteOptions {
    std::filesystem::path out_dir = "artifacts";
    int threads = 1;
    std::optional<std::uint64_t> seed;
    HalfWidth half_width = HalfWidth::std_196;
};

struct SuiteEntryOutcome {
    std::string name;
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool passed = false;
};

struct SuiteOutcome {
    int exit_code = kExitPass;
    std::vector<SuiteEntryOutcome> entries;
    std::string error;  // set on configuration errors
};

/// Manifest: {"schema_version": 1, "entries": [{"name", "config", "min", "max",
/// "overrides"?}]}. Config paths are relative to the manifest. Writes
/// <name>.json diagnostics plus summary.md / summary.csv under out_dir; the exit
/// code is nonzero iff a band is violated (1) or the manifest is unusable (2).
SuiteOutcome run_suite(const std::filesystem::path& manifest, const SuiteOptions& options);

}  // namespace nnlsm
