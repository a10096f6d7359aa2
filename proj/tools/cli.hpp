#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "perfmm/harness.hpp"
#include "perfmm/tuner.hpp"

namespace perfmm::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

/// Configuration or input validation problem; maps to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cell selection for the decompose command.
struct DecomposeSpec {
    double gamma = 0.5;
    double xi = 10.0;
};

struct ToolConfig {
    ExperimentConfig experiment;
    TuneConfig tune;
    DecomposeSpec decompose;
};

/// Command-line overrides applied on top of the config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> impact_multiplier;
    bool zero_noise = false;
    int threads = 1;
};

/// Loads and validates a config file. An empty path yields the built-in
/// defaults; a provided file must at least name its gammas and xis grids.
ToolConfig load_config(const std::string& path);

/// Resolved config serialized back to its file representation (full precision);
/// embedded in every manifest.
std::string config_snapshot(const ToolConfig& config);

int cmd_sweep(const ToolConfig& config, const std::filesystem::path& out_dir,
              const Overrides& overrides);
int cmd_decompose(const ToolConfig& config, const std::filesystem::path& out_dir,
                  const Overrides& overrides);
int cmd_tune(const ToolConfig& config, const std::filesystem::path& out_dir,
             const Overrides& overrides);
int cmd_validate(const std::filesystem::path& out_dir);

// --- formatting and file helpers shared with the tests ---

/// Shortest-of-6-significant-digits formatting used in every CSV cell.
std::string fmt_csv(double value);

std::string sweep_csv_text(const std::vector<SweepRecord>& records);

/// Atomically writes `text` to `path` (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

struct SweepRow {
    std::string strategy;
    double gamma = 0, xi = 0, mean_pnl = 0, std_pnl = 0;
    std::optional<double> sharpe;
    double mean_term_inv = 0, std_term_inv = 0;
    long paths = 0;
    std::uint64_t seed = 0;
};
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

struct ThetaRow {
    double gamma = 0, xi = 0;
    ThetaParams theta;
    double train_objective = 0, test_objective = 0;
};
std::vector<ThetaRow> read_theta_csv(const std::filesystem::path& path);

/// validate checks against an in-memory table; used by cmd_validate and tests.
struct ValidateOutcome {
    bool all_passed = true;
    std::vector<std::string> lines;  // "PASS name", "FAIL name: why", "SKIP name: why"
};
ValidateOutcome validate_sweep_rows(const std::vector<SweepRow>& rows);

}  // namespace perfmm::cli
