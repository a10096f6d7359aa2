#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perfmm/execution.hpp"

namespace perfmm {

enum class StrategyKind { As, Symmetric, Performative, Theta };

const char* strategy_label(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(const std::string& label);

/// One (gamma, xi) simulation cell with everything a path run needs.
struct CellConfig {
    MarketParams market;
    double gamma = 0.5;
    double xi = 1.0;
    ThetaParams theta;
    std::vector<StrategyKind> strategies{StrategyKind::As, StrategyKind::Symmetric,
                                         StrategyKind::Performative, StrategyKind::Theta};
    FillRule fill_rule = FillRule::LinearProb;
    Stepper stepper = Stepper::Euler;
    double s0 = 0.0;
    double impact_multiplier = 1.0;
    double price_offset = 0.0;  // added to executed and marked prices only
    bool zero_noise = false;
    bool driver_as_shadow = false;  // score the driver strategy from an independent shadow ledger
    std::uint64_t master_seed = 12345;

    ProcessParams process() const {
        return ProcessParams{xi, gamma, market.sigma, market.T, market.dt, impact_multiplier};
    }
};

/// Full experiment grid.
struct ExperimentConfig {
    MarketParams market;
    std::vector<double> gammas{0.1, 0.5, 0.8};
    std::vector<double> xis;  // default: 20 log-spaced points in [0.3, 20]
    int paths_per_cell = 1000;
    std::uint64_t master_seed = 12345;
    std::vector<StrategyKind> strategies{StrategyKind::As, StrategyKind::Symmetric,
                                         StrategyKind::Performative, StrategyKind::Theta};
    ThetaParams theta;
    /// Per-cell theta override keyed by (gamma, xi); falls back to `theta`.
    std::vector<std::pair<std::pair<double, double>, ThetaParams>> theta_table;
    double impact_multiplier = 1.0;
    double s0 = 0.0;
    FillRule fill_rule = FillRule::LinearProb;
    Stepper stepper = Stepper::Euler;
    double price_offset = 0.0;
    bool zero_noise = false;
    bool driver_as_shadow = false;

    ExperimentConfig();
    void validate() const;
    CellConfig cell(double gamma, double xi) const;
};

std::vector<double> log_spaced(double lo, double hi, int count);
std::vector<double> lin_spaced(double lo, double hi, int count);

/// Aggregated metrics for one (strategy, gamma, xi) cell.
struct SweepRecord {
    std::string strategy;
    double gamma = 0.0;
    double xi = 0.0;
    double mean_pnl = 0.0;
    double std_pnl = 0.0;
    std::optional<double> sharpe;  // absent when the sample std is zero or n = 1
    double mean_term_inv = 0.0;
    double std_term_inv = 0.0;
    int paths = 0;
    std::uint64_t master_seed = 0;
};

struct SummaryStats {
    double mean = 0.0;
    double stddev = 0.0;               // sample std, n-1 denominator; 0 when n = 1
    std::optional<double> sharpe;      // mean/stddev when stddev > 0
};

/// Mean, sample standard deviation and Sharpe of a sample.
/// Throws std::invalid_argument on an empty input.
SummaryStats aggregate(std::span<const double> samples);

/// Terminal outcome of one strategy on one path.
struct StrategyOutcome {
    StrategyKind kind = StrategyKind::As;
    double terminal_pnl = 0.0;
    int terminal_inventory = 0;
};

/// Per-agent series recorded when a path is run with recording enabled.
struct AgentSeries {
    std::vector<double> reservation;
    std::vector<double> ask_price;
    std::vector<double> bid_price;
    std::vector<double> pnl;  // pnl[n] = x_n + q_n * s_n
    std::vector<int> inventory;
};

struct PathRunResult {
    std::vector<StrategyOutcome> outcomes;  // aligned with CellConfig::strategies
    // Populated only when series recording was requested:
    PathDecomposition decomposition;
    std::vector<AgentSeries> series;    // aligned with outcomes
    std::vector<AgentLedger> ledgers;   // aligned with outcomes, fills included
};

/// Runs one closed-loop path: the driver (inventory strategy) quotes and its
/// fills feed the price drift; every other configured strategy trades the same
/// price path as a shadow with independent fill draws. Deterministic for a
/// fixed (master_seed, path_index).
PathRunResult run_path(const CellConfig& cell, std::uint64_t path_index,
                       bool record_series = false);

/// One record per (strategy, gamma, xi); records are in strategy-major,
/// then gamma, then xi order. Path evaluation may be threaded; results are
/// identical for every thread count.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& config, int threads = 1);

/// Runs the cell's paths and returns per-path terminal PnL/inventory for each
/// configured strategy, ordered by path index.
struct CellSamples {
    std::vector<StrategyKind> strategies;
    std::vector<std::vector<double>> pnl;        // [strategy][path]
    std::vector<std::vector<double>> inventory;  // [strategy][path]
};
CellSamples run_cell(const CellConfig& cell, int paths, int threads = 1);

/// Price-formation bundle: the decomposition series plus quote/inventory/PnL
/// session series for the driver and the performative agent.
struct DecomposeBundle {
    PathDecomposition decomposition;
    std::vector<double> times;
    AgentSeries driver;
    AgentSeries performative;
};
DecomposeBundle decompose_run(const CellConfig& cell, std::uint64_t seed);

}  // namespace perfmm
