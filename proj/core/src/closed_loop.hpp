#pragma once

// Internal closed-loop path engine. One loop serves the price-formation
// decomposition, the sweep harness and the tuner; they differ only in which
// shadow agents ride along and which series get recorded.

#include <cstdint>
#include <vector>

#include "perfmm/execution.hpp"
#include "perfmm/harness.hpp"

namespace perfmm::detail {

struct ShadowSpec {
    StrategyKind kind = StrategyKind::Symmetric;
    std::uint64_t stream_tag = 0;
};

struct LoopConfig {
    MarketParams market;
    double xi = 1.0;
    double gamma = 0.5;
    ThetaParams theta;
    double s0 = 0.0;
    double impact_multiplier = 1.0;
    double price_offset = 0.0;
    bool zero_noise = false;
    Stepper stepper = Stepper::Euler;
    FillRule fill_rule = FillRule::LinearProb;
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
    bool record_series = false;
    bool record_fills = false;
};

struct LoopAgentResult {
    AgentLedger ledger;
    double terminal_pnl = 0.0;
    AgentSeries series;  // filled when record_series
};

struct LoopResult {
    double terminal_mid = 0.0;          // raw, without the price offset
    PathDecomposition decomposition;    // series filled when record_series
    LoopAgentResult driver;
    std::vector<LoopAgentResult> shadows;  // aligned with the shadow specs
};

/// Runs the N-step closed loop. The driver policy quotes each step from the
/// current state; its fills move its inventory, which is the only inventory
/// entering the price drift. Shadows quote against the same path with their
/// own fill streams and never feed back into the price.
LoopResult run_closed_loop(const LoopConfig& config, const DriverPolicy& driver,
                           const std::vector<ShadowSpec>& shadows);

}  // namespace perfmm::detail
