#pragma once

#include <cstdint>
#include <vector>

#include "perfmm/strategies.hpp"

namespace perfmm {

enum class FillRule {
    LinearProb,       // min(1, lambda(delta) * dt)
    ExponentialProb,  // 1 - exp(-lambda(delta) * dt)
};

struct FillModel {
    double A = 140.0;
    double k = 1.5;
    FillRule rule = FillRule::LinearProb;
};

enum class FillSide : std::uint8_t { Ask, Bid };

struct Fill {
    int step = 0;
    FillSide side = FillSide::Ask;
    double price = 0.0;  // executed price
};

/// Cash and inventory of one agent. Fills are appended only when record_fills
/// is set; sweeps leave it off.
struct AgentLedger {
    double cash = 0.0;
    int inventory = 0;
    bool record_fills = false;
    std::vector<Fill> fills;
};

/// Single-step fill probability for a resting quote at premium delta.
/// Premia are clamped at zero: non-positive premia are market orders and are
/// handled before this is consulted.
double fill_probability(double delta, const FillModel& model, double dt);

/// Applies one step of probabilistic executions to the ledger. A non-positive
/// premium executes immediately as a market order at the mid-price; otherwise
/// the side fills when its uniform draw falls below fill_probability. Ask and
/// bid updates commute, so both may fill in the same step.
void step_fills(const QuoteDecision& decision, AgentLedger& ledger, double mid,
                double u_ask, double u_bid, const FillModel& model, double dt, int step);

/// Mark-to-market: cash plus inventory valued at the mid-price.
inline double mark_to_market(const AgentLedger& ledger, double mid) {
    return ledger.cash + ledger.inventory * mid;
}

}  // namespace perfmm
