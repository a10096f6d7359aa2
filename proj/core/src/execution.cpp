#include "perfmm/execution.hpp"

#include <algorithm>
#include <cmath>

namespace perfmm {

double fill_probability(double delta, const FillModel& model, double dt) {
    const double intensity = model.A * std::exp(-model.k * std::max(delta, 0.0));
    switch (model.rule) {
        case FillRule::LinearProb:
            return std::min(1.0, intensity * dt);
        case FillRule::ExponentialProb:
            return -std::expm1(-intensity * dt);
    }
    return 0.0;
}

void step_fills(const QuoteDecision& decision, AgentLedger& ledger, double mid,
                double u_ask, double u_bid, const FillModel& model, double dt, int step) {
    // Ask side: a fill sells one unit at mid + premium. A non-positive premium
    // is a market order at the mid-price, executed with certainty.
    const double da = decision.ask_premium;
    const bool ask_filled = da <= 0.0 || u_ask < fill_probability(da, model, dt);
    if (ask_filled) {
        const double price = mid + std::max(da, 0.0);
        ledger.cash += price;
        ledger.inventory -= 1;
        if (ledger.record_fills) ledger.fills.push_back({step, FillSide::Ask, price});
    }

    const double db = decision.bid_premium;
    const bool bid_filled = db <= 0.0 || u_bid < fill_probability(db, model, dt);
    if (bid_filled) {
        const double price = mid - std::max(db, 0.0);
        ledger.cash -= price;
        ledger.inventory += 1;
        if (ledger.record_fills) ledger.fills.push_back({step, FillSide::Bid, price});
    }
}

}  // namespace perfmm
