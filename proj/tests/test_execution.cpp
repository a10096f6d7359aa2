#include <cmath>
#include <random>

#include "doctest.h"
#include "perfmm/execution.hpp"
#include "perfmm/harness.hpp"

using namespace perfmm;

TEST_CASE("fill probability") {
    const FillModel linear{140.0, 1.5, FillRule::LinearProb};
    const FillModel expo{140.0, 1.5, FillRule::ExponentialProb};
    SUBCASE("hand values under the linear rule") {
        CHECK(fill_probability(0.0, linear, 0.005) == doctest::Approx(0.7).epsilon(1e-14));
        CHECK(fill_probability(1.0, linear, 0.005) ==
              doctest::Approx(0.7 * std::exp(-1.5)).epsilon(1e-12));
    }
    SUBCASE("deep quotes never fill") {
        CHECK(fill_probability(50.0, linear, 0.005) < 1e-30);
        CHECK(fill_probability(50.0, expo, 0.005) < 1e-30);
    }
    SUBCASE("bounded in [0, 1] under both rules") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> delta(-5.0, 20.0);
        std::uniform_real_distribution<double> scale(0.0, 4000.0);
        for (int i = 0; i < 2000; ++i) {
            const FillModel m{scale(rng), 1.5,
                              i % 2 ? FillRule::LinearProb : FillRule::ExponentialProb};
            const double p = fill_probability(delta(rng), m, 0.005);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("step fills") {
    const FillModel model{140.0, 1.5, FillRule::LinearProb};
    SUBCASE("unlucky draws leave the ledger untouched") {
        AgentLedger ledger;
        step_fills(QuoteDecision{10.0, 3.0, 3.0}, ledger, 10.0, 0.999999, 0.999999, model,
                   0.005, 0);
        CHECK(ledger.cash == 0.0);
        CHECK(ledger.inventory == 0);
    }
    SUBCASE("non-positive ask premium is a market sell at the mid") {
        AgentLedger ledger;
        // u_ask above any probability: the market order must fill regardless
        step_fills(QuoteDecision{9.95, -0.1, 5.0}, ledger, 10.0, 0.9999999, 0.9999999, model,
                   0.005, 0);
        CHECK(ledger.cash == doctest::Approx(10.0).epsilon(1e-14));
        CHECK(ledger.inventory == -1);
    }
    SUBCASE("both sides can fill in one step") {
        AgentLedger ledger;
        step_fills(QuoteDecision{10.0, 0.5, 0.5}, ledger, 10.0, 0.0, 0.0, model, 0.005, 0);
        CHECK(ledger.cash == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ledger.inventory == 0);
    }
    SUBCASE("ask and bid updates commute") {
        const QuoteDecision ask_only{10.0, 0.4, 50.0};
        const QuoteDecision bid_only{10.0, 50.0, 0.4};
        AgentLedger ab, ba;
        step_fills(ask_only, ab, 10.0, 0.0, 0.999, model, 0.005, 0);
        step_fills(bid_only, ab, 10.0, 0.999, 0.0, model, 0.005, 1);
        step_fills(bid_only, ba, 10.0, 0.999, 0.0, model, 0.005, 0);
        step_fills(ask_only, ba, 10.0, 0.0, 0.999, model, 0.005, 1);
        CHECK(ab.cash == ba.cash);
        CHECK(ab.inventory == ba.inventory);
    }
}

TEST_CASE("mark to market") {
    AgentLedger ledger;
    CHECK(mark_to_market(ledger, 123.0) == 0.0);
    ledger.cash = 50.0;
    ledger.inventory = -2;
    CHECK(mark_to_market(ledger, 10.0) == doctest::Approx(30.0).epsilon(1e-14));
}

TEST_CASE("single trade accounting") {
    const FillModel model{140.0, 1.5, FillRule::LinearProb};
    AgentLedger ledger;
    step_fills(QuoteDecision{10.0, 0.5, 60.0}, ledger, 10.0, 0.0, 0.999, model, 0.005, 0);
    CHECK(mark_to_market(ledger, 10.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ledger replays exactly from its fill list") {
    CellConfig cell;
    cell.master_seed = 31337;
    cell.xi = 5.0;
    const PathRunResult run = run_path(cell, 3, true);
    REQUIRE(run.series.size() == cell.strategies.size());
    REQUIRE(run.ledgers.size() == cell.strategies.size());

    for (std::size_t s = 0; s < cell.strategies.size(); ++s) {
        const AgentSeries& series = run.series[s];
        const AgentLedger& ledger = run.ledgers[s];
        const StrategyOutcome& outcome = run.outcomes[s];
        CHECK_FALSE(ledger.fills.empty());

        // Replay: cash and inventory must reconstruct exactly from the fills,
        // and the recorded pnl series must equal x_n + q_n s_n at every step.
        const int rows = static_cast<int>(series.pnl.size());
        std::size_t next_fill = 0;
        double cash = 0.0;
        int inventory = 0;
        for (int n = 0; n < rows; ++n) {
            while (next_fill < ledger.fills.size() && ledger.fills[next_fill].step < n) {
                const Fill& f = ledger.fills[next_fill++];
                if (f.side == FillSide::Ask) {
                    cash += f.price;
                    inventory -= 1;
                } else {
                    cash -= f.price;
                    inventory += 1;
                }
            }
            CHECK(inventory == series.inventory[n]);
            const double mid = run.decomposition.full[n];
            CHECK(series.pnl[n] == cash + inventory * mid);
        }
        CHECK(cash == ledger.cash);
        CHECK(inventory == outcome.terminal_inventory);
        CHECK(series.pnl.back() == outcome.terminal_pnl);
    }
}
